#include "lattice.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace ptycho {

namespace {
constexpr double kTau = 2.0 * std::numbers::pi;
}

Lattice::Lattice(std::vector<std::size_t> dims) : dims_(std::move(dims)), n_(1) {
  if (dims_.empty()) fail(errc::invalid_argument, "Lattice: no axes");
  for (std::size_t d : dims_) {
    if (d < 1) fail(errc::invalid_argument, "Lattice: axis length must be >= 1");
    n_ *= d;
  }
}

std::size_t Lattice::encode(const std::vector<long long>& idx) const {
  if (idx.size() != dims_.size()) fail(errc::dimension_mismatch, "Lattice::encode: rank mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) flat = flat * dims_[i] + pmod(idx[i], dims_[i]);
  return flat;
}

std::vector<long long> Lattice::decode(std::size_t flat) const {
  std::vector<long long> idx(dims_.size());
  for (std::size_t i = dims_.size(); i-- > 0;) {
    idx[i] = static_cast<long long>(flat % dims_[i]);
    flat /= dims_[i];
  }
  return idx;
}

std::size_t Lattice::add(std::size_t a, std::size_t b) const {
  std::size_t flat = 0;
  std::vector<long long> ia = decode(a), ib = decode(b);
  for (std::size_t i = 0; i < dims_.size(); ++i) flat = flat * dims_[i] + pmod(ia[i] + ib[i], dims_[i]);
  return flat;
}

std::size_t Lattice::sub(std::size_t a, std::size_t b) const {
  std::vector<long long> ia = decode(a), ib = decode(b);
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) flat = flat * dims_[i] + pmod(ia[i] - ib[i], dims_[i]);
  return flat;
}

cplx Lattice::root(std::size_t a, std::size_t b) const {
  std::vector<long long> ia = decode(a), ib = decode(b);
  double ang = 0.0;
  for (std::size_t i = 0; i < dims_.size(); ++i)
    ang += kTau * static_cast<double>((static_cast<std::size_t>(ia[i]) * static_cast<std::size_t>(ib[i])) % dims_[i]) /
           static_cast<double>(dims_[i]);
  return std::polar(1.0, ang);
}

CVec Lattice::transform_axes(const CVec& x, bool inverse) const {
  if (x.size() != n_) fail(errc::dimension_mismatch, "Lattice transform: length mismatch");
  CVec cur = x;
  // Transform along each axis in turn; stride bookkeeping for row-major order.
  std::size_t stride = n_;
  for (std::size_t ax = 0; ax < dims_.size(); ++ax) {
    std::size_t d = dims_[ax];
    stride /= d;
    std::size_t blocks = n_ / (d * stride);
    CVec line(d);
    for (std::size_t b = 0; b < blocks; ++b)
      for (std::size_t s = 0; s < stride; ++s) {
        std::size_t base = b * d * stride + s;
        for (std::size_t t = 0; t < d; ++t) line[t] = cur[base + t * stride];
        CVec out = inverse ? idft(line) : dft(line);
        for (std::size_t t = 0; t < d; ++t) cur[base + t * stride] = out[t];
      }
  }
  return cur;
}

CVec Lattice::dft_n(const CVec& x) const { return transform_axes(x, false); }

CVec Lattice::idft_n(const CVec& x) const { return transform_axes(x, true); }

} // namespace ptycho
