#include "signal.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace ptycho {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

std::size_t smallest_prime_factor(std::size_t n) {
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

// Direct O(n^2) transform for prime leaves; result placed in out.
void dft_naive(const cplx* x, std::size_t n, int sign, cplx* out) {
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double ang = sign * kTau * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += x[k] * std::polar(1.0, ang);
    }
    out[j] = acc;
  }
}

// Recursive Cooley-Tukey splitting off the smallest prime factor.
// x holds the input and receives the output; scratch has length n.
void fft_rec(cplx* x, std::size_t n, int sign, cplx* scratch) {
  if (n == 1) return;
  std::size_t p = smallest_prime_factor(n);
  if (p == n) {
    dft_naive(x, n, sign, scratch);
    std::copy(scratch, scratch + n, x);
    return;
  }
  std::size_t m = n / p;
  for (std::size_t q = 0; q < p; ++q)
    for (std::size_t t = 0; t < m; ++t) scratch[q * m + t] = x[t * p + q];
  for (std::size_t q = 0; q < p; ++q) fft_rec(scratch + q * m, m, sign, x);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (std::size_t q = 0; q < p; ++q) {
      double ang = sign * kTau * static_cast<double>((q * k) % n) / static_cast<double>(n);
      acc += std::polar(1.0, ang) * scratch[q * m + (k % m)];
    }
    x[k] = acc;
  }
}

CVec transform(const CVec& x, int sign) {
  CVec y = x;
  CVec scratch(x.size());
  fft_rec(y.data(), y.size(), sign, scratch.data());
  return y;
}

} // namespace

CVec dft(const CVec& x) { return transform(x, -1); }

CVec idft(const CVec& x) {
  CVec y = transform(x, +1);
  double inv = 1.0 / static_cast<double>(x.size());
  for (cplx& v : y) v *= inv;
  return y;
}

CVec shift(const CVec& x, long long r) {
  std::size_t d = x.size();
  CVec y(d);
  for (std::size_t j = 0; j < d; ++j) y[j] = x[pmod(static_cast<long long>(j) + r, d)];
  return y;
}

CVec modulate(const CVec& x, long long r) {
  std::size_t d = x.size();
  CVec y(d);
  std::size_t rr = pmod(r, d);
  for (std::size_t j = 0; j < d; ++j) {
    double ang = kTau * static_cast<double>((j * rr) % d) / static_cast<double>(d);
    y[j] = x[j] * std::polar(1.0, ang);
  }
  return y;
}

CVec reflect(const CVec& x) {
  std::size_t d = x.size();
  CVec y(d);
  for (std::size_t j = 0; j < d; ++j) y[j] = x[pmod(-static_cast<long long>(j), d)];
  return y;
}

CVec conjugate(const CVec& x) {
  CVec y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = std::conj(x[j]);
  return y;
}

CVec circ_convolve(const CVec& x, const CVec& y) {
  if (x.size() != y.size())
    fail(errc::dimension_mismatch, "circ_convolve: length mismatch");
  std::size_t d = x.size();
  CVec z(d, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < d; ++j) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < d; ++k)
      acc += x[pmod(static_cast<long long>(j) - static_cast<long long>(k), d)] * y[k];
    z[j] = acc;
  }
  return z;
}

CVec diagonal(const CVec& x, long long j) {
  std::size_t d = x.size();
  CVec y(d);
  for (std::size_t k = 0; k < d; ++k)
    y[k] = x[k] * std::conj(x[pmod(static_cast<long long>(k) + j, d)]);
  return y;
}

double norm2(const CVec& x) {
  double s = 0.0;
  for (const cplx& v : x) s += std::norm(v);
  return std::sqrt(s);
}

double norm2(const RVec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double aligned_error(const CVec& x, const CVec& xt) {
  if (x.size() != xt.size()) fail(errc::dimension_mismatch, "aligned_error: length mismatch");
  double nx = norm2(x);
  if (nx == 0.0) fail(errc::invalid_argument, "aligned_error: ||x|| = 0");
  cplx ip = inner(x, xt);
  cplx theta = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cplx(1.0, 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(x[k] - theta * xt[k]);
  return std::sqrt(s) / nx;
}

cplx inner(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) fail(errc::dimension_mismatch, "inner: length mismatch");
  cplx s(0.0, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::conj(b[k]);
  return s;
}

} // namespace ptycho
