#include "forward.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "errors.hpp"
#include "parallel.hpp"

namespace ptycho {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

double window_tolerance(const Window& w) {
  double peak = 0.0;
  for (const cplx& v : w.w) peak = std::max(peak, std::abs(v));
  return 1e-12 * static_cast<double>(w.w.size()) * peak * peak;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

} // namespace

Grid simulate(const CVec& x, const Window& w) {
  if (x.size() != w.w.size())
    fail(errc::dimension_mismatch, "simulate: object and window length differ");
  std::size_t d = x.size();
  Grid y(d, d);
  parallel_for(d, [&](std::size_t r) {
    CVec exit_wave(d);
    for (std::size_t k = 0; k < d; ++k)
      exit_wave[k] = x[pmod(static_cast<long long>(k) - static_cast<long long>(r), d)] * w.w[k];
    CVec hat = dft(exit_wave);
    for (std::size_t l = 0; l < d; ++l) y.at(l, r) = std::norm(hat[l]);
  });
  return y;
}

Grid add_background(const Grid& y, const RVec& b) {
  if (b.size() != y.rows)
    fail(errc::dimension_mismatch, "add_background: background length != grid rows");
  Grid out = y;
  for (std::size_t l = 0; l < y.rows; ++l)
    for (std::size_t r = 0; r < y.cols; ++r) {
      out.at(l, r) += b[l];
      if (out.at(l, r) < 0.0)
        fail(errc::nonphysical_measurement,
             "add_background: negative measurement at frequency " + std::to_string(l));
    }
  return out;
}

double noise_level(const Grid& y, const Grid& yt) {
  if (y.rows != yt.rows || y.cols != yt.cols)
    fail(errc::dimension_mismatch, "noise_level: shape mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.v.size(); ++i) {
    double diff = y.v[i] - yt.v[i];
    num += diff * diff;
    den += y.v[i] * y.v[i];
  }
  if (den == 0.0) fail(errc::invalid_argument, "noise_level: ||Y||_F = 0");
  return std::sqrt(num / den);
}

WindowCheck check_window(const Window& w, std::size_t gamma) {
  double tau = window_tolerance(w);
  CVec wconj = conjugate(w.w);
  for (std::size_t j = 0; j < gamma; ++j) {
    CVec prod(w.w.size());
    CVec ws = shift(w.w, static_cast<long long>(j));
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = wconj[k] * ws[k];
    CVec spec = dft(prod);
    for (std::size_t k = 0; k < spec.size(); ++k)
      if (std::abs(spec[k]) <= tau) return WindowCheck{false, j, k};
  }
  return WindowCheck{};
}

Window make_window(std::size_t d, std::size_t delta, std::size_t gamma, std::uint64_t seed) {
  if (delta < 1 || delta >= d) fail(errc::invalid_argument, "make_window: need 1 <= delta < d");
  if (gamma < 1 || gamma > delta)
    fail(errc::invalid_argument, "make_window: need 1 <= gamma <= delta");
  WindowCheck first_violation;
  bool have_violation = false;
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, attempt));
    std::uniform_real_distribution<double> offset(0.05 * static_cast<double>(delta),
                                                  0.2 * static_cast<double>(delta));
    double center = 0.5 * static_cast<double>(delta) + offset(rng);
    double sigma = static_cast<double>(delta) / 4.0;
    Window w;
    w.delta = delta;
    w.w.assign(d, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < delta; ++k) {
      double t = (static_cast<double>(k) - center) / sigma;
      w.w[k] = cplx(std::exp(-0.5 * t * t), 0.0);
    }
    WindowCheck chk = check_window(w, gamma);
    if (chk.ok) return w;
    if (!have_violation) {
      first_violation = chk;
      have_violation = true;
    }
  }
  fail(errc::window_generation,
       "make_window: no admissible window after 100 attempts; first vanishing coefficient at (j=" +
           std::to_string(first_violation.j) + ", k=" + std::to_string(first_violation.k) + ")");
}

CVec make_object(ObjectKind kind, std::size_t d, std::uint64_t seed, long long m, double rho) {
  CVec x(d);
  switch (kind) {
    case ObjectKind::random_complex: {
      // Moduli bounded away from zero, 0.1 <= |x_k| <= 1.
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> mag(0.1, 1.0);
      std::uniform_real_distribution<double> arg(0.0, kTau);
      for (std::size_t k = 0; k < d; ++k) x[k] = std::polar(mag(rng), arg(rng));
      break;
    }
    case ObjectKind::random_phase: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> arg(0.0, kTau);
      for (std::size_t k = 0; k < d; ++k) x[k] = std::polar(1.0, arg(rng));
      break;
    }
    case ObjectKind::modulation: {
      for (std::size_t k = 0; k < d; ++k)
        x[k] = std::polar(1.0, kTau * static_cast<double>(pmod(static_cast<long long>(k) * m, d)) /
                                   static_cast<double>(d));
      break;
    }
    case ObjectKind::type2: {
      if (d % 2 != 0) fail(errc::invalid_argument, "type2 object requires even d");
      if (!(rho > -std::numbers::pi && rho < std::numbers::pi))
        fail(errc::invalid_argument, "type2 object requires rho in (-pi, pi)");
      // The q = 1 member of the alternating family.
      for (std::size_t k = 0; k < d; ++k) {
        cplx mod = std::polar(1.0, -kTau * static_cast<double>(pmod(static_cast<long long>(k) * m, d)) /
                                       static_cast<double>(d));
        x[k] = (k % 2 == 0) ? mod : mod * std::polar(1.0, -0.5 * rho);
      }
      break;
    }
  }
  return x;
}

RVec make_background_constant(std::size_t d, double amplitude) {
  if (amplitude < 0.0) fail(errc::invalid_argument, "background amplitude must be >= 0");
  return RVec(d, amplitude);
}

RVec make_background_random(std::size_t d, double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0) fail(errc::invalid_argument, "background amplitude must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVec b(d);
  for (double& v : b) v = amplitude * u(rng);
  return b;
}

double amplitude_for_noise_level(const Grid& y, const RVec& b, double level) {
  if (b.size() != y.rows) fail(errc::dimension_mismatch, "amplitude_for_noise_level: shape mismatch");
  // ||1 b^T||_F scales linearly with the amplitude.
  double bnorm = norm2(b) * std::sqrt(static_cast<double>(y.cols));
  if (bnorm == 0.0) fail(errc::invalid_argument, "amplitude_for_noise_level: zero background");
  double ynorm = norm2(y.v);
  if (ynorm == 0.0) fail(errc::invalid_argument, "amplitude_for_noise_level: ||Y||_F = 0");
  return level * ynorm / bnorm;
}

AmbiguousPair make_ambiguous_pair(int kind, long long m, double rho, const Window& w) {
  std::size_t d = w.w.size();
  AmbiguousPair out;
  if (kind == 1) {
    out.x1 = make_object(ObjectKind::modulation, d, 0, 0);
    out.x2 = make_object(ObjectKind::modulation, d, 0, m);
  } else if (kind == 2) {
    if (d % 2 != 0)
      fail(errc::invalid_argument, "type II ambiguous pair requires even d");
    out.x1 = make_object(ObjectKind::type2, d, 0, m, rho);
    // The q = 2 partner: odd entries carry -exp(+i rho/2) instead.
    out.x2.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      cplx mod = std::polar(1.0, -kTau * static_cast<double>(pmod(static_cast<long long>(k) * m, d)) /
                                     static_cast<double>(d));
      out.x2[k] = (k % 2 == 0) ? mod : -mod * std::polar(1.0, 0.5 * rho);
    }
  } else {
    fail(errc::invalid_argument, "make_ambiguous_pair: kind must be 1 or 2");
  }

  // The two objects share all nonzero-frequency diagonal spectra; the
  // backgrounds absorb the k = 0 differences:
  //   d (F^{-1}(b2 - b1))_j = (f_0^{j,1} - f_0^{j,2}) conj(F[conj(w) o S_j w])_0.
  CVec wconj = conjugate(w.w);
  CVec v2(d, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < d; ++j) {
    CVec prod(d);
    CVec ws = shift(w.w, static_cast<long long>(j));
    for (std::size_t k = 0; k < d; ++k) prod[k] = wconj[k] * ws[k];
    cplx w0 = dft(prod)[0];
    cplx f1 = dft(diagonal(out.x1, static_cast<long long>(j)))[0];
    cplx f2 = dft(diagonal(out.x2, static_cast<long long>(j)))[0];
    // The background term sits at row -j of the transformed table.
    v2[pmod(-static_cast<long long>(j), d)] = (f1 - f2) * std::conj(w0) / static_cast<double>(d);
  }
  CVec b2_raw = dft(v2); // conjugate-symmetric v2 => real vector
  RVec b1_raw(d, 0.0), b2r(d);
  for (std::size_t l = 0; l < d; ++l) {
    if (std::abs(b2_raw[l].imag()) > 1e-9 * (1.0 + std::abs(b2_raw[l])))
      fail(errc::internal, "make_ambiguous_pair: background not real");
    b2r[l] = b2_raw[l].real();
  }

  // Common offset keeping both corrupted grids strictly positive.
  Grid y1 = simulate(out.x1, w);
  Grid y2 = simulate(out.x2, w);
  double lowest = 0.0;
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t r = 0; r < d; ++r) {
      lowest = std::min(lowest, y1.at(l, r) + b1_raw[l]);
      lowest = std::min(lowest, y2.at(l, r) + b2r[l]);
    }
  double offset = std::max(0.0, -lowest) + 1.0;
  out.b1.assign(d, offset);
  out.b2 = b2r;
  for (double& v : out.b2) v += offset;
  return out;
}

} // namespace ptycho
