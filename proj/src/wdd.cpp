#include "wdd.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace ptycho {

namespace {

double window_tau(const Window& w) {
  double peak = 0.0;
  for (const cplx& v : w.w) peak = std::max(peak, std::abs(v));
  return 1e-12 * static_cast<double>(w.w.size()) * peak * peak;
}

} // namespace

WddTable wdd_transform(const Grid& y) {
  if (y.rows != y.cols) fail(errc::dimension_mismatch, "wdd_transform: grid not square");
  std::size_t d = y.rows;
  // Inverse DFT each row over the shift index r, then DFT each column over
  // the frequency l. For real Y this is the entrywise conjugate of the
  // literal F^{-1} Y F and is the orientation under which the table factors
  // as f^j_k * conj(F[conj(w) o S_j w]_k).
  std::vector<CVec> a(d);
  parallel_for(d, [&](std::size_t l) {
    CVec row(d);
    for (std::size_t r = 0; r < d; ++r) row[r] = cplx(y.at(l, r), 0.0);
    a[l] = idft(row);
  });
  WddTable t;
  t.d = d;
  t.t.assign(d, CVec(d));
  std::vector<CVec> cols(d);
  parallel_for(d, [&](std::size_t k) {
    CVec col(d);
    for (std::size_t l = 0; l < d; ++l) col[l] = a[l][k];
    cols[k] = dft(col);
  });
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) t.t[j][k] = cols[k][j];
  return t;
}

CVec window_spectrum(const Window& w, long long j) {
  std::size_t d = w.w.size();
  CVec prod(d);
  CVec ws = shift(w.w, j);
  for (std::size_t k = 0; k < d; ++k) prod[k] = std::conj(w.w[k]) * ws[k];
  return dft(prod);
}

DiagonalSpectrum deconvolve(const WddTable& t, const Window& w, std::size_t gamma,
                            bool drop_zero) {
  std::size_t d = t.d;
  if (w.w.size() != d) fail(errc::dimension_mismatch, "deconvolve: window length != table size");
  if (gamma < 1 || gamma > d) fail(errc::invalid_argument, "deconvolve: bad gamma");
  double tau = window_tau(w);
  DiagonalSpectrum spec;
  spec.d = d;
  spec.gamma = gamma;
  spec.rows.assign(gamma, CVec(d, cplx(0.0, 0.0)));
  spec.zero_valid.assign(gamma, 1);
  for (std::size_t j = 0; j < gamma; ++j) {
    CVec wj = window_spectrum(w, static_cast<long long>(j));
    for (std::size_t k = 0; k < d; ++k) {
      if (drop_zero && k == 0) continue;
      if (std::abs(wj[k]) <= tau)
        fail(errc::ill_conditioned, "deconvolve: window coefficient below tolerance at (j=" +
                                        std::to_string(j) + ", k=" + std::to_string(k) + ")");
      spec.rows[j][k] = t.t[j][k] / std::conj(wj[k]);
    }
    if (drop_zero) spec.zero_valid[j] = 0;
  }
  return spec;
}

BandedLift assemble_lift(const DiagonalSpectrum& spec) {
  for (std::size_t j = 0; j < spec.gamma; ++j)
    if (!spec.zero_valid[j])
      fail(errc::incomplete_spectrum,
           "assemble_lift: k = 0 entry of row " + std::to_string(j) + " is invalid");
  std::size_t d = spec.d;
  BandedLift x;
  x.d = d;
  x.gamma = spec.gamma;
  x.m.assign(d, CVec(d, cplx(0.0, 0.0)));
  for (std::size_t j = 0; j < spec.gamma; ++j) {
    CVec g = idft(spec.rows[j]);
    for (std::size_t l = 0; l < d; ++l) {
      std::size_t c = (l + j) % d;
      if (c == l) {
        x.m[l][l] = cplx(g[l].real(), 0.0);
      } else {
        x.m[l][c] = g[l];
        x.m[c][l] = std::conj(g[l]);
      }
    }
  }
  return x;
}

RVec magnitudes(const BandedLift& x) {
  RVec out(x.d);
  for (std::size_t l = 0; l < x.d; ++l) out[l] = std::sqrt(std::max(0.0, x.m[l][l].real()));
  return out;
}

CVec sync_power(std::size_t n, const std::vector<SyncEdge>& edges, std::size_t iters,
                double tol) {
  CVec v(n, cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  double residual = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    CVec u = v; // unit self-loops: sgn(X_ll) = 1
    for (const SyncEdge& e : edges) {
      u[e.u] += e.s * v[e.v];
      u[e.v] += std::conj(e.s) * v[e.u];
    }
    double lambda = norm2(u);
    if (lambda == 0.0) fail(errc::no_convergence, "sync_power: iterate vanished");
    for (cplx& c : u) c /= lambda;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += std::norm(u[i] - v[i]);
    residual = std::sqrt(diff);
    v = std::move(u);
    if (residual <= tol) {
      CVec out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = csgn(v[i]);
      return out;
    }
  }
  fail(errc::no_convergence,
       "sync_power: no convergence after " + std::to_string(iters) +
           " iterations (last residual " + std::to_string(residual) + ")");
}

CVec phase_sync(const BandedLift& x, std::size_t iters, double tol) {
  if (x.gamma < 2) fail(errc::invalid_argument, "phase_sync: band must be >= 2");
  std::size_t d = x.d;
  std::vector<SyncEdge> edges;
  edges.reserve(d * (x.gamma - 1));
  for (std::size_t j = 1; j < x.gamma; ++j)
    for (std::size_t l = 0; l < d; ++l) {
      std::size_t c = (l + j) % d;
      cplx s = csgn(x.m[l][c]);
      if (std::abs(s) > 0.0) edges.push_back(SyncEdge{l, c, s});
    }
  if (iters == 0) iters = 1000 * d;
  return sync_power(d, edges, iters, tol);
}

CVec algorithm1(const Grid& y, const Window& w, std::size_t gamma) {
  if (gamma < 2) fail(errc::invalid_argument, "algorithm1: gamma must be >= 2");
  WddTable t = wdd_transform(y);
  DiagonalSpectrum spec = deconvolve(t, w, gamma, false);
  BandedLift x = assemble_lift(spec);
  RVec mag = magnitudes(x);
  CVec phase = phase_sync(x);
  CVec out(y.rows);
  for (std::size_t l = 0; l < y.rows; ++l) out[l] = mag[l] * phase[l];
  return out;
}

} // namespace ptycho
