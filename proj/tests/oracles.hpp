// Independent reference implementations used only by the tests: naive O(d^2)
// transforms, a brute-force simulator, the full-knowledge cross-term value, a
// dense Hermitian Jacobi eigensolver, and grid-search phase alignment.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "forward.hpp"
#include "signal.hpp"

namespace oracles {

using ptycho::cplx;
using ptycho::CVec;
using ptycho::Grid;
using ptycho::pmod;
using ptycho::RVec;

inline cplx unit_root(double turns) {
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

// Direct double-loop DFT with the e^{-2*pi*i*k*j/d} convention.
inline CVec naive_dft(const CVec& x) {
  std::size_t d = x.size();
  CVec out(d, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      out[j] += unit_root(-static_cast<double>(k * j) / static_cast<double>(d)) * x[k];
  return out;
}

inline CVec naive_idft(const CVec& x) {
  std::size_t d = x.size();
  CVec out(d, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k)
      out[j] += unit_root(static_cast<double>(k * j) / static_cast<double>(d)) * x[k];
    out[j] /= static_cast<double>(d);
  }
  return out;
}

// (x*y)_j = sum_k x_{j-k} y_k by double loop.
inline CVec naive_convolve(const CVec& x, const CVec& y) {
  std::size_t d = x.size();
  CVec out(d, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      out[j] += x[pmod(static_cast<long long>(j) - static_cast<long long>(k), d)] * y[k];
  return out;
}

// Y_{l,r} = |sum_k e^{-2*pi*i*k*l/d} x_{k-r} w_k|^2 by triple loop.
inline Grid naive_simulate(const CVec& x, const CVec& w) {
  std::size_t d = x.size();
  Grid y(d, d);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t r = 0; r < d; ++r) {
      cplx acc(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k)
        acc += unit_root(-static_cast<double>(k * l) / static_cast<double>(d)) *
               x[pmod(static_cast<long long>(k) - static_cast<long long>(r), d)] * w[k];
      y.at(l, r) = std::norm(acc);
    }
  return y;
}

// True diagonal spectrum f^j = F[x o S_j conj(x)] via the naive DFT.
inline CVec true_spectrum(const CVec& x, long long j) {
  std::size_t d = x.size();
  CVec diag(d);
  for (std::size_t k = 0; k < d; ++k)
    diag[k] = x[k] * std::conj(x[pmod(static_cast<long long>(k) + j, d)]);
  return naive_dft(diag);
}

// Full-knowledge value of the known part of the higher-order diagonal
// relation: since both full sums of the identity agree, the known summands
// equal the difference of the unknown-bearing terms evaluated with the true
// spectra.
inline cplx full_knowledge_cross_term(const CVec& x, std::size_t l, std::size_t j, std::size_t s) {
  std::size_t d = x.size();
  CVec fl = true_spectrum(x, static_cast<long long>(l));
  CVec fj = true_spectrum(x, static_cast<long long>(j));
  auto dd = static_cast<double>(d);
  std::size_t ms = pmod(-static_cast<long long>(s), d);
  cplx rhs_unknown = unit_root(static_cast<double>(j * s) / dd) * fl[0] * std::conj(fl[ms]) +
                     fl[s] * std::conj(fl[0]);
  cplx lhs_unknown = unit_root(static_cast<double>(l * s) / dd) * fj[0] * std::conj(fj[ms]) +
                     fj[s] * std::conj(fj[0]);
  return rhs_unknown - lhs_unknown;
}

using CMat = std::vector<CVec>;

// Two-sided complex Jacobi eigensolver for Hermitian matrices. Returns
// eigenvectors as columns of v with eigenvalues in lambda (unsorted).
inline void jacobi_hermitian(CMat a, RVec& lambda, CMat& v) {
  std::size_t n = a.size();
  v.assign(n, CVec(n, cplx(0.0, 0.0)));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p][q]);
    if (off < 1e-26 * static_cast<double>(n * n)) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double m = std::abs(a[p][q]);
        if (m < 1e-300) continue;
        cplx phase = a[p][q] / m;
        double tau = (a[q][q].real() - a[p][p].real()) / (2.0 * m);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double sr = t * c;
        cplx s = sr * phase;
        // Apply G^H A G and V G with G = [[c, s], [-conj(s), c]] on (p, q).
        for (std::size_t i = 0; i < n; ++i) {
          cplx aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - std::conj(s) * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          cplx api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = std::conj(s) * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          cplx vip = v[i][p], viq = v[i][q];
          v[i][p] = c * vip - std::conj(s) * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
  }
  lambda.resize(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = a[i][i].real();
}

// Top eigenvector of a Hermitian matrix via the Jacobi oracle.
inline CVec top_eigenvector(const CMat& a) {
  RVec lambda;
  CMat v;
  jacobi_hermitian(a, lambda, v);
  std::size_t best = 0;
  for (std::size_t i = 1; i < lambda.size(); ++i)
    if (lambda[i] > lambda[best]) best = i;
  CVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = v[i][best];
  return out;
}

// min over 10^6 equispaced theta of ||x - e^{i*theta} xt|| / ||x||.
inline double grid_search_alignment(const CVec& x, const CVec& xt, std::size_t points = 1000000) {
  double nx = 0.0;
  for (const cplx& z : x) nx += std::norm(z);
  nx = std::sqrt(nx);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    cplx theta = unit_root(static_cast<double>(i) / static_cast<double>(points));
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(x[k] - theta * xt[k]);
    best = std::min(best, std::sqrt(s) / nx);
  }
  return best;
}

} // namespace oracles
