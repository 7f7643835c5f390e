#pragma once

#include <cstddef>
#include <vector>

#include "forward.hpp"
#include "signal.hpp"

namespace ptycho {

// F^{-1} Y F of the measurement grid; t[j][k] with j = shift-lag row,
// k = frequency column.
struct WddTable {
  std::size_t d = 0;
  std::vector<CVec> t;
};

// Per-shift diagonal spectra f^j for j in [gamma]; zero_valid[j] marks whether
// the k = 0 entry is trustworthy.
struct DiagonalSpectrum {
  std::size_t d = 0, gamma = 0;
  std::vector<CVec> rows;
  std::vector<char> zero_valid;
};

// Hermitian circular band of x x^*.
struct BandedLift {
  std::size_t d = 0, gamma = 0;
  std::vector<CVec> m; // dense d x d
};

// Pairwise phase-difference edge for angular synchronization: coupling
// between nodes u and v with sgn value s = sgn(X_{u,v}).
struct SyncEdge {
  std::size_t u = 0, v = 0;
  cplx s;
};

WddTable wdd_transform(const Grid& y);

// coeffs[j][k] = T_{j,k} / conj(F[conj(w) o S_j w]_k); drop_zero marks the
// k = 0 entries invalid instead of dividing (background filtering).
DiagonalSpectrum deconvolve(const WddTable& t, const Window& w, std::size_t gamma, bool drop_zero);

// Spectrum of the window diagonal, F[conj(w) o S_j w].
CVec window_spectrum(const Window& w, long long j);

BandedLift assemble_lift(const DiagonalSpectrum& d);

RVec magnitudes(const BandedLift& x);

// Power iteration on sgn(X) from the normalized all-ones vector; iters = 0
// selects the default cap 1000*d. Returns the entrywise sgn of the top
// eigenvector.
CVec phase_sync(const BandedLift& x, std::size_t iters = 0, double tol = 1e-12);

// Matrix-free synchronization over an explicit edge list on n nodes (unit
// self-loops included implicitly). Shared by the 1D and planar paths.
CVec sync_power(std::size_t n, const std::vector<SyncEdge>& edges, std::size_t iters, double tol);

CVec algorithm1(const Grid& y, const Window& w, std::size_t gamma);

} // namespace ptycho
