#pragma once

#include <cstdint>
#include <string>

#include "signal.hpp"

namespace ptycho {

// Real measurement table, row index = frequency, column index = shift.
struct Grid {
  std::size_t rows = 0, cols = 0;
  RVec v;

  Grid() = default;
  Grid(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

// Localized illumination, supp(w) = [0, delta).
struct Window {
  CVec w;
  std::size_t delta = 0;
};

struct WindowCheck {
  bool ok = true;
  std::size_t j = 0, k = 0; // first violating coefficient if !ok
};

enum class ObjectKind { random_complex, random_phase, modulation, type2 };

// Noise-free intensities Y_{l,r} = |(F[S_{-r} x o w])_l|^2.
Grid simulate(const CVec& x, const Window& w);

// Y_{l,r} + b_l; rejects grids with negative entries.
Grid add_background(const Grid& y, const RVec& b);

// ||Y - Yt||_F / ||Y||_F.
double noise_level(const Grid& y, const Grid& yt);

// |F[conj(w) o S_j w]_k| > tau for all 0 <= j < gamma, k in [d].
WindowCheck check_window(const Window& w, std::size_t gamma);

// Gaussian bell on [0, delta) with a seeded asymmetric offset; regenerated
// until check_window(w, gamma) passes (up to 100 sub-seeds).
Window make_window(std::size_t d, std::size_t delta, std::size_t gamma, std::uint64_t seed);

CVec make_object(ObjectKind kind, std::size_t d, std::uint64_t seed, long long m = 0,
                 double rho = 0.0);

// Per-frequency background offsets, entrywise >= 0.
RVec make_background_constant(std::size_t d, double amplitude);
RVec make_background_random(std::size_t d, double amplitude, std::uint64_t seed);

// Amplitude multiplier that brings add_background(y, a*b) to the given
// Frobenius noise level.
double amplitude_for_noise_level(const Grid& y, const RVec& b, double level);

// Two object/background pairs producing identical measurements.
struct AmbiguousPair {
  CVec x1, x2;
  RVec b1, b2;
};

// kind 1: modulation family x^m; kind 2: alternating family (even d only).
AmbiguousPair make_ambiguous_pair(int kind, long long m, double rho, const Window& w);

} // namespace ptycho
