#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "background_phase.hpp"
#include "forward.hpp"
#include "lattice.hpp"
#include "signal.hpp"

namespace ptycho {

struct ComplexImage {
  std::size_t d1 = 0, d2 = 0;
  CVec v;

  ComplexImage() = default;
  ComplexImage(std::size_t r, std::size_t c) : d1(r), d2(c), v(r * c, cplx(0.0, 0.0)) {}
  cplx& at(std::size_t i, std::size_t j) { return v[i * d2 + j]; }
  cplx at(std::size_t i, std::size_t j) const { return v[i * d2 + j]; }
};

using Shift2 = std::array<long long, 2>;

// D_gamma = {(j1,j2): 0 <= j1 < gamma, -gamma < j2 < gamma, -gamma < j1+j2 < gamma}.
std::vector<Shift2> index_set(std::size_t gamma);

// {(j1,j2): 0 <= j1 < delta, -delta < j2 < delta} ("all" mode).
std::vector<Shift2> all_set(std::size_t delta);

// Measurements on the flattened lattice: rows = frequency (l1,l2), cols =
// shift (r1,r2), both row-major over a d x d image (grid is d^2 x d^2).
Grid simulate_2d(const ComplexImage& x, const ComplexImage& w);

struct WindowCheck2 {
  bool ok = true;
  Shift2 j{0, 0};
  std::size_t k = 0;
};

WindowCheck2 check_window_2d(const ComplexImage& w, const std::vector<Shift2>& shifts);

// Separable product of two seeded Gaussian-offset profiles on [0, delta)^2,
// regenerated until every requested shift passes (up to 100 sub-seeds).
ComplexImage make_window_2d(std::size_t d, std::size_t delta,
                            const std::vector<Shift2>& required, std::uint64_t seed);

ComplexImage make_object_2d(ObjectKind kind, std::size_t d, std::uint64_t seed);

enum class Method { vanilla, general, phase };

struct PlanarResult {
  ComplexImage object;
  PhaseOutcome outcome = PhaseOutcome::unique;
};

// The staged WDD pipeline over the chosen diagonal set. Phase-method results
// are verified a posteriori against the background-invariant part of the
// table; failures are flagged as unverified.
PlanarResult reconstruct_2d(const Grid& y, const ComplexImage& w,
                            const std::vector<Shift2>& shifts, Method method);

} // namespace ptycho
