#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "signal.hpp"
#include "wdd.hpp"

namespace ptycho {

// The linear system of Theorem 3.3 for one shift: a = n * IDFT of the
// spectrum with its zero entry removed, rows (Re a_k, Im a_k), right-hand
// side (n^2 - |a_k|^2 - |f_0|^2) / (2 |f_0|).
struct PhaseSystem {
  std::size_t j = 0; // flattened shift
  CVec a;
  std::vector<double> rhs; // empty when zero_mag <= tau_0
  double zero_mag = 0.0;   // |f^j_0|
};

enum class RankClass { rank0, rank1, rank2 };

enum class PhaseOutcome { unique, ambiguous_type_I, ambiguous_type_II, unverified };

struct PhaseObjectResult {
  PhaseOutcome outcome = PhaseOutcome::unique;
  CVec object;                  // valid for unique / unverified
  std::vector<CVec> candidates; // both candidates for ambiguous_type_II
};

// |f^j_0| via the Plancherel deficit of the known entries; errors out when
// the spectrum cannot belong to a phase object.
double zero_freq_magnitude(const Lattice& lat, const CVec& row);

PhaseSystem build_system(const Lattice& lat, const CVec& row, std::size_t j);

// Singular-value classification of the d x 2 matrix A^j.
RankClass classify_rank(const PhaseSystem& s);

// Unique phi for rank-2 systems via the intersection formula with cross-k
// voting and a weighted circular-mean refinement.
double solve_rank2(const PhaseSystem& s);

// The two rank-1 solutions phi_1 != phi_2.
std::pair<double, double> solve_rank1_pair(const PhaseSystem& s);

// Picks the candidate completion of the shift-j row consistent with the
// resolved shift-2j row through diag(2j)_k = diag(j)_k diag(j)_{k+j}.
std::size_t select_candidate(const Lattice& lat, const CVec& cand1, const CVec& cand2,
                             std::size_t j, const CVec& row2j);

// Unrolls a unimodular diagonal g_k = x_k conj(x_{k+j}) into x for j coprime
// with d (1D lattice), with arg(x_0) = 0.
CVec propagate_from_diagonal(const CVec& g, std::size_t j);

// Algorithm 3 (1D): full decision tree over rank(A^1), rank(A^2).
PhaseObjectResult algorithm3(const Grid& y, const Window& w);

} // namespace ptycho
