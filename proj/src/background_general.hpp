#pragma once

#include <cstddef>
#include <vector>

#include "lattice.hpp"
#include "signal.hpp"
#include "wdd.hpp"

namespace ptycho {

// Which equation family produced a row of the stacked 2-unknown system: the
// paired real/imaginary equations (z ~ 0) or the conjugated imaginary-part
// reduction (z != 0).
enum class RowSource { paired_real, paired_imag, imag_reduced };

// Stacked real linear system for (Re f^j_0, Im f^j_0); one or two rows per
// nonzero lattice frequency s (s = 0 is excluded by construction).
struct ZeroFreqSystem {
  std::size_t j = 0; // flattened shift index
  std::vector<double> a1, a2, b; // row coefficients and right-hand sides
  std::vector<RowSource> source;
  std::vector<std::size_t> s_of_row;
};

// c_{l,j,s} of the higher-order diagonal relation: the fully known summands
// k not in {0, s} on both sides. Rows hold full spectra over the lattice with
// the k = 0 entries ignored.
cplx cross_term(const Lattice& lat, const CVec& f_l, std::size_t l, const CVec& f_j,
                std::size_t j, std::size_t s);

// Builds the l = 0 reduction rows for shift j (j != 0).
ZeroFreqSystem build_zero_freq_system(const Lattice& lat, const CVec& f0, const CVec& fj,
                                      std::size_t j);

// Least-squares solve of the stacked system; rank-deficient systems raise a
// degenerate-system error.
cplx solve_zero_freq(const ZeroFreqSystem& sys);

// f^0_0 from the s = 0 relation, averaged over the repaired shifts. rows[0]
// is the zero-shift spectrum (entry 0 ignored); rows[r >= 1] must already
// carry their repaired k = 0 entries.
double solve_zero_zero(const Lattice& lat, const std::vector<CVec>& rows,
                       const std::vector<std::size_t>& shifts);

// Repairs the k = 0 entries of all rows in place. shifts[r] is the flattened
// lattice shift of rows[r]; shifts[0] must be 0.
void repair_zero_frequencies(const Lattice& lat, std::vector<CVec>& rows,
                             const std::vector<std::size_t>& shifts);

// Algorithm 2 (1D): drop the contaminated k = 0 coefficients, repair them via
// the linear systems, then run the common lift/magnitude/sync pipeline.
CVec algorithm2(const Grid& y, const Window& w, std::size_t gamma);

} // namespace ptycho
