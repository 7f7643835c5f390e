#pragma once

#include <cstddef>
#include <vector>

#include "signal.hpp"

namespace ptycho {

// Flattened Z_{d_1} x ... x Z_{d_m} index lattice (row-major). The
// zero-frequency repair and the phase systems are written once against this
// interface; 1D uses a single axis, the planar module uses two.
class Lattice {
public:
  explicit Lattice(std::vector<std::size_t> dims);
  static Lattice line(std::size_t d) { return Lattice({d}); }
  static Lattice square(std::size_t d) { return Lattice({d, d}); }

  std::size_t n() const { return n_; }
  std::size_t axes() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }

  std::size_t encode(const std::vector<long long>& idx) const;
  std::vector<long long> decode(std::size_t flat) const;

  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t sub(std::size_t a, std::size_t b) const;
  std::size_t neg(std::size_t a) const { return sub(0, a); }

  // exp(+2*pi*i * sum_i a_i b_i / d_i), the modulation root attached to the
  // flattened pair (a, b).
  cplx root(std::size_t a, std::size_t b) const;

  // Multi-dimensional DFT/inverse over the lattice (axis-wise 1D transforms);
  // the inverse carries the 1/n factor.
  CVec dft_n(const CVec& x) const;
  CVec idft_n(const CVec& x) const;

private:
  CVec transform_axes(const CVec& x, bool inverse) const;

  std::vector<std::size_t> dims_;
  std::size_t n_;
};

} // namespace ptycho
