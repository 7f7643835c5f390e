#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ptycho {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

// True mathematical modulus, result in [0, d).
inline std::size_t pmod(long long i, std::size_t d) {
  long long m = i % static_cast<long long>(d);
  if (m < 0) m += static_cast<long long>(d);
  return static_cast<std::size_t>(m);
}

// Forward transform (Fx)_j = sum_k exp(-2*pi*i*k*j/d) x_k and its inverse
// carrying the 1/d factor. Mixed-radix, exact naive fallback at prime sizes.
CVec dft(const CVec& x);
CVec idft(const CVec& x);

// (S_r x)_j = x_{j+r}, (M_r x)_j = exp(2*pi*i*j*r/d) x_j, (R x)_j = x_{-j}.
CVec shift(const CVec& x, long long r);
CVec modulate(const CVec& x, long long r);
CVec reflect(const CVec& x);

CVec conjugate(const CVec& x);

// (x*y)_j = sum_k x_{j-k} y_k; throws on length mismatch.
CVec circ_convolve(const CVec& x, const CVec& y);

// diagonal(x, j)_k = x_k * conj(x_{k+j}); the j-th circular diagonal of x x*.
CVec diagonal(const CVec& x, long long j);

double norm2(const CVec& x);
double norm2(const RVec& x);
cplx inner(const CVec& a, const CVec& b); // sum_k a_k conj(b_k)

// min over unimodular theta of ||x - theta*xt||_2 / ||x||_2; the minimizer is
// theta = sgn(<x, xt>).
double aligned_error(const CVec& x, const CVec& xt);

// sgn(z) = z/|z|, sgn(0) = 0.
inline cplx csgn(cplx z) {
  double m = std::abs(z);
  return m > 0.0 ? z / m : cplx(0.0, 0.0);
}

} // namespace ptycho
