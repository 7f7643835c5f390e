#include "background_general.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace ptycho {

cplx cross_term(const Lattice& lat, const CVec& f_l, std::size_t l, const CVec& f_j,
                std::size_t j, std::size_t s) {
  std::size_t n = lat.n();
  if (f_l.size() != n || f_j.size() != n)
    fail(errc::dimension_mismatch, "cross_term: row length != lattice size");
  cplx c(0.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || k == s) continue;
    std::size_t km = lat.sub(k, s);
    cplx diff = std::conj(lat.root(l, km)) * f_j[k] * std::conj(f_j[km]) -
                std::conj(lat.root(j, km)) * f_l[k] * std::conj(f_l[km]);
    c += diff;
  }
  return c;
}

ZeroFreqSystem build_zero_freq_system(const Lattice& lat, const CVec& f0, const CVec& fj,
                                      std::size_t j) {
  std::size_t n = lat.n();
  if (j == 0) fail(errc::invalid_argument, "build_zero_freq_system: shift must be nonzero");
  double tau_z = 1e-10 * static_cast<double>(n) * static_cast<double>(n);
  ZeroFreqSystem sys;
  sys.j = j;
  for (std::size_t s = 1; s < n; ++s) {
    cplx z = (lat.root(j, s) + cplx(1.0, 0.0)) * f0[s];
    cplx c = cross_term(lat, f0, 0, fj, j, s);
    cplx fm = fj[lat.neg(s)];
    cplx fs = fj[s];
    if (std::abs(z) <= tau_z) {
      sys.a1.push_back(fm.real() + fs.real());
      sys.a2.push_back(fm.imag() + fs.imag());
      sys.b.push_back(-c.real());
      sys.source.push_back(RowSource::paired_real);
      sys.s_of_row.push_back(s);
      sys.a1.push_back(fs.imag() - fm.imag());
      sys.a2.push_back(fm.real() - fs.real());
      sys.b.push_back(-c.imag());
      sys.source.push_back(RowSource::paired_imag);
      sys.s_of_row.push_back(s);
    } else {
      cplx fmz = fm * z;
      cplx fsz = fs * std::conj(z);
      sys.a1.push_back(fmz.imag() - fsz.imag());
      sys.a2.push_back(fsz.real() - fmz.real());
      sys.b.push_back((c * std::conj(z)).imag());
      sys.source.push_back(RowSource::imag_reduced);
      sys.s_of_row.push_back(s);
    }
  }
  return sys;
}

cplx solve_zero_freq(const ZeroFreqSystem& sys) {
  if (sys.b.size() < 2)
    fail(errc::degenerate_system, "solve_zero_freq: fewer than two equations");
  // Normal equations of the stacked system; singular values of the stack are
  // the square roots of the eigenvalues of the 2x2 Gram matrix.
  double g11 = 0.0, g12 = 0.0, g22 = 0.0, h1 = 0.0, h2 = 0.0;
  for (std::size_t r = 0; r < sys.b.size(); ++r) {
    g11 += sys.a1[r] * sys.a1[r];
    g12 += sys.a1[r] * sys.a2[r];
    g22 += sys.a2[r] * sys.a2[r];
    h1 += sys.a1[r] * sys.b[r];
    h2 += sys.a2[r] * sys.b[r];
  }
  double tr = g11 + g22;
  double disc = std::sqrt(std::max(0.0, (g11 - g22) * (g11 - g22) / 4.0 + g12 * g12));
  double lam_max = tr / 2.0 + disc;
  double lam_min = std::max(0.0, tr / 2.0 - disc);
  double s_max = std::sqrt(lam_max);
  double s_min = std::sqrt(lam_min);
  if (s_max == 0.0 || s_min <= 1e-8 * s_max)
    fail(errc::degenerate_system,
         "solve_zero_freq: stacked system for shift " + std::to_string(sys.j) +
             " is rank deficient; zero frequency not uniquely determined "
             "(consider the phase-object method)");
  double det = g11 * g22 - g12 * g12;
  double re = (g22 * h1 - g12 * h2) / det;
  double im = (g11 * h2 - g12 * h1) / det;
  return cplx(re, im);
}

double solve_zero_zero(const Lattice& lat, const std::vector<CVec>& rows,
                       const std::vector<std::size_t>& shifts) {
  if (rows.size() < 2)
    fail(errc::degenerate_system, "solve_zero_zero: need at least one nonzero shift");
  double acc = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    cplx c = cross_term(lat, rows[0], 0, rows[r], shifts[r], 0);
    acc += c.real() + std::norm(rows[r][0]);
  }
  double mean = acc / static_cast<double>(rows.size() - 1);
  return std::sqrt(std::max(0.0, mean));
}

void repair_zero_frequencies(const Lattice& lat, std::vector<CVec>& rows,
                             const std::vector<std::size_t>& shifts) {
  if (rows.size() != shifts.size() || rows.empty())
    fail(errc::invalid_argument, "repair_zero_frequencies: rows/shifts mismatch");
  if (shifts[0] != 0)
    fail(errc::invalid_argument, "repair_zero_frequencies: first row must be shift 0");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ZeroFreqSystem sys = build_zero_freq_system(lat, rows[0], rows[r], shifts[r]);
    rows[r][0] = solve_zero_freq(sys);
  }
  rows[0][0] = cplx(solve_zero_zero(lat, rows, shifts), 0.0);
}

CVec algorithm2(const Grid& y, const Window& w, std::size_t gamma) {
  if (gamma < 2) fail(errc::invalid_argument, "algorithm2: gamma must be >= 2");
  WddTable t = wdd_transform(y);
  DiagonalSpectrum spec = deconvolve(t, w, gamma, true);
  Lattice lat = Lattice::line(spec.d);
  std::vector<std::size_t> shifts(gamma);
  for (std::size_t j = 0; j < gamma; ++j) shifts[j] = j;
  repair_zero_frequencies(lat, spec.rows, shifts);
  for (std::size_t j = 0; j < gamma; ++j) spec.zero_valid[j] = 1;
  BandedLift x = assemble_lift(spec);
  RVec mag = magnitudes(x);
  CVec phase = phase_sync(x);
  CVec out(spec.d);
  for (std::size_t l = 0; l < spec.d; ++l) out[l] = mag[l] * phase[l];
  return out;
}

} // namespace ptycho
