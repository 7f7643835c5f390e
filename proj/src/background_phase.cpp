#include "background_phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace ptycho {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

double tau_zero(std::size_t n) { return 1e-8 * static_cast<double>(n); }

double wrap_angle(double phi) {
  phi = std::fmod(phi, kTau);
  if (phi < 0.0) phi += kTau;
  return phi;
}

double circ_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTau);
  return std::min(d, kTau - d);
}

// max_k | Re(a_k) cos(phi) + Im(a_k) sin(phi) - rhs_k |
double system_residual(const PhaseSystem& s, double phi) {
  double c = std::cos(phi), sn = std::sin(phi);
  double worst = 0.0;
  for (std::size_t k = 0; k < s.a.size(); ++k)
    worst = std::max(worst, std::abs(s.a[k].real() * c + s.a[k].imag() * sn - s.rhs[k]));
  return worst;
}

} // namespace

double zero_freq_magnitude(const Lattice& lat, const CVec& row) {
  std::size_t n = lat.n();
  if (row.size() != n) fail(errc::dimension_mismatch, "zero_freq_magnitude: row length");
  double nn = static_cast<double>(n) * static_cast<double>(n);
  double s = 0.0;
  for (std::size_t k = 1; k < n; ++k) s += std::norm(row[k]);
  if (s > nn * (1.0 + 1e-6))
    fail(errc::not_phase_object,
         "zero_freq_magnitude: spectral energy exceeds the phase-object bound");
  return std::sqrt(std::max(0.0, nn - s));
}

PhaseSystem build_system(const Lattice& lat, const CVec& row, std::size_t j) {
  std::size_t n = lat.n();
  PhaseSystem s;
  s.j = j;
  s.zero_mag = zero_freq_magnitude(lat, row);
  CVec hollow = row;
  hollow[0] = cplx(0.0, 0.0);
  s.a = lat.idft_n(hollow);
  for (cplx& v : s.a) v *= static_cast<double>(n);
  if (s.zero_mag > tau_zero(n)) {
    double nn = static_cast<double>(n) * static_cast<double>(n);
    s.rhs.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      s.rhs[k] = (nn - std::norm(s.a[k]) - s.zero_mag * s.zero_mag) / (2.0 * s.zero_mag);
  }
  return s;
}

RankClass classify_rank(const PhaseSystem& s) {
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  for (const cplx& v : s.a) {
    g11 += v.real() * v.real();
    g12 += v.real() * v.imag();
    g22 += v.imag() * v.imag();
  }
  double tr = g11 + g22;
  double disc = std::sqrt(std::max(0.0, (g11 - g22) * (g11 - g22) / 4.0 + g12 * g12));
  double s1 = std::sqrt(std::max(0.0, tr / 2.0 + disc));
  double s2 = std::sqrt(std::max(0.0, tr / 2.0 - disc));
  double n = static_cast<double>(s.a.size());
  if (s1 <= 1e-8 * n * n) return RankClass::rank0;
  if (s2 <= 1e-8 * s1) return RankClass::rank1;
  return RankClass::rank2;
}

double solve_rank2(const PhaseSystem& s) {
  std::size_t n = s.a.size();
  double nn = static_cast<double>(n) * static_cast<double>(n);
  if (s.rhs.empty() || s.zero_mag <= 0.0)
    fail(errc::invalid_argument, "solve_rank2: system has no right-hand side");
  double tau0 = tau_zero(n);
  struct Cand {
    double base, off, weight;
  };
  std::vector<Cand> cands;
  for (std::size_t k = 0; k < n; ++k) {
    double mag = std::abs(s.a[k]);
    if (mag <= tau0) continue;
    double t = (nn - mag * mag - s.zero_mag * s.zero_mag) / (2.0 * mag * s.zero_mag);
    t = std::clamp(t, -1.0, 1.0);
    cands.push_back(Cand{std::arg(s.a[k]), std::acos(t), mag * mag * (1.0 - t * t)});
  }
  if (cands.size() < 2)
    fail(errc::inconsistent_system, "solve_rank2: not enough usable equations");
  // Reference candidate pair from the best-conditioned row.
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (cands[i].weight > cands[best].weight) best = i;
  double phi_a = cands[best].base + cands[best].off;
  double phi_b = cands[best].base - cands[best].off;
  double phi_init = system_residual(s, phi_a) <= system_residual(s, phi_b) ? phi_a : phi_b;
  // Weighted circular mean of the per-row candidates matching the reference.
  cplx acc(0.0, 0.0);
  for (const Cand& c : cands) {
    double p = c.base + c.off, m = c.base - c.off;
    double chosen = circ_dist(p, phi_init) <= circ_dist(m, phi_init) ? p : m;
    acc += std::polar(std::max(c.weight, 1e-300), chosen);
  }
  double phi = wrap_angle(std::arg(acc));
  if (system_residual(s, phi) > 1e-6 * nn)
    fail(errc::inconsistent_system,
         "solve_rank2: no consistent intersection of the candidate sets");
  return phi;
}

std::pair<double, double> solve_rank1_pair(const PhaseSystem& s) {
  std::size_t n = s.a.size();
  double nn = static_cast<double>(n) * static_cast<double>(n);
  if (s.rhs.empty() || s.zero_mag <= 0.0)
    fail(errc::invalid_argument, "solve_rank1_pair: system has no right-hand side");
  double tau0 = tau_zero(n);
  std::size_t k0 = n;
  if (std::abs(s.a[0]) > tau0) {
    k0 = 0;
  } else {
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(s.a[k]) > tau0) {
        k0 = k;
        break;
      }
  }
  if (k0 == n)
    fail(errc::internal, "solve_rank1_pair: all rows vanish, contradicting rank 1");
  double mag = std::abs(s.a[k0]);
  double t = (nn - mag * mag - s.zero_mag * s.zero_mag) / (2.0 * mag * s.zero_mag);
  t = std::clamp(t, -1.0, 1.0);
  double base = std::arg(s.a[k0]);
  double off = std::acos(t);
  return {wrap_angle(base - off), wrap_angle(base + off)};
}

std::size_t select_candidate(const Lattice& lat, const CVec& cand1, const CVec& cand2,
                             std::size_t j, const CVec& row2j) {
  CVec h = lat.idft_n(row2j);
  auto residual = [&](const CVec& cand) {
    CVec g = lat.idft_n(cand);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      worst = std::max(worst, std::abs(g[k] * g[lat.add(k, j)] - h[k]));
    return worst;
  };
  double r1 = residual(cand1);
  double r2 = residual(cand2);
  double win = std::min(r1, r2), lose = std::max(r1, r2);
  if (win > 1e-6 || lose < 10.0 * win)
    fail(errc::ambiguity_resolution,
         "select_candidate: residual separation failed (" + std::to_string(r1) + " vs " +
             std::to_string(r2) + ")");
  return r1 <= r2 ? 0 : 1;
}

CVec propagate_from_diagonal(const CVec& g, std::size_t j) {
  std::size_t d = g.size();
  if (std::gcd(d, j) != 1)
    fail(errc::invalid_argument, "propagate_from_diagonal: shift not coprime with d");
  CVec x(d);
  x[0] = cplx(1.0, 0.0);
  std::size_t cur = 0;
  for (std::size_t step = 1; step < d; ++step) {
    std::size_t nxt = (cur + j) % d;
    // g_k = x_k conj(x_{k+j}) with |x| = 1 gives x_{k+j} = x_k conj(g_k).
    x[nxt] = x[cur] * std::conj(g[cur]);
    cur = nxt;
  }
  return x;
}

namespace {

CVec reconstruct_phases(DiagonalSpectrum spec, std::size_t gamma) {
  spec.gamma = gamma;
  spec.rows.resize(gamma);
  spec.zero_valid.assign(gamma, 1);
  BandedLift x = assemble_lift(spec);
  return phase_sync(x, 0, 1e-14);
}

} // namespace

PhaseObjectResult algorithm3(const Grid& y, const Window& w) {
  std::size_t d = y.rows;
  Lattice lat = Lattice::line(d);
  WddTable t = wdd_transform(y);
  DiagonalSpectrum spec = deconvolve(t, w, 3, true);
  spec.rows[0][0] = cplx(static_cast<double>(d), 0.0); // diagonal 0 of a phase object
  double tau0 = tau_zero(d);

  CVec& row1 = spec.rows[1];
  double m1 = zero_freq_magnitude(lat, row1);
  PhaseSystem s1 = build_system(lat, row1, 1);

  PhaseObjectResult res;
  if (m1 <= tau0) {
    // Lost coefficient is zero; nothing to solve (rank 0 is excluded here
    // since it forces |f^1_0| = d).
    row1[0] = cplx(0.0, 0.0);
    res.object = reconstruct_phases(spec, 2);
    return res;
  }

  RankClass r1 = classify_rank(s1);
  if (r1 == RankClass::rank0) {
    res.outcome = PhaseOutcome::ambiguous_type_I;
    return res;
  }
  if (r1 == RankClass::rank2) {
    row1[0] = std::polar(m1, solve_rank2(s1));
    res.object = reconstruct_phases(spec, 2);
    return res;
  }

  // rank(A^1) = 1: bring in the second diagonal.
  auto [phi1, phi2] = solve_rank1_pair(s1);
  CVec& row2 = spec.rows[2];
  double m2 = zero_freq_magnitude(lat, row2);
  PhaseSystem s2 = build_system(lat, row2, 2);
  RankClass r2 = classify_rank(s2);

  if (r2 == RankClass::rank1)
    fail(errc::rank_law_violation,
         "algorithm3: observed rank pair (1,1), which is impossible for phase objects");
  if (r2 == RankClass::rank0) {
    if (d % 2 != 0)
      fail(errc::rank_law_violation,
           "algorithm3: observed rank pair (1,0) with odd dimension, which is impossible");
    res.outcome = PhaseOutcome::ambiguous_type_II;
    for (double phi : {phi1, phi2}) {
      CVec cand = row1;
      cand[0] = std::polar(m1, phi);
      res.candidates.push_back(propagate_from_diagonal(idft(cand), 1));
    }
    return res;
  }

  // rank(A^2) = 2 (both parities): resolve f^2_0, then pick the consistent
  // completion of the first diagonal.
  row2[0] = m2 <= tau0 ? cplx(0.0, 0.0) : std::polar(m2, solve_rank2(s2));
  CVec cand1 = row1, cand2 = row1;
  cand1[0] = std::polar(m1, phi1);
  cand2[0] = std::polar(m1, phi2);
  std::size_t pick = select_candidate(lat, cand1, cand2, 1, row2);
  row1 = pick == 0 ? cand1 : cand2;
  res.object = reconstruct_phases(spec, 3);
  return res;
}

} // namespace ptycho
