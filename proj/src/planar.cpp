#include "planar.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "background_general.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "wdd.hpp"

namespace ptycho {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void require_square(const ComplexImage& img, const char* what) {
  if (img.d1 == 0 || img.d1 != img.d2)
    fail(errc::invalid_argument, std::string(what) + ": image must be square and nonempty");
}

// F_2[conj(w) o S_j w] over the flattened lattice.
CVec window_spectrum_2d(const Lattice& lat, const ComplexImage& w, std::size_t jflat) {
  CVec prod(lat.n());
  for (std::size_t k = 0; k < lat.n(); ++k)
    prod[k] = std::conj(w.v[k]) * w.v[lat.add(k, jflat)];
  return lat.dft_n(prod);
}

// WDD table over the flattened lattice, same orientation as the 1D
// transform: inverse DFT over the shift axis, DFT over the frequency axis,
// so that t[j][k] = f^j_k * conj(W_{j,k}).
std::vector<CVec> wdd_table_2d(const Lattice& lat, const Grid& y) {
  std::size_t n = lat.n();
  if (y.rows != n || y.cols != n)
    fail(errc::dimension_mismatch, "wdd_table_2d: grid shape does not match the lattice");
  std::vector<CVec> a(n);
  parallel_for(n, [&](std::size_t l) {
    CVec row(n);
    for (std::size_t r = 0; r < n; ++r) row[r] = cplx(y.at(l, r), 0.0);
    a[l] = lat.idft_n(row);
  });
  std::vector<CVec> t(n, CVec(n));
  std::vector<CVec> cols(n);
  parallel_for(n, [&](std::size_t k) {
    CVec col(n);
    for (std::size_t l = 0; l < n; ++l) col[l] = a[l][k];
    cols[k] = lat.dft_n(col);
  });
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) t[j][k] = cols[k][j];
  return t;
}

double window_tau(const Lattice& lat, const ComplexImage& w) {
  double peak = 0.0;
  for (const cplx& v : w.v) peak = std::max(peak, std::abs(v));
  return 1e-12 * static_cast<double>(lat.n()) * peak * peak;
}

RVec gaussian_profile(std::size_t d, std::size_t delta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(0.05 * static_cast<double>(delta),
                                                0.2 * static_cast<double>(delta));
  double center = 0.5 * static_cast<double>(delta) + offset(rng);
  double sigma = static_cast<double>(delta) / 4.0;
  RVec p(d, 0.0);
  for (std::size_t k = 0; k < delta; ++k) {
    double t = (static_cast<double>(k) - center) / sigma;
    p[k] = std::exp(-0.5 * t * t);
  }
  return p;
}

} // namespace

std::vector<Shift2> index_set(std::size_t gamma) {
  if (gamma < 1) fail(errc::invalid_argument, "index_set: gamma must be >= 1");
  std::vector<Shift2> out;
  long long g = static_cast<long long>(gamma);
  for (long long j1 = 0; j1 < g; ++j1)
    for (long long j2 = -g + 1; j2 < g; ++j2)
      if (-g < j1 + j2 && j1 + j2 < g) out.push_back(Shift2{j1, j2});
  return out;
}

std::vector<Shift2> all_set(std::size_t delta) {
  if (delta < 1) fail(errc::invalid_argument, "all_set: delta must be >= 1");
  std::vector<Shift2> out;
  long long g = static_cast<long long>(delta);
  for (long long j1 = 0; j1 < g; ++j1)
    for (long long j2 = -g + 1; j2 < g; ++j2) out.push_back(Shift2{j1, j2});
  return out;
}

Grid simulate_2d(const ComplexImage& x, const ComplexImage& w) {
  require_square(x, "simulate_2d");
  require_square(w, "simulate_2d");
  if (x.d1 != w.d1) fail(errc::dimension_mismatch, "simulate_2d: object and window shape differ");
  std::size_t d = x.d1;
  Lattice lat = Lattice::square(d);
  std::size_t n = lat.n();
  Grid y(n, n);
  parallel_for(n, [&](std::size_t rflat) {
    CVec exit_wave(n);
    for (std::size_t k = 0; k < n; ++k) exit_wave[k] = x.v[lat.sub(k, rflat)] * w.v[k];
    CVec hat = lat.dft_n(exit_wave);
    for (std::size_t l = 0; l < n; ++l) y.at(l, rflat) = std::norm(hat[l]);
  });
  return y;
}

WindowCheck2 check_window_2d(const ComplexImage& w, const std::vector<Shift2>& shifts) {
  require_square(w, "check_window_2d");
  Lattice lat = Lattice::square(w.d1);
  double tau = window_tau(lat, w);
  for (const Shift2& j : shifts) {
    std::size_t jflat = lat.encode({j[0], j[1]});
    CVec spec = window_spectrum_2d(lat, w, jflat);
    for (std::size_t k = 0; k < spec.size(); ++k)
      if (std::abs(spec[k]) <= tau) return WindowCheck2{false, j, k};
  }
  return WindowCheck2{};
}

ComplexImage make_window_2d(std::size_t d, std::size_t delta,
                            const std::vector<Shift2>& required, std::uint64_t seed) {
  if (delta < 1 || delta >= d)
    fail(errc::invalid_argument, "make_window_2d: need 1 <= delta < d");
  WindowCheck2 first;
  bool have = false;
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    RVec p1 = gaussian_profile(d, delta, mix_seed(seed, 2 * attempt));
    RVec p2 = gaussian_profile(d, delta, mix_seed(seed, 2 * attempt + 1));
    ComplexImage w(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) w.at(i, j) = cplx(p1[i] * p2[j], 0.0);
    WindowCheck2 chk = check_window_2d(w, required);
    if (chk.ok) return w;
    if (!have) {
      first = chk;
      have = true;
    }
  }
  fail(errc::window_generation,
       "make_window_2d: no admissible window after 100 attempts; first vanishing coefficient "
       "at (j=(" +
           std::to_string(first.j[0]) + "," + std::to_string(first.j[1]) +
           "), k=" + std::to_string(first.k) + ")");
}

ComplexImage make_object_2d(ObjectKind kind, std::size_t d, std::uint64_t seed) {
  ComplexImage img(d, d);
  img.v = make_object(kind, d * d, seed);
  return img;
}

PlanarResult reconstruct_2d(const Grid& y, const ComplexImage& w,
                            const std::vector<Shift2>& shifts, Method method) {
  require_square(w, "reconstruct_2d");
  std::size_t d = w.d1;
  Lattice lat = Lattice::square(d);
  std::size_t n = lat.n();
  if (y.rows != n || y.cols != n)
    fail(errc::dimension_mismatch, "reconstruct_2d: grid shape does not match the window");

  // One canonical representative per +-shift pair; shift (0,0) first.
  std::set<std::size_t> all_flats;
  for (const Shift2& j : shifts) all_flats.insert(lat.encode({j[0], j[1]}));
  if (!all_flats.count(0))
    fail(errc::invalid_argument, "reconstruct_2d: shift set must contain (0,0)");
  std::vector<std::size_t> flats;
  flats.push_back(0);
  for (std::size_t f : all_flats) {
    if (f == 0) continue;
    std::size_t neg = lat.neg(f);
    if (all_flats.count(neg) && neg < f) continue;
    flats.push_back(f);
  }
  if (flats.size() < 2)
    fail(errc::invalid_argument, "reconstruct_2d: need at least one nonzero shift");

  std::vector<CVec> table = wdd_table_2d(lat, y);
  double tau = window_tau(lat, w);
  bool drop_zero = method != Method::vanilla;
  std::vector<CVec> rows(flats.size(), CVec(n, cplx(0.0, 0.0)));
  for (std::size_t r = 0; r < flats.size(); ++r) {
    CVec spec = window_spectrum_2d(lat, w, flats[r]);
    for (std::size_t k = 0; k < n; ++k) {
      if (drop_zero && k == 0) continue;
      if (std::abs(spec[k]) <= tau)
        fail(errc::ill_conditioned,
             "reconstruct_2d: window coefficient below tolerance at (j=" +
                 std::to_string(flats[r]) + ", k=" + std::to_string(k) + ")");
      rows[r][k] = table[flats[r]][k] / std::conj(spec[k]);
    }
  }

  if (method == Method::general) {
    repair_zero_frequencies(lat, rows, flats);
  } else if (method == Method::phase) {
    double tau0 = 1e-8 * static_cast<double>(n);
    rows[0][0] = cplx(static_cast<double>(n), 0.0);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      double m = zero_freq_magnitude(lat, rows[r]);
      if (m <= tau0) {
        rows[r][0] = cplx(0.0, 0.0);
        continue;
      }
      PhaseSystem s = build_system(lat, rows[r], flats[r]);
      if (classify_rank(s) != RankClass::rank2)
        fail(errc::degenerate_system,
             "reconstruct_2d: rank-deficient phase system at shift " +
                 std::to_string(flats[r]) + " (2D ambiguity classification is open)");
      rows[r][0] = std::polar(m, solve_rank2(s));
    }
  }

  CVec g0 = lat.idft_n(rows[0]);
  RVec mag(n);
  for (std::size_t k = 0; k < n; ++k)
    mag[k] = method == Method::phase ? 1.0 : std::sqrt(std::max(0.0, g0[k].real()));

  std::vector<SyncEdge> edges;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CVec g = lat.idft_n(rows[r]);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t v = lat.add(k, flats[r]);
      cplx s = csgn(g[k]);
      if (v != k && std::abs(s) > 0.0) edges.push_back(SyncEdge{k, v, s});
    }
  }
  CVec phase = sync_power(n, edges, 1000 * n, method == Method::phase ? 1e-14 : 1e-12);

  PlanarResult res;
  res.object = ComplexImage(d, d);
  for (std::size_t k = 0; k < n; ++k) res.object.v[k] = mag[k] * phase[k];

  if (method == Method::phase) {
    // A posteriori check on the background-invariant table entries (all
    // k != 0 columns over the used shifts).
    Grid ysim = simulate_2d(res.object, w);
    std::vector<CVec> tsim = wdd_table_2d(lat, ysim);
    double num = 0.0, den = 0.0;
    for (std::size_t f : flats)
      for (std::size_t k = 1; k < n; ++k) {
        num += std::norm(table[f][k] - tsim[f][k]);
        den += std::norm(table[f][k]);
      }
    double rel = den > 0.0 ? std::sqrt(num / den) : 0.0;
    res.outcome = rel <= 1e-6 ? PhaseOutcome::unique : PhaseOutcome::unverified;
  }
  return res;
}

} // namespace ptycho
