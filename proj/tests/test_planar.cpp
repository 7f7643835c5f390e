#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "forward.hpp"
#include "lattice.hpp"
#include "oracles.hpp"
#include "planar.hpp"
#include "signal.hpp"

using namespace ptycho;

namespace {

bool contains(const std::vector<Shift2>& set, long long a, long long b) {
  return std::find(set.begin(), set.end(), Shift2{a, b}) != set.end();
}

} // namespace

TEST_CASE("diagonal index sets have the documented shape") {
  std::vector<Shift2> d1 = index_set(1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0] == Shift2{0, 0});

  std::vector<Shift2> d2 = index_set(2);
  CHECK(d2.size() == 5);
  for (auto [a, b] : {std::pair<long long, long long>{0, 0}, {0, 1}, {0, -1}, {1, 0}, {1, -1}})
    CHECK(contains(d2, a, b));

  for (std::size_t delta : {1, 2, 3, 4})
    CHECK(all_set(delta).size() == delta * (2 * delta - 1));
  CHECK(contains(all_set(2), 1, 1));
  CHECK(!contains(index_set(2), 1, 1));
}

TEST_CASE("separable inputs factor the measurement grid") {
  std::size_t d = 4;
  Lattice lat = Lattice::square(d);
  CVec a = make_object(ObjectKind::random_complex, d, 1);
  CVec b = make_object(ObjectKind::random_complex, d, 2);
  Window u, v;
  u.w = {cplx(1.0, 0), cplx(0.8, 0.1), cplx(0.3, 0), cplx(0, 0)};
  u.delta = 3;
  v.w = {cplx(0.9, 0), cplx(0.5, -0.2), cplx(0.2, 0), cplx(0, 0)};
  v.delta = 3;

  ComplexImage x2(d, d), w2(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      x2.at(i, j) = a[i] * b[j];
      w2.at(i, j) = u.w[i] * v.w[j];
    }

  Grid ya = simulate(a, u);
  Grid yb = simulate(b, v);
  Grid y2 = simulate_2d(x2, w2);
  for (std::size_t l1 = 0; l1 < d; ++l1)
    for (std::size_t l2 = 0; l2 < d; ++l2)
      for (std::size_t r1 = 0; r1 < d; ++r1)
        for (std::size_t r2 = 0; r2 < d; ++r2) {
          std::size_t lf = lat.encode({static_cast<long long>(l1), static_cast<long long>(l2)});
          std::size_t rf = lat.encode({static_cast<long long>(r1), static_cast<long long>(r2)});
          CHECK(y2.at(lf, rf) ==
                doctest::Approx(ya.at(l1, r1) * yb.at(l2, r2)).epsilon(1e-10));
        }
}

TEST_CASE("planar measurements are invariant under a global phase") {
  std::size_t d = 4;
  ComplexImage w = make_window_2d(d, 3, index_set(2), 3);
  ComplexImage x = make_object_2d(ObjectKind::random_complex, d, 4);
  ComplexImage xp = x;
  for (cplx& z : xp.v) z *= std::polar(1.0, 1.9);
  Grid y1 = simulate_2d(x, w);
  Grid y2 = simulate_2d(xp, w);
  for (std::size_t i = 0; i < y1.v.size(); ++i)
    CHECK(y1.v[i] == doctest::Approx(y2.v[i]).epsilon(1e-12));
}

TEST_CASE("planar window generation is deterministic and admissible") {
  std::size_t d = 8, delta = 4;
  std::vector<Shift2> shifts = all_set(delta);
  ComplexImage w1 = make_window_2d(d, delta, shifts, 7);
  ComplexImage w2 = make_window_2d(d, delta, shifts, 7);
  for (std::size_t i = 0; i < w1.v.size(); ++i) CHECK(w1.v[i] == w2.v[i]);
  CHECK(check_window_2d(w1, shifts).ok);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i >= delta || j >= delta) CHECK(w1.at(i, j) == cplx(0.0, 0.0));
}

TEST_CASE("rectangular images are rejected") {
  ComplexImage rect(4, 6);
  ComplexImage sq(4, 4);
  CHECK_THROWS_AS(simulate_2d(rect, sq), Error);
  CHECK_THROWS_AS(simulate_2d(sq, rect), Error);
  Grid y(16, 16);
  CHECK_THROWS_AS(reconstruct_2d(y, rect, index_set(2), Method::vanilla), Error);
}

TEST_CASE("the shift set must contain the zero shift") {
  std::size_t d = 4;
  ComplexImage w = make_window_2d(d, 3, index_set(2), 8);
  ComplexImage x = make_object_2d(ObjectKind::random_complex, d, 9);
  Grid y = simulate_2d(x, w);
  CHECK_THROWS_AS(reconstruct_2d(y, w, {Shift2{1, 0}, Shift2{0, 1}}, Method::vanilla), Error);
  CHECK_THROWS_AS(reconstruct_2d(y, w, {Shift2{0, 0}}, Method::vanilla), Error);
}

TEST_CASE("noise-free planar recovery with the full diagonal set") {
  std::size_t d = 16, delta = 4;
  std::vector<Shift2> shifts = all_set(delta);
  ComplexImage w = make_window_2d(d, delta, shifts, 10);
  ComplexImage x = make_object_2d(ObjectKind::random_complex, d, 11);
  Grid y = simulate_2d(x, w);
  PlanarResult res = reconstruct_2d(y, w, shifts, Method::vanilla);
  CHECK(aligned_error(x.v, res.object.v) < 1e-7);
}

TEST_CASE("planar phase objects survive a detector background") {
  std::size_t d = 16, delta = 4;
  std::vector<Shift2> shifts = all_set(delta);
  ComplexImage w = make_window_2d(d, delta, shifts, 12);
  ComplexImage x = make_object_2d(ObjectKind::random_phase, d, 13);
  Grid y = simulate_2d(x, w);
  RVec b = make_background_random(d * d, 1.0, 14);
  double amp = amplitude_for_noise_level(y, b, 3.5);
  for (double& v : b) v *= amp;
  PlanarResult res = reconstruct_2d(add_background(y, b), w, shifts, Method::phase);
  CHECK(res.outcome == PhaseOutcome::unique);
  CHECK(aligned_error(x.v, res.object.v) < 1e-8);
}

TEST_CASE("planar general objects survive a detector background") {
  std::size_t d = 16, delta = 4;
  std::vector<Shift2> shifts = index_set(3);
  ComplexImage w = make_window_2d(d, delta, shifts, 15);
  ComplexImage x = make_object_2d(ObjectKind::random_complex, d, 16);
  Grid y = simulate_2d(x, w);
  RVec b = make_background_random(d * d, 1.0, 17);
  double amp = amplitude_for_noise_level(y, b, 3.5);
  for (double& v : b) v *= amp;
  PlanarResult res = reconstruct_2d(add_background(y, b), w, shifts, Method::general);
  CHECK(aligned_error(x.v, res.object.v) < 1e-3);
  Grid ysim = simulate_2d(res.object, w);
  CHECK(noise_level(y, ysim) < 1e-4);

  // The estimate does not depend on the background amplitude.
  RVec b10 = b;
  for (double& v : b10) v *= 10.0;
  PlanarResult res10 = reconstruct_2d(add_background(y, b10), w, shifts, Method::general);
  CHECK(aligned_error(res.object.v, res10.object.v) < 1e-8);
}
