#include "ptychowdd.h"

#include <cstring>
#include <string>

#include "background_general.hpp"
#include "background_phase.hpp"
#include "errors.hpp"
#include "forward.hpp"
#include "io.hpp"
#include "planar.hpp"
#include "signal.hpp"
#include "wdd.hpp"

using namespace ptycho;

struct ptycho_carray {
  CArray a;
};

struct ptycho_rarray {
  RArray a;
};

namespace {

thread_local std::string g_last_error;

ptycho_status status_of(errc c) {
  switch (c) {
    case errc::invalid_argument: return PTYCHO_ERR_INVALID_ARGUMENT;
    case errc::dimension_mismatch: return PTYCHO_ERR_DIMENSION_MISMATCH;
    case errc::ill_conditioned: return PTYCHO_ERR_ILL_CONDITIONED;
    case errc::degenerate_system: return PTYCHO_ERR_DEGENERATE_SYSTEM;
    case errc::incomplete_spectrum: return PTYCHO_ERR_INCOMPLETE_SPECTRUM;
    case errc::not_phase_object: return PTYCHO_ERR_NOT_PHASE_OBJECT;
    case errc::no_convergence: return PTYCHO_ERR_NO_CONVERGENCE;
    case errc::window_generation: return PTYCHO_ERR_WINDOW_GENERATION;
    case errc::nonphysical_measurement: return PTYCHO_ERR_NONPHYSICAL_MEASUREMENT;
    case errc::inconsistent_system: return PTYCHO_ERR_INCONSISTENT_SYSTEM;
    case errc::ambiguity_resolution: return PTYCHO_ERR_AMBIGUITY_RESOLUTION;
    case errc::rank_law_violation: return PTYCHO_ERR_RANK_LAW_VIOLATION;
    case errc::io_failure: return PTYCHO_ERR_IO;
    case errc::internal: return PTYCHO_ERR_INTERNAL;
  }
  return PTYCHO_ERR_INTERNAL;
}

template <typename Fn>
ptycho_status guarded(Fn&& fn) {
  try {
    fn();
    return PTYCHO_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PTYCHO_ERR_INTERNAL;
  }
}

ptycho_status fail_arg(const std::string& msg) {
  g_last_error = msg;
  return PTYCHO_ERR_INVALID_ARGUMENT;
}

ptycho_carray* wrap(CArray a) { return new ptycho_carray{std::move(a)}; }
ptycho_rarray* wrap(RArray a) { return new ptycho_rarray{std::move(a)}; }

CArray carray_of(const CVec& v) {
  CArray a;
  a.rank = 1;
  a.d1 = v.size();
  a.d2 = 1;
  a.v = v;
  return a;
}

CArray carray_of(const ComplexImage& img) {
  CArray a;
  a.rank = 2;
  a.d1 = img.d1;
  a.d2 = img.d2;
  a.v = img.v;
  return a;
}

RArray rarray_of(const RVec& v) {
  RArray a;
  a.rank = 1;
  a.d1 = v.size();
  a.d2 = 1;
  a.v = v;
  return a;
}

RArray rarray_of(const Grid& g) {
  RArray a;
  a.rank = 2;
  a.d1 = g.rows;
  a.d2 = g.cols;
  a.v = g.v;
  return a;
}

Grid grid_of(const RArray& a) {
  if (a.rank != 2) fail(errc::dimension_mismatch, "expected a rank-2 measurement grid");
  Grid g(a.d1, a.d2);
  g.v = a.v;
  return g;
}

ComplexImage image_of(const CArray& a) {
  if (a.rank != 2) fail(errc::dimension_mismatch, "expected a rank-2 complex array");
  ComplexImage img(a.d1, a.d2);
  img.v = a.v;
  return img;
}

// Support extent of a 1D window / the larger axis extent of a 2D window;
// Window::delta is informational, so recovering it from the data suffices.
std::size_t support_extent(const CArray& w) {
  std::size_t s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < w.d1; ++i)
    for (std::size_t j = 0; j < w.d2; ++j)
      if (std::abs(w.v[i * w.d2 + j]) > 0.0) {
        s1 = std::max(s1, i + 1);
        s2 = std::max(s2, j + 1);
      }
  return std::max(s1, s2);
}

Window window_of(const CArray& a) {
  if (a.rank != 1) fail(errc::dimension_mismatch, "expected a rank-1 window");
  Window w;
  w.w = a.v;
  w.delta = support_extent(a);
  return w;
}

ObjectKind object_kind_of(const std::string& kind) {
  if (kind == "random-complex") return ObjectKind::random_complex;
  if (kind == "random-phase") return ObjectKind::random_phase;
  if (kind == "modulation") return ObjectKind::modulation;
  if (kind == "type2") return ObjectKind::type2;
  fail(errc::invalid_argument, "unknown object kind: " + kind);
}

FileFormat format_of(const std::string& fmt) {
  if (fmt == "bin") return FileFormat::bin;
  if (fmt == "csv") return FileFormat::csv;
  fail(errc::invalid_argument, "unknown file format: " + fmt);
}

int outcome_code(PhaseOutcome o) {
  switch (o) {
    case PhaseOutcome::unique: return PTYCHO_OUTCOME_UNIQUE;
    case PhaseOutcome::ambiguous_type_I: return PTYCHO_OUTCOME_AMBIGUOUS_TYPE_I;
    case PhaseOutcome::ambiguous_type_II: return PTYCHO_OUTCOME_AMBIGUOUS_TYPE_II;
    case PhaseOutcome::unverified: return PTYCHO_OUTCOME_UNVERIFIED;
  }
  return PTYCHO_OUTCOME_UNIQUE;
}

} // namespace

extern "C" {

const char* ptycho_last_error(void) { return g_last_error.c_str(); }

ptycho_carray* ptycho_carray_create(size_t rank, size_t d1, size_t d2, const double* re_im) {
  if ((rank != 1 && rank != 2) || re_im == nullptr) return nullptr;
  CArray a;
  a.rank = rank;
  a.d1 = d1;
  a.d2 = rank == 2 ? d2 : 1;
  std::size_t count = a.d1 * a.d2;
  a.v.resize(count);
  for (std::size_t i = 0; i < count; ++i) a.v[i] = cplx(re_im[2 * i], re_im[2 * i + 1]);
  return wrap(std::move(a));
}

ptycho_rarray* ptycho_rarray_create(size_t rank, size_t d1, size_t d2, const double* data) {
  if ((rank != 1 && rank != 2) || data == nullptr) return nullptr;
  RArray a;
  a.rank = rank;
  a.d1 = d1;
  a.d2 = rank == 2 ? d2 : 1;
  a.v.assign(data, data + a.d1 * a.d2);
  return wrap(std::move(a));
}

void ptycho_carray_free(ptycho_carray* a) { delete a; }
void ptycho_rarray_free(ptycho_rarray* a) { delete a; }

size_t ptycho_carray_rank(const ptycho_carray* a) { return a->a.rank; }
size_t ptycho_rarray_rank(const ptycho_rarray* a) { return a->a.rank; }

void ptycho_carray_dims(const ptycho_carray* a, size_t* d1, size_t* d2) {
  if (d1) *d1 = a->a.d1;
  if (d2) *d2 = a->a.d2;
}

void ptycho_rarray_dims(const ptycho_rarray* a, size_t* d1, size_t* d2) {
  if (d1) *d1 = a->a.d1;
  if (d2) *d2 = a->a.d2;
}

void ptycho_carray_copy_out(const ptycho_carray* a, double* re_im) {
  for (std::size_t i = 0; i < a->a.v.size(); ++i) {
    re_im[2 * i] = a->a.v[i].real();
    re_im[2 * i + 1] = a->a.v[i].imag();
  }
}

void ptycho_rarray_copy_out(const ptycho_rarray* a, double* data) {
  std::memcpy(data, a->a.v.data(), a->a.v.size() * sizeof(double));
}

ptycho_status ptycho_carray_write(const ptycho_carray* a, const char* path, const char* format) {
  if (!a || !path || !format) return fail_arg("ptycho_carray_write: null argument");
  return guarded([&] { write_carray(a->a, path, format_of(format)); });
}

ptycho_status ptycho_rarray_write(const ptycho_rarray* a, const char* path, const char* format) {
  if (!a || !path || !format) return fail_arg("ptycho_rarray_write: null argument");
  return guarded([&] { write_rarray(a->a, path, format_of(format)); });
}

ptycho_status ptycho_carray_read(const char* path, ptycho_carray** out) {
  if (!path || !out) return fail_arg("ptycho_carray_read: null argument");
  return guarded([&] { *out = wrap(read_carray(path)); });
}

ptycho_status ptycho_rarray_read(const char* path, ptycho_rarray** out) {
  if (!path || !out) return fail_arg("ptycho_rarray_read: null argument");
  return guarded([&] { *out = wrap(read_rarray(path)); });
}

ptycho_status ptycho_make_window(size_t d, size_t delta, size_t gamma, int all_diagonals,
                                 uint64_t seed, int twodim, ptycho_carray** out) {
  if (!out) return fail_arg("ptycho_make_window: null output");
  return guarded([&] {
    if (twodim) {
      std::vector<Shift2> req = all_diagonals ? all_set(delta) : index_set(gamma);
      *out = wrap(carray_of(make_window_2d(d, delta, req, seed)));
    } else {
      std::size_t g = all_diagonals ? delta : gamma;
      *out = wrap(carray_of(make_window(d, delta, g, seed).w));
    }
  });
}

ptycho_status ptycho_check_window(const ptycho_carray* w, size_t gamma, int* ok) {
  if (!w || !ok) return fail_arg("ptycho_check_window: null argument");
  return guarded([&] {
    if (w->a.rank == 2) {
      *ok = check_window_2d(image_of(w->a), index_set(gamma)).ok ? 1 : 0;
    } else {
      *ok = check_window(window_of(w->a), gamma).ok ? 1 : 0;
    }
  });
}

ptycho_status ptycho_make_object(const char* kind, size_t d, uint64_t seed, long m, double rho,
                                 int twodim, ptycho_carray** out) {
  if (!kind || !out) return fail_arg("ptycho_make_object: null argument");
  return guarded([&] {
    ObjectKind k = object_kind_of(kind);
    if (twodim) {
      if (k == ObjectKind::type2)
        fail(errc::invalid_argument, "type2 objects are one-dimensional");
      *out = wrap(carray_of(make_object_2d(k, d, seed)));
    } else {
      *out = wrap(carray_of(make_object(k, d, seed, m, rho)));
    }
  });
}

ptycho_status ptycho_make_background(const char* kind, size_t d, double amplitude, uint64_t seed,
                                     int twodim, ptycho_rarray** out) {
  if (!kind || !out) return fail_arg("ptycho_make_background: null argument");
  return guarded([&] {
    std::size_t n = twodim ? d * d : d;
    RVec b;
    std::string k = kind;
    if (k == "constant")
      b = make_background_constant(n, amplitude);
    else if (k == "random")
      b = make_background_random(n, amplitude, seed);
    else
      fail(errc::invalid_argument, "unknown background kind: " + k);
    *out = wrap(rarray_of(b));
  });
}

ptycho_status ptycho_simulate(const ptycho_carray* x, const ptycho_carray* w,
                              ptycho_rarray** grid) {
  if (!x || !w || !grid) return fail_arg("ptycho_simulate: null argument");
  return guarded([&] {
    if (x->a.rank != w->a.rank)
      fail(errc::dimension_mismatch, "object and window rank differ");
    Grid y = x->a.rank == 2 ? simulate_2d(image_of(x->a), image_of(w->a))
                            : simulate(x->a.v, window_of(w->a));
    *grid = wrap(rarray_of(y));
  });
}

ptycho_status ptycho_add_background(const ptycho_rarray* grid, const ptycho_rarray* b,
                                    ptycho_rarray** out) {
  if (!grid || !b || !out) return fail_arg("ptycho_add_background: null argument");
  return guarded([&] { *out = wrap(rarray_of(add_background(grid_of(grid->a), b->a.v))); });
}

ptycho_status ptycho_noise_level(const ptycho_rarray* y, const ptycho_rarray* yt, double* out) {
  if (!y || !yt || !out) return fail_arg("ptycho_noise_level: null argument");
  return guarded([&] { *out = noise_level(grid_of(y->a), grid_of(yt->a)); });
}

ptycho_status ptycho_amplitude_for_noise_level(const ptycho_rarray* y, const ptycho_rarray* b,
                                               double level, double* out) {
  if (!y || !b || !out) return fail_arg("ptycho_amplitude_for_noise_level: null argument");
  return guarded([&] { *out = amplitude_for_noise_level(grid_of(y->a), b->a.v, level); });
}

ptycho_status ptycho_make_ambiguous_pair(int kind, long m, double rho, const ptycho_carray* w,
                                         ptycho_carray** x1, ptycho_carray** x2,
                                         ptycho_rarray** b1, ptycho_rarray** b2) {
  if (!w || !x1 || !x2 || !b1 || !b2) return fail_arg("ptycho_make_ambiguous_pair: null argument");
  return guarded([&] {
    AmbiguousPair p = make_ambiguous_pair(kind, m, rho, window_of(w->a));
    *x1 = wrap(carray_of(p.x1));
    *x2 = wrap(carray_of(p.x2));
    *b1 = wrap(rarray_of(p.b1));
    *b2 = wrap(rarray_of(p.b2));
  });
}

ptycho_status ptycho_reconstruct(const ptycho_rarray* grid, const ptycho_carray* w,
                                 const char* method, size_t gamma, int all_diagonals,
                                 ptycho_carray** object, int* outcome, ptycho_carray** cand1,
                                 ptycho_carray** cand2) {
  if (!grid || !w || !method || !object || !outcome)
    return fail_arg("ptycho_reconstruct: null argument");
  *object = nullptr;
  *outcome = PTYCHO_OUTCOME_UNIQUE;
  if (cand1) *cand1 = nullptr;
  if (cand2) *cand2 = nullptr;
  return guarded([&] {
    std::string m = method;
    Method meth;
    if (m == "vanilla")
      meth = Method::vanilla;
    else if (m == "general")
      meth = Method::general;
    else if (m == "phase")
      meth = Method::phase;
    else
      fail(errc::invalid_argument, "unknown method: " + m);

    if (w->a.rank == 2) {
      ComplexImage wi = image_of(w->a);
      std::vector<Shift2> shifts =
          all_diagonals ? all_set(support_extent(w->a)) : index_set(gamma);
      PlanarResult res = reconstruct_2d(grid_of(grid->a), wi, shifts, meth);
      *object = wrap(carray_of(res.object));
      *outcome = outcome_code(res.outcome);
      return;
    }

    Window win = window_of(w->a);
    Grid y = grid_of(grid->a);
    std::size_t g = all_diagonals ? win.delta : gamma;
    if (meth == Method::vanilla) {
      *object = wrap(carray_of(algorithm1(y, win, g)));
    } else if (meth == Method::general) {
      *object = wrap(carray_of(algorithm2(y, win, g)));
    } else {
      PhaseObjectResult res = algorithm3(y, win);
      *outcome = outcome_code(res.outcome);
      if (res.outcome == PhaseOutcome::unique || res.outcome == PhaseOutcome::unverified)
        *object = wrap(carray_of(res.object));
      if (res.candidates.size() == 2) {
        if (cand1) *cand1 = wrap(carray_of(res.candidates[0]));
        if (cand2) *cand2 = wrap(carray_of(res.candidates[1]));
      }
    }
  });
}

ptycho_status ptycho_aligned_error(const ptycho_carray* x, const ptycho_carray* xt, double* out) {
  if (!x || !xt || !out) return fail_arg("ptycho_aligned_error: null argument");
  return guarded([&] { *out = aligned_error(x->a.v, xt->a.v); });
}

ptycho_status ptycho_measurement_error(const ptycho_carray* xt, const ptycho_carray* w,
                                       const ptycho_rarray* y, double* out) {
  if (!xt || !w || !y || !out) return fail_arg("ptycho_measurement_error: null argument");
  return guarded([&] {
    if (xt->a.rank != w->a.rank)
      fail(errc::dimension_mismatch, "object and window rank differ");
    Grid ysim = xt->a.rank == 2 ? simulate_2d(image_of(xt->a), image_of(w->a))
                                : simulate(xt->a.v, window_of(w->a));
    *out = noise_level(grid_of(y->a), ysim);
  });
}

} // extern "C"
