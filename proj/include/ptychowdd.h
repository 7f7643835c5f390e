/* ptychowdd: Wigner distribution deconvolution reconstruction with
 * background-noise removal. C API over the C++ core; all functions return a
 * ptycho_status and report details via ptycho_last_error(). */

#ifndef PTYCHOWDD_H
#define PTYCHOWDD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ptycho_status {
  PTYCHO_OK = 0,
  PTYCHO_ERR_INVALID_ARGUMENT = 1,
  PTYCHO_ERR_DIMENSION_MISMATCH = 2,
  PTYCHO_ERR_ILL_CONDITIONED = 3,
  PTYCHO_ERR_DEGENERATE_SYSTEM = 4,
  PTYCHO_ERR_INCOMPLETE_SPECTRUM = 5,
  PTYCHO_ERR_NOT_PHASE_OBJECT = 6,
  PTYCHO_ERR_NO_CONVERGENCE = 7,
  PTYCHO_ERR_WINDOW_GENERATION = 8,
  PTYCHO_ERR_NONPHYSICAL_MEASUREMENT = 9,
  PTYCHO_ERR_INCONSISTENT_SYSTEM = 10,
  PTYCHO_ERR_AMBIGUITY_RESOLUTION = 11,
  PTYCHO_ERR_RANK_LAW_VIOLATION = 12,
  PTYCHO_ERR_IO = 13,
  PTYCHO_ERR_INTERNAL = 14
} ptycho_status;

typedef enum ptycho_outcome {
  PTYCHO_OUTCOME_UNIQUE = 0,
  PTYCHO_OUTCOME_AMBIGUOUS_TYPE_I = 1,
  PTYCHO_OUTCOME_AMBIGUOUS_TYPE_II = 2,
  PTYCHO_OUTCOME_UNVERIFIED = 3
} ptycho_outcome;

/* Message for the most recent failure on this thread. */
const char* ptycho_last_error(void);

/* Opaque array handles: complex and real, rank 1 (length d1) or rank 2
 * (row-major d1 x d2). Complex buffers are interleaved re/im doubles. */
typedef struct ptycho_carray ptycho_carray;
typedef struct ptycho_rarray ptycho_rarray;

ptycho_carray* ptycho_carray_create(size_t rank, size_t d1, size_t d2, const double* re_im);
ptycho_rarray* ptycho_rarray_create(size_t rank, size_t d1, size_t d2, const double* data);
void ptycho_carray_free(ptycho_carray* a);
void ptycho_rarray_free(ptycho_rarray* a);
size_t ptycho_carray_rank(const ptycho_carray* a);
size_t ptycho_rarray_rank(const ptycho_rarray* a);
void ptycho_carray_dims(const ptycho_carray* a, size_t* d1, size_t* d2);
void ptycho_rarray_dims(const ptycho_rarray* a, size_t* d1, size_t* d2);
/* Caller buffers must hold 2*d1*d2 (complex) / d1*d2 (real) doubles. */
void ptycho_carray_copy_out(const ptycho_carray* a, double* re_im);
void ptycho_rarray_copy_out(const ptycho_rarray* a, double* data);

/* File I/O; format "bin" or "csv" for writes, sniffed on reads. */
ptycho_status ptycho_carray_write(const ptycho_carray* a, const char* path, const char* format);
ptycho_status ptycho_rarray_write(const ptycho_rarray* a, const char* path, const char* format);
ptycho_status ptycho_carray_read(const char* path, ptycho_carray** out);
ptycho_status ptycho_rarray_read(const char* path, ptycho_rarray** out);

/* Generators. twodim selects the planar variants (square d x d). Object
 * kinds: "random-complex", "random-phase", "modulation" (uses m), "type2"
 * (uses m and rho; 1D only). Background kinds: "constant", "random". */
ptycho_status ptycho_make_window(size_t d, size_t delta, size_t gamma, int all_diagonals,
                                 uint64_t seed, int twodim, ptycho_carray** out);
ptycho_status ptycho_check_window(const ptycho_carray* w, size_t gamma, int* ok);
ptycho_status ptycho_make_object(const char* kind, size_t d, uint64_t seed, long m, double rho,
                                 int twodim, ptycho_carray** out);
ptycho_status ptycho_make_background(const char* kind, size_t d, double amplitude, uint64_t seed,
                                     int twodim, ptycho_rarray** out);

/* Forward model. The grid layout is frequency x shift (flattened for 2D). */
ptycho_status ptycho_simulate(const ptycho_carray* x, const ptycho_carray* w,
                              ptycho_rarray** grid);
ptycho_status ptycho_add_background(const ptycho_rarray* grid, const ptycho_rarray* b,
                                    ptycho_rarray** out);
ptycho_status ptycho_noise_level(const ptycho_rarray* y, const ptycho_rarray* yt, double* out);
ptycho_status ptycho_amplitude_for_noise_level(const ptycho_rarray* y, const ptycho_rarray* b,
                                               double level, double* out);
/* Two object/background pairs with identical measurements; kind 1 or 2. */
ptycho_status ptycho_make_ambiguous_pair(int kind, long m, double rho, const ptycho_carray* w,
                                         ptycho_carray** x1, ptycho_carray** x2,
                                         ptycho_rarray** b1, ptycho_rarray** b2);

/* Reconstruction. method: "vanilla", "general", "phase". For 2D windows,
 * all_diagonals selects the full shift set instead of D_gamma. On ambiguous
 * phase outcomes *object stays NULL and cand1/cand2 carry the type-II
 * candidates (when provided). */
ptycho_status ptycho_reconstruct(const ptycho_rarray* grid, const ptycho_carray* w,
                                 const char* method, size_t gamma, int all_diagonals,
                                 ptycho_carray** object, int* outcome, ptycho_carray** cand1,
                                 ptycho_carray** cand2);

/* Metrics. */
ptycho_status ptycho_aligned_error(const ptycho_carray* x, const ptycho_carray* xt, double* out);
ptycho_status ptycho_measurement_error(const ptycho_carray* xt, const ptycho_carray* w,
                                       const ptycho_rarray* y, double* out);

#ifdef __cplusplus
}
#endif

#endif /* PTYCHOWDD_H */
