#ifndef TOPODSP_H
#define TOPODSP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TdBoundary {
  // Fixed end, reflection -1.
  TD_BOUNDARY_DIRICHLET = 0,
  // Free end, reflection +1.
  TD_BOUNDARY_NEUMANN = 1,
} TdBoundary;

typedef enum TdStatus {
  TD_STATUS_OK = 0,
  TD_STATUS_NULL_POINTER = 1,
  TD_STATUS_INVALID_ARGUMENT = 2,
  TD_STATUS_PARSE = 3,
  TD_STATUS_OUT_OF_RANGE = 4,
  TD_STATUS_BUFFER_TOO_SMALL = 5,
  TD_STATUS_INTERNAL = 6,
} TdStatus;

// A persistence barcode.
typedef struct TdBarcode TdBarcode;

// A face-closed simplicial complex.
typedef struct TdComplex TdComplex;

// A topological filter together with its running edge state.
typedef struct TdFilter TdFilter;

// One persistence interval. `death` is `INFINITY` for bars that never die.
typedef struct TdBar {
  size_t dim;
  double birth;
  double death;
} TdBar;

// Message for the last failed call on this thread, or an empty string.
// The pointer stays valid until the next `td_*` call on the same thread.
const char *td_last_error_message(void);

// Parses `.cplx` text (one simplex per line, space-separated labels).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum TdStatus td_complex_parse(const char *text, struct TdComplex **out);

// Built-in complex by name: triangle, triangle-filled, tetra, tetra-hollow, torus, sphere.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum TdStatus td_complex_demo(const char *name, struct TdComplex **out);

// Writes Betti numbers `b_0..` into `betti`. `*len` receives the number
// of dimensions; if it exceeds `capacity`, nothing is written and
// `BufferTooSmall` is returned.
//
// # Safety
// `complex` must come from a `td_complex_*` constructor, `betti` must hold
// `capacity` values and `len` must be a valid pointer.
enum TdStatus td_complex_betti(const struct TdComplex *complex,
                               size_t *betti,
                               size_t capacity,
                               size_t *len);

// # Safety
// `complex` must be null or come from a `td_complex_*` constructor, and is
// not used afterwards.
void td_complex_free(struct TdComplex *complex);

// Vietoris-Rips barcode of `n_points` points of dimension `dim`, stored
// row-major in `coords`. Simplices up to `max_dim` and pairwise distance
// `max_scale` are built; bars are reported below `max_dim`.
//
// # Safety
// `coords` must hold `n_points * dim` values and `out` must be a valid pointer.
enum TdStatus td_persistence(const double *coords,
                             size_t n_points,
                             size_t dim,
                             size_t max_dim,
                             double max_scale,
                             struct TdBarcode **out);

// Number of bars, 0 for a null handle.
//
// # Safety
// `barcode` must be null or come from [`td_persistence`].
size_t td_barcode_len(const struct TdBarcode *barcode);

// Bar `index`, in (dim, birth, death) order.
//
// # Safety
// `barcode` must come from [`td_persistence`] and `out` must be a valid pointer.
enum TdStatus td_barcode_get(const struct TdBarcode *barcode, size_t index, struct TdBar *out);

// Number of dimension-`dim` bars alive at scale `t`.
//
// # Safety
// `barcode` must come from [`td_persistence`] and `out` must be a valid pointer.
enum TdStatus td_barcode_alive_at(const struct TdBarcode *barcode,
                                  size_t dim,
                                  double t,
                                  size_t *out);

// # Safety
// `barcode` must be null or come from [`td_persistence`], and is not used afterwards.
void td_barcode_free(struct TdBarcode *barcode);

// Direct-form-II filter with feedback `a[0..n_a]` (a_1..a_N) and feedforward
// `b[0..n_b]` (b_0..b_N, so `n_b = n_a + 1`). The state starts at zero.
//
// # Safety
// `a` and `b` must hold `n_a` and `n_b` values; `out` must be a valid pointer.
enum TdStatus td_filter_lti(const double *a,
                            size_t n_a,
                            const double *b,
                            size_t n_b,
                            struct TdFilter **out);

// FM voice: carrier increment `omega` and modulator increment `mod_omega`
// in turns per sample, modulation index `index`, output phase in radians.
//
// # Safety
// `out` must be a valid pointer.
enum TdStatus td_filter_fm(double omega,
                           double index,
                           double mod_omega,
                           double phase,
                           struct TdFilter **out);

// Filters `len` samples from `input` into `output`, continuing from the
// state left by the previous call.
//
// # Safety
// `filter` must come from a `td_filter_*` constructor; `input` and `output`
// must each hold `len` values.
enum TdStatus td_filter_process(struct TdFilter *filter,
                                const double *input,
                                double *output,
                                size_t len);

// Returns the filter to its zero state.
//
// # Safety
// `filter` must come from a `td_filter_*` constructor.
enum TdStatus td_filter_reset(struct TdFilter *filter);

// # Safety
// `filter` must be null or come from a `td_filter_*` constructor, and is not used afterwards.
void td_filter_free(struct TdFilter *filter);

// Exact recurrence period of a unit impulse on a two-rail waveguide of
// `len` cells per rail. `left` and `right` are [`TdBoundary`] values.
//
// # Safety
// `out` must be a valid pointer.
enum TdStatus td_waveguide_period(size_t len, uint32_t left, uint32_t right, size_t *out);

#endif  /* TOPODSP_H */
