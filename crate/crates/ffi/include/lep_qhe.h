/* SPDX-License-Identifier: Apache-2.0 */

#ifndef LEP_QHE_H
#define LEP_QHE_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LqPhase {
  LQ_PHASE_EXACT = 0,
  LQ_PHASE_BROKEN = 1,
  LQ_PHASE_AT_LEP = 2,
} LqPhase;

typedef enum LqStatus {
  LQ_STATUS_OK = 0,
  LQ_STATUS_NULL_POINTER = 1,
  LQ_STATUS_INVALID_ARGUMENT = 2,
  LQ_STATUS_CONFIG = 3,
  LQ_STATUS_NUMERICAL = 4,
  LQ_STATUS_OUT_OF_RANGE = 5,
  LQ_STATUS_PANIC = 6,
} LqStatus;

/**
 * Opaque validated configuration.
 */
typedef struct LqConfig LqConfig;

/**
 * Opaque cycle result.
 */
typedef struct LqCycle LqCycle;

/**
 * Opaque sweep result.
 */
typedef struct LqSweep LqSweep;

/**
 * Liouvillian spectrum, eigenvalues ordered by real part descending then
 * imaginary part ascending.
 */
typedef struct LqSpectrum {
  double re[4];
  double im[4];
  double xi_re;
  double xi_im;
  enum LqPhase phase;
} LqSpectrum;

/**
 * Thermodynamic totals of one cycle. `eta` is NaN when no heat was absorbed.
 */
typedef struct LqLedger {
  double w_net;
  double q_in;
  double q_out;
  double delta_u;
  double eta;
  bool encircled;
  double t_relax;
  bool relax_converged;
} LqLedger;

/**
 * One trajectory sample. `segment` is 1..=4 for the strokes, 5 for relaxation.
 */
typedef struct LqSample {
  double t;
  uint8_t segment;
  double delta;
  double gamma;
  double p2;
  double w_cum;
  double q_in_cum;
  double q_out_cum;
  double u;
} LqSample;

/**
 * One sweep point. `ok` is false when that point failed; the other fields
 * are then NaN except `delta_max`.
 */
typedef struct LqSweepRow {
  double delta_max;
  double t1;
  double w_net;
  double q_in;
  double eta;
  bool encircled;
  bool ok;
} LqSweepRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *lq_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lq_version(void);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum LqStatus lq_spectrum(double delta,
                          double omega,
                          double phi,
                          double gamma,
                          struct LqSpectrum *out);

/**
 * Excited-state population of the unique steady state.
 *
 * # Safety
 * `p2` must be a valid pointer.
 */
enum LqStatus lq_steady_state_p2(double delta, double omega, double phi, double gamma, double *p2);

/**
 * Parses a JSON config document.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be a valid pointer.
 */
enum LqStatus lq_config_from_json(const char *json, struct LqConfig **out);

/**
 * Loads a built-in preset: big-cycle, small-cycle, fig3a or fig3b.
 *
 * # Safety
 * `name` must be NUL-terminated; `out` must be a valid pointer.
 */
enum LqStatus lq_config_from_preset(const char *name, struct LqConfig **out);

/**
 * Overrides the worker count; the config is left unchanged on error.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum LqStatus lq_config_set_workers(struct LqConfig *cfg, size_t workers);

/**
 * Overrides the integrator step in ns; the config is left unchanged on error.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum LqStatus lq_config_set_dt_ns(struct LqConfig *cfg, double dt_ns);

/**
 * # Safety
 * `cfg` must be null or a handle not yet freed.
 */
void lq_config_free(struct LqConfig *cfg);

/**
 * Runs one full cycle with trajectory recording.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be a valid pointer.
 */
enum LqStatus lq_cycle_run(const struct LqConfig *cfg, struct LqCycle **out);

/**
 * # Safety
 * `cycle` must be a live handle; `out` must be a valid pointer.
 */
enum LqStatus lq_cycle_ledger(const struct LqCycle *cycle, struct LqLedger *out);

/**
 * Number of trajectory samples, 0 for a null handle.
 *
 * # Safety
 * `cycle` must be null or a live handle.
 */
size_t lq_cycle_len(const struct LqCycle *cycle);

/**
 * # Safety
 * `cycle` must be a live handle; `out` must be a valid pointer.
 */
enum LqStatus lq_cycle_sample(const struct LqCycle *cycle, size_t index, struct LqSample *out);

/**
 * # Safety
 * `cycle` must be null or a handle not yet freed.
 */
void lq_cycle_free(struct LqCycle *cycle);

/**
 * Runs the config's Δ_max sweep on its worker count. Per-point failures are
 * reported in the rows, not as a status.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be a valid pointer.
 */
enum LqStatus lq_sweep_run(const struct LqConfig *cfg, struct LqSweep **out);

/**
 * # Safety
 * `sweep` must be null or a live handle.
 */
size_t lq_sweep_len(const struct LqSweep *sweep);

/**
 * # Safety
 * `sweep` must be a live handle; `out` must be a valid pointer.
 */
enum LqStatus lq_sweep_row(const struct LqSweep *sweep, size_t index, struct LqSweepRow *out);

/**
 * # Safety
 * `sweep` must be null or a handle not yet freed.
 */
void lq_sweep_free(struct LqSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEP_QHE_H */
