#ifndef BELLSPLIT_H
#define BELLSPLIT_H

/* Generated from the bellsplit-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
#define BELLSPLIT_ABI_VERSION 1

/**
 * How a detector coincidence is classified under an arrangement.
 */
typedef enum BellsplitEventClass {
  BELLSPLIT_EVENT_CLASS_PHI_PLUS = 0,
  BELLSPLIT_EVENT_CLASS_PHI_MINUS = 1,
  BELLSPLIT_EVENT_CLASS_PSI_PLUS = 2,
  BELLSPLIT_EVENT_CLASS_PSI_MINUS = 3,
  /**
   * Same-side event, dropped by post-selection.
   */
  BELLSPLIT_EVENT_CLASS_IGNORE = 4,
} BellsplitEventClass;

/**
 * Result of every fallible call. Anything but `Ok` leaves a
 * description in `bellsplit_last_error_message`.
 */
typedef enum BellsplitStatus {
  BELLSPLIT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BELLSPLIT_STATUS_NULL_POINTER = 1,
  /**
   * An argument was outside its documented encoding (bad case id,
   * family id, or sign).
   */
  BELLSPLIT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Text input (config file or event label) failed to parse.
   */
  BELLSPLIT_STATUS_PARSE = 3,
  /**
   * A numeric argument violated its domain.
   */
  BELLSPLIT_STATUS_DOMAIN = 4,
  /**
   * The arrangement makes the requested quantity undefined.
   */
  BELLSPLIT_STATUS_DEGENERATE = 5,
  /**
   * The operation does not apply to this scenario.
   */
  BELLSPLIT_STATUS_UNSUPPORTED = 6,
  /**
   * File system failure.
   */
  BELLSPLIT_STATUS_IO = 7,
  /**
   * An internal invariant failed; please report.
   */
  BELLSPLIT_STATUS_INTERNAL = 8,
} BellsplitStatus;

/**
 * Opaque scenario handle; create with one of the constructors and
 * release with `bellsplit_scenario_free`.
 */
typedef struct BellsplitScenario BellsplitScenario;

/**
 * Detector-level probabilities; the ten event fields sum to one.
 */
typedef struct BellsplitDetectionStats {
  double p_ah_bh;
  double p_ah_bv;
  double p_av_bh;
  double p_av_bv;
  double p_av_ah;
  double p_bv_bh;
  double p_ah2;
  double p_av2;
  double p_bh2;
  double p_bv2;
  double p_coincidence_total;
} BellsplitDetectionStats;

/**
 * One complex amplitude.
 */
typedef struct BellsplitComplex {
  double re;
  double im;
} BellsplitComplex;

/**
 * Bell-basis amplitudes of the interfering output plus the six
 * same-side residuals in canonical pair order.
 */
typedef struct BellsplitBellCoefficients {
  struct BellsplitComplex c_phi_plus;
  struct BellsplitComplex c_phi_minus;
  struct BellsplitComplex c_psi_plus;
  struct BellsplitComplex c_psi_minus;
  struct BellsplitComplex bunched[6];
} BellsplitBellCoefficients;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * ABI revision of this header; bumped on any breaking change.
 */
uint32_t bellsplit_abi_version(void);

/**
 * Most recent error description for this thread, as a NUL-terminated
 * string; empty if no call has failed yet. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *bellsplit_last_error_message(void);

/**
 * Builds one of the two standard case arrangements.
 *
 * `case` is 1 or 2, `sign` is the transmission phase (1 or -1), `r_sq`
 * the common reflectance, `eps`/`eps_prime` the preparation-angle
 * perturbations, `gamma` the temporal overlap in [0, 1]. On success
 * `*out` owns the new scenario.
 *
 * # Safety
 * `out` must be a valid pointer to writable scenario-pointer storage.
 */
enum BellsplitStatus bellsplit_case_scenario_new(uint32_t case_,
                                                 double r_sq,
                                                 int32_t sign,
                                                 double eps,
                                                 double eps_prime,
                                                 double gamma,
                                                 struct BellsplitScenario **out);

/**
 * Builds a free-form arrangement from explicit Jones amplitudes.
 *
 * `amplitudes` points to eight doubles: alpha_re, alpha_im, beta_re,
 * beta_im for arm a, then the primed four for arm b; alpha is the V
 * amplitude and beta the H amplitude. Each arm must be normalized.
 * `r_v`/`r_h` are per-polarization reflection amplitudes.
 *
 * # Safety
 * `amplitudes` must point to eight readable doubles and `out` to
 * writable scenario-pointer storage.
 */
enum BellsplitStatus bellsplit_custom_scenario_new(const double *amplitudes,
                                                   double r_v,
                                                   double r_h,
                                                   int32_t sign,
                                                   double gamma,
                                                   struct BellsplitScenario **out);

/**
 * Loads a scenario from a key-value config file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` writable
 * scenario-pointer storage.
 */
enum BellsplitStatus bellsplit_scenario_from_file(const char *path, struct BellsplitScenario **out);

/**
 * Releases a scenario. Null is accepted and ignored.
 *
 * # Safety
 * `scenario` must have come from a bellsplit constructor and must not
 * be used afterwards.
 */
void bellsplit_scenario_free(struct BellsplitScenario *scenario);

/**
 * Detector statistics for the scenario (mixing in the distinguishable
 * branch when gamma < 1).
 *
 * # Safety
 * Both pointers must be valid; `scenario` must be a live handle.
 */
enum BellsplitStatus bellsplit_detection_stats(const struct BellsplitScenario *scenario,
                                               struct BellsplitDetectionStats *out);

/**
 * Bell decomposition of the interfering output branch.
 *
 * # Safety
 * Both pointers must be valid; `scenario` must be a live handle.
 */
enum BellsplitStatus bellsplit_bell_coefficients(const struct BellsplitScenario *scenario,
                                                 struct BellsplitBellCoefficients *out);

/**
 * The ten interfering-output amplitudes in canonical pair order:
 * (aH,aH), (aH,aV), (aH,bH), (aH,bV), (aV,aV), (aV,bH), (aV,bV),
 * (bH,bH), (bH,bV), (bV,bV).
 *
 * # Safety
 * `out_amplitudes` must point to ten writable complex slots;
 * `scenario` must be a live handle.
 */
enum BellsplitStatus bellsplit_output_state(const struct BellsplitScenario *scenario,
                                            struct BellsplitComplex *out_amplitudes);

/**
 * The scenario's CSV row in the library's fixed 17-column schema.
 * Writes at most `capacity` bytes including the terminating NUL and
 * stores the required size (including NUL) in `*out_len`; returns
 * `InvalidArgument` when the buffer is too small.
 *
 * # Safety
 * `buffer` must point to `capacity` writable bytes (it may be null
 * only when `capacity` is 0); `out_len` must be writable.
 */
enum BellsplitStatus bellsplit_csv_row(const struct BellsplitScenario *scenario,
                                       char *buffer,
                                       size_t capacity,
                                       size_t *out_len);

/**
 * Closed-form perturbation fidelities for a case arrangement; both
 * are squared cosines of eps-combinations, with the combination
 * assignment swapping between the cases.
 *
 * # Safety
 * `out_phi` and `out_psi` must be writable.
 */
enum BellsplitStatus bellsplit_fidelity_law(uint32_t case_,
                                            double eps,
                                            double eps_prime,
                                            double *out_phi,
                                            double *out_psi);

/**
 * Overlap ratio of the perturbed arrangement against its target Bell
 * state, computed by direct simulation. `family` is 0 for Phi, 1 for
 * Psi. Fails as `Degenerate` when the unperturbed overlap vanishes.
 *
 * # Safety
 * `out_ratio` must be writable.
 */
enum BellsplitStatus bellsplit_fidelity_direct(uint32_t case_,
                                               uint32_t family,
                                               double eps,
                                               double eps_prime,
                                               double r_sq,
                                               int32_t sign,
                                               double *out_ratio);

/**
 * Fidelity of the renormalized cross-side component against one Bell
 * state (0 PhiPlus, 1 PhiMinus, 2 PsiPlus, 3 PsiMinus). Fails as
 * `Domain` when no cross-side amplitude survives.
 *
 * # Safety
 * Both pointers must be valid; `scenario` must be a live handle.
 */
enum BellsplitStatus bellsplit_post_selected_fidelity(const struct BellsplitScenario *scenario,
                                                      uint32_t kind,
                                                      double *out_fidelity);

/**
 * Classifies a four-character detector-pair label such as "AhBv"
 * under a case arrangement.
 *
 * # Safety
 * `event` must be a valid NUL-terminated string and `out` writable.
 */
enum BellsplitStatus bellsplit_classify_coincidence(uint32_t case_,
                                                    const char *event,
                                                    enum BellsplitEventClass *out);

/**
 * Runs the engine-versus-oracle equivalence suite over seeded random
 * draws and stores the largest amplitude deviation observed.
 *
 * # Safety
 * `out_max_deviation` must be writable.
 */
enum BellsplitStatus bellsplit_oracle_equivalence(uint64_t draws,
                                                  uint64_t seed,
                                                  double *out_max_deviation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELLSPLIT_H */
