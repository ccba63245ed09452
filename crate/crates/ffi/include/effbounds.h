#ifndef EFFBOUNDS_H
#define EFFBOUNDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  EB_STATUS_OK = 0,
  EB_STATUS_NULL_ARGUMENT = 1,
  EB_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input or an argument outside the domain of the computation.
   */
  EB_STATUS_INVALID = 3,
  /**
   * A checked inequality failed.
   */
  EB_STATUS_VIOLATION = 4,
  EB_STATUS_PANIC = 5,
} EbStatus;

/**
 * A number field: ℚ or ℚ(√D).
 */
typedef struct EbField EbField;

/**
 * A finite set of places of a field, infinite places included.
 */
typedef struct EbSSpec EbSSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call.
 */
const char *eb_last_error(void);

/**
 * Frees a string returned by this library.
 */
void eb_string_free(char *s);

/**
 * `name` is `Q`, `Q(i)`, `Q(sqrt(D))` or `quadratic:D`.
 */
EbStatus eb_field_new(const char *name, EbField **field);

void eb_field_free(EbField *field);

EbStatus eb_field_invariants(const EbField *field,
                             uint32_t *degree,
                             int64_t *discriminant,
                             uint64_t *class_number);

/**
 * Enclosure of the regulator `R_K`.
 */
EbStatus eb_field_regulator(const EbField *field, double *lo, double *hi);

/**
 * `S` made of the infinite places and every prime above the given rational primes.
 */
EbStatus eb_sspec_new(const EbField *field, const uint64_t *primes, uintptr_t len, EbSSpec **sspec);

void eb_sspec_free(EbSSpec *sspec);

/**
 * Number of places in `S`.
 */
EbStatus eb_sspec_size(const EbSSpec *sspec, uintptr_t *size);

/**
 * Enclosure of the S-regulator `R_S`.
 */
EbStatus eb_sspec_regulator(const EbSSpec *sspec, double *lo, double *hi);

/**
 * Every applicable bound for `alpha*x + beta*y = 1` as JSON; free with
 * [`eb_string_free`].
 */
EbStatus eb_bound_unit_eq(const EbSSpec *sspec, const char *alpha, const char *beta, char **json);

/**
 * Upper end of `ln B` for the smallest bound `B`.
 */
EbStatus eb_bound_unit_eq_best(const EbSSpec *sspec,
                               const char *alpha,
                               const char *beta,
                               double *log_bound);

/**
 * Runs the command line tool with `argv` (`argv[0]` is the program name).
 * `stdout_text` and `stderr_text` receive what it printed and must be freed
 * with [`eb_string_free`]; `exit_code` receives its exit status.
 */
EbStatus eb_run(int argc,
                const char *const *argv,
                char **stdout_text,
                char **stderr_text,
                int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EFFBOUNDS_H */
