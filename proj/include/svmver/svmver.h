/* C interface to the svmver kernel-SVM robustness verifier.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an svmver_status;
 * on failure svmver_last_error() describes the problem for the calling
 * thread. */
#ifndef SVMVER_SVMVER_H
#define SVMVER_SVMVER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define SVMVER_API __declspec(dllexport)
#else
#  define SVMVER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum svmver_status {
  SVMVER_OK = 0,
  SVMVER_ERR_IO = 1,
  SVMVER_ERR_PARSE = 2,
  SVMVER_ERR_DIMENSION = 3,
  SVMVER_ERR_CONSTRAINT = 4,
  SVMVER_ERR_INVALID_ARGUMENT = 5,
  SVMVER_ERR_INTERNAL = 6
} svmver_status;

typedef enum svmver_label_mode {
  SVMVER_LABEL_PREDICTED = 0,
  SVMVER_LABEL_GIVEN = 1
} svmver_label_mode;

typedef enum svmver_verdict_kind {
  SVMVER_ROBUST = 0,
  SVMVER_FALSIFIED = 1,
  SVMVER_UNKNOWN = 2
} svmver_verdict_kind;

typedef struct svmver_model svmver_model;

typedef struct svmver_optimizer_config {
  double lr_init;
  double lr_final;
  double beta1;
  double beta2;
  double epsilon;
  double theta;
  uint64_t max_iters;
  int stop_on_verdict;
} svmver_optimizer_config;

typedef struct svmver_verdict {
  svmver_verdict_kind kind;
  int y_hat;
  double lower;
  double upper;
  uint64_t iterations;
  double millis;
  const char* termination; /* static string */
} svmver_verdict;

/* Batch run description. Strings are borrowed for the duration of the call.
 * Exactly one of (images_path + labels_path) or samples_csv_path is set. */
typedef struct svmver_run_spec {
  const char* model_path;
  const char* images_path;
  const char* labels_path;
  const char* samples_csv_path;
  int class_positive;
  int class_negative;
  int skip_unmapped;
  size_t limit;
  const double* deltas;
  size_t n_deltas;
  double scale;
  svmver_label_mode label_mode;
  svmver_optimizer_config optimizer;
  size_t workers;
  const char* out_dir;
  uint64_t seed;
  size_t attack_samples;
  int record_timing;
  int clamp;
  double clamp_lo;
  double clamp_hi;
} svmver_run_spec;

SVMVER_API const char* svmver_version(void);
SVMVER_API const char* svmver_last_error(void);
SVMVER_API const char* svmver_status_string(svmver_status status);

SVMVER_API svmver_status svmver_model_load(const char* path, svmver_model** out);
SVMVER_API svmver_status svmver_model_parse(const char* json_text, svmver_model** out);
SVMVER_API void svmver_model_free(svmver_model* model);
SVMVER_API size_t svmver_model_n_features(const svmver_model* model);
SVMVER_API size_t svmver_model_n_support(const svmver_model* model);
SVMVER_API svmver_status svmver_model_decision_value(const svmver_model* model, const double* x,
                                                     size_t n, double* out);
SVMVER_API svmver_status svmver_model_classify(const svmver_model* model, const double* x, size_t n,
                                               int* out);

/* Writes the compiled network's shape as NUL-terminated JSON. If `buffer` is
 * too small (or NULL) nothing is written and SVMVER_ERR_INVALID_ARGUMENT is
 * returned; *needed always receives the required size including the NUL. */
SVMVER_API svmver_status svmver_model_dump_network(const svmver_model* model, char* buffer,
                                                   size_t capacity, size_t* needed);

SVMVER_API void svmver_optimizer_config_default(svmver_optimizer_config* config);

/* Verifies one l-infinity ball. `witness`, when non-NULL, must hold n values
 * and receives the best point found (the counterexample for FALSIFIED). */
SVMVER_API svmver_status svmver_verify(const svmver_model* model, const double* x, size_t n,
                                       double delta, svmver_label_mode mode, int given_label,
                                       const svmver_optimizer_config* config,
                                       svmver_verdict* out, double* witness);

SVMVER_API void svmver_run_spec_init(svmver_run_spec* spec);
/* results.csv + summary.json in spec->out_dir. */
SVMVER_API svmver_status svmver_run_verify(const svmver_run_spec* spec);
/* curve.csv in spec->out_dir. */
SVMVER_API svmver_status svmver_run_curve(const svmver_run_spec* spec);

#ifdef __cplusplus
}
#endif

#endif /* SVMVER_SVMVER_H */
