#ifndef RVC_H
#define RVC_H

/* C interface to the vine-copula classifier library. All entry points return
 * an rvc_status; outputs are written through pointers only on RVC_OK. On any
 * failure rvc_last_error() describes the problem for the calling thread.
 * Strings returned through char** are heap-allocated; release them with
 * rvc_string_free. Handles are opaque and must be freed with their _free
 * function. All handle operations are thread-safe for concurrent reads. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rvc_status {
    RVC_OK = 0,
    RVC_ERROR_INVALID_ARGUMENT = 1,
    RVC_ERROR_PARSE = 2,
    RVC_ERROR_INSUFFICIENT_DATA = 3,
    RVC_ERROR_NOT_FOUND = 4,
    RVC_ERROR_NUMERICAL = 5,
    RVC_ERROR_DEGENERATE_DATA = 6,
    RVC_ERROR_IO = 7,
    RVC_ERROR_INTERNAL = 8
} rvc_status;

/* Message for the most recent failure on this thread; never NULL. */
const char* rvc_last_error(void);

void rvc_string_free(char* s);

/* ------------------------------------------------------------- pair copula */

typedef struct rvc_bicop rvc_bicop;

/* family: independence | gaussian | clayton | gumbel | frank */
rvc_status rvc_bicop_create(const char* family, double theta, rvc_bicop** out);
rvc_status rvc_bicop_from_tau(const char* family, double tau, rvc_bicop** out);
void rvc_bicop_free(rvc_bicop* c);

rvc_status rvc_bicop_family(const rvc_bicop* c, const char** out); /* static */
rvc_status rvc_bicop_theta(const rvc_bicop* c, double* out);
rvc_status rvc_bicop_tau(const rvc_bicop* c, double* out);

rvc_status rvc_bicop_density(const rvc_bicop* c, double u, double v, double* out);
rvc_status rvc_bicop_log_density(const rvc_bicop* c, double u, double v, double* out);
rvc_status rvc_bicop_cdf(const rvc_bicop* c, double u, double v, double* out);
/* P(U <= u | V = v) and its inverse in the first argument. */
rvc_status rvc_bicop_hfunc(const rvc_bicop* c, double u, double v, double* out);
rvc_status rvc_bicop_hinv(const rvc_bicop* c, double p, double v, double* out);

/* Maximum-likelihood fit of one family; out_loglik may be NULL. */
rvc_status rvc_bicop_fit(const char* family, const double* u, const double* v,
                         size_t n, rvc_bicop** out, double* out_loglik);

/* out_uv receives n rows of (u, v), row-major 2n doubles. */
rvc_status rvc_bicop_sample(const rvc_bicop* c, size_t n, uint64_t seed,
                            double* out_uv);

/* -------------------------------------------------------------------- vine */

typedef struct rvc_vine rvc_vine;

/* Parses an "rvc-vine/1" spec document (structure, pair copulas, optional
 * names and normal marginals). Structure violations report the offending
 * tree and edge. */
rvc_status rvc_vine_from_spec_json(const char* text, rvc_vine** out);
void rvc_vine_free(rvc_vine* v);

rvc_status rvc_vine_dimension(const rvc_vine* v, int* out);
rvc_status rvc_vine_name(const rvc_vine* v, int index, char** out);

rvc_status rvc_vine_log_density(const rvc_vine* v, const double* u, size_t k,
                                double* out);
/* n rows of k pseudo-observations, row-major. */
rvc_status rvc_vine_sample(const rvc_vine* v, size_t n, uint64_t seed,
                           double* out);
/* Like rvc_vine_sample, but mapped through the spec's normal marginals when
 * they are present (identity otherwise). */
rvc_status rvc_vine_sample_features(const rvc_vine* v, size_t n, uint64_t seed,
                                    double* out);

/* -------------------------------------------------------------- classifier */

typedef struct rvc_classifier rvc_classifier;

typedef struct rvc_train_options {
    int empirical_priors;   /* 0: uniform priors */
    int standard_aic;       /* 0: -loglik + 2q, 1: -2 loglik + 2q */
    int force_independence; /* 1: keep structure, force independence pairs */
    const char* families;   /* comma-separated candidate list, NULL for all */
} rvc_train_options;

/* features: n rows of k doubles, row-major. labels: n ids indexing
 * class_names. opts may be NULL for defaults. */
rvc_status rvc_classifier_train(const double* features, size_t n, size_t k,
                                const int* labels,
                                const char* const* class_names, size_t n_classes,
                                const char* const* feature_names,
                                const rvc_train_options* opts,
                                rvc_classifier** out);
void rvc_classifier_free(rvc_classifier* c);

rvc_status rvc_classifier_save(const rvc_classifier* c, const char* path);
rvc_status rvc_classifier_load(const char* path, rvc_classifier** out);

rvc_status rvc_classifier_num_classes(const rvc_classifier* c, size_t* out);
rvc_status rvc_classifier_class_label(const rvc_classifier* c, size_t index,
                                      char** out);
rvc_status rvc_classifier_num_features(const rvc_classifier* c, size_t* out);
rvc_status rvc_classifier_feature_name(const rvc_classifier* c, size_t index,
                                       char** out);

/* out receives one unnormalized log posterior per class. */
rvc_status rvc_classifier_log_posterior(const rvc_classifier* c, const double* x,
                                        size_t k, double* out);
rvc_status rvc_classifier_predict(const rvc_classifier* c, const double* x,
                                  size_t k, int* out);

/* out_counts receives G*G confusion counts, rows = true labels. */
rvc_status rvc_classifier_evaluate(const rvc_classifier* c, const double* features,
                                   size_t n, size_t k, const int* labels,
                                   long long* out_counts);

rvc_status rvc_classifier_fit_report(const rvc_classifier* c, char** out);
/* format 0: text listing of all trees; 1: DOT graph of the first tree. */
rvc_status rvc_classifier_inspect(const rvc_classifier* c, const char* class_label,
                                  int dot_format, char** out);

rvc_status rvc_classifier_set_provenance(rvc_classifier* c, const char* key,
                                         const char* value);

/* ----------------------------------------------------------------- metrics */

/* counts: G*G row-major confusion counts, rows = true labels. */
rvc_status rvc_metrics_format(const char* const* labels, size_t g,
                              const long long* counts, char** out);
rvc_status rvc_metrics_macro_f1(const char* const* labels, size_t g,
                                const long long* counts, double* out);

#ifdef __cplusplus
}
#endif

#endif /* RVC_H */
