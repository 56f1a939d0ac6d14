/* C API for the Nystrom kernel PCA library.
 *
 * Every function returns a status code; results come back through out
 * parameters. Objects are opaque handles owned by the library and released
 * with the matching *_free(). On failure the thread-local message from
 * nykpca_last_error() describes what went wrong.
 */
#ifndef NYKPCA_H
#define NYKPCA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nykpca_status {
    NYKPCA_OK = 0,
    NYKPCA_ERR_USAGE = 2,   /* bad arguments, violated preconditions, bad config */
    NYKPCA_ERR_FORMAT = 3,  /* malformed input file */
    NYKPCA_ERR_NUMERIC = 4  /* factorization or eigensolver failure */
} nykpca_status;

const char* nykpca_last_error(void);
const char* nykpca_version(void);

/* ---- kernels -------------------------------------------------------- */

typedef enum nykpca_kernel_family {
    NYKPCA_KERNEL_GAUSSIAN = 0,
    NYKPCA_KERNEL_LINEAR = 1,
    NYKPCA_KERNEL_POLYNOMIAL = 2
} nykpca_kernel_family;

typedef struct nykpca_kernel_spec {
    int family;     /* nykpca_kernel_family */
    double sigma;   /* Gaussian: k(x,y) = exp(-sigma ||x-y||^2) */
    int degree;     /* Polynomial: k(x,y) = (<x,y> + offset)^degree */
    double offset;
} nykpca_kernel_spec;

nykpca_status nykpca_kernel_eval(const nykpca_kernel_spec* spec, const double* x,
                                 const double* y, int64_t d, double* out);

/* Dense p x q kernel block between row-major point sets a (p x d) and
 * b (q x d); out must hold p*q doubles and is filled row-major. */
nykpca_status nykpca_gram(const nykpca_kernel_spec* spec, const double* a, int64_t p,
                          const double* b, int64_t q, int64_t d, double* out);

/* ---- datasets ------------------------------------------------------- */

typedef struct nykpca_dataset nykpca_dataset;

nykpca_status nykpca_dataset_create(const double* x, int64_t n, int64_t d,
                                    const int32_t* labels_or_null, nykpca_dataset** out);
nykpca_status nykpca_dataset_load_csv(const char* path, nykpca_dataset** out);
nykpca_status nykpca_dataset_load_idx(const char* images_path, const char* labels_path,
                                      nykpca_dataset** out);
nykpca_status nykpca_dataset_filter_digit(const nykpca_dataset* data, int digit,
                                          nykpca_dataset** out);

typedef enum nykpca_decay { NYKPCA_DECAY_POLYNOMIAL = 0, NYKPCA_DECAY_EXPONENTIAL = 1 } nykpca_decay;

/* Synthetic dataset with prescribed covariance spectrum
 * (polynomial scale*i^-rate or exponential scale*e^-rate*i), Rademacher
 * coordinates; dim = 0 picks the default truncation. */
nykpca_status nykpca_dataset_synthetic(int decay, double rate, double scale, int dim,
                                       int64_t n, uint64_t seed, nykpca_dataset** out);

int64_t nykpca_dataset_rows(const nykpca_dataset* data);
int64_t nykpca_dataset_cols(const nykpca_dataset* data);
int nykpca_dataset_has_labels(const nykpca_dataset* data);
/* out: rows*cols doubles, row-major */
nykpca_status nykpca_dataset_copy_data(const nykpca_dataset* data, double* out);
nykpca_status nykpca_dataset_copy_labels(const nykpca_dataset* data, int32_t* out);
nykpca_status nykpca_dataset_write_csv(const nykpca_dataset* data, const char* path);
void nykpca_dataset_free(nykpca_dataset* data);

/* ---- landmark sampling ---------------------------------------------- */

typedef struct nykpca_landmarks nykpca_landmarks;
typedef struct nykpca_leverage nykpca_leverage;

nykpca_status nykpca_sample_uniform(int64_t n, int64_t m, uint64_t seed, nykpca_landmarks** out);

/* Exact scores solve an n x n system; approximate scores use a uniformly
 * sampled pilot of pilot_size landmarks in O(n * pilot_size^2). */
nykpca_status nykpca_leverage_exact(const nykpca_dataset* data, const nykpca_kernel_spec* spec,
                                    double s, nykpca_leverage** out);
nykpca_status nykpca_leverage_approx(const nykpca_dataset* data, const nykpca_kernel_spec* spec,
                                     double s, int64_t pilot_size, uint64_t seed,
                                     nykpca_leverage** out);
int64_t nykpca_leverage_count(const nykpca_leverage* lev);
nykpca_status nykpca_leverage_copy(const nykpca_leverage* lev, double* out);
/* multiplicative agreement factor T >= 1 between two score sets */
nykpca_status nykpca_leverage_check_t(const nykpca_leverage* exact, const nykpca_leverage* approx,
                                      double* out);
nykpca_status nykpca_sample_als(const nykpca_leverage* lev, int64_t m, uint64_t seed,
                                nykpca_landmarks** out);

int64_t nykpca_landmarks_count(const nykpca_landmarks* lm);
int64_t nykpca_landmarks_distinct_count(const nykpca_landmarks* lm);
nykpca_status nykpca_landmarks_copy(const nykpca_landmarks* lm, int32_t* out);
void nykpca_landmarks_free(nykpca_landmarks* lm);
void nykpca_leverage_free(nykpca_leverage* lev);

/* ---- models ---------------------------------------------------------- */

typedef struct nykpca_ekpca nykpca_ekpca;
typedef struct nykpca_nystrom nykpca_nystrom;

nykpca_status nykpca_ekpca_fit(const nykpca_dataset* data, const nykpca_kernel_spec* spec,
                               int ell, nykpca_ekpca** out);
nykpca_status nykpca_nystrom_fit(const nykpca_dataset* data, const nykpca_kernel_spec* spec,
                                 const nykpca_landmarks* lm, int ell, nykpca_nystrom** out);

int nykpca_ekpca_ell(const nykpca_ekpca* model);
int64_t nykpca_ekpca_n(const nykpca_ekpca* model);
double nykpca_ekpca_trace_over_n(const nykpca_ekpca* model);
/* full spectrum of (1/n) K; out holds n doubles */
nykpca_status nykpca_ekpca_spectrum(const nykpca_ekpca* model, double* out);

int nykpca_nystrom_ell(const nykpca_nystrom* model);
int64_t nykpca_nystrom_m_distinct(const nykpca_nystrom* model);
double nykpca_nystrom_trace_over_n(const nykpca_nystrom* model);
/* full spectrum of (1/n) M; out holds m_distinct doubles */
nykpca_status nykpca_nystrom_spectrum(const nykpca_nystrom* model, double* out);

/* scores for p row-major points of the training dimension; out is p x ell */
nykpca_status nykpca_ekpca_project(const nykpca_ekpca* model, const double* points, int64_t p,
                                   int64_t d, double* out);
nykpca_status nykpca_nystrom_project(const nykpca_nystrom* model, const double* points, int64_t p,
                                     int64_t d, double* out);

/* empirical reconstruction error at any ell (0 = empty projector) */
nykpca_status nykpca_ekpca_recon_error(const nykpca_ekpca* model, int ell, double* out);
nykpca_status nykpca_nystrom_recon_error(const nykpca_nystrom* model, int ell, double* out);

nykpca_status nykpca_ekpca_save(const nykpca_ekpca* model, const char* path);
nykpca_status nykpca_ekpca_load(const char* path, nykpca_ekpca** out);
nykpca_status nykpca_nystrom_save(const nykpca_nystrom* model, const char* path);
nykpca_status nykpca_nystrom_load(const char* path, nykpca_nystrom** out);

void nykpca_ekpca_free(nykpca_ekpca* model);
void nykpca_nystrom_free(nykpca_nystrom* model);

/* ---- diagnostics ------------------------------------------------------ */

nykpca_status nykpca_effective_dimension(const double* eigs, int64_t len, double t, double* out);
/* largest diagonal of K ((1/n)K + tI)^{-1} over the dataset's Gram matrix */
nykpca_status nykpca_empirical_n_infinity(const nykpca_dataset* data,
                                          const nykpca_kernel_spec* spec, double t, double* out);
nykpca_status nykpca_error_bound(double n_c, double lambda_ell, double t, double* out);
nykpca_status nykpca_m_threshold_plain(double n_inf, double t, double kappa, double delta,
                                       int64_t* out);
nykpca_status nykpca_m_threshold_als(double n_c, double T, int64_t n, double delta, int64_t* out);
nykpca_status nykpca_select_t_als(const double* eigs, int64_t len, int64_t n, double kappa,
                                  double delta, double T, int64_t m, double* out);
/* least-squares slope of log(err) vs log(n) */
nykpca_status nykpca_fit_rate(const double* ns, const double* errors, int64_t len, double* out);

/* ---- experiment harness ----------------------------------------------- */

/* config_json follows the schema in the README. seed_override < 0 keeps the
 * config's master seed; out_path_override NULL keeps the config's output. */
nykpca_status nykpca_run_experiment(const char* config_json, const char* out_path_override,
                                    int64_t seed_override);
nykpca_status nykpca_bench_scaling(const char* config_json, const char* out_path_override,
                                   int64_t seed_override);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NYKPCA_H */
