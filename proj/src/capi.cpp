#include "nykpca/nykpca.h"

#include <cstring>
#include <string>

#include "nykpca/analysis.hpp"
#include "nykpca/errors.hpp"
#include "nykpca/experiment.hpp"
#include "nykpca/io.hpp"
#include "nykpca/kpca.hpp"
#include "nykpca/sampling.hpp"
#include "nykpca/version.hpp"

using namespace nykpca;

namespace {

thread_local std::string g_last_error;

nykpca_status fail(nykpca_status code, const char* what) {
    g_last_error = what;
    return code;
}

// Runs fn, translating the C++ error taxonomy into status codes.
template <typename Fn>
nykpca_status guarded(Fn&& fn) {
    try {
        fn();
        return NYKPCA_OK;
    } catch (const UsageError& e) {
        return fail(NYKPCA_ERR_USAGE, e.what());
    } catch (const FormatError& e) {
        return fail(NYKPCA_ERR_FORMAT, e.what());
    } catch (const NumericError& e) {
        return fail(NYKPCA_ERR_NUMERIC, e.what());
    } catch (const std::exception& e) {
        return fail(NYKPCA_ERR_USAGE, e.what());
    }
}

KernelSpec to_spec(const nykpca_kernel_spec* spec) {
    if (!spec) throw UsageError("kernel spec is null");
    KernelSpec out;
    switch (spec->family) {
        case NYKPCA_KERNEL_GAUSSIAN:
            out.family = KernelFamily::Gaussian;
            break;
        case NYKPCA_KERNEL_LINEAR:
            out.family = KernelFamily::Linear;
            break;
        case NYKPCA_KERNEL_POLYNOMIAL:
            out.family = KernelFamily::Polynomial;
            break;
        default:
            throw UsageError("unknown kernel family code " + std::to_string(spec->family));
    }
    out.sigma = spec->sigma;
    out.degree = spec->degree;
    out.offset = spec->offset;
    out.validate();
    return out;
}

template <typename T>
void require(const T* p, const char* what) {
    if (!p) throw UsageError(std::string(what) + " is null");
}

}  // namespace

struct nykpca_dataset {
    Dataset data;
};
struct nykpca_landmarks {
    LandmarkSet set;
};
struct nykpca_leverage {
    LeverageScores scores;
};
struct nykpca_ekpca {
    EkpcaModel model;
};
struct nykpca_nystrom {
    NystromModel model;
};

extern "C" {

const char* nykpca_last_error(void) { return g_last_error.c_str(); }
const char* nykpca_version(void) { return nykpca::kVersion; }

nykpca_status nykpca_kernel_eval(const nykpca_kernel_spec* spec, const double* x, const double* y,
                                 int64_t d, double* out) {
    return guarded([&] {
        require(x, "x");
        require(y, "y");
        require(out, "out");
        Eigen::Map<const Vec> vx(x, d), vy(y, d);
        *out = eval_kernel(to_spec(spec), vx, vy);
    });
}

nykpca_status nykpca_gram(const nykpca_kernel_spec* spec, const double* a, int64_t p,
                          const double* b, int64_t q, int64_t d, double* out) {
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(out, "out");
        RowMat ma = Eigen::Map<const RowMat>(a, p, d);
        RowMat mb = Eigen::Map<const RowMat>(b, q, d);
        Mat g = (a == b && p == q) ? gram_self(to_spec(spec), ma) : gram(to_spec(spec), ma, mb);
        Eigen::Map<RowMat>(out, p, q) = g;
    });
}

nykpca_status nykpca_dataset_create(const double* x, int64_t n, int64_t d,
                                    const int32_t* labels_or_null, nykpca_dataset** out) {
    return guarded([&] {
        require(x, "x");
        require(out, "out");
        auto* ds = new nykpca_dataset;
        ds->data.x = Eigen::Map<const RowMat>(x, n, d);
        if (labels_or_null) {
            std::vector<int> labels(static_cast<size_t>(n));
            for (int64_t i = 0; i < n; ++i) labels[static_cast<size_t>(i)] = labels_or_null[i];
            ds->data.labels = std::move(labels);
        }
        try {
            ds->data.validate();
        } catch (...) {
            delete ds;
            throw;
        }
        *out = ds;
    });
}

nykpca_status nykpca_dataset_load_csv(const char* path, nykpca_dataset** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new nykpca_dataset{load_csv(path)};
    });
}

nykpca_status nykpca_dataset_load_idx(const char* images_path, const char* labels_path,
                                      nykpca_dataset** out) {
    return guarded([&] {
        require(images_path, "images_path");
        require(labels_path, "labels_path");
        require(out, "out");
        *out = new nykpca_dataset{load_idx(images_path, labels_path)};
    });
}

nykpca_status nykpca_dataset_filter_digit(const nykpca_dataset* data, int digit,
                                          nykpca_dataset** out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        *out = new nykpca_dataset{filter_digit(data->data, digit)};
    });
}

nykpca_status nykpca_dataset_synthetic(int decay, double rate, double scale, int dim, int64_t n,
                                       uint64_t seed, nykpca_dataset** out) {
    return guarded([&] {
        require(out, "out");
        SpectrumSpec spec;
        if (decay == NYKPCA_DECAY_POLYNOMIAL)
            spec.decay = SpectrumDecay::Polynomial;
        else if (decay == NYKPCA_DECAY_EXPONENTIAL)
            spec.decay = SpectrumDecay::Exponential;
        else
            throw UsageError("unknown decay code " + std::to_string(decay));
        spec.rate = rate;
        spec.scale = scale;
        spec.dim = dim;
        *out = new nykpca_dataset{
            generate_spectrum_dataset(spec, static_cast<int>(n), seed, nullptr)};
    });
}

int64_t nykpca_dataset_rows(const nykpca_dataset* data) { return data ? data->data.n() : 0; }
int64_t nykpca_dataset_cols(const nykpca_dataset* data) { return data ? data->data.dim() : 0; }
int nykpca_dataset_has_labels(const nykpca_dataset* data) {
    return data && data->data.labels ? 1 : 0;
}

nykpca_status nykpca_dataset_copy_data(const nykpca_dataset* data, double* out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        Eigen::Map<RowMat>(out, data->data.n(), data->data.dim()) = data->data.x;
    });
}

nykpca_status nykpca_dataset_copy_labels(const nykpca_dataset* data, int32_t* out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        if (!data->data.labels) throw UsageError("dataset has no labels");
        const auto& labels = *data->data.labels;
        for (size_t i = 0; i < labels.size(); ++i) out[i] = labels[i];
    });
}

nykpca_status nykpca_dataset_write_csv(const nykpca_dataset* data, const char* path) {
    return guarded([&] {
        require(data, "data");
        require(path, "path");
        write_csv(data->data, path);
    });
}

void nykpca_dataset_free(nykpca_dataset* data) { delete data; }

nykpca_status nykpca_sample_uniform(int64_t n, int64_t m, uint64_t seed, nykpca_landmarks** out) {
    return guarded([&] {
        require(out, "out");
        *out = new nykpca_landmarks{
            uniform_without_replacement(static_cast<int>(n), static_cast<int>(m), seed)};
    });
}

nykpca_status nykpca_leverage_exact(const nykpca_dataset* data, const nykpca_kernel_spec* spec,
                                    double s, nykpca_leverage** out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        Mat k = gram_self(to_spec(spec), data->data.x);
        *out = new nykpca_leverage{exact_leverage_scores(k, s)};
    });
}

nykpca_status nykpca_leverage_approx(const nykpca_dataset* data, const nykpca_kernel_spec* spec,
                                     double s, int64_t pilot_size, uint64_t seed,
                                     nykpca_leverage** out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        *out = new nykpca_leverage{approx_leverage_scores(data->data, to_spec(spec), s,
                                                          static_cast<int>(pilot_size), seed)};
    });
}

int64_t nykpca_leverage_count(const nykpca_leverage* lev) { return lev ? lev->scores.n() : 0; }

nykpca_status nykpca_leverage_copy(const nykpca_leverage* lev, double* out) {
    return guarded([&] {
        require(lev, "lev");
        require(out, "out");
        Eigen::Map<Vec>(out, lev->scores.n()) = lev->scores.scores;
    });
}

nykpca_status nykpca_leverage_check_t(const nykpca_leverage* exact, const nykpca_leverage* approx,
                                      double* out) {
    return guarded([&] {
        require(exact, "exact");
        require(approx, "approx");
        require(out, "out");
        *out = check_T_approx(exact->scores, approx->scores);
    });
}

nykpca_status nykpca_sample_als(const nykpca_leverage* lev, int64_t m, uint64_t seed,
                                nykpca_landmarks** out) {
    return guarded([&] {
        require(lev, "lev");
        require(out, "out");
        *out = new nykpca_landmarks{als_sample(lev->scores, static_cast<int>(m), seed)};
    });
}

int64_t nykpca_landmarks_count(const nykpca_landmarks* lm) {
    return lm ? lm->set.m_requested() : 0;
}
int64_t nykpca_landmarks_distinct_count(const nykpca_landmarks* lm) {
    return lm ? lm->set.m_distinct() : 0;
}

nykpca_status nykpca_landmarks_copy(const nykpca_landmarks* lm, int32_t* out) {
    return guarded([&] {
        require(lm, "lm");
        require(out, "out");
        for (size_t i = 0; i < lm->set.indices.size(); ++i) out[i] = lm->set.indices[i];
    });
}

void nykpca_landmarks_free(nykpca_landmarks* lm) { delete lm; }
void nykpca_leverage_free(nykpca_leverage* lev) { delete lev; }

nykpca_status nykpca_ekpca_fit(const nykpca_dataset* data, const nykpca_kernel_spec* spec, int ell,
                               nykpca_ekpca** out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        *out = new nykpca_ekpca{fit_ekpca(data->data, to_spec(spec), ell)};
    });
}

nykpca_status nykpca_nystrom_fit(const nykpca_dataset* data, const nykpca_kernel_spec* spec,
                                 const nykpca_landmarks* lm, int ell, nykpca_nystrom** out) {
    return guarded([&] {
        require(data, "data");
        require(lm, "lm");
        require(out, "out");
        *out = new nykpca_nystrom{fit_nystrom(data->data, to_spec(spec), lm->set, ell)};
    });
}

int nykpca_ekpca_ell(const nykpca_ekpca* model) { return model ? model->model.ell : 0; }
int64_t nykpca_ekpca_n(const nykpca_ekpca* model) { return model ? model->model.n() : 0; }
double nykpca_ekpca_trace_over_n(const nykpca_ekpca* model) {
    return model ? model->model.trace_over_n : 0.0;
}

nykpca_status nykpca_ekpca_spectrum(const nykpca_ekpca* model, double* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        Eigen::Map<Vec>(out, model->model.all_eigvals.size()) = model->model.all_eigvals;
    });
}

int nykpca_nystrom_ell(const nykpca_nystrom* model) { return model ? model->model.ell : 0; }
int64_t nykpca_nystrom_m_distinct(const nykpca_nystrom* model) {
    return model ? model->model.m_distinct : 0;
}
double nykpca_nystrom_trace_over_n(const nykpca_nystrom* model) {
    return model ? model->model.trace_over_n : 0.0;
}

nykpca_status nykpca_nystrom_spectrum(const nykpca_nystrom* model, double* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        Eigen::Map<Vec>(out, model->model.all_eigvals_m.size()) = model->model.all_eigvals_m;
    });
}

nykpca_status nykpca_ekpca_project(const nykpca_ekpca* model, const double* points, int64_t p,
                                   int64_t d, double* out) {
    return guarded([&] {
        require(model, "model");
        require(points, "points");
        require(out, "out");
        RowMat pts = Eigen::Map<const RowMat>(points, p, d);
        Mat scores = project_ekpca(model->model, pts);
        Eigen::Map<RowMat>(out, scores.rows(), scores.cols()) = scores;
    });
}

nykpca_status nykpca_nystrom_project(const nykpca_nystrom* model, const double* points, int64_t p,
                                     int64_t d, double* out) {
    return guarded([&] {
        require(model, "model");
        require(points, "points");
        require(out, "out");
        RowMat pts = Eigen::Map<const RowMat>(points, p, d);
        Mat scores = project_nystrom(model->model, pts);
        Eigen::Map<RowMat>(out, scores.rows(), scores.cols()) = scores;
    });
}

nykpca_status nykpca_ekpca_recon_error(const nykpca_ekpca* model, int ell, double* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        *out = recon_error_ekpca_at(model->model, ell);
    });
}

nykpca_status nykpca_nystrom_recon_error(const nykpca_nystrom* model, int ell, double* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        *out = recon_error_nystrom_at(model->model, ell);
    });
}

nykpca_status nykpca_ekpca_save(const nykpca_ekpca* model, const char* path) {
    return guarded([&] {
        require(model, "model");
        require(path, "path");
        save_ekpca(model->model, path);
    });
}

nykpca_status nykpca_ekpca_load(const char* path, nykpca_ekpca** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new nykpca_ekpca{load_ekpca(path)};
    });
}

nykpca_status nykpca_nystrom_save(const nykpca_nystrom* model, const char* path) {
    return guarded([&] {
        require(model, "model");
        require(path, "path");
        save_nystrom(model->model, path);
    });
}

nykpca_status nykpca_nystrom_load(const char* path, nykpca_nystrom** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new nykpca_nystrom{load_nystrom(path)};
    });
}

void nykpca_ekpca_free(nykpca_ekpca* model) { delete model; }
void nykpca_nystrom_free(nykpca_nystrom* model) { delete model; }

nykpca_status nykpca_effective_dimension(const double* eigs, int64_t len, double t, double* out) {
    return guarded([&] {
        require(eigs, "eigs");
        require(out, "out");
        Vec v = Eigen::Map<const Vec>(eigs, len);
        *out = effective_dimension(v, t);
    });
}

nykpca_status nykpca_empirical_n_infinity(const nykpca_dataset* data,
                                          const nykpca_kernel_spec* spec, double t, double* out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        Mat k = gram_self(to_spec(spec), data->data.x);
        *out = empirical_n_infinity(k, t);
    });
}

nykpca_status nykpca_error_bound(double n_c, double lambda_ell, double t, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = recon_error_bound(n_c, lambda_ell, t);
    });
}

nykpca_status nykpca_m_threshold_plain(double n_inf, double t, double kappa, double delta,
                                       int64_t* out) {
    return guarded([&] {
        require(out, "out");
        *out = m_threshold_plain(n_inf, t, kappa, delta);
    });
}

nykpca_status nykpca_m_threshold_als(double n_c, double T, int64_t n, double delta, int64_t* out) {
    return guarded([&] {
        require(out, "out");
        *out = m_threshold_als(n_c, T, n, delta);
    });
}

nykpca_status nykpca_select_t_als(const double* eigs, int64_t len, int64_t n, double kappa,
                                  double delta, double T, int64_t m, double* out) {
    return guarded([&] {
        require(eigs, "eigs");
        require(out, "out");
        Vec v = Eigen::Map<const Vec>(eigs, len);
        *out = select_t_als(v, n, kappa, delta, T, m);
    });
}

nykpca_status nykpca_fit_rate(const double* ns, const double* errors, int64_t len, double* out) {
    return guarded([&] {
        require(ns, "ns");
        require(errors, "errors");
        require(out, "out");
        std::vector<double> vn(ns, ns + len), ve(errors, errors + len);
        *out = fit_rate(vn, ve);
    });
}

nykpca_status nykpca_run_experiment(const char* config_json, const char* out_path_override,
                                    int64_t seed_override) {
    return guarded([&] {
        require(config_json, "config_json");
        ExperimentConfig cfg = ExperimentConfig::from_json_text(config_json);
        if (out_path_override) cfg.output = out_path_override;
        if (seed_override >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed_override);
        run_experiment(cfg);
    });
}

nykpca_status nykpca_bench_scaling(const char* config_json, const char* out_path_override,
                                   int64_t seed_override) {
    return guarded([&] {
        require(config_json, "config_json");
        BenchConfig cfg = BenchConfig::from_json_text(config_json);
        if (out_path_override) cfg.output = out_path_override;
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        bench_scaling(cfg);
    });
}

}  // extern "C"
