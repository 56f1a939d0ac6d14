// Command-line front end. Talks to the core library exclusively through the
// C API in nykpca/nykpca.h; config files are JSON (see README for schemas)
// and the --seed/--out flags override the corresponding config values.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nykpca/nykpca.h"

using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::int64_t> seed;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file")->required();
    cmd->add_option("--seed", args.seed, "override the config's seed");
    cmd->add_option("--out", args.out, "override the config's output path");
}

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        std::fprintf(stderr, "error: cannot open config '%s'\n", path.c_str());
        std::exit(2);
    }
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::exception& e) {
        std::fprintf(stderr, "error: config '%s' is not valid JSON: %s\n", path.c_str(), e.what());
        std::exit(2);
    }
}

[[noreturn]] void die(nykpca_status status) {
    std::fprintf(stderr, "error: %s\n", nykpca_last_error());
    std::exit(static_cast<int>(status));
}

void check(nykpca_status status) {
    if (status != NYKPCA_OK) die(status);
}

nykpca_kernel_spec kernel_from_config(const json& cfg) {
    nykpca_kernel_spec spec{};
    if (!cfg.contains("kernel")) {
        std::fprintf(stderr, "error: config is missing the kernel section\n");
        std::exit(2);
    }
    const json& k = cfg.at("kernel");
    const std::string family = k.value("family", "");
    if (family == "gaussian") {
        spec.family = NYKPCA_KERNEL_GAUSSIAN;
        spec.sigma = k.value("sigma", 0.0);
    } else if (family == "linear") {
        spec.family = NYKPCA_KERNEL_LINEAR;
    } else if (family == "polynomial") {
        spec.family = NYKPCA_KERNEL_POLYNOMIAL;
        spec.degree = k.value("degree", 0);
        spec.offset = k.value("offset", 0.0);
    } else {
        std::fprintf(stderr, "error: unknown kernel family '%s'\n", family.c_str());
        std::exit(2);
    }
    return spec;
}

// Owning wrapper so early exits do not leak handles.
struct DatasetHandle {
    nykpca_dataset* ptr = nullptr;
    ~DatasetHandle() { nykpca_dataset_free(ptr); }
};

void load_dataset(const json& cfg, std::uint64_t seed, DatasetHandle& out) {
    if (!cfg.contains("dataset")) {
        std::fprintf(stderr, "error: config is missing the dataset section\n");
        std::exit(2);
    }
    const json& d = cfg.at("dataset");
    if (d.contains("csv")) {
        check(nykpca_dataset_load_csv(d.at("csv").get<std::string>().c_str(), &out.ptr));
        return;
    }
    if (d.contains("idx_images")) {
        check(nykpca_dataset_load_idx(d.at("idx_images").get<std::string>().c_str(),
                                      d.at("idx_labels").get<std::string>().c_str(), &out.ptr));
        if (d.contains("digit")) {
            nykpca_dataset* filtered = nullptr;
            check(nykpca_dataset_filter_digit(out.ptr, d.at("digit").get<int>(), &filtered));
            nykpca_dataset_free(out.ptr);
            out.ptr = filtered;
        }
        return;
    }
    if (d.contains("synthetic")) {
        const json& s = d.at("synthetic");
        const std::string decay = s.value("decay", "polynomial");
        check(nykpca_dataset_synthetic(
            decay == "exponential" ? NYKPCA_DECAY_EXPONENTIAL : NYKPCA_DECAY_POLYNOMIAL,
            s.value("rate", 2.0), s.value("scale", 1.0), s.value("dim", 0),
            s.value("n", 0), seed, &out.ptr));
        return;
    }
    std::fprintf(stderr, "error: dataset section names no source\n");
    std::exit(2);
}

std::uint64_t effective_seed(const json& cfg, const CommonArgs& args, const char* key) {
    if (args.seed) return static_cast<std::uint64_t>(*args.seed);
    return cfg.value(key, std::uint64_t{0});
}

int run_fit(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    const std::uint64_t seed = effective_seed(cfg, args, "master_seed");
    const std::string out_path = args.out ? *args.out : cfg.value("output", "model.nykpca");

    DatasetHandle data;
    load_dataset(cfg, seed, data);
    nykpca_kernel_spec kernel = kernel_from_config(cfg);
    const int ell = cfg.value("ell", 0);
    const std::string method = cfg.value("method", "nystrom");

    const int64_t n = nykpca_dataset_rows(data.ptr);
    std::printf("dataset: n=%" PRId64 ", d=%" PRId64 "\n", n, nykpca_dataset_cols(data.ptr));

    if (method == "ekpca") {
        nykpca_ekpca* model = nullptr;
        check(nykpca_ekpca_fit(data.ptr, &kernel, ell, &model));
        double err = 0.0;
        check(nykpca_ekpca_recon_error(model, ell, &err));
        std::printf("ekpca: ell=%d, trace/n=%.6g, reconstruction_error=%.6g\n", ell,
                    nykpca_ekpca_trace_over_n(model), err);
        check(nykpca_ekpca_save(model, out_path.c_str()));
        nykpca_ekpca_free(model);
    } else if (method == "nystrom") {
        const int m = cfg.value("m", 0);
        nykpca_landmarks* lm = nullptr;
        if (cfg.contains("scheme") && cfg.at("scheme").value("kind", "uniform") == "als") {
            const json& s = cfg.at("scheme");
            nykpca_leverage* lev = nullptr;
            const int pilot = s.value("pilot_size", 0);
            if (pilot > 0)
                check(nykpca_leverage_approx(data.ptr, &kernel, s.value("s", 0.0), pilot, seed,
                                             &lev));
            else
                check(nykpca_leverage_exact(data.ptr, &kernel, s.value("s", 0.0), &lev));
            check(nykpca_sample_als(lev, m, seed, &lm));
            nykpca_leverage_free(lev);
        } else {
            check(nykpca_sample_uniform(n, m, seed, &lm));
        }
        nykpca_nystrom* model = nullptr;
        check(nykpca_nystrom_fit(data.ptr, &kernel, lm, ell, &model));
        double err = 0.0;
        check(nykpca_nystrom_recon_error(model, ell, &err));
        std::printf("nystrom: m=%d (distinct %" PRId64 "), ell=%d, trace/n=%.6g, "
                    "reconstruction_error=%.6g\n",
                    m, nykpca_nystrom_m_distinct(model), ell,
                    nykpca_nystrom_trace_over_n(model), err);
        check(nykpca_nystrom_save(model, out_path.c_str()));
        nykpca_nystrom_free(model);
        nykpca_landmarks_free(lm);
    } else {
        std::fprintf(stderr, "error: unknown method '%s'\n", method.c_str());
        return 2;
    }
    std::printf("model written to %s\n", out_path.c_str());
    return 0;
}

int run_sweep(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    const std::string text = cfg.dump();
    const char* out = args.out ? args.out->c_str() : nullptr;
    check(nykpca_run_experiment(text.c_str(), out, args.seed ? *args.seed : -1));
    const std::string out_path = args.out ? *args.out : cfg.value("output", "");
    std::printf("results written to %s (+ .meta.json)\n", out_path.c_str());
    return 0;
}

int run_bench(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    const std::string text = cfg.dump();
    const char* out = args.out ? args.out->c_str() : nullptr;
    check(nykpca_bench_scaling(text.c_str(), out, args.seed ? *args.seed : -1));
    const std::string out_path = args.out ? *args.out : cfg.value("output", "");
    std::printf("timings written to %s (+ .meta.json)\n", out_path.c_str());
    return 0;
}

int run_leverage(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    const std::uint64_t seed = effective_seed(cfg, args, "seed");
    const std::string out_path = args.out ? *args.out : cfg.value("output", "leverage.csv");

    DatasetHandle data;
    load_dataset(cfg, seed, data);
    nykpca_kernel_spec kernel = kernel_from_config(cfg);
    const double s = cfg.value("s", 0.0);
    const int pilot = cfg.value("pilot_size", 0);
    const bool want_exact = cfg.value("exact", true);

    const int64_t n = nykpca_dataset_rows(data.ptr);
    std::vector<double> exact_scores, approx_scores;

    nykpca_leverage* exact = nullptr;
    nykpca_leverage* approx = nullptr;
    if (want_exact) {
        check(nykpca_leverage_exact(data.ptr, &kernel, s, &exact));
        exact_scores.resize(static_cast<size_t>(n));
        check(nykpca_leverage_copy(exact, exact_scores.data()));
    }
    if (pilot > 0) {
        check(nykpca_leverage_approx(data.ptr, &kernel, s, pilot, seed, &approx));
        approx_scores.resize(static_cast<size_t>(n));
        check(nykpca_leverage_copy(approx, approx_scores.data()));
    }
    if (exact && approx) {
        double t = 0.0;
        check(nykpca_leverage_check_t(exact, approx, &t));
        std::printf("multiplicative agreement T = %.6g (pilot_size=%d)\n", t, pilot);
    }

    std::ofstream os(out_path);
    if (!os) {
        std::fprintf(stderr, "error: cannot open '%s' for writing\n", out_path.c_str());
        return 2;
    }
    os << "index";
    if (exact) os << ",exact";
    if (approx) os << ",approximate";
    os << '\n';
    for (int64_t i = 0; i < n; ++i) {
        os << i;
        char buf[40];
        if (exact) {
            std::snprintf(buf, sizeof(buf), "%.17g", exact_scores[static_cast<size_t>(i)]);
            os << ',' << buf;
        }
        if (approx) {
            std::snprintf(buf, sizeof(buf), "%.17g", approx_scores[static_cast<size_t>(i)]);
            os << ',' << buf;
        }
        os << '\n';
    }
    nykpca_leverage_free(exact);
    nykpca_leverage_free(approx);
    std::printf("scores written to %s\n", out_path.c_str());
    return 0;
}

int run_synth(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    const std::uint64_t seed = effective_seed(cfg, args, "seed");
    const std::string out_path = args.out ? *args.out : cfg.value("output", "synth.csv");

    json wrapper;
    wrapper["dataset"] = json{{"synthetic", cfg.at("synthetic")}};
    DatasetHandle data;
    load_dataset(wrapper, seed, data);
    check(nykpca_dataset_write_csv(data.ptr, out_path.c_str()));
    std::printf("synthetic dataset (n=%" PRId64 ", d=%" PRId64 ") written to %s\n",
                nykpca_dataset_rows(data.ptr), nykpca_dataset_cols(data.ptr), out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nystrom-subsampled kernel PCA experiments"};
    app.require_subcommand(1);

    CommonArgs fit_args, sweep_args, bench_args, leverage_args, synth_args;
    CLI::App* fit = app.add_subcommand("fit", "fit one model and save it");
    CLI::App* sweep = app.add_subcommand("sweep", "run an m/ell sweep with repetitions");
    CLI::App* bench = app.add_subcommand("bench", "time fits across sample sizes");
    CLI::App* leverage = app.add_subcommand("leverage", "compute leverage scores");
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    add_common(fit, fit_args);
    add_common(sweep, sweep_args);
    add_common(bench, bench_args);
    add_common(leverage, leverage_args);
    add_common(synth, synth_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (fit->parsed()) return run_fit(fit_args);
    if (sweep->parsed()) return run_sweep(sweep_args);
    if (bench->parsed()) return run_bench(bench_args);
    if (leverage->parsed()) return run_leverage(leverage_args);
    if (synth->parsed()) return run_synth(synth_args);
    return 2;
}
