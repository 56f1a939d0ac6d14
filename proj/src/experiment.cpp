#include "nykpca/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nykpca/io.hpp"
#include "nykpca/kpca.hpp"
#include "nykpca/rng.hpp"
#include "nykpca/sampling.hpp"
#include "nykpca/version.hpp"

namespace nykpca {

using nlohmann::json;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_between(clock_type::time_point a, clock_type::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw UsageError("config: unknown key '" + it.key() + "' in " + where);
}

KernelSpec kernel_from_config(const json& j) {
    reject_unknown_keys(j, {"family", "sigma", "degree", "offset"}, "kernel");
    KernelSpec spec;
    const std::string family = j.at("family").get<std::string>();
    if (family == "gaussian") {
        spec.family = KernelFamily::Gaussian;
        spec.sigma = j.at("sigma").get<double>();
    } else if (family == "linear") {
        spec.family = KernelFamily::Linear;
    } else if (family == "polynomial") {
        spec.family = KernelFamily::Polynomial;
        spec.degree = j.at("degree").get<int>();
        spec.offset = j.value("offset", 0.0);
    } else {
        throw UsageError("config: unknown kernel family '" + family + "'");
    }
    spec.validate();
    return spec;
}

json kernel_to_config(const KernelSpec& spec) {
    json j;
    j["family"] = spec.name();
    if (spec.family == KernelFamily::Gaussian) j["sigma"] = spec.sigma;
    if (spec.family == KernelFamily::Polynomial) {
        j["degree"] = spec.degree;
        j["offset"] = spec.offset;
    }
    return j;
}

SpectrumSpec spectrum_from_config(const json& j) {
    reject_unknown_keys(j, {"decay", "rate", "scale", "dim", "n"}, "synthetic");
    SpectrumSpec s;
    const std::string decay = j.at("decay").get<std::string>();
    if (decay == "polynomial")
        s.decay = SpectrumDecay::Polynomial;
    else if (decay == "exponential")
        s.decay = SpectrumDecay::Exponential;
    else
        throw UsageError("config: unknown spectrum decay '" + decay + "'");
    s.rate = j.at("rate").get<double>();
    s.scale = j.value("scale", 1.0);
    s.dim = j.value("dim", 0);
    s.validate();
    return s;
}

DataSource data_from_config(const json& j) {
    reject_unknown_keys(j, {"csv", "idx_images", "idx_labels", "digit", "synthetic"}, "dataset");
    DataSource src;
    int provided = 0;
    if (j.contains("csv")) {
        src.csv_path = j.at("csv").get<std::string>();
        ++provided;
    }
    if (j.contains("idx_images") || j.contains("idx_labels")) {
        src.idx_images = j.at("idx_images").get<std::string>();
        src.idx_labels = j.at("idx_labels").get<std::string>();
        if (j.contains("digit")) src.digit = j.at("digit").get<int>();
        ++provided;
    }
    if (j.contains("synthetic")) {
        const json& s = j.at("synthetic");
        src.synthetic = spectrum_from_config(s);
        src.synthetic_n = s.at("n").get<int>();
        if (src.synthetic_n < 1) throw UsageError("config: synthetic n must be >= 1");
        ++provided;
    }
    if (provided != 1)
        throw UsageError("config: dataset must name exactly one of csv, idx_images/idx_labels, "
                         "synthetic");
    return src;
}

std::string method_name(Method m) { return m == Method::EKPCA ? "ekpca" : "nystrom"; }
std::string scheme_name(SamplingScheme s) {
    return s == SamplingScheme::PlainUniform ? "uniform" : "als";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Dataset load_source(const DataSource& source, std::uint64_t master_seed) {
    if (source.csv_path) return load_csv(*source.csv_path);
    if (source.idx_images) {
        Dataset data = load_idx(*source.idx_images, *source.idx_labels);
        if (source.digit) return filter_digit(data, *source.digit);
        return data;
    }
    if (source.synthetic)
        return generate_spectrum_dataset(*source.synthetic, source.synthetic_n,
                                         derive_seed(master_seed, 0));
    throw UsageError("config: empty data source");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: invalid JSON: ") + e.what());
    }
    reject_unknown_keys(j,
                        {"dataset", "kernel", "method", "scheme", "m_list", "ell_list",
                         "repetitions", "master_seed", "output", "record_timings"},
                        "experiment config");
    ExperimentConfig cfg;
    cfg.data = data_from_config(j.at("dataset"));
    cfg.kernel = kernel_from_config(j.at("kernel"));
    const std::string method = j.value("method", "nystrom");
    if (method == "ekpca")
        cfg.method = Method::EKPCA;
    else if (method == "nystrom")
        cfg.method = Method::NYSTROM;
    else
        throw UsageError("config: unknown method '" + method + "'");
    if (j.contains("scheme")) {
        const json& s = j.at("scheme");
        reject_unknown_keys(s, {"kind", "s", "pilot_size"}, "scheme");
        const std::string kind = s.at("kind").get<std::string>();
        if (kind == "uniform") {
            cfg.scheme = SamplingScheme::PlainUniform;
        } else if (kind == "als") {
            cfg.scheme = SamplingScheme::ALS;
            cfg.als_s = s.at("s").get<double>();
            cfg.als_pilot_size = s.value("pilot_size", 0);
        } else {
            throw UsageError("config: unknown sampling scheme '" + kind + "'");
        }
    }
    cfg.m_list = j.value("m_list", std::vector<int>{});
    cfg.ell_list = j.at("ell_list").get<std::vector<int>>();
    cfg.repetitions = j.value("repetitions", 1);
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.output = j.value("output", std::string{});
    cfg.record_timings = j.value("record_timings", true);
    // full validation happens in run_experiment, after CLI overrides land
    return cfg;
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    json d;
    if (data.csv_path) d["csv"] = *data.csv_path;
    if (data.idx_images) {
        d["idx_images"] = *data.idx_images;
        d["idx_labels"] = *data.idx_labels;
        if (data.digit) d["digit"] = *data.digit;
    }
    if (data.synthetic) {
        json s;
        s["decay"] = data.synthetic->decay == SpectrumDecay::Polynomial ? "polynomial"
                                                                        : "exponential";
        s["rate"] = data.synthetic->rate;
        s["scale"] = data.synthetic->scale;
        s["dim"] = data.synthetic->dim;
        s["n"] = data.synthetic_n;
        d["synthetic"] = s;
    }
    j["dataset"] = d;
    j["kernel"] = kernel_to_config(kernel);
    j["method"] = method_name(method);
    json s;
    s["kind"] = scheme_name(scheme);
    if (scheme == SamplingScheme::ALS) {
        s["s"] = als_s;
        s["pilot_size"] = als_pilot_size;
    }
    j["scheme"] = s;
    j["m_list"] = m_list;
    j["ell_list"] = ell_list;
    j["repetitions"] = repetitions;
    j["master_seed"] = master_seed;
    j["output"] = output;
    j["record_timings"] = record_timings;
    return j.dump(2);
}

void ExperimentConfig::validate() const {
    kernel.validate();
    if (repetitions < 1) throw UsageError("config: repetitions must be >= 1");
    if (ell_list.empty()) throw UsageError("config: ell_list must not be empty");
    for (int ell : ell_list)
        if (ell < 0) throw UsageError("config: ell values must be nonnegative");
    if (method == Method::NYSTROM) {
        if (m_list.empty()) throw UsageError("config: nystrom runs need a nonempty m_list");
        const int min_m = *std::min_element(m_list.begin(), m_list.end());
        for (int m : m_list)
            if (m < 1) throw UsageError("config: m values must be >= 1");
        for (int ell : ell_list)
            if (ell > min_m)
                throw UsageError("config: ell=" + std::to_string(ell) +
                                 " exceeds min(m_list)=" + std::to_string(min_m));
    }
    if (scheme == SamplingScheme::ALS && !(als_s > 0.0))
        throw UsageError("config: ALS scheme requires s > 0");
    if (output.empty()) throw UsageError("config: output path is required");
}

namespace {

const char* kResultHeader =
    "method,scheme,n,m_requested,m_distinct,ell,repetition,seed,reconstruction_error,"
    "wall_time_fit_seconds,wall_time_total_seconds";

void write_row(std::ostream& os, const ResultRow& r) {
    os << r.method << ',' << r.scheme << ',' << r.n << ',' << r.m_requested << ',' << r.m_distinct
       << ',' << r.ell << ',' << r.repetition << ',' << r.seed << ','
       << format_double(r.reconstruction_error) << ',' << format_double(r.wall_time_fit_seconds)
       << ',' << format_double(r.wall_time_total_seconds) << '\n';
}

struct SummaryKey {
    long m;
    int ell;
    bool operator<(const SummaryKey& o) const { return m != o.m ? m < o.m : ell < o.ell; }
};

json summarize(const std::vector<ResultRow>& rows) {
    std::map<SummaryKey, std::vector<double>> groups;
    for (const auto& r : rows) groups[{r.m_requested, r.ell}].push_back(r.reconstruction_error);
    json out = json::array();
    for (const auto& [key, errs] : groups) {
        double mean = 0.0;
        for (double e : errs) mean += e;
        mean /= static_cast<double>(errs.size());
        double var = 0.0;
        for (double e : errs) var += (e - mean) * (e - mean);
        const double stddev =
            errs.size() > 1 ? std::sqrt(var / static_cast<double>(errs.size() - 1)) : 0.0;
        json g;
        g["m"] = key.m;
        g["ell"] = key.ell;
        g["count"] = errs.size();
        g["mean_reconstruction_error"] = mean;
        g["stddev_reconstruction_error"] = stddev;
        out.push_back(g);
    }
    return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    config.validate();
    Dataset data = load_source(config.data, config.master_seed);
    data.validate();
    const long n = data.n();

    std::ofstream os(config.output);
    if (!os) throw UsageError("cannot open '" + config.output + "' for writing");
    os << kResultHeader << '\n';

    std::vector<ResultRow> rows;
    auto emit = [&](const ResultRow& r) {
        rows.push_back(r);
        write_row(os, r);
        os.flush();
        if (!os) throw UsageError("failed writing '" + config.output + "'");
    };

    const int max_ell = *std::max_element(config.ell_list.begin(), config.ell_list.end());

    if (config.method == Method::EKPCA) {
        const auto t0 = clock_type::now();
        EkpcaModel model = fit_ekpca(data, config.kernel, std::max(1, max_ell));
        const auto t1 = clock_type::now();
        for (int ell : config.ell_list) {
            ResultRow r;
            r.method = "ekpca";
            r.scheme = "-";
            r.n = n;
            r.m_requested = n;
            r.m_distinct = n;
            r.ell = ell;
            r.repetition = 0;
            r.seed = config.master_seed;
            r.reconstruction_error = recon_error_ekpca_at(model, ell);
            if (config.record_timings) {
                r.wall_time_fit_seconds = seconds_between(t0, t1);
                r.wall_time_total_seconds = seconds_between(t0, clock_type::now());
            }
            emit(r);
        }
    } else {
        // leverage scores are shared by all ALS repetitions
        LeverageScores scores;
        if (config.scheme == SamplingScheme::ALS) {
            if (config.als_pilot_size > 0) {
                scores = approx_leverage_scores(data, config.kernel, config.als_s,
                                                config.als_pilot_size,
                                                derive_seed(config.master_seed, 1));
            } else {
                Mat k = gram_self(config.kernel, data.x);
                scores = exact_leverage_scores(k, config.als_s);
            }
        }
        for (int m : config.m_list) {
            for (int rep = 0; rep < config.repetitions; ++rep) {
                const std::uint64_t seed = derive_seed(
                    config.master_seed,
                    (static_cast<std::uint64_t>(m) << 32) + static_cast<std::uint64_t>(rep) + 2);
                const auto t_start = clock_type::now();
                try {
                    LandmarkSet lm = config.scheme == SamplingScheme::PlainUniform
                                         ? uniform_without_replacement(static_cast<int>(n), m, seed)
                                         : als_sample(scores, m, seed);
                    const int fit_ell = std::min(std::max(1, max_ell), lm.m_distinct());
                    const auto t0 = clock_type::now();
                    NystromModel model = fit_nystrom(data, config.kernel, lm, fit_ell);
                    const auto t1 = clock_type::now();
                    for (int ell : config.ell_list) {
                        ResultRow r;
                        r.method = "nystrom";
                        r.scheme = scheme_name(config.scheme);
                        r.n = n;
                        r.m_requested = m;
                        r.m_distinct = lm.m_distinct();
                        r.ell = ell;
                        r.repetition = rep;
                        r.seed = seed;
                        r.reconstruction_error = recon_error_nystrom_at(model, ell);
                        if (config.record_timings) {
                            r.wall_time_fit_seconds = seconds_between(t0, t1);
                            r.wall_time_total_seconds = seconds_between(t_start, clock_type::now());
                        }
                        emit(r);
                    }
                } catch (const UsageError& e) {
                    os << "# fit_error,m=" << m << ",rep=" << rep << "," << e.what() << '\n';
                    os.flush();
                } catch (const NumericError& e) {
                    os << "# fit_error,m=" << m << ",rep=" << rep << "," << e.what() << '\n';
                    os.flush();
                }
            }
        }
    }

    json meta;
    meta["library_version"] = kVersion;
    meta["config"] = json::parse(config.to_json_text());
    meta["n"] = n;
    meta["rows"] = rows.size();
    meta["summary"] = summarize(rows);
    std::ofstream ms(config.output + ".meta.json");
    if (!ms) throw UsageError("cannot open '" + config.output + ".meta.json' for writing");
    ms << meta.dump(2) << '\n';
    return rows;
}

std::vector<ResultRow> parse_results(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(is, line)) throw FormatError("results '" + path + "': empty file");
    if (line != kResultHeader)
        throw FormatError("results '" + path + "': unexpected header");

    std::vector<ResultRow> rows;
    long line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        ResultRow r;
        std::string cell;
        auto next = [&](const char* what) {
            if (!std::getline(ss, cell, ','))
                throw FormatError("results '" + path + "': missing " + what + " at line " +
                                  std::to_string(line_no));
            return cell;
        };
        r.method = next("method");
        r.scheme = next("scheme");
        r.n = std::stol(next("n"));
        r.m_requested = std::stol(next("m_requested"));
        r.m_distinct = std::stol(next("m_distinct"));
        r.ell = std::stoi(next("ell"));
        r.repetition = std::stoi(next("repetition"));
        r.seed = std::stoull(next("seed"));
        r.reconstruction_error = std::stod(next("reconstruction_error"));
        r.wall_time_fit_seconds = std::stod(next("wall_time_fit_seconds"));
        r.wall_time_total_seconds = std::stod(next("wall_time_total_seconds"));
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_results(const std::vector<ResultRow>& rows, const std::string& header_comment,
                   const std::string& path) {
    std::ofstream os(path);
    if (!os) throw UsageError("cannot open '" + path + "' for writing");
    os << kResultHeader << '\n';
    if (!header_comment.empty()) os << "# " << header_comment << '\n';
    for (const auto& r : rows) write_row(os, r);
    if (!os) throw UsageError("failed writing '" + path + "'");
}

BenchConfig BenchConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: invalid JSON: ") + e.what());
    }
    reject_unknown_keys(j, {"synthetic", "kernel", "n_list", "m_list", "seed", "output", "trials"},
                        "bench config");
    BenchConfig cfg;
    cfg.synthetic = spectrum_from_config(j.at("synthetic"));
    cfg.kernel = kernel_from_config(j.at("kernel"));
    cfg.n_list = j.at("n_list").get<std::vector<int>>();
    cfg.m_list = j.at("m_list").get<std::vector<int>>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.output = j.value("output", std::string{});
    cfg.trials = j.value("trials", 3);
    return cfg;
}

void BenchConfig::validate() const {
    kernel.validate();
    synthetic.validate();
    if (n_list.empty()) throw UsageError("bench config: n_list must not be empty");
    if (m_list.empty()) throw UsageError("bench config: m_list must not be empty");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw UsageError("bench config: n_list must be increasing");
    if (trials < 1) throw UsageError("bench config: trials must be >= 1");
    if (output.empty()) throw UsageError("bench config: output path is required");
}

namespace {

// scheduler noise only ever adds time, so the minimum over trials is the
// least-biased estimate of the true fit cost
double best_of(const std::vector<double>& v) {
    return *std::min_element(v.begin(), v.end());
}

}  // namespace

std::vector<BenchRow> bench_scaling(const BenchConfig& config) {
    config.validate();
    std::vector<BenchRow> rows;
    for (int n : config.n_list) {
        Dataset data = generate_spectrum_dataset(config.synthetic, n,
                                                 derive_seed(config.seed, static_cast<std::uint64_t>(n)));
        // EKPCA is timed once per n: at these sizes the fit runs for seconds
        // and its timing noise is far below the ratios under test
        const auto ek0 = clock_type::now();
        fit_ekpca(data, config.kernel, 1);
        const double ek_seconds = seconds_between(ek0, clock_type::now());

        for (int m : config.m_list) {
            if (m > n) continue;
            std::vector<double> ny_trials;
            for (int trial = -1; trial < config.trials; ++trial) {
                LandmarkSet lm = uniform_without_replacement(
                    n, m,
                    derive_seed(config.seed, (static_cast<std::uint64_t>(n) << 24) +
                                                 (static_cast<std::uint64_t>(m) << 4) +
                                                 static_cast<std::uint64_t>(trial + 1)));
                const auto t0 = clock_type::now();
                NystromModel model = fit_nystrom(data, config.kernel, lm, 1);
                const auto t1 = clock_type::now();
                if (trial >= 0) ny_trials.push_back(seconds_between(t0, t1));  // trial -1 warms up
                (void)model;
            }
            BenchRow r;
            r.n = n;
            r.m = m;
            r.nystrom_fit_seconds = best_of(ny_trials);
            r.ekpca_fit_seconds = ek_seconds;
            rows.push_back(r);
        }
    }

    std::ofstream os(config.output);
    if (!os) throw UsageError("cannot open '" + config.output + "' for writing");
    os << "n,m,nystrom_fit_seconds,ekpca_fit_seconds\n";
    for (const auto& r : rows)
        os << r.n << ',' << r.m << ',' << format_double(r.nystrom_fit_seconds) << ','
           << format_double(r.ekpca_fit_seconds) << '\n';
    if (!os) throw UsageError("failed writing '" + config.output + "'");

    // consecutive-n time ratios per m, and consecutive-m ratios per n
    json ratios = json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            if (rows[j].m == rows[i].m && rows[j].n < rows[i].n &&
                rows[i].nystrom_fit_seconds > 0 && rows[j].nystrom_fit_seconds > 0) {
                // keep only adjacent n in the configured list
                bool adjacent = true;
                for (const auto& r : rows)
                    if (r.m == rows[i].m && r.n > rows[j].n && r.n < rows[i].n) adjacent = false;
                if (!adjacent) continue;
                json g;
                g["axis"] = "n";
                g["m"] = rows[i].m;
                g["from_n"] = rows[j].n;
                g["to_n"] = rows[i].n;
                g["nystrom_ratio"] = rows[i].nystrom_fit_seconds / rows[j].nystrom_fit_seconds;
                g["ekpca_ratio"] = rows[i].ekpca_fit_seconds / rows[j].ekpca_fit_seconds;
                ratios.push_back(g);
            }
        }
    }
    json meta;
    meta["library_version"] = kVersion;
    meta["n_list"] = config.n_list;
    meta["m_list"] = config.m_list;
    meta["trials"] = config.trials;
    meta["seed"] = config.seed;
    meta["ratios"] = ratios;
    std::ofstream ms(config.output + ".meta.json");
    if (!ms) throw UsageError("cannot open '" + config.output + ".meta.json' for writing");
    ms << meta.dump(2) << '\n';
    return rows;
}

}  // namespace nykpca
