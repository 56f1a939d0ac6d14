#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nykpca/analysis.hpp"
#include "nykpca/dataset.hpp"
#include "nykpca/kernel.hpp"
#include "nykpca/sampling.hpp"
#include "nykpca/types.hpp"

namespace nykpca {

enum class Method { EKPCA, NYSTROM };

// Where the experiment data comes from: exactly one of these is set.
struct DataSource {
    std::optional<std::string> csv_path;
    std::optional<std::string> idx_images;   // with idx_labels (+ optional digit filter)
    std::optional<std::string> idx_labels;
    std::optional<int> digit;
    std::optional<SpectrumSpec> synthetic;   // with synthetic_n
    int synthetic_n = 0;
};

struct ExperimentConfig {
    DataSource data;
    KernelSpec kernel;
    Method method = Method::NYSTROM;
    SamplingScheme scheme = SamplingScheme::PlainUniform;
    double als_s = 0.0;       // ALS regularization
    int als_pilot_size = 0;   // 0 = exact leverage scores
    std::vector<int> m_list;
    std::vector<int> ell_list;
    int repetitions = 1;
    std::uint64_t master_seed = 0;
    std::string output;
    bool record_timings = true;  // false writes zero wall times, making runs byte-identical

    // JSON object with the fields above (see README for the schema); unknown
    // keys are rejected to catch typos.
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    void validate() const;
};

struct ResultRow {
    std::string method;
    std::string scheme;
    long n = 0;
    long m_requested = 0;
    long m_distinct = 0;
    int ell = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    double reconstruction_error = 0.0;
    double wall_time_fit_seconds = 0.0;
    double wall_time_total_seconds = 0.0;
};

// Runs the configured sweep. For every m x repetition one model is fitted
// (sub-seed derive_seed(master, (m << 32) + rep + 2)) and evaluated at every
// ell in ell_list from its full spectrum; EKPCA is fitted once in total.
// Rows are appended to the output CSV as they are produced, ordered by
// (m, repetition, ell); a sidecar <output>.meta.json records the config and
// per-(m, ell) mean/stddev of the reconstruction error. Fit failures are
// recorded as "# fit_error ..." comment lines and the sweep continues; I/O
// failures abort.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

// Parses a results CSV back into rows (comment lines are skipped).
std::vector<ResultRow> parse_results(const std::string& path);
void write_results(const std::vector<ResultRow>& rows, const std::string& header_comment,
                   const std::string& path);

struct BenchConfig {
    SpectrumSpec synthetic;
    KernelSpec kernel;
    std::vector<int> n_list;
    std::vector<int> m_list;
    std::uint64_t seed = 0;
    std::string output;
    int trials = 3;  // per cell; the median is reported

    static BenchConfig from_json_text(const std::string& text);
    void validate() const;
};

struct BenchRow {
    long n = 0;
    long m = 0;
    double nystrom_fit_seconds = 0.0;
    double ekpca_fit_seconds = 0.0;  // timed once per n
};

// Wall-clock (steady clock) of the fit call alone — Gram assembly plus
// eigendecomposition — for every (n, m) cell on synthetic data. Writes a CSV
// timing table plus consecutive-n time ratios in the sidecar.
std::vector<BenchRow> bench_scaling(const BenchConfig& config);

// Loads whatever the data source points at (CSV, IDX pair + digit filter, or
// the synthetic generator with seed derive_seed(master, 0)).
Dataset load_source(const DataSource& source, std::uint64_t master_seed);

}  // namespace nykpca
