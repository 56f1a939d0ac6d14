// Acceptance suite: one self-contained check per numbered criterion, each
// printing a single [PASS]/[FAIL]/[SKIP] line. Run with no arguments for the
// whole battery or with --criterion N for one. Exit code is the number of
// failures (77 = the selected criterion was skipped).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nykpca/analysis.hpp"
#include "nykpca/experiment.hpp"
#include "nykpca/io.hpp"
#include "nykpca/kpca.hpp"
#include "nykpca/numerics.hpp"
#include "nykpca/rng.hpp"
#include "nykpca/sampling.hpp"
#include "testutil.hpp"

using namespace nykpca;

namespace {

using clock_type = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    bool skipped = false;
    std::string detail;
};

struct Check {
    Outcome* out;
    // records the first failure; keeps running so the line reports everything
    void operator()(bool ok, const std::string& what) const {
        if (!ok) {
            out->pass = false;
            if (!out->detail.empty()) out->detail += "; ";
            out->detail += what;
        }
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const KernelSpec kGauss1{KernelFamily::Gaussian, 1.0, 2, 0.0};
const KernelSpec kLinear{KernelFamily::Linear, 1.0, 2, 0.0};

// ---------------------------------------------------------------------------
// 1. nonzero eigenvalues of (1/n)M match those of the explicit surrogate
//    (1/n) K_nm K_mm^{-1} K_mn on 20 seeded datasets, both kernel families

Outcome criterion1() {
    Outcome out;
    Check check{&out};
    const int n = 200, m = 50;
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        Dataset data = testutil::random_dataset(n, 6, 1000 + rep);
        LandmarkSet lm = uniform_without_replacement(n, m, 500 + rep);
        for (const auto& spec : {KernelSpec{KernelFamily::Gaussian, 2.0, 2, 0.0}, kLinear}) {
            NystromModel model = fit_nystrom(data, spec, lm, 1);

            RowMat pts = model.landmarks;
            Mat k_mm = gram_self(spec, pts);
            InvSqrtPsd r = inv_sqrt_psd(k_mm, default_floor(k_mm.trace()));
            Mat b = gram(spec, data.x, pts) * r.matrix;
            Mat surrogate(n, n);
            surrogate.setZero();
            surrogate.selfadjointView<Eigen::Lower>().rankUpdate(b, 1.0 / static_cast<double>(n));
            surrogate.triangularView<Eigen::Upper>() = surrogate.transpose();
            Vec surrogate_eigs = sym_eig(surrogate).values;

            // compare the numerically nonzero part of both spectra
            const double cutoff = 1e-6 * model.all_eigvals_m[0];
            for (int i = 0; i < m; ++i) {
                const double a = model.all_eigvals_m[i];
                const double s = surrogate_eigs[i];
                if (a < cutoff && s < cutoff) break;
                const double rel = std::abs(a - s) / std::max(a, s);
                worst = std::max(worst, rel);
            }
        }
    }
    check(worst <= 1e-8, "max relative eigenvalue error " + fmt(worst) + " > 1e-8");
    out.detail = out.detail.empty() ? "max relative error " + fmt(worst) : out.detail;
    return out;
}

// ---------------------------------------------------------------------------
// 2. closed-form reconstruction errors agree with the brute-force oracle, and
//    the two closed forms for exact KPCA agree with each other

Outcome criterion2() {
    Outcome out;
    Check check{&out};
    double worst_oracle = 0.0, worst_form = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        const int n = 120 + 16 * rep;
        Dataset data = testutil::random_dataset(n, 8, 2000 + rep);
        for (const auto& spec : {kGauss1, kLinear}) {
            const int ell = 6;
            EkpcaModel ek = fit_ekpca(data, spec, ell);
            const double ek_err = recon_error_ekpca(ek);
            const double oracle_ek = recon_error_oracle(data, spec, ek.alphas, data.x);
            worst_oracle = std::max(worst_oracle, std::abs(ek_err - oracle_ek) /
                                                      std::max(ek_err, 1e-300));

            LandmarkSet lm = uniform_without_replacement(n, 30, 2100 + rep);
            NystromModel ny = fit_nystrom(data, spec, lm, ell);
            const double ny_err = recon_error_nystrom(ny);
            const double oracle_ny = recon_error_oracle(data, spec, ny.betas, ny.landmarks);
            worst_oracle = std::max(worst_oracle, std::abs(ny_err - oracle_ny) /
                                                      std::max(ny_err, 1e-300));

            // score form of the exact error: (1/n) tr K - (1/n^2) sum_j u_j' K^2 u_j / l_j
            Mat k = gram_self(spec, data.x);
            EigenDecomposition ed = sym_eig(k / static_cast<double>(n));
            Mat k2 = k * k;
            double head = 0.0;
            for (int j = 0; j < ell; ++j)
                head += ed.vectors.col(j).dot(k2 * ed.vectors.col(j)) / ed.values[j];
            const double nn = static_cast<double>(n);
            const double alpha_form = k.trace() / nn - head / (nn * nn);
            worst_form = std::max(worst_form,
                                  std::abs(ek_err - alpha_form) / std::max(ek_err, 1e-300));
        }
    }
    check(worst_oracle <= 1e-8, "oracle disagreement " + fmt(worst_oracle) + " > 1e-8");
    check(worst_form <= 1e-8, "closed-form disagreement " + fmt(worst_form) + " > 1e-8");
    if (out.pass)
        out.detail = "oracle rel diff " + fmt(worst_oracle) + ", form rel diff " + fmt(worst_form);
    return out;
}

// ---------------------------------------------------------------------------
// 3. eigenvalue interlacing, m = n limit, monotonicity in ell, full-rank zero

Outcome criterion3() {
    Outcome out;
    Check check{&out};
    for (int rep = 0; rep < 5; ++rep) {
        const int n = 60 + 20 * rep;
        Dataset data = testutil::random_dataset(n, 5, 3000 + rep);
        for (const auto& spec : {kGauss1, kLinear}) {
            EkpcaModel ek = fit_ekpca(data, spec, 1);
            const int m = n / 2;
            LandmarkSet lm = uniform_without_replacement(n, m, 3100 + rep);
            NystromModel ny = fit_nystrom(data, spec, lm, 1);
            for (int i = 0; i < m; ++i)
                check(ny.all_eigvals_m[i] <= ek.all_eigvals[i] + 1e-10,
                      "interlacing violated at i=" + std::to_string(i));

            LandmarkSet all = uniform_without_replacement(n, n, 1);
            NystromModel full = fit_nystrom(data, spec, all, 1);
            for (int ell = 0; ell <= n; ++ell) {
                const double a = recon_error_nystrom_at(full, ell);
                const double b = recon_error_ekpca_at(ek, ell);
                check(std::abs(a - b) <= 1e-8 * std::max(1.0, ek.trace_over_n),
                      "m=n mismatch at ell=" + std::to_string(ell) + ": " + fmt(a) + " vs " +
                          fmt(b));
            }
            for (int ell = 1; ell <= m; ++ell) {
                check(recon_error_nystrom_at(ny, ell) <=
                          recon_error_nystrom_at(ny, ell - 1) + 1e-12,
                      "nystrom error increased at ell=" + std::to_string(ell));
                check(recon_error_ekpca_at(ek, ell) <= recon_error_ekpca_at(ek, ell - 1) + 1e-12,
                      "ekpca error increased at ell=" + std::to_string(ell));
            }
            check(std::abs(recon_error_ekpca_at(ek, n)) <= 1e-10 * ek.trace_over_n,
                  "full-rank ekpca error not ~0");
            check(std::abs(recon_error_nystrom_at(full, n)) <= 1e-10 * full.trace_over_n,
                  "full-rank nystrom error not ~0");
        }
    }
    if (out.pass) out.detail = "5 datasets x 2 kernels";
    return out;
}

// ---------------------------------------------------------------------------
// 4. leverage-score identities and the regression-locked pilot factor
//
// The locked constant below is the factor observed on the seeded fixture at
// the first run of this suite; the check pins it against drift.

constexpr double kLockedPilotT = 1.249030927160055;

Outcome criterion4() {
    Outcome out;
    Check check{&out};

    Dataset data = testutil::random_dataset(120, 4, 4000);
    Mat k = gram_self(kGauss1, data.x);
    const double s = 0.05;
    LeverageScores exact = exact_leverage_scores(k, s);

    Mat resolvent = psd_solve(k, 120.0 * s, k);
    check(std::abs(exact.scores.sum() - resolvent.trace()) <= 1e-8,
          "score sum vs resolvent trace: " + fmt(exact.scores.sum()) + " vs " +
              fmt(resolvent.trace()));

    const double t = 0.02;
    LeverageScores at_t = exact_leverage_scores(k, t);
    const double n_inf = empirical_n_infinity(k, t);
    check(std::abs(120.0 * at_t.scores.maxCoeff() - n_inf) <= 1e-8,
          "n*max leverage vs empirical supremum: " + fmt(120.0 * at_t.scores.maxCoeff()) +
              " vs " + fmt(n_inf));

    LeverageScores full_pilot = approx_leverage_scores(data, kGauss1, s, 120, 9);
    double worst = 0.0;
    for (int i = 0; i < 120; ++i)
        worst = std::max(worst,
                         std::abs(full_pilot.scores[i] - exact.scores[i]) / exact.scores[i]);
    check(worst <= 1e-6, "full pilot deviates from exact by " + fmt(worst));

    // seeded n=100 / pilot=40 fixture
    Dataset fixture = testutil::random_dataset(100, 4, 2024);
    Mat kf = gram_self(kGauss1, fixture.x);
    LeverageScores fixture_exact = exact_leverage_scores(kf, s);
    LeverageScores fixture_approx = approx_leverage_scores(fixture, kGauss1, s, 40, 7);
    const double observed_t = check_T_approx(fixture_exact, fixture_approx);
    if (kLockedPilotT < 0.0) {
        out.pass = false;
        out.detail = "pilot fixture T not locked yet; observed T = " + fmt(observed_t);
        return out;
    }
    check(std::abs(observed_t - kLockedPilotT) <= 1e-9 * kLockedPilotT,
          "locked T drifted: observed " + fmt(observed_t) + ", locked " + fmt(kLockedPilotT));
    check(observed_t <= 4.0, "fixture T " + fmt(observed_t) + " > 4");

    if (out.pass) out.detail = "pilot fixture T = " + fmt(observed_t);
    return out;
}

// ---------------------------------------------------------------------------
// rate experiment shared by criteria 5 and 6

struct RatePoint {
    double n;
    double mean_nystrom_error;
    double ekpca_error;
    double analytic_tail;
};

std::vector<RatePoint> rate_sweep(const SpectrumSpec& spectrum, double theta, bool want_ekpca,
                                  std::uint64_t master_seed,
                                  const std::function<int(double)>& ell_of_n) {
    const std::vector<int> ns{250, 500, 1000, 2000, 4000};
    std::vector<RatePoint> points;
    for (int n : ns) {
        Dataset data = generate_spectrum_dataset(spectrum, n,
                                                 derive_seed(master_seed, static_cast<std::uint64_t>(n)));
        const int ell = ell_of_n(static_cast<double>(n));
        const int m = std::min(
            n, static_cast<int>(std::ceil(3.0 * std::pow(n, theta) * std::log(n))));

        double mean_err = 0.0;
        const int reps = 5;
        for (int rep = 0; rep < reps; ++rep) {
            LandmarkSet lm = uniform_without_replacement(
                n, m,
                derive_seed(master_seed, (static_cast<std::uint64_t>(n) << 20) +
                                             static_cast<std::uint64_t>(rep)));
            NystromModel ny = fit_nystrom(data, kLinear, lm, ell);
            mean_err += recon_error_nystrom(ny);
        }
        mean_err /= reps;

        RatePoint p;
        p.n = n;
        p.mean_nystrom_error = mean_err;
        p.analytic_tail = spectrum.analytic_tail(
            spectrum.decay == SpectrumDecay::Polynomial
                ? std::pow(p.n, theta / spectrum.rate)
                : std::log(std::pow(p.n, theta)) / spectrum.rate);
        if (want_ekpca) {
            EkpcaModel ek = fit_ekpca(data, kLinear, ell);
            p.ekpca_error = recon_error_ekpca(ek);
        }
        points.push_back(p);
    }
    return points;
}

// 5. polynomial decay: measured slopes near n^{-theta(1-1/alpha)} = n^{-1/4}

Outcome criterion5() {
    Outcome out;
    Check check{&out};
    SpectrumSpec spectrum{SpectrumDecay::Polynomial, 2.0, 1.0, 2048};
    const double theta = 0.5;
    auto ell_of_n = [&](double n) {
        return static_cast<int>(std::ceil(std::pow(n, theta / spectrum.rate)));
    };
    std::vector<RatePoint> pts = rate_sweep(spectrum, theta, true, 50, ell_of_n);

    std::vector<double> ns, ny_err, ek_err, tails;
    for (const auto& p : pts) {
        ns.push_back(p.n);
        ny_err.push_back(p.mean_nystrom_error);
        ek_err.push_back(p.ekpca_error);
        tails.push_back(p.analytic_tail);
    }
    const double ny_slope = fit_rate(ns, ny_err);
    const double ek_slope = fit_rate(ns, ek_err);
    const double tail_slope = fit_rate(ns, tails);

    check(std::abs(ny_slope + 0.25) <= 0.15,
          "nystrom slope " + fmt(ny_slope) + " outside -0.25 +/- 0.15");
    check(std::abs(ek_slope + 0.25) <= 0.15,
          "ekpca slope " + fmt(ek_slope) + " outside -0.25 +/- 0.15");
    check(std::abs(tail_slope + 0.25) <= 0.02,
          "analytic tail slope " + fmt(tail_slope) + " outside -0.25 +/- 0.02");
    if (out.pass)
        out.detail = "slopes: nystrom " + fmt(ny_slope) + ", ekpca " + fmt(ek_slope) +
                     ", analytic " + fmt(tail_slope);
    return out;
}

// 6. exponential decay: measured slope near n^{-theta} = n^{-1/2}

Outcome criterion6() {
    Outcome out;
    Check check{&out};
    SpectrumSpec spectrum{SpectrumDecay::Exponential, 0.5, 1.0, 0};
    const double theta = 0.5;
    auto ell_of_n = [&](double n) {
        return static_cast<int>(std::ceil(std::log(std::pow(n, theta)) / spectrum.rate));
    };
    std::vector<RatePoint> pts = rate_sweep(spectrum, theta, false, 60, ell_of_n);

    std::vector<double> ns, ny_err;
    for (const auto& p : pts) {
        ns.push_back(p.n);
        ny_err.push_back(p.mean_nystrom_error);
    }
    const double ny_slope = fit_rate(ns, ny_err);
    check(std::abs(ny_slope + 0.5) <= 0.15,
          "nystrom slope " + fmt(ny_slope) + " outside -0.5 +/- 0.15");
    if (out.pass) out.detail = "nystrom slope " + fmt(ny_slope);
    return out;
}

// ---------------------------------------------------------------------------
// 7. effective-dimension growth envelopes over a t grid

Outcome criterion7() {
    Outcome out;
    Check check{&out};
    const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

    SpectrumSpec poly{SpectrumDecay::Polynomial, 2.0, 1.0, 0};
    Vec poly_eigs = poly.eigenvalues();
    double lo = 1e300, hi = 0.0;
    for (double t : grid) {
        const double v = effective_dimension(poly_eigs, t) * std::pow(t, 1.0 / poly.rate);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    check(hi / lo <= 3.0, "polynomial envelope ratio " + fmt(hi / lo) + " > 3");
    const double poly_ratio = hi / lo;

    SpectrumSpec expo{SpectrumDecay::Exponential, 0.5, 1.0, 0};
    Vec expo_eigs = expo.eigenvalues();
    lo = 1e300;
    hi = 0.0;
    for (double t : grid) {
        const double v = effective_dimension(expo_eigs, t) / std::log(1.0 / t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    check(hi / lo <= 3.0, "exponential envelope ratio " + fmt(hi / lo) + " > 3");
    if (out.pass)
        out.detail = "ratios: polynomial " + fmt(poly_ratio) + ", exponential " + fmt(hi / lo);
    return out;
}

// ---------------------------------------------------------------------------
// 8. the bound right-hand side dominates measured errors on the alpha=2 fixture

Outcome criterion8() {
    Outcome out;
    Check check{&out};
    SpectrumSpec spectrum{SpectrumDecay::Polynomial, 2.0, 1.0, 2048};
    const int n = 2000;
    const double delta = 0.1;
    Dataset data = generate_spectrum_dataset(spectrum, n, derive_seed(80, 0));
    Vec population = spectrum.eigenvalues();
    const double kappa = population.sum();

    const double t_lo = (9.0 * kappa / n) * std::log(n / delta);
    const double lambda1 = population[0];
    double min_margin = 1e300;
    for (double t : {t_lo, std::sqrt(t_lo * lambda1), lambda1}) {
        const double n_c = effective_dimension(population, t);
        // all points share the population leverage under this construction
        const long m_min = m_threshold_plain(n_c, t, kappa, delta);
        const int m = static_cast<int>(std::min<long>(n, m_min));
        LandmarkSet lm = uniform_without_replacement(
            n, m, derive_seed(80, static_cast<std::uint64_t>(t * 1e6)));
        NystromModel ny = fit_nystrom(data, kLinear, lm, 10);
        for (int ell = 1; ell <= 10; ++ell) {
            const double bound = recon_error_bound(n_c, population[ell - 1], t);
            const double measured = recon_error_nystrom_at(ny, ell);
            check(bound >= measured,
                  "bound " + fmt(bound) + " < measured " + fmt(measured) + " at ell=" +
                      std::to_string(ell) + ", t=" + fmt(t) +
                      " (margin " + fmt(bound - measured) + ")");
            min_margin = std::min(min_margin, bound - measured);
        }
    }
    if (out.pass) out.detail = "min margin " + fmt(min_margin);
    return out;
}

// ---------------------------------------------------------------------------
// 9. fit-time scaling: near-linear in n for Nystrom at fixed m, at least
//    cubic-ish growth for the exact fit; the model holds no n-sized state

Outcome criterion9() {
    Outcome out;
    Check check{&out};
    BenchConfig cfg;
    // d large enough that per-sample Gram work dominates the fixed m x m
    // eigensolves; otherwise the constant terms flatten the small-n ratios
    cfg.synthetic = SpectrumSpec{SpectrumDecay::Polynomial, 2.0, 1.0, 1024};
    cfg.kernel = kLinear;
    cfg.n_list = {1000, 2000, 4000};
    cfg.m_list = {200};
    cfg.seed = 90;
    cfg.trials = 5;
    cfg.output = "acceptance_bench.csv";
    std::vector<BenchRow> rows = bench_scaling(cfg);
    std::remove("acceptance_bench.csv");
    std::remove("acceptance_bench.csv.meta.json");

    std::string ratios;
    for (size_t i = 1; i < rows.size(); ++i) {
        const double ny_ratio = rows[i].nystrom_fit_seconds / rows[i - 1].nystrom_fit_seconds;
        const double ek_ratio = rows[i].ekpca_fit_seconds / rows[i - 1].ekpca_fit_seconds;
        check(ny_ratio >= 1.5 && ny_ratio <= 2.8,
              "nystrom per-doubling ratio " + fmt(ny_ratio) + " outside [1.5, 2.8]");
        check(ek_ratio >= 3.0, "ekpca per-doubling ratio " + fmt(ek_ratio) + " < 3.0");
        ratios += " ny " + fmt(ny_ratio) + " / ek " + fmt(ek_ratio);
    }

    // structural: the fitted model retains only landmark-sized state
    Dataset data = generate_spectrum_dataset(cfg.synthetic, 1000, 1);
    LandmarkSet lm = uniform_without_replacement(1000, 200, 2);
    NystromModel ny = fit_nystrom(data, kLinear, lm, 5);
    check(ny.landmarks.rows() == 200 && ny.betas.rows() == 200 &&
              ny.all_eigvals_m.size() == 200,
          "model holds state not sized by m");
    if (out.pass) out.detail = "per-doubling ratios:" + ratios;
    return out;
}

// ---------------------------------------------------------------------------
// 10. MNIST digit-5 experiment; skipped without the data files

Outcome criterion10() {
    Outcome out;
    const char* images = std::getenv("NYKPCA_MNIST_IMAGES");
    const char* labels = std::getenv("NYKPCA_MNIST_LABELS");
    if (!images || !labels) {
        out.skipped = true;
        out.detail = "set NYKPCA_MNIST_IMAGES / NYKPCA_MNIST_LABELS to run";
        return out;
    }
    Check check{&out};

    Dataset all = load_idx(images, labels);
    Dataset fives = filter_digit(all, 5);
    check(fives.n() == 5421, "digit-5 count " + std::to_string(fives.n()) + " != 5421");

    const KernelSpec spec{KernelFamily::Gaussian, 1e-7, 2, 0.0};
    const int ell_max = 50;

    const auto ek0 = clock_type::now();
    EkpcaModel ek = fit_ekpca(fives, spec, ell_max);
    const double ek_seconds = std::chrono::duration<double>(clock_type::now() - ek0).count();

    const int m = 1000;
    const int reps = 5;  // error bars at the desk-scale repetition count
    std::vector<double> mean_err(static_cast<size_t>(ell_max) + 1, 0.0);
    double ny_seconds = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        LandmarkSet lm = uniform_without_replacement(static_cast<int>(fives.n()), m,
                                                     derive_seed(100, static_cast<std::uint64_t>(rep)));
        const auto t0 = clock_type::now();
        NystromModel ny = fit_nystrom(fives, spec, lm, ell_max);
        ny_seconds += std::chrono::duration<double>(clock_type::now() - t0).count();
        for (int ell = 0; ell <= ell_max; ++ell)
            mean_err[static_cast<size_t>(ell)] += recon_error_nystrom_at(ny, ell);
    }
    ny_seconds /= reps;
    for (auto& e : mean_err) e /= reps;

    for (int ell = 1; ell <= ell_max; ++ell) {
        const double exact = recon_error_ekpca_at(ek, ell);
        const double approx = mean_err[static_cast<size_t>(ell)];
        check(approx >= exact - 1e-10, "mean error below exact at ell=" + std::to_string(ell));
        check(approx <= 1.10 * exact,
              "mean error " + fmt(approx) + " not within 10% of exact " + fmt(exact) +
                  " at ell=" + std::to_string(ell));
    }
    check(ny_seconds < 0.2 * ek_seconds,
          "nystrom fit " + fmt(ny_seconds) + "s not < 20% of exact " + fmt(ek_seconds) + "s");
    if (out.pass)
        out.detail = "n=5421, ekpca " + fmt(ek_seconds) + "s, nystrom " + fmt(ny_seconds) + "s";
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double runtime_limit_seconds;  // 0 = no limit stated
    Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "spectral equivalence of the reduced matrix and the Gram surrogate", 30, criterion1},
    {2, "reconstruction-error oracle equivalence", 30, criterion2},
    {3, "interlacing, m=n limit, monotonicity", 0, criterion3},
    {4, "leverage-score identities and pilot factor", 0, criterion4},
    {5, "polynomial-decay convergence rate", 600, criterion5},
    {6, "exponential-decay convergence rate", 600, criterion6},
    {7, "effective-dimension envelopes", 5, criterion7},
    {8, "error bound dominates measured errors", 0, criterion8},
    {9, "fit-time complexity scaling", 300, criterion9},
    {10, "MNIST digit-5 experiment", 0, criterion10},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }

    int failures = 0;
    bool selected_skipped = false;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = clock_type::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double elapsed = std::chrono::duration<double>(clock_type::now() - t0).count();
        if (!out.skipped && c.runtime_limit_seconds > 0 && elapsed > c.runtime_limit_seconds) {
            out.pass = false;
            out.detail += (out.detail.empty() ? "" : "; ") + std::string("runtime ") +
                          fmt(elapsed) + "s exceeds " + fmt(c.runtime_limit_seconds) + "s";
        }
        const char* tag = out.skipped ? "[SKIP]" : (out.pass ? "[PASS]" : "[FAIL]");
        std::printf("%s %2d. %s (%.1fs)%s%s\n", tag, c.id, c.name, elapsed,
                    out.detail.empty() ? "" : " -- ", out.detail.c_str());
        std::fflush(stdout);
        if (!out.skipped && !out.pass) ++failures;
        if (only != 0 && out.skipped) selected_skipped = true;
    }
    if (only != 0 && selected_skipped && failures == 0) return 77;
    return failures;
}
