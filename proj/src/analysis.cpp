#include "nykpca/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nykpca/numerics.hpp"
#include "nykpca/rng.hpp"

namespace nykpca {

namespace {
constexpr int kDimCap = 100000;
constexpr double kTailRule = 1e-12;
}  // namespace

void SpectrumSpec::validate() const {
    if (!(scale > 0.0)) throw UsageError("spectrum: scale must be positive");
    if (decay == SpectrumDecay::Polynomial && !(rate > 1.0))
        throw UsageError("spectrum: polynomial decay requires alpha > 1");
    if (decay == SpectrumDecay::Exponential && !(rate > 0.0))
        throw UsageError("spectrum: exponential decay requires tau > 0");
    if (dim < 0) throw UsageError("spectrum: dim must be nonnegative");
}

double SpectrumSpec::analytic_tail(double ell) const {
    validate();
    if (ell < 0.0) throw UsageError("analytic_tail: ell must be nonnegative");
    if (decay == SpectrumDecay::Polynomial) {
        if (ell == 0.0) return analytic_trace();
        return scale * std::pow(ell, 1.0 - rate) / (rate - 1.0);
    }
    const double q = std::exp(-rate);
    return scale * std::exp(-rate * ell) * q / (1.0 - q);
}

double SpectrumSpec::analytic_trace() const {
    validate();
    if (decay == SpectrumDecay::Exponential) {
        const double q = std::exp(-rate);
        return scale * q / (1.0 - q);  // geometric series from i = 1
    }
    // zeta(alpha) by direct summation plus the integral remainder
    double sum = 0.0;
    const int n0 = 10000;
    for (int i = 1; i <= n0; ++i) sum += std::pow(static_cast<double>(i), -rate);
    sum += std::pow(static_cast<double>(n0), 1.0 - rate) / (rate - 1.0);
    return scale * sum;
}

int SpectrumSpec::resolved_dim() const {
    validate();
    if (dim > 0) return dim;
    const double target = kTailRule * analytic_trace();
    if (decay == SpectrumDecay::Exponential) {
        // e^{-tau d} q/(1-q) < target
        const double q = std::exp(-rate);
        const double d = std::log(scale * q / ((1.0 - q) * target)) / rate;
        return std::min(kDimCap, std::max(1, static_cast<int>(std::ceil(d)) + 1));
    }
    const double d = std::pow(target * (rate - 1.0) / scale, 1.0 / (1.0 - rate));
    if (d > static_cast<double>(kDimCap)) return kDimCap;
    return std::max(1, static_cast<int>(std::ceil(d)) + 1);
}

Vec SpectrumSpec::eigenvalues() const {
    const int d = resolved_dim();
    Vec out(d);
    if (decay == SpectrumDecay::Polynomial) {
        for (int i = 0; i < d; ++i) out[i] = scale * std::pow(static_cast<double>(i + 1), -rate);
    } else {
        for (int i = 0; i < d; ++i) out[i] = scale * std::exp(-rate * static_cast<double>(i + 1));
    }
    return out;
}

Dataset generate_spectrum_dataset(const SpectrumSpec& spec, int n, std::uint64_t seed,
                                  SpectrumDatasetInfo* info) {
    spec.validate();
    if (n < 1) throw UsageError("generate_spectrum_dataset: n must be >= 1");

    const int d = spec.resolved_dim();
    Vec lambda = spec.eigenvalues();
    Vec root = lambda.cwiseSqrt();

    Dataset data;
    data.x.resize(n, d);
    SplitMix64 rng(seed);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < d; ++i) data.x(a, i) = root[i] * rng.rademacher();

    if (info) {
        info->dim_used = d;
        const double trace = spec.analytic_trace();
        info->tail_fraction = spec.analytic_tail(static_cast<double>(d)) / trace;
        info->dim_capped = (spec.dim == 0 && d == kDimCap &&
                            info->tail_fraction >= kTailRule);
    }
    return data;
}

double effective_dimension(const Vec& eigs, double t) {
    if (!(t > 0.0)) throw UsageError("effective_dimension: t must be positive");
    double sum = 0.0;
    for (Index i = 0; i < eigs.size(); ++i) {
        const double l = eigs[i];
        if (l > 0.0) sum += l / (l + t);
    }
    return sum;
}

double effective_dimension(const SpectrumSpec& spec, double t) {
    return effective_dimension(spec.eigenvalues(), t);
}

double empirical_n_infinity(const Mat& k, double t) {
    if (!(t > 0.0)) throw UsageError("empirical_n_infinity: t must be positive");
    const auto n = k.rows();
    Mat scaled = k / static_cast<double>(n);
    Mat x = psd_solve(scaled, t, k);  // ((1/n)K + tI)^{-1} K
    return x.diagonal().maxCoeff();
}

double recon_error_bound(double n_c, double lambda_ell, double t) {
    if (n_c < 0.0 || lambda_ell < 0.0 || t < 0.0)
        throw UsageError("recon_error_bound: inputs must be nonnegative");
    return n_c * (6.0 * lambda_ell + 42.0 * t);
}

long m_threshold_plain(double n_inf, double t, double kappa, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("m_threshold_plain: delta must be in (0,1)");
    if (!(n_inf > 0.0 && t > 0.0 && kappa > 0.0))
        throw UsageError("m_threshold_plain: inputs must be positive");
    const double v = std::max(67.0, 5.0 * n_inf) * std::log(4.0 * kappa / (t * delta));
    return static_cast<long>(std::ceil(v));
}

long m_threshold_als(double n_c, double T, long n, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("m_threshold_als: delta must be in (0,1)");
    if (!(n_c > 0.0 && T >= 1.0 && n >= 1))
        throw UsageError("m_threshold_als: need n_c > 0, T >= 1, n >= 1");
    const double v =
        std::max(334.0, 78.0 * T * T * n_c) * std::log(8.0 * static_cast<double>(n) / delta);
    return static_cast<long>(std::ceil(v));
}

double select_t_als(const Vec& eigs, long n, double kappa, double delta, double T, long m) {
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("select_t_als: delta must be in (0,1)");
    if (!(T >= 1.0)) throw UsageError("select_t_als: T must be >= 1");
    if (n < 1 || eigs.size() < 1) throw UsageError("select_t_als: empty spectrum or n < 1");

    const double log_8n = std::log(8.0 * static_cast<double>(n) / delta);
    const double side = 334.0 * log_8n;
    if (static_cast<double>(m) < side)
        throw UsageError("select_t_als: m=" + std::to_string(m) +
                         " violates the side condition m >= 334 log(8n/delta) = " +
                         std::to_string(side));

    const double lo0 = (19.0 * kappa / static_cast<double>(n)) *
                       std::log(2.0 * static_cast<double>(n) / delta);
    const double hi0 = eigs[0];
    if (lo0 > hi0)
        throw UsageError("select_t_als: admissible interval is empty (lower endpoint " +
                         std::to_string(lo0) + " exceeds lambda_1 = " + std::to_string(hi0) + ")");

    auto budget = [&](double t) { return 78.0 * T * T * effective_dimension(eigs, t) * log_8n; };

    if (budget(lo0) <= static_cast<double>(m)) return lo0;
    const double at_top = budget(hi0);
    if (at_top > static_cast<double>(m))
        throw UsageError("select_t_als: infeasible even at t = lambda_1 (needs m >= " +
                         std::to_string(at_top) + ", short by " +
                         std::to_string(at_top - static_cast<double>(m)) + ")");

    // budget(t) is decreasing; maintain budget(hi) <= m < budget(lo)
    double lo = lo0, hi = hi0;
    while (hi - lo > 1e-4 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (budget(mid) <= static_cast<double>(m))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

BoundReport bound_report(const Vec& eigs, double t, int ell, double kappa, double delta, long n,
                         double T, double n_inf) {
    if (ell < 1 || ell > eigs.size()) throw UsageError("bound_report: ell outside the spectrum");
    BoundReport r;
    r.t = t;
    r.kappa = kappa;
    r.n_c = effective_dimension(eigs, t);
    r.n_inf = n_inf;
    r.lambda_ell = eigs[ell - 1];
    r.bound_value = recon_error_bound(r.n_c, r.lambda_ell, t);
    r.m_threshold_plain = m_threshold_plain(n_inf, t, kappa, delta);
    r.m_threshold_als = m_threshold_als(r.n_c, T, n, delta);
    return r;
}

double fit_rate(const std::vector<double>& ns, const std::vector<double>& errors) {
    if (ns.size() != errors.size()) throw UsageError("fit_rate: length mismatch");
    if (ns.size() < 3) throw UsageError("fit_rate: need at least 3 points");
    const auto k = ns.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(k), ly(k);
    for (size_t i = 0; i < k; ++i) {
        if (!(ns[i] > 0.0) || !(errors[i] > 0.0))
            throw UsageError("fit_rate: inputs must be positive");
        lx[i] = std::log(ns[i]);
        ly[i] = std::log(errors[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / static_cast<double>(k);
    const double my = sy / static_cast<double>(k);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < k; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) throw UsageError("fit_rate: all sample sizes equal");
    return num / den;
}

}  // namespace nykpca
