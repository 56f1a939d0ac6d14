#pragma once

#include <cstdint>
#include <vector>

#include "nykpca/dataset.hpp"
#include "nykpca/kernel.hpp"
#include "nykpca/types.hpp"

namespace nykpca {

enum class SpectrumDecay { Polynomial, Exponential };

// Prescribed covariance spectrum for synthetic data.
//   Polynomial:  lambda_i = scale * i^{-rate},    rate (alpha) > 1
//   Exponential: lambda_i = scale * e^{-rate i},  rate (tau) > 0
// `dim` truncates the spectrum; 0 means pick the default: the smallest d
// whose analytic tail falls below 1e-12 of the trace, capped at 1e5 (the
// polynomial family with small alpha cannot meet the 1e-12 rule below the
// cap; the cap then binds and is reported by the generator).
struct SpectrumSpec {
    SpectrumDecay decay = SpectrumDecay::Polynomial;
    double rate = 2.0;
    double scale = 1.0;
    int dim = 0;

    void validate() const;
    Vec eigenvalues() const;      // dim (or default dim) leading eigenvalues
    int resolved_dim() const;     // dim, or the default when dim == 0
    double analytic_trace() const;
    // Closed-form tail sum_{i > ell} lambda_i of the untruncated spectrum,
    // for real-valued ell:
    //   Polynomial:  scale * ell^{1-alpha} / (alpha - 1)
    //   Exponential: scale * e^{-tau ell} * e^{-tau} / (1 - e^{-tau})
    double analytic_tail(double ell) const;
};

struct SpectrumDatasetInfo {
    int dim_used = 0;
    double tail_fraction = 0.0;  // truncated mass / analytic trace
    bool dim_capped = false;
};

// Samples n points X_a = (sqrt(lambda_1) e_a1, ..., sqrt(lambda_d) e_ad) with
// i.i.d. Rademacher signs e. With the Linear kernel the population covariance
// has exactly the prescribed eigenvalues and k(x, x) = sum_i lambda_i is the
// same for every point, so the kernel bound kappa is constant by
// construction (Gaussian coordinates would not be bounded).
Dataset generate_spectrum_dataset(const SpectrumSpec& spec, int n, std::uint64_t seed,
                                  SpectrumDatasetInfo* info = nullptr);

// Effective dimension sum_i lambda_i / (lambda_i + t) of a spectrum at
// regularization t > 0. Accepts analytic or empirical spectra; nonpositive
// entries (floating-point noise in empirical spectra) contribute zero.
double effective_dimension(const Vec& eigs, double t);
double effective_dimension(const SpectrumSpec& spec, double t);

// Empirical plug-in for the leverage supremum: the largest diagonal entry of
// K ((1/n) K + t I)^{-1}, i.e. n * max_i l_i(t). For the Rademacher
// construction every training point has the same population leverage, so
// this maximum is an estimate of the supremum over the support, not a bound.
double empirical_n_infinity(const Mat& k, double t);

// Right-hand side of the reconstruction-error bound: n_c * (6 lambda_ell + 42 t).
double recon_error_bound(double n_c, double lambda_ell, double t);

// Subsample-size thresholds under which the bound holds.
//   plain uniform:    ceil( max(67, 5 n_inf) * log(4 kappa / (t delta)) )
//   leverage (ALS):   ceil( max(334, 78 T^2 n_c) * log(8 n / delta) )
long m_threshold_plain(double n_inf, double t, double kappa, double delta);
long m_threshold_als(double n_c, double T, long n, double delta);

// Smallest admissible regularization for ALS sampling with budget m:
// searches [ (19 kappa / n) log(2n/delta), lambda_1 ] for the least t with
// 78 T^2 N_C(t) log(8n/delta) <= m. N_C is nonincreasing in t, so bisection
// applies; resolved to 1e-4 relative. Requires the side condition
// m >= 334 log(8n/delta); throws UsageError when no admissible t exists
// (the message carries the gap at t = lambda_1).
double select_t_als(const Vec& eigs, long n, double kappa, double delta, double T, long m);

// Everything bound-shaped about one (t, ell) pair in one place.
struct BoundReport {
    double t = 0.0;
    double n_c = 0.0;
    double n_inf = 0.0;
    double lambda_ell = 0.0;
    double bound_value = 0.0;
    long m_threshold_plain = 0;
    long m_threshold_als = 0;
    double kappa = 0.0;
};

BoundReport bound_report(const Vec& eigs, double t, int ell, double kappa, double delta,
                         long n, double T, double n_inf);

// Least-squares slope of log(error) against log(n); needs >= 3 positive points.
double fit_rate(const std::vector<double>& ns, const std::vector<double>& errors);

}  // namespace nykpca
