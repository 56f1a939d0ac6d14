#include "nykpca/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nykpca/numerics.hpp"
#include "nykpca/rng.hpp"

namespace nykpca {

LandmarkSet uniform_without_replacement(int n, int m, std::uint64_t seed) {
    if (n < 1) throw UsageError("uniform_without_replacement: n must be >= 1");
    if (m < 1 || m > n)
        throw UsageError("uniform_without_replacement: need 1 <= m <= n, got m=" +
                         std::to_string(m) + ", n=" + std::to_string(n));

    std::vector<int> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    SplitMix64 rng(seed);
    for (int i = 0; i < m; ++i) {
        const auto j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    }
    pool.resize(static_cast<size_t>(m));

    LandmarkSet out;
    out.indices = pool;
    std::sort(pool.begin(), pool.end());
    out.distinct = std::move(pool);
    out.scheme = SamplingScheme::PlainUniform;
    out.seed = seed;
    return out;
}

LeverageScores exact_leverage_scores(const Mat& k, double s) {
    if (!(s > 0.0)) throw UsageError("exact_leverage_scores: s must be positive");
    const auto n = k.rows();
    // diag(K (K + nsI)^{-1}) = diag((K + nsI)^{-1} K)
    Mat x = psd_solve(k, static_cast<double>(n) * s, k);
    LeverageScores out;
    out.scores = x.diagonal();
    out.s = s;
    out.kind = LeverageKind::Exact;
    return out;
}

LeverageScores approx_leverage_scores(const Dataset& data, const KernelSpec& spec, double s,
                                      int pilot_size, std::uint64_t seed) {
    data.validate();
    if (!(s > 0.0)) throw UsageError("approx_leverage_scores: s must be positive");
    const int n = static_cast<int>(data.n());
    if (pilot_size < 1 || pilot_size > n)
        throw UsageError("approx_leverage_scores: need 1 <= pilot_size <= n");

    LandmarkSet pilot = uniform_without_replacement(n, pilot_size, seed);
    const int p = pilot.m_distinct();
    RowMat pilot_points(p, data.dim());
    for (int i = 0; i < p; ++i) pilot_points.row(i) = data.x.row(pilot.distinct[static_cast<size_t>(i)]);

    Mat k_pp = gram_self(spec, pilot_points);
    InvSqrtPsd r = inv_sqrt_psd(k_pp, default_floor(k_pp.trace()));
    Mat b = gram(spec, data.x, pilot_points) * r.matrix;  // n x p

    Mat g(p, p);
    g.setZero();
    g.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());  // B^T B
    g.triangularView<Eigen::Upper>() = g.transpose();

    Mat solved = psd_solve(g, static_cast<double>(n) * s, b.transpose());  // p x n

    LeverageScores out;
    out.scores.resize(n);
    for (int i = 0; i < n; ++i) out.scores[i] = b.row(i).dot(solved.col(i));
    out.s = s;
    out.kind = LeverageKind::Approximate;
    out.pilot_size = pilot_size;
    out.seed = seed;
    return out;
}

double check_T_approx(const LeverageScores& exact, const LeverageScores& approx) {
    if (exact.n() != approx.n()) throw UsageError("check_T_approx: score lengths differ");
    if (exact.s != approx.s) throw UsageError("check_T_approx: regularizations differ");
    double t = 1.0;
    for (Index i = 0; i < exact.n(); ++i) {
        const double e = exact.scores[i];
        const double a = approx.scores[i];
        if (!(e > 0.0) || !(a > 0.0))
            throw UsageError("check_T_approx: nonpositive score at index " + std::to_string(i));
        t = std::max({t, e / a, a / e});
    }
    return t;
}

LandmarkSet als_sample(const LeverageScores& scores, int m, std::uint64_t seed) {
    if (m < 1) throw UsageError("als_sample: m must be >= 1");
    const Index n = scores.n();
    if (n < 1) throw UsageError("als_sample: empty score vector");

    Vec cum(n);
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double w = scores.scores[i];
        if (w < 0.0) throw UsageError("als_sample: negative score at index " + std::to_string(i));
        total += w;
        cum[i] = total;
    }
    if (!(total > 0.0)) throw UsageError("als_sample: all scores are zero");

    SplitMix64 rng(seed);
    LandmarkSet out;
    out.indices.reserve(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double u = rng.next_double() * total;
        const double* begin = cum.data();
        const double* pos = std::upper_bound(begin, begin + n, u);
        auto idx = static_cast<int>(std::min<Index>(pos - begin, n - 1));
        out.indices.push_back(idx);
    }
    out.distinct = out.indices;
    std::sort(out.distinct.begin(), out.distinct.end());
    out.distinct.erase(std::unique(out.distinct.begin(), out.distinct.end()), out.distinct.end());
    out.scheme = SamplingScheme::ALS;
    out.seed = seed;
    return out;
}

}  // namespace nykpca
