#pragma once

#include <cstdint>
#include <vector>

#include "nykpca/dataset.hpp"
#include "nykpca/kernel.hpp"
#include "nykpca/types.hpp"

namespace nykpca {

enum class LeverageKind { Exact, Approximate };

// Ridge leverage scores l_i(s) = [K (K + n s I)^{-1}]_{ii}.
// Each score lies in (0, 1); for the exact kind their sum equals the
// empirical effective dimension at regularization s.
struct LeverageScores {
    Vec scores;
    double s = 0.0;
    LeverageKind kind = LeverageKind::Exact;
    int pilot_size = 0;      // Approximate only
    std::uint64_t seed = 0;  // Approximate only

    Index n() const { return scores.size(); }
};

enum class SamplingScheme { PlainUniform, ALS };

// A landmark subsample of the training set. `indices` is the raw draw (with
// replacement for ALS); `distinct` is its sorted deduplicated copy, which is
// what Gram blocks are built on.
struct LandmarkSet {
    std::vector<int> indices;
    std::vector<int> distinct;
    SamplingScheme scheme = SamplingScheme::PlainUniform;
    std::uint64_t seed = 0;

    int m_requested() const { return static_cast<int>(indices.size()); }
    int m_distinct() const { return static_cast<int>(distinct.size()); }
};

// m distinct indices drawn uniformly without replacement from [0, n), by a
// partial Fisher-Yates shuffle. Uniform over m-subsets, deterministic in the
// seed. Requires 1 <= m <= n.
LandmarkSet uniform_without_replacement(int n, int m, std::uint64_t seed);

// Exact leverage scores of the Gram matrix k at regularization s > 0,
// computed through a single Cholesky solve against k itself.
LeverageScores exact_leverage_scores(const Mat& k, double s);

// Approximate leverage scores from a uniformly sampled pilot of
// `pilot_size` landmarks: with B = K_{n,pilot} K_{pilot,pilot}^{-1/2}, the
// returned scores are the diagonal of K~ (K~ + n s I)^{-1} for the pilot
// approximation K~ = B B^T, evaluated as b_i^T (B^T B + n s I)^{-1} b_i in
// O(n * pilot_size^2). With pilot = all points and full-rank K they agree
// with the exact scores.
LeverageScores approx_leverage_scores(const Dataset& data, const KernelSpec& spec, double s,
                                      int pilot_size, std::uint64_t seed);

// Smallest T >= 1 such that exact and approximate scores are within a
// multiplicative factor T of each other, i.e.
// max_i max(exact_i/approx_i, approx_i/exact_i).
double check_T_approx(const LeverageScores& exact, const LeverageScores& approx);

// m i.i.d. draws (with replacement) from the normalized score distribution
// p_i = scores_i / sum(scores), by inverse-CDF lookup. Duplicates stay in
// `indices`; `distinct` holds the deduplicated landmark set.
LandmarkSet als_sample(const LeverageScores& scores, int m, std::uint64_t seed);

}  // namespace nykpca
