#pragma once

#include <cstdint>

#include "nykpca/dataset.hpp"
#include "nykpca/rng.hpp"
#include "nykpca/types.hpp"

namespace nykpca::testutil {

// Deterministic point cloud, coordinates uniform in [lo, hi).
inline Dataset random_dataset(int n, int d, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    Dataset data;
    data.x.resize(n, d);
    SplitMix64 rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) data.x(i, j) = lo + (hi - lo) * rng.next_double();
    return data;
}

inline Mat random_psd(int p, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Mat a(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) a(i, j) = 2.0 * rng.next_double() - 1.0;
    Mat out(p, p);
    out.setZero();
    out.selfadjointView<Eigen::Lower>().rankUpdate(a);
    out.triangularView<Eigen::Upper>() = out.transpose();
    return out;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// agreement up to an independent sign per column
inline double max_col_sign_diff(const Mat& a, const Mat& b) {
    double worst = 0.0;
    for (Index j = 0; j < a.cols(); ++j) {
        const double same = (a.col(j) - b.col(j)).cwiseAbs().maxCoeff();
        const double flip = (a.col(j) + b.col(j)).cwiseAbs().maxCoeff();
        worst = std::max(worst, std::min(same, flip));
    }
    return worst;
}

}  // namespace nykpca::testutil
