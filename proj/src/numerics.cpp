#include "nykpca/numerics.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

namespace nykpca {

double default_floor(double trace) { return 1e-12 * trace; }

namespace {

void check_symmetric_input(const Mat& a) {
    if (a.rows() != a.cols()) throw UsageError("sym_eig: matrix is not square");
    if (!a.allFinite()) throw UsageError("sym_eig: non-finite entries");
    const double scale = a.cwiseAbs().maxCoeff();
    const double skew = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (skew > 1e-8 * std::max(scale, 1e-300))
        throw UsageError("sym_eig: input asymmetric beyond 1e-8 relative tolerance");
}

}  // namespace

EigenDecomposition sym_eig(const Mat& a) {
    check_symmetric_input(a);
    const lapack_int p = static_cast<lapack_int>(a.rows());

    Mat work = 0.5 * (a + a.transpose());
    Vec w(p);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', p, work.data(), p, w.data());
    if (info != 0)
        throw NumericError("sym_eig: dsyevd failed to converge (info=" + std::to_string(info) +
                           " of " + std::to_string(p) + " columns)");

    // LAPACK returns ascending order; re-sort descending, stably.
    std::vector<lapack_int> order(static_cast<size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](lapack_int i, lapack_int j) { return w[i] > w[j]; });

    EigenDecomposition out;
    out.values.resize(p);
    out.vectors.resize(p, p);
    for (lapack_int k = 0; k < p; ++k) {
        out.values[k] = w[order[static_cast<size_t>(k)]];
        out.vectors.col(k) = work.col(order[static_cast<size_t>(k)]);
        // sign convention: first entry above 1e-12 in magnitude is positive
        for (lapack_int r = 0; r < p; ++r) {
            const double v = out.vectors(r, k);
            if (std::abs(v) > 1e-12) {
                if (v < 0.0) out.vectors.col(k) = -out.vectors.col(k);
                break;
            }
        }
    }
    return out;
}

InvSqrtPsd inv_sqrt_psd(const Mat& a, double floor) {
    if (floor < 0.0) throw UsageError("inv_sqrt_psd: floor must be nonnegative");
    EigenDecomposition ed = sym_eig(a);
    const Index p = ed.values.size();

    // quarter powers: the rank update squares them back to lambda^{-1/2}
    // while keeping the result exactly symmetric
    Vec f = Vec::Zero(p);
    int rank = 0;
    for (Index i = 0; i < p; ++i) {
        if (ed.values[i] > floor) {
            f[i] = std::pow(ed.values[i], -0.25);
            ++rank;
        }
    }
    if (rank == 0) throw NumericError("inv_sqrt_psd: matrix numerically zero (all eigenvalues <= floor)");

    Mat scaled = ed.vectors * f.asDiagonal();
    Mat result(p, p);
    result.setZero();
    result.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    result.triangularView<Eigen::Upper>() = result.transpose();
    return InvSqrtPsd{std::move(result), rank};
}

Mat psd_solve(const Mat& a, double shift, const Mat& b) {
    if (a.rows() != a.cols()) throw UsageError("psd_solve: matrix is not square");
    if (!(shift > 0.0)) throw UsageError("psd_solve: shift must be positive");
    if (a.rows() != b.rows()) throw UsageError("psd_solve: rhs row count mismatch");

    Mat shifted = 0.5 * (a + a.transpose());
    shifted.diagonal().array() += shift;
    Eigen::LLT<Mat> llt(shifted);
    if (llt.info() != Eigen::Success)
        throw NumericError("psd_solve: Cholesky factorization failed (matrix + shift not positive definite)");
    return llt.solve(b);
}

}  // namespace nykpca
