#include "nykpca/kernel.hpp"

#include <utility>

#include "parallel.hpp"

namespace nykpca {

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Vec>& x,
                   const Eigen::Ref<const Vec>& y) {
    spec.validate();
    if (x.size() != y.size())
        throw UsageError("eval_kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    if (!x.allFinite() || !y.allFinite())
        throw UsageError("eval_kernel: non-finite input");
    return detail::eval_rows(spec, x.transpose(), y.transpose());
}

double kernel_diag(const KernelSpec& spec, const Eigen::Ref<const Vec>& x) {
    switch (spec.family) {
        case KernelFamily::Gaussian:
            return 1.0;
        case KernelFamily::Linear:
            return x.squaredNorm();
        default:
            return detail::pow_int(x.squaredNorm() + spec.offset, spec.degree);
    }
}

Mat gram(const KernelSpec& spec, const RowMat& a, const RowMat& b) {
    if (&a == &b) return gram_self(spec, a);
    spec.validate();
    if (a.cols() != b.cols())
        throw UsageError("gram: column count mismatch (" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.cols()) + ")");
    Mat out(a.rows(), b.rows());
    const long q = b.rows();
    detail::parallel_rows(a.rows(), [&](long i) {
        const auto xi = a.row(i);
        for (long j = 0; j < q; ++j) out(i, j) = detail::eval_rows(spec, xi, b.row(j));
    });
    return out;
}

Mat gram_self(const KernelSpec& spec, const RowMat& a) {
    spec.validate();
    Mat out(a.rows(), a.rows());
    const long n = a.rows();
    detail::parallel_rows(n, [&](long i) {
        const auto xi = a.row(i);
        for (long j = i; j < n; ++j) {
            const double v = detail::eval_rows(spec, xi, a.row(j));
            out(i, j) = v;
            out(j, i) = v;
        }
    });
    return out;
}

double mean_kernel_diag(const KernelSpec& spec, const RowMat& a) {
    double sum = 0.0;
    for (long i = 0; i < a.rows(); ++i) sum += kernel_diag(spec, a.row(i).transpose());
    return sum / static_cast<double>(a.rows());
}

GramBlock gram_block(const KernelSpec& spec, const RowMat& a, std::string a_id, const RowMat& b,
                     std::string b_id) {
    const bool same = (&a == &b) || (!a_id.empty() && a_id == b_id);
    Mat values = same ? gram_self(spec, a) : gram(spec, a, b);
    return GramBlock{std::move(values), std::move(a_id), std::move(b_id)};
}

}  // namespace nykpca
