#pragma once

#include <cmath>
#include <string>

#include "nykpca/errors.hpp"
#include "nykpca/types.hpp"

namespace nykpca {

enum class KernelFamily { Gaussian, Linear, Polynomial };

// Kernel function and its parameters.
//   Gaussian:   k(x, y) = exp(-sigma * ||x - y||^2)
//   Linear:     k(x, y) = <x, y>
//   Polynomial: k(x, y) = (<x, y> + offset)^degree
// All families are bounded on bounded data, and Gaussian/Polynomial with
// offset > 0 are strictly positive definite on distinct points.
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double sigma = 1.0;   // Gaussian bandwidth factor, units 1/length^2
    int degree = 2;       // Polynomial
    double offset = 0.0;  // Polynomial

    void validate() const {
        switch (family) {
            case KernelFamily::Gaussian:
                if (!(sigma > 0.0)) throw UsageError("Gaussian kernel requires sigma > 0");
                break;
            case KernelFamily::Linear:
                break;
            case KernelFamily::Polynomial:
                if (degree < 1) throw UsageError("polynomial kernel requires degree >= 1");
                if (!(offset >= 0.0)) throw UsageError("polynomial kernel requires offset >= 0");
                break;
        }
    }

    std::string name() const {
        switch (family) {
            case KernelFamily::Gaussian: return "gaussian";
            case KernelFamily::Linear: return "linear";
            default: return "polynomial";
        }
    }
};

namespace detail {

inline double pow_int(double base, int e) {
    double r = 1.0;
    for (double b = base;; b *= b) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e == 0) return r;
    }
}

// Kernel value for two contiguous rows of equal length. The Gaussian squared
// distance is accumulated as sum((x_i - y_i)^2) directly; the expanded
// ||x||^2 + ||y||^2 - 2<x,y> form cancels catastrophically on near-duplicate
// rows and is not used.
template <typename RowA, typename RowB>
inline double eval_rows(const KernelSpec& spec, const RowA& x, const RowB& y) {
    switch (spec.family) {
        case KernelFamily::Gaussian:
            return std::exp(-spec.sigma * (x - y).squaredNorm());
        case KernelFamily::Linear:
            return x.dot(y);
        default:
            return pow_int(x.dot(y) + spec.offset, spec.degree);
    }
}

}  // namespace detail

// k(x, y) for two points. Symmetric in its arguments by construction.
double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Vec>& x,
                   const Eigen::Ref<const Vec>& y);

// k(x, x) without forming a pair.
double kernel_diag(const KernelSpec& spec, const Eigen::Ref<const Vec>& x);

// p x q block of kernel evaluations between the rows of a and the rows of b.
// Entry (i, j) is exactly eval_kernel(spec, a.row(i), b.row(j)); rows are
// assembled in parallel, and every entry is a pure function of its two rows,
// so the result does not depend on the thread count.
Mat gram(const KernelSpec& spec, const RowMat& a, const RowMat& b);

// Self Gram matrix: only the upper triangle is computed and the lower is
// mirrored, so the output is exactly symmetric.
Mat gram_self(const KernelSpec& spec, const RowMat& a);

// mean of k(x_i, x_i) over the rows of a, i.e. (1/n) tr K without forming K
double mean_kernel_diag(const KernelSpec& spec, const RowMat& a);

// Gram block with provenance tags for the two sample sets. Blocks whose row
// and column sources coincide are exactly symmetric.
struct GramBlock {
    Mat values;
    std::string row_source;
    std::string col_source;
};

GramBlock gram_block(const KernelSpec& spec, const RowMat& a, std::string a_id,
                     const RowMat& b, std::string b_id);

}  // namespace nykpca
