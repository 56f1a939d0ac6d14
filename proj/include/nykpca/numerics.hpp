#pragma once

#include "nykpca/errors.hpp"
#include "nykpca/types.hpp"

namespace nykpca {

// Full spectrum of a symmetric matrix.
//   values   sorted descending (ties keep the solver's order, which is
//            deterministic for identical input bytes)
//   vectors  column i is the unit eigenvector for values[i]; the first entry
//            with |entry| > 1e-12 is made positive so repeated runs and
//            cross-implementation comparisons agree on signs
struct EigenDecomposition {
    Vec values;
    Mat vectors;
};

// Dense symmetric eigensolver. The input must be symmetric to within 1e-8
// relative tolerance; it is symmetrized as (A + A^T)/2 before solving.
EigenDecomposition sym_eig(const Mat& a);

struct InvSqrtPsd {
    Mat matrix;          // V diag(f(lambda)) V^T with f(l) = l^{-1/2} above the floor, else 0
    int effective_rank;  // #{lambda > floor}
};

// Spectral pseudo inverse square root of a symmetric PSD matrix. Eigenvalues
// at or below `floor` are dropped (their reciprocal square root would be
// meaningless in double precision for near-duplicate landmark sets).
InvSqrtPsd inv_sqrt_psd(const Mat& a, double floor);

// default eigenvalue floor used throughout: 1e-12 * trace
double default_floor(double trace);

// X = (A + shift I)^{-1} B via Cholesky on the symmetrized input; shift > 0.
Mat psd_solve(const Mat& a, double shift, const Mat& b);

}  // namespace nykpca
