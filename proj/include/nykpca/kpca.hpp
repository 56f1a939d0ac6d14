#pragma once

#include <cstdint>
#include <string>

#include "nykpca/dataset.hpp"
#include "nykpca/kernel.hpp"
#include "nykpca/sampling.hpp"
#include "nykpca/types.hpp"

namespace nykpca {

// Exact empirical kernel PCA: the top-ell eigenpairs of (1/n) K.
// Column i of `alphas` holds u_i / sqrt(n lambda_i), the dual coefficients of
// the i-th component function x -> sum_j alphas(j, i) k(x, X_j), so
// alphas^T K alphas = I.
struct EkpcaModel {
    int ell = 0;
    Vec eigvals;          // top-ell eigenvalues of (1/n) K, descending
    Mat alphas;           // n x ell dual coefficients
    Dataset train;        // expansion points
    KernelSpec spec;
    double trace_over_n = 0.0;  // (1/n) tr K
    Vec all_eigvals;            // full spectrum of (1/n) K

    Index n() const { return train.n(); }
};

// Nystrom-subsampled kernel PCA. Built on the distinct landmark points only:
// with R = K_mm^{-1/2} and M = R K_mn K_nm R, the top-ell eigenpairs of
// (1/n) M give component functions x -> sum_j betas(j, i) k(x, L_j) where
// betas column i = R u_i, so betas^T K_mm betas = I. The model never holds
// an n x n object; it keeps O(m (d + ell)) numbers.
struct NystromModel {
    int ell = 0;
    int m_distinct = 0;
    RowMat landmarks;     // m_distinct x d
    Vec eigvals_m;        // top-ell eigenvalues of (1/n) M, descending
    Mat betas;            // m_distinct x ell dual coefficients
    KernelSpec spec;
    double trace_over_n = 0.0;  // (1/n) tr K, accumulated from kernel diagonals
    Vec all_eigvals_m;          // full spectrum of (1/n) M
    SamplingScheme scheme = SamplingScheme::PlainUniform;
    std::uint64_t seed = 0;
};

// O(n^3) exact fit. Requires 1 <= ell <= n and the top-ell eigenvalues above
// the retention floor 1e-12 * trace_over_n.
EkpcaModel fit_ekpca(const Dataset& data, const KernelSpec& spec, int ell);

// O(n m^2 + m^3) Nystrom fit on the landmark set's distinct points.
NystromModel fit_nystrom(const Dataset& data, const KernelSpec& spec,
                         const LandmarkSet& landmarks, int ell);

// Component scores for p query points; entry (a, i) is the i-th component
// function evaluated at row a.
Mat project_ekpca(const EkpcaModel& model, const RowMat& points);
Mat project_nystrom(const NystromModel& model, const RowMat& points);

// Empirical reconstruction error of the ell-dimensional eigenspace.
// EKPCA: the tail sum of the spectrum of (1/n) K beyond ell.
// Nystrom: (1/n) tr K minus the top-ell eigenvalues of (1/n) M.
// ell = 0 is the empty projector (error = (1/n) tr K). The *_at variants
// re-evaluate a fitted model at any ell without refitting.
double recon_error_ekpca(const EkpcaModel& model);
double recon_error_ekpca_at(const EkpcaModel& model, int ell);
double recon_error_nystrom(const NystromModel& model);
double recon_error_nystrom_at(const NystromModel& model, int ell);

// Brute-force reconstruction error of an arbitrary orthonormal basis
// {f_1..f_ell} given in dual form f_j = sum_p coeffs(p, j) k(., basis_points_p):
//   (1/n) sum_i [ k(X_i, X_i) - sum_j f_j(X_i)^2 ].
// Verifies coeffs^T K_basis coeffs = I to 1e-6 first. This path shares no
// code with the eigenvalue-based formulas above and serves as their oracle.
double recon_error_oracle(const Dataset& data, const KernelSpec& spec, const Mat& coeffs,
                          const RowMat& basis_points);

// Model persistence: a self-describing container (magic + JSON header +
// raw little-endian IEEE-754 arrays). Round trips are value-exact for every
// float.
void save_ekpca(const EkpcaModel& model, const std::string& path);
EkpcaModel load_ekpca(const std::string& path);
void save_nystrom(const NystromModel& model, const std::string& path);
NystromModel load_nystrom(const std::string& path);

}  // namespace nykpca
