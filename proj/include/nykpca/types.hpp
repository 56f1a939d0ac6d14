#pragma once

#include <Eigen/Dense>

namespace nykpca {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Sample matrices are row-major so that a sample (a row) is contiguous.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Index = Eigen::Index;

}  // namespace nykpca
