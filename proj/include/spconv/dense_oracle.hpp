#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spconv/tensor.hpp"

namespace spconv {

/// Explicit matrix T_K of a strided periodic convolution, of shape
/// (c_out*(n/s)^2) x (c_in*n^2).  Intentionally naive; the ground truth
/// for every spectral claim at small sizes.
struct DenseOperator {
    Eigen::MatrixXd matrix;
    int k = 0, c_in = 0, c_out = 0, stride = 1, signal_size = 0;
};

inline constexpr std::size_t kDefaultOracleColumnCap = 16384;

/// Build T_K column by column by probing conv_apply with standard basis
/// tensors, so the oracle stays independent of any FFT index convention.
/// Refuses kernels with c_in*n^2 columns above the cap.
DenseOperator build_dense_operator(const ConvKernel& kern,
                                   std::size_t column_cap = kDefaultOracleColumnCap);

/// All singular values of the matrix, sorted descending; count = min(rows, cols).
std::vector<double> dense_spectrum(const DenseOperator& op);

}  // namespace spconv
