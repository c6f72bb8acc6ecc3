#pragma once

#include "spconv/tensor.hpp"

namespace spconv {

/// Periodic (circular) strided correlation:
///   Y[j,q1,q2] = sum_i sum_{p1,p2<k} K[p1,p2,i,j] * x[i, (q1*s+p1) mod n, (q2*s+p2) mod n].
/// Input x: c_in x n x n, output: c_out x (n/s) x (n/s).
TensorD conv_apply(const ConvKernel& kern, const TensorD& x);

/// Adjoint of conv_apply under the row-major vec convention:
/// vec(result) = T_K^T vec(y).  Input y: c_out x (n/s) x (n/s), output: c_in x n x n.
TensorD conv_adjoint_apply(const ConvKernel& kern, const TensorD& y);

}  // namespace spconv
