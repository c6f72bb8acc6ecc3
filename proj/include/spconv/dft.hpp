#pragma once

#include <Eigen/Dense>

namespace spconv {

/// Unnormalized Fourier matrix: F(p, q) = exp(-2*pi*i*p*q / m).
Eigen::MatrixXcd dft_matrix(int m);

/// Unnormalized forward 2-D DFT of a square matrix: B = F * A * F (F is symmetric).
Eigen::MatrixXcd dft2(const Eigen::MatrixXcd& a);

/// Inverse of dft2: A = conj(F) * B * conj(F) / m^2.
Eigen::MatrixXcd idft2(const Eigen::MatrixXcd& b);

}  // namespace spconv
