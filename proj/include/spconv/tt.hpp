#pragma once

#include <Eigen/Dense>
#include <span>

#include "spconv/fft_spectrum.hpp"
#include "spconv/tensor.hpp"

namespace spconv {

/// Tensor-train (Tucker-2) compressed convolution kernel:
/// K[p1,p2,i,j] = sum_{a,b} K1[i,a] * K2[p1,p2,a,b] * K3[b,j],
/// with frame matrices K1 (c_in x r1), K3 (r2 x c_out) and middle core
/// K2 (k x k x r1 x r2).
struct TTKernel {
    Eigen::MatrixXd k1;
    TensorD k2;
    Eigen::MatrixXd k3;
    int stride = 1;
    int signal_size = 0;

    TTKernel() = default;
    TTKernel(Eigen::MatrixXd f1, TensorD core, Eigen::MatrixXd f3, int s, int n);

    int k() const { return static_cast<int>(k2.extent(0)); }
    int r1() const { return static_cast<int>(k1.cols()); }
    int r2() const { return static_cast<int>(k3.rows()); }
    int c_in() const { return static_cast<int>(k1.rows()); }
    int c_out() const { return static_cast<int>(k3.cols()); }
};

/// Orthogonality diagnostics of the frame matrices.
struct OrthoReport {
    double left_residual = 0.0;   // ||K1^T K1 - I||_F
    double right_residual = 0.0;  // ||K3 K3^T - I||_F
    double left_smin = 0.0;       // smallest singular value of K1
    double right_smin = 0.0;      // smallest singular value of K3^T
    bool left_full_rank = true;
    bool right_full_rank = true;
};

OrthoReport ortho_report(const TTKernel& tt);

/// Contract the three factors back into a full k x k x c_in x c_out kernel.
ConvKernel tt_reconstruct(const TTKernel& tt);

/// TT-SVD: best-effort rank-(r1, r2) approximation by sequential truncated
/// SVDs of the c_in and c_out unfoldings.  Deterministic sign convention:
/// the largest-magnitude entry of each retained singular vector is positive.
TTKernel tt_decompose(const ConvKernel& kern, int r1, int r2);

struct OrthogonalizeResult {
    TTKernel tt;
    OrthoReport report;
};

/// QR-based re-parameterization: returns (Q1, R1 K2 R3^T, Q3) with
/// Q1^T Q1 = I and Q3 Q3^T = I, leaving the reconstructed kernel unchanged.
/// Rank-deficient frames are flagged in the report; QR still proceeds.
OrthogonalizeResult orthogonalize(const TTKernel& tt);

/// Nonzero singular values of the full layer: orthogonalize, then run the
/// FFT spectrum on the middle core treated as an r1 -> r2 convolution.
/// Zeros implied by rank reduction are counted in Spectrum::implied_zeros.
Spectrum tt_spectrum(const TTKernel& tt);

/// Mean-squared non-orthogonality of the frame matrices across layers:
/// (sum_i ||K1_i^T K1_i - I||_F^2 + ||K3_i K3_i^T - I||_F^2) / (sum_i r1_i^2 + r2_i^2).
double orth_loss(std::span<const TTKernel> layers);

inline constexpr double kDefaultLambdaOrt = 1e5;

/// ce + lambda_ort * orth_loss(layers).
double combined_loss(double ce, std::span<const TTKernel> layers, double lambda_ort);

}  // namespace spconv
