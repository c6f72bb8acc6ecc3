#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "spconv/tensor.hpp"

namespace spconv {

/// Multiset of singular values of a convolutional operator, sorted descending,
/// with optional grouping by frequency index (p1, p2) in [0, n/s)^2.
/// Frequency indices are 0-based.
struct Spectrum {
    std::vector<double> values;               // sorted descending
    int grid = 0;                             // n/s; 0 when grouping absent
    std::vector<std::vector<double>> groups;  // index p1*grid + p2, each sorted descending
    std::size_t implied_zeros = 0;            // zeros implied by rank reduction, not materialized

    double max() const { return values.empty() ? 0.0 : values.front(); }
    const std::vector<double>& group(int p1, int p2) const { return groups[p1 * grid + p2]; }
};

/// The stride-grouped kernel of shape s^2 x (n/s) x (n/s) x c_in x c_out with
///   R[q,a,b,i,j] = Kpad[floor(q/s) + a*s, (q mod s) + b*s, i, j].
struct StridedReshape {
    TensorD r;
    int stride = 1;
    int grid = 0;  // n/s
    int c_in = 0, c_out = 0;
    int k = 0, signal_size = 0;
};

/// Per-frequency matrices P^(p1,p2) of shape c_out x (s^2*c_in), each with its
/// thin SVD retained so clipping can rebuild the kernel without recomputation.
/// Rows are output channels; column d holds stride group q = d mod s^2 of
/// input channel floor(d / s^2).  Stride offsets decompose the *input*
/// positions (the output grid is the subsampled one), which is what makes the
/// union of per-frequency singular values equal sigma(T_K) for s > 1.
struct FrequencyFactors {
    int grid = 0;  // n/s
    int stride = 1;
    int c_in = 0, c_out = 0;
    int k = 0, signal_size = 0;
    std::vector<Eigen::MatrixXcd> p;      // grid*grid matrices, index p1*grid + p2
    std::vector<Eigen::MatrixXcd> u;      // thin left factors
    std::vector<Eigen::VectorXd> sigma;   // descending
    std::vector<Eigen::MatrixXcd> v;      // thin right factors (P = U diag(sigma) V^*)
};

StridedReshape strided_reshape(const ConvKernel& kern);

FrequencyFactors frequency_matrices(const StridedReshape& r);

/// Exact singular values of T_K: union over the (n/s)^2 frequencies of the
/// singular values of P^(p1,p2).  Count = (n/s)^2 * min(c_out, s^2*c_in).
Spectrum spectrum(const ConvKernel& kern);

/// Collect, sort and group the values held in FrequencyFactors.
Spectrum spectrum_from_factors(const FrequencyFactors& ff);

struct ClipResult {
    ConvKernel expanded;   // full spatial support n x n x c_in x c_out, exactly clipped
    ConvKernel truncated;  // leading k x k window of the expanded kernel (approximate)
};

/// Replace every singular value above delta with delta, rebuild the
/// per-frequency matrices and invert the DFT + strided reshape.
ClipResult clip_spectrum(const ConvKernel& kern, double delta);

}  // namespace spconv
