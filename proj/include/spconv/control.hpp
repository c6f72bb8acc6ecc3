#pragma once

#include <cstdint>
#include <vector>

#include "spconv/fft_spectrum.hpp"
#include "spconv/tensor.hpp"

namespace spconv {

inline constexpr int kDefaultPowerIters = 100;

struct PowerIterResult {
    double estimate = 0.0;
    std::vector<double> history;  // per-iteration estimates, non-decreasing after warmup
};

/// Power iteration on A^T A of the exact periodic operator: starting from a
/// seeded random unit signal, repeat x <- normalize(A^T(A x)); the estimate is
/// ||A x|| after the last step.  A zero kernel yields estimate 0.
PowerIterResult power_iteration_sigma1(const ConvKernel& kern, int iters, std::uint64_t seed);

/// Rescale the kernel so its power-iteration sigma_1 estimate equals target.
ConvKernel divide_to_target(const ConvKernel& kern, double target,
                            int iters = kDefaultPowerIters, std::uint64_t seed = 0);

struct ClipReport {
    double sigma1_pre = 0.0;
    double sigma1_expanded = 0.0;
    double sigma1_truncated = 0.0;  // reported only; the truncation step has no bound
};

struct ClipToThresholdResult {
    ConvKernel truncated;
    ClipReport report;
};

/// Clip singular values at delta and return the k x k truncated kernel plus
/// the sigma_1 values before clipping, after expansion and after truncation.
ClipToThresholdResult clip_to_threshold(const ConvKernel& kern, double delta);

struct LipschitzEstimate {
    double max_ratio = 0.0;
    std::vector<double> ratios;
};

/// Empirical Lipschitz ratios ||A d||_F / ||d||_F over seeded random
/// directions d; each ratio is a lower bound on sigma_1.
LipschitzEstimate empirical_lipschitz(const ConvKernel& kern, int probes, std::uint64_t seed);

}  // namespace spconv
