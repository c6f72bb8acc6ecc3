#pragma once

#include <cstdint>

#include "spconv/tensor.hpp"
#include "spconv/tt.hpp"

namespace spconv {

/// Standard-normal tensor, reproducible from (shape, seed).
TensorD random_normal(std::vector<std::size_t> shape, std::uint64_t seed);

/// Kernel with i.i.d. standard-normal weights.
ConvKernel random_kernel(int k, int c_in, int c_out, int s, int n, std::uint64_t seed);

/// TT kernel with i.i.d. standard-normal factors.
TTKernel random_tt_kernel(int k, int c_in, int c_out, int r1, int r2, int s, int n,
                          std::uint64_t seed);

}  // namespace spconv
