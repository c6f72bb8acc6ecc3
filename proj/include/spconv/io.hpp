#pragma once

#include <filesystem>
#include <optional>

#include "spconv/tensor.hpp"
#include "spconv/tt.hpp"

namespace spconv {

/// Binary kernel interchange format:
///   magic "SPCK1" | u8 dtype (0 = f64 little-endian) | u8 role (0 FULL, 1 TT)
///   u32 k, c_in, c_out, s, n  [+ u32 r1, r2 for TT]
///   payload: raw row-major f64 values; for TT: K1, K2, K3 concatenated.
struct KernelFile {
    enum class Role : std::uint8_t { Full = 0, TT = 1 };
    Role role = Role::Full;
    std::optional<ConvKernel> full;
    std::optional<TTKernel> tt;
};

void save_kernel(const std::filesystem::path& path, const ConvKernel& kern);
void save_kernel(const std::filesystem::path& path, const TTKernel& tt);

/// Throws FileFormatError on malformed files and DimensionError when the
/// declared dimensions violate a kernel invariant.
KernelFile load_kernel(const std::filesystem::path& path);

}  // namespace spconv
