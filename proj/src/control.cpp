#include "spconv/control.hpp"

#include <cmath>

#include "spconv/conv.hpp"
#include "spconv/random.hpp"

namespace spconv {

namespace {

double frob_norm(const TensorD& t) {
    double acc = 0.0;
    for (double v : t.data()) acc += v * v;
    return std::sqrt(acc);
}

void scale_in_place(TensorD& t, double alpha) {
    for (double& v : t.mutable_data()) v *= alpha;
}

}  // namespace

PowerIterResult power_iteration_sigma1(const ConvKernel& kern, int iters, std::uint64_t seed) {
    if (iters < 1) throw DimensionError("power iteration needs at least one iteration");
    const int n = kern.signal_size, ci = kern.c_in();

    TensorD x = random_normal({static_cast<std::size_t>(ci), static_cast<std::size_t>(n),
                               static_cast<std::size_t>(n)},
                              seed);
    const double x0 = frob_norm(x);
    if (x0 > 0.0) scale_in_place(x, 1.0 / x0);

    PowerIterResult out;
    out.history.reserve(iters);
    for (int it = 0; it < iters; ++it) {
        const TensorD y = conv_apply(kern, x);
        out.estimate = frob_norm(y);
        out.history.push_back(out.estimate);
        if (out.estimate == 0.0) break;  // zero kernel or x in the null space
        TensorD z = conv_adjoint_apply(kern, y);
        const double zn = frob_norm(z);
        if (zn == 0.0) break;
        scale_in_place(z, 1.0 / zn);
        x = std::move(z);
    }
    return out;
}

ConvKernel divide_to_target(const ConvKernel& kern, double target, int iters, std::uint64_t seed) {
    if (!(target > 0.0)) throw DimensionError("division target must be positive");
    const PowerIterResult pi = power_iteration_sigma1(kern, iters, seed);
    if (pi.estimate == 0.0)
        throw DegenerateInputError("cannot normalize a kernel with zero spectral norm");
    TensorD w = kern.weights;
    scale_in_place(w, target / pi.estimate);
    return ConvKernel(std::move(w), kern.stride, kern.signal_size);
}

ClipToThresholdResult clip_to_threshold(const ConvKernel& kern, double delta) {
    ClipToThresholdResult out;
    out.report.sigma1_pre = spectrum(kern).max();
    if (out.report.sigma1_pre <= delta) {
        // Nothing exceeds the threshold, so clipping is the identity; return
        // the input untouched instead of a DFT round trip of it.
        out.report.sigma1_expanded = out.report.sigma1_pre;
        out.report.sigma1_truncated = out.report.sigma1_pre;
        out.truncated = kern;
        return out;
    }
    ClipResult clip = clip_spectrum(kern, delta);
    out.report.sigma1_expanded = spectrum(clip.expanded).max();
    out.report.sigma1_truncated = spectrum(clip.truncated).max();
    out.truncated = std::move(clip.truncated);
    return out;
}

LipschitzEstimate empirical_lipschitz(const ConvKernel& kern, int probes, std::uint64_t seed) {
    if (probes < 1) throw DimensionError("at least one probe is required");
    const int n = kern.signal_size, ci = kern.c_in();

    LipschitzEstimate out;
    out.ratios.reserve(probes);
    for (int p = 0; p < probes; ++p) {
        const TensorD d = random_normal({static_cast<std::size_t>(ci), static_cast<std::size_t>(n),
                                         static_cast<std::size_t>(n)},
                                        seed + static_cast<std::uint64_t>(p));
        const double dn = frob_norm(d);
        const double ratio = dn > 0.0 ? frob_norm(conv_apply(kern, d)) / dn : 0.0;
        out.ratios.push_back(ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
    }
    return out;
}

}  // namespace spconv
