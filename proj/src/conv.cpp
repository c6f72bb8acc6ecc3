#include "spconv/conv.hpp"

namespace spconv {

namespace {

void check_signal(const ConvKernel& kern, const TensorD& t, int channels, int spatial, const char* what) {
    if (t.rank() != 3 || static_cast<int>(t.extent(0)) != channels ||
        static_cast<int>(t.extent(1)) != spatial || static_cast<int>(t.extent(2)) != spatial)
        throw DimensionError(std::string(what) + ": signal shape does not match the kernel");
    (void)kern;
}

}  // namespace

TensorD conv_apply(const ConvKernel& kern, const TensorD& x) {
    const int n = kern.signal_size, s = kern.stride, k = kern.k();
    const int ci = kern.c_in(), co = kern.c_out(), m = kern.out_size();
    check_signal(kern, x, ci, n, "conv_apply");

    TensorD y({static_cast<std::size_t>(co), static_cast<std::size_t>(m), static_cast<std::size_t>(m)});
    for (int j = 0; j < co; ++j)
        for (int q1 = 0; q1 < m; ++q1)
            for (int q2 = 0; q2 < m; ++q2) {
                double acc = 0.0;
                for (int i = 0; i < ci; ++i)
                    for (int p1 = 0; p1 < k; ++p1) {
                        const int a = (q1 * s + p1) % n;
                        for (int p2 = 0; p2 < k; ++p2) {
                            const int b = (q2 * s + p2) % n;
                            acc += kern.weights(p1, p2, i, j) * x(i, a, b);
                        }
                    }
                y(j, q1, q2) = acc;
            }
    return y;
}

TensorD conv_adjoint_apply(const ConvKernel& kern, const TensorD& y) {
    const int n = kern.signal_size, s = kern.stride, k = kern.k();
    const int ci = kern.c_in(), co = kern.c_out(), m = kern.out_size();
    check_signal(kern, y, co, m, "conv_adjoint_apply");

    TensorD x({static_cast<std::size_t>(ci), static_cast<std::size_t>(n), static_cast<std::size_t>(n)});
    for (int j = 0; j < co; ++j)
        for (int q1 = 0; q1 < m; ++q1)
            for (int q2 = 0; q2 < m; ++q2) {
                const double v = y(j, q1, q2);
                for (int i = 0; i < ci; ++i)
                    for (int p1 = 0; p1 < k; ++p1) {
                        const int a = (q1 * s + p1) % n;
                        for (int p2 = 0; p2 < k; ++p2) {
                            const int b = (q2 * s + p2) % n;
                            x(i, a, b) += kern.weights(p1, p2, i, j) * v;
                        }
                    }
            }
    return x;
}

}  // namespace spconv
