#include "spconv/dft.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

namespace spconv {

Eigen::MatrixXcd dft_matrix(int m) {
    Eigen::MatrixXcd f(m, m);
    const double w = -2.0 * std::numbers::pi / m;
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            f(p, q) = std::polar(1.0, w * ((static_cast<long long>(p) * q) % m));
    return f;
}

namespace {

// Transform sizes in this library are tiny (n/s), so a cached dense Fourier
// matrix beats a general FFT and handles non-power-of-two sizes uniformly.
const Eigen::MatrixXcd& cached_dft(int m) {
    static std::map<int, Eigen::MatrixXcd> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, dft_matrix(m)).first;
    return it->second;
}

}  // namespace

Eigen::MatrixXcd dft2(const Eigen::MatrixXcd& a) {
    const auto& f = cached_dft(static_cast<int>(a.rows()));
    return f * a * f;
}

Eigen::MatrixXcd idft2(const Eigen::MatrixXcd& b) {
    const int m = static_cast<int>(b.rows());
    const Eigen::MatrixXcd fc = cached_dft(m).conjugate();
    return (fc * b * fc) / (static_cast<double>(m) * m);
}

}  // namespace spconv
