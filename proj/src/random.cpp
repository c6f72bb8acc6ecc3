#include "spconv/random.hpp"

#include <random>

namespace spconv {

TensorD random_normal(std::vector<std::size_t> shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    TensorD t(std::move(shape));
    for (double& v : t.mutable_data()) v = dist(rng);
    return t;
}

ConvKernel random_kernel(int k, int c_in, int c_out, int s, int n, std::uint64_t seed) {
    TensorD w = random_normal({static_cast<std::size_t>(k), static_cast<std::size_t>(k),
                               static_cast<std::size_t>(c_in), static_cast<std::size_t>(c_out)},
                              seed);
    return ConvKernel(std::move(w), s, n);
}

TTKernel random_tt_kernel(int k, int c_in, int c_out, int r1, int r2, int s, int n,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd f1(c_in, r1), f3(r2, c_out);
    for (int i = 0; i < c_in; ++i)
        for (int a = 0; a < r1; ++a) f1(i, a) = dist(rng);
    TensorD core({static_cast<std::size_t>(k), static_cast<std::size_t>(k),
                  static_cast<std::size_t>(r1), static_cast<std::size_t>(r2)});
    for (double& v : core.mutable_data()) v = dist(rng);
    for (int b = 0; b < r2; ++b)
        for (int j = 0; j < c_out; ++j) f3(b, j) = dist(rng);
    return TTKernel(std::move(f1), std::move(core), std::move(f3), s, n);
}

}  // namespace spconv
