#include "spconv/tensor.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace spconv {

namespace {

std::size_t checked_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) {
        if (e == 0) throw DimensionError("tensor extents must be positive");
        n *= e;
    }
    return n;
}

}  // namespace

TensorD::TensorD(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_numel(shape_), 0.0) {}

TensorD::TensorD(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != checked_numel(shape_))
        throw DimensionError("tensor data length does not match the product of extents");
    for (double v : data_)
        if (!std::isfinite(v)) throw DimensionError("tensor contains a non-finite value");
}

std::vector<double> vec(const TensorD& t) {
    return std::vector<double>(t.data().begin(), t.data().end());
}

TensorD reshape(const TensorD& t, std::vector<std::size_t> new_shape) {
    if (checked_numel(new_shape) != t.size())
        throw DimensionError("reshape changes the number of elements");
    return TensorD(std::move(new_shape), vec(t));
}

ConvKernel::ConvKernel(TensorD w, int s, int n) : weights(std::move(w)), stride(s), signal_size(n) {
    if (weights.rank() != 4) throw DimensionError("kernel must be a 4-D tensor k x k x c_in x c_out");
    if (weights.extent(0) != weights.extent(1)) throw DimensionError("kernel filter modes must be square");
    if (s < 1) throw DimensionError("stride must be positive");
    if (n < 1) throw DimensionError("signal size must be positive");
    if (k() > n) throw DimensionError("kernel size k exceeds signal size n");
    if (n % s != 0) throw DimensionError("signal size must be divisible by the stride");
}

TensorD pad_kernel(const ConvKernel& kern) {
    const int k = kern.k(), n = kern.signal_size;
    const int ci = kern.c_in(), co = kern.c_out();
    if (k > n) throw DimensionError("cannot pad: kernel size k exceeds signal size n");
    TensorD out({static_cast<std::size_t>(n), static_cast<std::size_t>(n),
                 static_cast<std::size_t>(ci), static_cast<std::size_t>(co)});
    for (int p1 = 0; p1 < k; ++p1)
        for (int p2 = 0; p2 < k; ++p2)
            for (int i = 0; i < ci; ++i)
                for (int j = 0; j < co; ++j)
                    out(p1, p2, i, j) = kern.weights(p1, p2, i, j);
    return out;
}

}  // namespace spconv
