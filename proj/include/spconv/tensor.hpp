#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spconv/errors.hpp"

namespace spconv {

/// Dense multidimensional array of doubles in row-major order.
/// Immutable by convention after construction; all operations on it are pure.
class TensorD {
public:
    TensorD() = default;

    // Zero-initialized tensor of the given shape.
    explicit TensorD(std::vector<std::size_t> shape);

    // Takes ownership of data; validates length and finiteness.
    TensorD(std::vector<std::size_t> shape, std::vector<double> data);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t extent(std::size_t mode) const { return shape_[mode]; }

    std::span<const double> data() const { return data_; }
    std::span<double> mutable_data() { return data_; }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    // Row-major indexing: (i0, i1, ..., i_{r-1}).
    template <class... Ix>
    double operator()(Ix... ix) const {
        return data_[offset(ix...)];
    }
    template <class... Ix>
    double& operator()(Ix... ix) {
        return data_[offset(ix...)];
    }

    template <class... Ix>
    std::size_t offset(Ix... ix) const {
        const std::size_t idx[] = {static_cast<std::size_t>(ix)...};
        std::size_t off = 0;
        for (std::size_t m = 0; m < sizeof...(Ix); ++m) off = off * shape_[m] + idx[m];
        return off;
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

/// Row-major flattening of a tensor into a plain vector.
std::vector<double> vec(const TensorD& t);

/// Same data, new shape; element counts must match.
TensorD reshape(const TensorD& t, std::vector<std::size_t> new_shape);

/// A multichannel periodic convolution kernel together with its stride and
/// the spatial size of the signals it acts on.  Weights have shape
/// k x k x c_in x c_out; the operator maps c_in x n x n -> c_out x (n/s) x (n/s).
struct ConvKernel {
    TensorD weights;
    int stride = 1;
    int signal_size = 0;

    ConvKernel() = default;
    ConvKernel(TensorD w, int s, int n);

    int k() const { return static_cast<int>(weights.extent(0)); }
    int c_in() const { return static_cast<int>(weights.extent(2)); }
    int c_out() const { return static_cast<int>(weights.extent(3)); }
    int out_size() const { return signal_size / stride; }
};

/// Zero-pad the filter modes of a kernel up to the signal size, appending
/// zeros at the high-index side.  Result shape: n x n x c_in x c_out.
TensorD pad_kernel(const ConvKernel& kern);

}  // namespace spconv
