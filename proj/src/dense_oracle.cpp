#include "spconv/dense_oracle.hpp"

#include <algorithm>
#include <string>

#include "spconv/conv.hpp"

namespace spconv {

DenseOperator build_dense_operator(const ConvKernel& kern, std::size_t column_cap) {
    const int n = kern.signal_size, ci = kern.c_in(), co = kern.c_out(), m = kern.out_size();
    const std::size_t cols = static_cast<std::size_t>(ci) * n * n;
    const std::size_t rows = static_cast<std::size_t>(co) * m * m;
    if (cols > column_cap)
        throw DimensionError("dense oracle refused: c_in*n^2 = " + std::to_string(cols) +
                             " exceeds the column cap " + std::to_string(column_cap));

    DenseOperator op;
    op.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    op.k = kern.k();
    op.c_in = ci;
    op.c_out = co;
    op.stride = kern.stride;
    op.signal_size = n;

    TensorD basis({static_cast<std::size_t>(ci), static_cast<std::size_t>(n), static_cast<std::size_t>(n)});
    for (std::size_t c = 0; c < cols; ++c) {
        basis[c] = 1.0;
        const TensorD y = conv_apply(kern, basis);
        for (std::size_t r = 0; r < rows; ++r)
            op.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = y[r];
        basis[c] = 0.0;
    }
    return op;
}

std::vector<double> dense_spectrum(const DenseOperator& op) {
    // Jacobi, not BDC: convolution operators have heavily degenerate spectra
    // and BDCSVD (Eigen 3.4) loses several digits on exactly those matrices.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(op.matrix);
    const auto& sv = svd.singularValues();
    std::vector<double> out(sv.data(), sv.data() + sv.size());
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

}  // namespace spconv
