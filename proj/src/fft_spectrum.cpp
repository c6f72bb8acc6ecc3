#include "spconv/fft_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "spconv/dft.hpp"

namespace spconv {

namespace {

// Jacobi is more accurate for the small matrices dominating the test grids;
// BDC takes over once channel counts get large.
void thin_svd(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& u, Eigen::VectorXd& sigma,
              Eigen::MatrixXcd& v) {
    if (a.rows() <= 32 && a.cols() <= 32) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        u = svd.matrixU();
        sigma = svd.singularValues();
        v = svd.matrixV();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success)
            throw std::runtime_error("per-frequency SVD did not converge");
        u = svd.matrixU();
        sigma = svd.singularValues();
        v = svd.matrixV();
    }
}

}  // namespace

StridedReshape strided_reshape(const ConvKernel& kern) {
    const int n = kern.signal_size, s = kern.stride;
    const int m = n / s, ci = kern.c_in(), co = kern.c_out();
    const TensorD kpad = pad_kernel(kern);

    StridedReshape out;
    out.stride = s;
    out.grid = m;
    out.c_in = ci;
    out.c_out = co;
    out.k = kern.k();
    out.signal_size = n;
    out.r = TensorD({static_cast<std::size_t>(s) * s, static_cast<std::size_t>(m),
                     static_cast<std::size_t>(m), static_cast<std::size_t>(ci),
                     static_cast<std::size_t>(co)});
    for (int q = 0; q < s * s; ++q)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int i = 0; i < ci; ++i)
                    for (int j = 0; j < co; ++j)
                        out.r(q, a, b, i, j) = kpad(q / s + a * s, q % s + b * s, i, j);
    return out;
}

FrequencyFactors frequency_matrices(const StridedReshape& r) {
    const int s = r.stride, m = r.grid, ci = r.c_in, co = r.c_out;
    const int cols = s * s * ci;

    FrequencyFactors ff;
    ff.grid = m;
    ff.stride = s;
    ff.c_in = ci;
    ff.c_out = co;
    ff.k = r.k;
    ff.signal_size = r.signal_size;
    ff.p.assign(static_cast<std::size_t>(m) * m, Eigen::MatrixXcd::Zero(co, cols));

    Eigen::MatrixXcd slice(m, m);
    for (int j = 0; j < co; ++j)
        for (int d = 0; d < cols; ++d) {
            const int q = d % (s * s);
            const int i = d / (s * s);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    slice(a, b) = std::complex<double>(r.r(q, a, b, i, j), 0.0);
            const Eigen::MatrixXcd freq = dft2(slice);
            for (int p1 = 0; p1 < m; ++p1)
                for (int p2 = 0; p2 < m; ++p2)
                    ff.p[static_cast<std::size_t>(p1) * m + p2](j, d) = freq(p1, p2);
        }

    ff.u.resize(ff.p.size());
    ff.sigma.resize(ff.p.size());
    ff.v.resize(ff.p.size());
    for (std::size_t f = 0; f < ff.p.size(); ++f)
        thin_svd(ff.p[f], ff.u[f], ff.sigma[f], ff.v[f]);
    return ff;
}

Spectrum spectrum_from_factors(const FrequencyFactors& ff) {
    Spectrum sp;
    sp.grid = ff.grid;
    sp.groups.resize(ff.sigma.size());
    for (std::size_t f = 0; f < ff.sigma.size(); ++f) {
        sp.groups[f].assign(ff.sigma[f].data(), ff.sigma[f].data() + ff.sigma[f].size());
        std::sort(sp.groups[f].begin(), sp.groups[f].end(), std::greater<double>());
        sp.values.insert(sp.values.end(), sp.groups[f].begin(), sp.groups[f].end());
    }
    std::sort(sp.values.begin(), sp.values.end(), std::greater<double>());
    return sp;
}

Spectrum spectrum(const ConvKernel& kern) {
    return spectrum_from_factors(frequency_matrices(strided_reshape(kern)));
}

ClipResult clip_spectrum(const ConvKernel& kern, double delta) {
    if (!(delta > 0.0)) throw DimensionError("clipping threshold delta must be positive");
    const int n = kern.signal_size, s = kern.stride, k = kern.k();
    const int m = n / s, ci = kern.c_in(), co = kern.c_out();
    const int cols = s * s * ci;

    FrequencyFactors ff = frequency_matrices(strided_reshape(kern));

    // Rebuild each P with its singular values clipped at delta.
    std::vector<Eigen::MatrixXcd> clipped(ff.p.size());
    for (std::size_t f = 0; f < ff.p.size(); ++f) {
        Eigen::VectorXd sig = ff.sigma[f].cwiseMin(delta);
        clipped[f] = ff.u[f] * sig.asDiagonal() * ff.v[f].adjoint();
    }

    // Invert the DFT per (j, d) slice, then the strided reshape.
    TensorD expanded({static_cast<std::size_t>(n), static_cast<std::size_t>(n),
                      static_cast<std::size_t>(ci), static_cast<std::size_t>(co)});
    Eigen::MatrixXcd freq(m, m);
    for (int j = 0; j < co; ++j)
        for (int d = 0; d < cols; ++d) {
            const int q = d % (s * s);
            const int i = d / (s * s);
            for (int p1 = 0; p1 < m; ++p1)
                for (int p2 = 0; p2 < m; ++p2)
                    freq(p1, p2) = clipped[static_cast<std::size_t>(p1) * m + p2](j, d);
            const Eigen::MatrixXcd spatial = idft2(freq);
            if (spatial.imag().cwiseAbs().maxCoeff() > 1e-9)
                throw std::runtime_error("clipping reconstruction left a non-real kernel");
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    expanded(q / s + a * s, q % s + b * s, i, j) = spatial(a, b).real();
        }

    TensorD window({static_cast<std::size_t>(k), static_cast<std::size_t>(k),
                    static_cast<std::size_t>(ci), static_cast<std::size_t>(co)});
    for (int p1 = 0; p1 < k; ++p1)
        for (int p2 = 0; p2 < k; ++p2)
            for (int i = 0; i < ci; ++i)
                for (int j = 0; j < co; ++j)
                    window(p1, p2, i, j) = expanded(p1, p2, i, j);

    ClipResult out;
    out.expanded = ConvKernel(std::move(expanded), s, n);
    out.truncated = ConvKernel(std::move(window), s, n);
    return out;
}

}  // namespace spconv
