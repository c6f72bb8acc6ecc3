#include "spconv/tt.hpp"

#include <algorithm>
#include <cmath>

namespace spconv {

namespace {

constexpr double kRankTol = 1e-12;

// Flip column signs so the largest-magnitude entry of each column is positive.
void fix_column_signs(Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        Eigen::Index imax;
        m.col(c).cwiseAbs().maxCoeff(&imax);
        if (m(imax, c) < 0.0) m.col(c) = -m.col(c);
    }
}

// Economy QR with nonnegative diagonal of R, so the factors are deterministic.
void thin_qr(const Eigen::MatrixXd& a, Eigen::MatrixXd& q, Eigen::MatrixXd& r) {
    const Eigen::Index cols = a.cols();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), cols);
    r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < cols; ++i)
        if (r(i, i) < 0.0) {
            q.col(i) = -q.col(i);
            r.row(i) = -r.row(i);
        }
}

}  // namespace

TTKernel::TTKernel(Eigen::MatrixXd f1, TensorD core, Eigen::MatrixXd f3, int s, int n)
    : k1(std::move(f1)), k2(std::move(core)), k3(std::move(f3)), stride(s), signal_size(n) {
    if (k2.rank() != 4) throw DimensionError("TT core must be a 4-D tensor k x k x r1 x r2");
    if (k2.extent(0) != k2.extent(1)) throw DimensionError("TT core filter modes must be square");
    if (static_cast<int>(k2.extent(2)) != r1() || static_cast<int>(k2.extent(3)) != r2())
        throw DimensionError("TT core ranks do not match the frame matrices");
    if (r1() < 1 || r1() > c_in()) throw DimensionError("rank r1 must satisfy 1 <= r1 <= c_in");
    if (r2() < 1 || r2() > c_out()) throw DimensionError("rank r2 must satisfy 1 <= r2 <= c_out");
    if (s < 1) throw DimensionError("stride must be positive");
    if (n < 1) throw DimensionError("signal size must be positive");
    if (k() > n) throw DimensionError("TT core size k exceeds signal size n");
    if (n % s != 0) throw DimensionError("signal size must be divisible by the stride");
}

OrthoReport ortho_report(const TTKernel& tt) {
    OrthoReport rep;
    const int r1 = tt.r1(), r2 = tt.r2();
    rep.left_residual =
        (tt.k1.transpose() * tt.k1 - Eigen::MatrixXd::Identity(r1, r1)).norm();
    rep.right_residual =
        (tt.k3 * tt.k3.transpose() - Eigen::MatrixXd::Identity(r2, r2)).norm();

    Eigen::JacobiSVD<Eigen::MatrixXd> s1(tt.k1);
    Eigen::JacobiSVD<Eigen::MatrixXd> s3(tt.k3.transpose());
    rep.left_smin = s1.singularValues().minCoeff();
    rep.right_smin = s3.singularValues().minCoeff();
    rep.left_full_rank = rep.left_smin > kRankTol * std::max(1.0, s1.singularValues().maxCoeff());
    rep.right_full_rank = rep.right_smin > kRankTol * std::max(1.0, s3.singularValues().maxCoeff());
    return rep;
}

ConvKernel tt_reconstruct(const TTKernel& tt) {
    const int k = tt.k(), r1 = tt.r1(), r2 = tt.r2();
    const int ci = tt.c_in(), co = tt.c_out();
    TensorD w({static_cast<std::size_t>(k), static_cast<std::size_t>(k),
               static_cast<std::size_t>(ci), static_cast<std::size_t>(co)});
    Eigen::MatrixXd core(r1, r2);
    for (int p1 = 0; p1 < k; ++p1)
        for (int p2 = 0; p2 < k; ++p2) {
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b) core(a, b) = tt.k2(p1, p2, a, b);
            const Eigen::MatrixXd slice = tt.k1 * core * tt.k3;  // c_in x c_out
            for (int i = 0; i < ci; ++i)
                for (int j = 0; j < co; ++j) w(p1, p2, i, j) = slice(i, j);
        }
    return ConvKernel(std::move(w), tt.stride, tt.signal_size);
}

TTKernel tt_decompose(const ConvKernel& kern, int r1, int r2) {
    const int k = kern.k(), ci = kern.c_in(), co = kern.c_out();
    if (r1 < 1 || r1 > ci) throw DimensionError("rank r1 out of bounds");
    if (r2 < 1 || r2 > co) throw DimensionError("rank r2 out of bounds");

    // Unfold along the input-channel mode: rows c_in, columns (p1, p2, j).
    Eigen::MatrixXd m1(ci, k * k * co);
    for (int i = 0; i < ci; ++i)
        for (int p1 = 0; p1 < k; ++p1)
            for (int p2 = 0; p2 < k; ++p2)
                for (int j = 0; j < co; ++j)
                    m1(i, (p1 * k + p2) * co + j) = kern.weights(p1, p2, i, j);
    Eigen::BDCSVD<Eigen::MatrixXd> svd1(m1, Eigen::ComputeThinU);
    Eigen::MatrixXd f1 = svd1.matrixU().leftCols(r1);
    fix_column_signs(f1);

    // Project, then unfold along the output-channel mode.
    // G[p1,p2,a,j] = sum_i f1(i,a) * K[p1,p2,i,j]
    Eigen::MatrixXd g(k * k * r1, co);
    for (int p1 = 0; p1 < k; ++p1)
        for (int p2 = 0; p2 < k; ++p2) {
            Eigen::MatrixXd slice(ci, co);
            for (int i = 0; i < ci; ++i)
                for (int j = 0; j < co; ++j) slice(i, j) = kern.weights(p1, p2, i, j);
            g.middleRows((p1 * k + p2) * r1, r1) = f1.transpose() * slice;
        }
    Eigen::BDCSVD<Eigen::MatrixXd> svd2(g, Eigen::ComputeThinV);
    Eigen::MatrixXd v3 = svd2.matrixV().leftCols(r2);  // c_out x r2
    fix_column_signs(v3);

    TensorD core({static_cast<std::size_t>(k), static_cast<std::size_t>(k),
                  static_cast<std::size_t>(r1), static_cast<std::size_t>(r2)});
    for (int p1 = 0; p1 < k; ++p1)
        for (int p2 = 0; p2 < k; ++p2) {
            const Eigen::MatrixXd slice =
                g.middleRows((p1 * k + p2) * r1, r1) * v3;  // r1 x r2
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b) core(p1, p2, a, b) = slice(a, b);
        }
    return TTKernel(std::move(f1), std::move(core), v3.transpose(), kern.stride, kern.signal_size);
}

OrthogonalizeResult orthogonalize(const TTKernel& tt) {
    const int k = tt.k(), r1 = tt.r1(), r2 = tt.r2();

    Eigen::MatrixXd q1, rfac1, q3t, rfac3;
    thin_qr(tt.k1, q1, rfac1);
    thin_qr(tt.k3.transpose(), q3t, rfac3);

    TensorD core({static_cast<std::size_t>(k), static_cast<std::size_t>(k),
                  static_cast<std::size_t>(r1), static_cast<std::size_t>(r2)});
    Eigen::MatrixXd slice(r1, r2);
    for (int p1 = 0; p1 < k; ++p1)
        for (int p2 = 0; p2 < k; ++p2) {
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b) slice(a, b) = tt.k2(p1, p2, a, b);
            const Eigen::MatrixXd absorbed = rfac1 * slice * rfac3.transpose();
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b) core(p1, p2, a, b) = absorbed(a, b);
        }

    OrthogonalizeResult out;
    out.tt = TTKernel(std::move(q1), std::move(core), q3t.transpose(), tt.stride, tt.signal_size);
    out.report = ortho_report(out.tt);
    // Rank information refers to the input frames, not the Q factors.
    Eigen::JacobiSVD<Eigen::MatrixXd> s1(tt.k1);
    Eigen::JacobiSVD<Eigen::MatrixXd> s3(tt.k3.transpose());
    out.report.left_smin = s1.singularValues().minCoeff();
    out.report.right_smin = s3.singularValues().minCoeff();
    out.report.left_full_rank =
        out.report.left_smin > kRankTol * std::max(1.0, s1.singularValues().maxCoeff());
    out.report.right_full_rank =
        out.report.right_smin > kRankTol * std::max(1.0, s3.singularValues().maxCoeff());
    return out;
}

Spectrum tt_spectrum(const TTKernel& tt) {
    const OrthogonalizeResult ortho = orthogonalize(tt);
    const ConvKernel core(ortho.tt.k2, tt.stride, tt.signal_size);
    Spectrum sp = spectrum(core);
    const int m = tt.signal_size / tt.stride;
    const int s2 = tt.stride * tt.stride;
    const long full_count =
        static_cast<long>(m) * m * std::min(tt.c_out(), s2 * tt.c_in());
    sp.implied_zeros = static_cast<std::size_t>(full_count - static_cast<long>(sp.values.size()));
    return sp;
}

double orth_loss(std::span<const TTKernel> layers) {
    if (layers.empty()) throw DimensionError("orth_loss requires at least one layer");
    double num = 0.0, den = 0.0;
    for (const TTKernel& tt : layers) {
        const OrthoReport rep = ortho_report(tt);
        num += rep.left_residual * rep.left_residual + rep.right_residual * rep.right_residual;
        den += static_cast<double>(tt.r1()) * tt.r1() + static_cast<double>(tt.r2()) * tt.r2();
    }
    return num / den;
}

double combined_loss(double ce, std::span<const TTKernel> layers, double lambda_ort) {
    if (lambda_ort == 0.0) return ce;
    return ce + lambda_ort * orth_loss(layers);
}

}  // namespace spconv
