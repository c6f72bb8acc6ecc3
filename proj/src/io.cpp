#include "spconv/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace spconv {

namespace {

constexpr char kMagic[5] = {'S', 'P', 'C', 'K', '1'};
constexpr std::uint8_t kDtypeF64LE = 0;

static_assert(std::endian::native == std::endian::little,
              "KernelFile writer assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, const double* p, std::size_t count) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(count * sizeof(double)));
}

std::uint32_t get_u32(std::istream& in, const char* field) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw FileFormatError(std::string("kernel file truncated while reading ") + field);
    return v;
}

std::vector<double> get_f64(std::istream& in, std::size_t count) {
    std::vector<double> v(count);
    if (!in.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(count * sizeof(double))))
        throw FileFormatError("kernel file payload is shorter than the declared element count");
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileFormatError("cannot open " + path.string() + " for writing");
    return out;
}

void write_header(std::ostream& out, KernelFile::Role role, std::uint32_t k, std::uint32_t c_in,
                  std::uint32_t c_out, std::uint32_t s, std::uint32_t n) {
    out.write(kMagic, sizeof kMagic);
    const std::uint8_t dtype = kDtypeF64LE;
    const std::uint8_t role_tag = static_cast<std::uint8_t>(role);
    out.write(reinterpret_cast<const char*>(&dtype), 1);
    out.write(reinterpret_cast<const char*>(&role_tag), 1);
    put_u32(out, k);
    put_u32(out, c_in);
    put_u32(out, c_out);
    put_u32(out, s);
    put_u32(out, n);
}

}  // namespace

void save_kernel(const std::filesystem::path& path, const ConvKernel& kern) {
    std::ofstream out = open_out(path);
    write_header(out, KernelFile::Role::Full, kern.k(), kern.c_in(), kern.c_out(), kern.stride,
                 kern.signal_size);
    put_f64(out, kern.weights.data().data(), kern.weights.size());
    if (!out) throw FileFormatError("failed writing " + path.string());
}

void save_kernel(const std::filesystem::path& path, const TTKernel& tt) {
    std::ofstream out = open_out(path);
    write_header(out, KernelFile::Role::TT, tt.k(), tt.c_in(), tt.c_out(), tt.stride,
                 tt.signal_size);
    put_u32(out, tt.r1());
    put_u32(out, tt.r2());
    // Eigen stores column-major; the payload is row-major by contract.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> k1 = tt.k1;
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> k3 = tt.k3;
    put_f64(out, k1.data(), static_cast<std::size_t>(k1.size()));
    put_f64(out, tt.k2.data().data(), tt.k2.size());
    put_f64(out, k3.data(), static_cast<std::size_t>(k3.size()));
    if (!out) throw FileFormatError("failed writing " + path.string());
}

KernelFile load_kernel(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileFormatError("cannot open " + path.string());

    char magic[5];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw FileFormatError(path.string() + ": bad magic, not a SPCK1 kernel file");
    std::uint8_t dtype = 0, role_tag = 0;
    if (!in.read(reinterpret_cast<char*>(&dtype), 1) || !in.read(reinterpret_cast<char*>(&role_tag), 1))
        throw FileFormatError(path.string() + ": truncated header");
    if (dtype != kDtypeF64LE)
        throw FileFormatError(path.string() + ": unsupported dtype tag");
    if (role_tag > 1) throw FileFormatError(path.string() + ": unknown role tag");

    const std::uint32_t k = get_u32(in, "k");
    const std::uint32_t c_in = get_u32(in, "c_in");
    const std::uint32_t c_out = get_u32(in, "c_out");
    const std::uint32_t s = get_u32(in, "s");
    const std::uint32_t n = get_u32(in, "n");
    if (k == 0 || c_in == 0 || c_out == 0 || s == 0 || n == 0)
        throw DimensionError(path.string() + ": dimensions must be positive");

    KernelFile kf;
    kf.role = static_cast<KernelFile::Role>(role_tag);
    if (kf.role == KernelFile::Role::Full) {
        std::vector<double> payload =
            get_f64(in, static_cast<std::size_t>(k) * k * c_in * c_out);
        if (in.peek() != std::ifstream::traits_type::eof())
            throw FileFormatError(path.string() + ": trailing bytes after payload");
        kf.full = ConvKernel(TensorD({k, k, c_in, c_out}, std::move(payload)),
                             static_cast<int>(s), static_cast<int>(n));
    } else {
        const std::uint32_t r1 = get_u32(in, "r1");
        const std::uint32_t r2 = get_u32(in, "r2");
        if (r1 == 0 || r2 == 0) throw DimensionError(path.string() + ": ranks must be positive");
        std::vector<double> p1 = get_f64(in, static_cast<std::size_t>(c_in) * r1);
        std::vector<double> p2 = get_f64(in, static_cast<std::size_t>(k) * k * r1 * r2);
        std::vector<double> p3 = get_f64(in, static_cast<std::size_t>(r2) * c_out);
        if (in.peek() != std::ifstream::traits_type::eof())
            throw FileFormatError(path.string() + ": trailing bytes after payload");
        Eigen::MatrixXd f1(c_in, r1), f3(r2, c_out);
        for (std::uint32_t i = 0; i < c_in; ++i)
            for (std::uint32_t a = 0; a < r1; ++a) f1(i, a) = p1[i * r1 + a];
        for (std::uint32_t b = 0; b < r2; ++b)
            for (std::uint32_t j = 0; j < c_out; ++j) f3(b, j) = p3[b * c_out + j];
        kf.tt = TTKernel(std::move(f1), TensorD({k, k, r1, r2}, std::move(p2)), std::move(f3),
                         static_cast<int>(s), static_cast<int>(n));
    }
    return kf;
}

}  // namespace spconv
