#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spconv/io.hpp"
#include "spconv/random.hpp"
#include "spconv/tt.hpp"

using namespace spconv;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    const fs::path d = fs::temp_directory_path() / "spconv_cli_test";
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SPCONV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<char> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::vector<char>((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cli spectrum of the identity kernel") {
    const fs::path d = work_dir();
    const fs::path in = d / "id.spck", out = d / "id.csv";
    save_kernel(in, ConvKernel(TensorD({1, 1, 1, 1}, {1.0}), 1, 4));
    REQUIRE(run_cli("spectrum " + in.string() + " --out " + out.string()) == 0);
    const std::vector<std::string> lines = read_lines(out);
    REQUIRE(lines.size() == 16);
    for (const std::string& l : lines) CHECK(std::stod(l) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cli grouped spectrum has frequency columns") {
    const fs::path d = work_dir();
    const fs::path in = d / "g.spck", out = d / "g.csv";
    save_kernel(in, random_kernel(3, 2, 2, 2, 4, 1));
    REQUIRE(run_cli("spectrum " + in.string() + " --grouped --out " + out.string()) == 0);
    const std::vector<std::string> lines = read_lines(out);
    REQUIRE_FALSE(lines.empty());
    CHECK(lines[0] == "p1,p2,value");
    // (n/s)^2 = 4 frequencies, min(c_out, s^2 c_in) = 2 values each
    CHECK(lines.size() == 1 + 8);
}

TEST_CASE("cli TT spectrum equals the FULL spectrum of its reconstruction") {
    const fs::path d = work_dir();
    const fs::path tt_path = d / "tt.spck", full_path = d / "full.spck";
    const fs::path tt_csv = d / "tt.csv", full_csv = d / "full.csv";
    const TTKernel tt = orthogonalize(random_tt_kernel(3, 4, 4, 2, 2, 1, 8, 2)).tt;
    save_kernel(tt_path, tt);
    save_kernel(full_path, tt_reconstruct(tt));
    REQUIRE(run_cli("spectrum " + tt_path.string() + " --out " + tt_csv.string()) == 0);
    REQUIRE(run_cli("spectrum " + full_path.string() + " --out " + full_csv.string()) == 0);

    const std::vector<std::string> got = read_lines(tt_csv);
    const std::vector<std::string> want = read_lines(full_csv);
    REQUIRE(got.size() <= want.size());
    const double scale = std::stod(want[0]);
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(std::abs(std::stod(got[i]) - std::stod(want[i])) <= 1e-8 * scale);
    // the FULL file only adds the zeros implied by the rank reduction
    for (std::size_t i = got.size(); i < want.size(); ++i)
        CHECK(std::abs(std::stod(want[i])) <= 1e-8 * scale);
}

TEST_CASE("cli exit codes for malformed inputs") {
    const fs::path d = work_dir();
    const fs::path bad = d / "bad.spck";
    std::ofstream(bad) << "this is not a kernel file";
    CHECK(run_cli("spectrum " + bad.string()) == 2);

    const fs::path ok = d / "ok.spck";
    save_kernel(ok, random_kernel(2, 1, 1, 1, 4, 3));
    CHECK(run_cli("spectrum " + ok.string() + " --s 3") == 3);  // 4 mod 3 != 0
    CHECK(run_cli("decompose " + ok.string() + " --r1 5 --r2 1 --out " + (d / "x.spck").string()) == 3);
}

TEST_CASE("cli divide halves a 2x identity and rejects zero kernels") {
    const fs::path d = work_dir();
    const fs::path in = d / "two.spck", out = d / "one.spck";
    save_kernel(in, ConvKernel(TensorD({1, 1, 1, 1}, {2.0}), 1, 4));
    REQUIRE(run_cli("divide " + in.string() + " --target 1 --iters 5 --out " + out.string()) == 0);
    const KernelFile kf = load_kernel(out);
    REQUIRE(kf.full.has_value());
    CHECK(kf.full->weights[0] == doctest::Approx(1.0).epsilon(1e-12));

    const fs::path zero = d / "zero.spck";
    save_kernel(zero, ConvKernel(TensorD({1, 1, 1, 1}), 1, 4));
    CHECK(run_cli("divide " + zero.string() + " --target 1 --out " + (d / "z.spck").string()) == 4);
}

TEST_CASE("cli clip below the threshold passes the payload through bitwise") {
    const fs::path d = work_dir();
    const fs::path in = d / "small.spck";
    ConvKernel kern = random_kernel(3, 2, 2, 1, 6, 4);
    const double sigma1 = spectrum(kern).max();
    for (double& v : kern.weights.mutable_data()) v *= 1.5 / sigma1;  // sigma1 = 1.5 < 2
    save_kernel(in, kern);
    REQUIRE(run_cli("clip " + in.string() + " --delta 2 --out " + (d / "c").string()) == 0);
    CHECK(slurp(d / "c.truncated.spck") == slurp(in));

    const std::vector<std::string> report = read_lines(d / "c.report.csv");
    REQUIRE(report.size() == 2);
    CHECK(report[0] == "sigma1_pre,sigma1_expanded,sigma1_truncated");
}

TEST_CASE("cli clip report caps the expanded sigma1") {
    const fs::path d = work_dir();
    const fs::path in = d / "big.spck";
    ConvKernel kern = random_kernel(3, 3, 3, 1, 8, 5);
    const double sigma1 = spectrum(kern).max();
    for (double& v : kern.weights.mutable_data()) v *= 3.0 / sigma1;
    save_kernel(in, kern);
    REQUIRE(run_cli("clip " + in.string() + " --delta 1 --out " + (d / "b").string()) == 0);
    const std::vector<std::string> report = read_lines(d / "b.report.csv");
    REQUIRE(report.size() == 2);
    std::stringstream row(report[1]);
    std::string pre, expanded, truncated;
    std::getline(row, pre, ',');
    std::getline(row, expanded, ',');
    std::getline(row, truncated, ',');
    CHECK(std::stod(pre) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(std::abs(std::stod(expanded) - 1.0) <= 1e-8);
    CHECK(std::stod(truncated) > 0.0);
}

TEST_CASE("cli decompose reports residuals with --orthogonalize") {
    const fs::path d = work_dir();
    const fs::path in = d / "dec.spck", out = d / "dec_tt.spck";
    save_kernel(in, tt_reconstruct(random_tt_kernel(3, 4, 4, 2, 2, 1, 8, 6)));
    REQUIRE(run_cli("decompose " + in.string() + " --r1 2 --r2 2 --orthogonalize --out " +
                    out.string()) == 0);
    const KernelFile kf = load_kernel(out);
    REQUIRE(kf.tt.has_value());
    const OrthoReport rep = ortho_report(*kf.tt);
    CHECK(rep.left_residual < 1e-12);
    CHECK(rep.right_residual < 1e-12);
}

TEST_CASE("cli verify small grid is deterministic") {
    const fs::path d = work_dir();
    const fs::path a = d / "v1.csv", b = d / "v2.csv";
    REQUIRE(run_cli("verify --grid small --out " + a.string()) == 0);
    REQUIRE(run_cli("verify --grid small --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(run_cli("verify --grid small --inject-fault --out " + (d / "v3.csv").string()) == 1);
}
