#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spconv/control.hpp"
#include "spconv/dense_oracle.hpp"
#include "spconv/errors.hpp"
#include "spconv/fft_spectrum.hpp"
#include "spconv/io.hpp"
#include "spconv/random.hpp"
#include "spconv/tt.hpp"

namespace {

using namespace spconv;

constexpr int kExitVerifyFailure = 1;
constexpr int kExitParseError = 2;
constexpr int kExitDimensionError = 3;
constexpr int kExitDegenerateInput = 4;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_text_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FileFormatError("cannot open " + path + " for writing");
    return out;
}

// Re-dimension a loaded kernel when --n/--s override the stored values.
ConvKernel with_dims(const ConvKernel& kern, std::optional<int> n, std::optional<int> s) {
    if (!n && !s) return kern;
    return ConvKernel(kern.weights, s.value_or(kern.stride), n.value_or(kern.signal_size));
}

TTKernel with_dims(const TTKernel& tt, std::optional<int> n, std::optional<int> s) {
    if (!n && !s) return tt;
    return TTKernel(tt.k1, tt.k2, tt.k3, s.value_or(tt.stride), n.value_or(tt.signal_size));
}

void write_spectrum(std::ostream& out, const Spectrum& sp, bool grouped) {
    if (grouped) {
        out << "p1,p2,value\n";
        for (int p1 = 0; p1 < sp.grid; ++p1)
            for (int p2 = 0; p2 < sp.grid; ++p2)
                for (double v : sp.group(p1, p2))
                    out << p1 << ',' << p2 << ',' << fmt(v) << '\n';
    } else {
        for (double v : sp.values) out << fmt(v) << '\n';
    }
}

int cmd_spectrum(const std::string& input, std::optional<int> n, std::optional<int> s,
                 bool grouped, const std::string& out_path) {
    const KernelFile kf = load_kernel(input);
    const Spectrum sp = kf.role == KernelFile::Role::Full
                            ? spectrum(with_dims(*kf.full, n, s))
                            : tt_spectrum(with_dims(*kf.tt, n, s));
    if (out_path.empty()) {
        write_spectrum(std::cout, sp, grouped);
    } else {
        auto out = open_text_out(out_path);
        write_spectrum(out, sp, grouped);
    }
    return 0;
}

int cmd_clip(const std::string& input, double delta, const std::string& out_prefix) {
    const KernelFile kf = load_kernel(input);
    if (kf.role != KernelFile::Role::Full)
        throw DimensionError("clip expects a FULL kernel file; decompose output cannot be clipped directly");
    const ConvKernel& kern = *kf.full;

    const double sigma1_pre = spectrum(kern).max();
    const ClipResult clip = clip_spectrum(kern, delta);
    const double sigma1_expanded = spectrum(clip.expanded).max();
    // When nothing exceeds delta, clipping is the identity; emit the input
    // payload bit for bit rather than a DFT round trip of it.
    const bool noop = sigma1_pre <= delta;
    const double sigma1_truncated = noop ? sigma1_pre : spectrum(clip.truncated).max();

    save_kernel(out_prefix + ".expanded.spck", clip.expanded);
    save_kernel(out_prefix + ".truncated.spck", noop ? kern : clip.truncated);
    auto report = open_text_out(out_prefix + ".report.csv");
    report << "sigma1_pre,sigma1_expanded,sigma1_truncated\n"
           << fmt(sigma1_pre) << ',' << fmt(sigma1_expanded) << ',' << fmt(sigma1_truncated)
           << '\n';
    return 0;
}

int cmd_divide(const std::string& input, double target, int iters, std::uint64_t seed,
               const std::string& out_path) {
    const KernelFile kf = load_kernel(input);
    if (kf.role != KernelFile::Role::Full)
        throw DimensionError("divide expects a FULL kernel file");
    save_kernel(out_path, divide_to_target(*kf.full, target, iters, seed));
    return 0;
}

int cmd_decompose(const std::string& input, int r1, int r2, bool do_orthogonalize,
                  const std::string& out_path) {
    const KernelFile kf = load_kernel(input);
    if (kf.role != KernelFile::Role::Full)
        throw DimensionError("decompose expects a FULL kernel file");
    const ConvKernel& kern = *kf.full;

    TTKernel tt = tt_decompose(kern, r1, r2);
    if (do_orthogonalize) {
        OrthogonalizeResult ortho = orthogonalize(tt);
        std::cout << "left_residual=" << fmt(ortho.report.left_residual)
                  << " right_residual=" << fmt(ortho.report.right_residual) << '\n';
        tt = std::move(ortho.tt);
    }
    const ConvKernel rec = tt_reconstruct(tt);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rec.weights.size(); ++i) {
        const double d = rec.weights[i] - kern.weights[i];
        num += d * d;
        den += kern.weights[i] * kern.weights[i];
    }
    std::cout << "reconstruction_rel_error=" << fmt(den > 0 ? std::sqrt(num / den) : std::sqrt(num))
              << '\n';
    save_kernel(out_path, tt);
    return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyCase {
    std::string id;
    double max_rel_dev = 0.0;  // max |fft - oracle| normalized by sigma1
    bool pass = true;
};

bool values_within_tolerance(double got, double want) {
    const double diff = std::abs(got - want);
    if (std::abs(want) < 1e-6) return diff <= 1e-10;
    return diff <= 1e-8 * std::abs(want);
}

VerifyCase compare_spectra(std::string id, std::vector<double> got, std::vector<double> want,
                           bool inject_fault) {
    VerifyCase c{std::move(id)};
    if (inject_fault && !got.empty()) got[0] += 1e-3 * (std::abs(got[0]) + 1.0);
    if (got.size() != want.size()) {
        c.pass = false;
        c.max_rel_dev = 1.0;
        return c;
    }
    const double scale = want.empty() ? 1.0 : std::max(want.front(), 1e-300);
    for (std::size_t i = 0; i < got.size(); ++i) {
        c.max_rel_dev = std::max(c.max_rel_dev, std::abs(got[i] - want[i]) / scale);
        if (!values_within_tolerance(got[i], want[i])) c.pass = false;
    }
    return c;
}

VerifyCase run_full_case(int n, int k, int ci, int co, int s, std::uint64_t seed,
                         bool inject_fault) {
    const ConvKernel kern = random_kernel(k, ci, co, s, n, seed);
    std::vector<double> want = dense_spectrum(build_dense_operator(kern));
    std::vector<double> got = spectrum(kern).values;
    char id[96];
    std::snprintf(id, sizeof id, "full_n%d_k%d_ci%d_co%d_s%d_seed%llu", n, k, ci, co, s,
                  static_cast<unsigned long long>(seed));
    return compare_spectra(id, std::move(got), std::move(want), inject_fault);
}

VerifyCase run_tt_case(int n, int k, int c, int r, int s, std::uint64_t seed, bool inject_fault) {
    const TTKernel tt = random_tt_kernel(k, c, c, r, r, s, n, seed);
    const Spectrum core = tt_spectrum(tt);
    std::vector<double> got = core.values;
    got.insert(got.end(), core.implied_zeros, 0.0);
    std::vector<double> want = dense_spectrum(build_dense_operator(tt_reconstruct(tt)));
    char id[96];
    std::snprintf(id, sizeof id, "tt_n%d_k%d_c%d_r%d_s%d_seed%llu", n, k, c, r, s,
                  static_cast<unsigned long long>(seed));
    return compare_spectra(id, std::move(got), std::move(want), inject_fault);
}

int cmd_verify(const std::string& grid, std::uint64_t seed, const std::string& out_path,
               bool inject_fault) {
    std::vector<VerifyCase> cases;
    if (grid == "small") {
        for (int n : {4, 6})
            for (int k : {1, 3})
                for (int ci : {1, 2})
                    for (int co : {1, 2})
                        cases.push_back(run_full_case(n, k, ci, co, 1, seed, inject_fault));
        for (int k : {1, 3})
            for (int c : {1, 2})
                cases.push_back(run_full_case(4, k, c, c, 2, seed, inject_fault));
        cases.push_back(run_tt_case(4, 3, 4, 2, 1, seed, inject_fault));
        cases.push_back(run_tt_case(8, 3, 4, 2, 2, seed, inject_fault));
    } else if (grid == "full") {
        for (int n : {4, 6, 8})
            for (int k : {1, 2, 3})
                for (int ci : {1, 2, 3})
                    for (int co : {1, 2, 3})
                        for (std::uint64_t sd : {seed, seed + 1, seed + 2})
                            cases.push_back(run_full_case(n, k, ci, co, 1, sd, inject_fault));
        for (int n : {4, 8})
            for (int k : {1, 2, 3})
                for (int ci : {1, 2, 3})
                    for (int co : {1, 2, 3})
                        for (std::uint64_t sd : {seed, seed + 1, seed + 2})
                            cases.push_back(run_full_case(n, k, ci, co, 2, sd, inject_fault));
        for (int c : {2, 4, 6})
            for (int r = 1; r <= c; ++r)
                for (int k : {1, 3})
                    for (int n : {4, 8})
                        for (int s : {1, 2})
                            cases.push_back(run_tt_case(n, k, c, r, s, seed, inject_fault));
    } else {
        throw DimensionError("unknown grid '" + grid + "' (expected small or full)");
    }

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_text_out(out_path);
        out = &file;
    }
    *out << "case,max_rel_deviation\n";
    const VerifyCase* worst = nullptr;
    bool all_pass = true;
    for (const VerifyCase& c : cases) {
        *out << c.id << ',' << fmt(c.max_rel_dev) << '\n';
        if (!c.pass) {
            all_pass = false;
            if (!worst || c.max_rel_dev > worst->max_rel_dev) worst = &c;
        }
    }
    if (!all_pass) {
        std::cerr << "verification failed; worst case: " << worst->id
                  << " max_rel_deviation=" << fmt(worst->max_rel_dev) << '\n';
        return kExitVerifyFailure;
    }
    return 0;
}

// ---- bench -----------------------------------------------------------------

double median_seconds(const std::vector<double>& xs) {
    std::vector<double> v = xs;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

template <class Fn>
double time_median(int reps, Fn&& fn) {
    std::vector<double> times;
    times.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    return median_seconds(times);
}

long long full_padded_params(int n, int ci, int co) {
    return static_cast<long long>(n) * n * ci * co;
}

long long tt_padded_params(int n, int ci, int co, int r1, int r2) {
    return static_cast<long long>(ci) * r1 + static_cast<long long>(n) * n * r1 * r2 +
           static_cast<long long>(r2) * co;
}

int cmd_bench(int n, int s, const std::vector<int>& c_list, std::vector<int> r_list, int reps,
              const std::string& out_path) {
    const int k = 3;
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_text_out(out_path);
        out = &file;
    }
    *out << "method,n,k,c,r,s,wall_time_s,param_count,bytes_f32,bytes_f64,speedup,mem_ratio\n";
    for (int c : c_list) {
        std::vector<int> ranks = r_list;
        if (ranks.empty())
            ranks = {static_cast<int>(std::llround(c / 2.0)), static_cast<int>(std::llround(c / 3.0))};

        const ConvKernel kern = random_kernel(k, c, c, s, n, 42);
        volatile double sink = 0.0;
        const double t_full = time_median(reps, [&] { sink = spectrum(kern).max(); });
        const long long p_full = full_padded_params(n, c, c);
        *out << "full," << n << ',' << k << ',' << c << ",," << s << ',' << fmt(t_full) << ','
             << p_full << ',' << 4 * p_full << ',' << 8 * p_full << ",,\n";

        for (int r : ranks) {
            if (r < 1 || r > c) throw DimensionError("bench rank out of bounds");
            const TTKernel tt = random_tt_kernel(k, c, c, r, r, s, n, 43);
            const double t_tt = time_median(reps, [&] { sink = tt_spectrum(tt).max(); });
            const long long p_tt = tt_padded_params(n, c, c, r, r);
            *out << "tt," << n << ',' << k << ',' << c << ',' << r << ',' << s << ',' << fmt(t_tt)
                 << ',' << p_tt << ',' << 4 * p_tt << ',' << 8 * p_tt << ',' << fmt(t_full / t_tt)
                 << ',' << fmt(static_cast<double>(p_full) / static_cast<double>(p_tt)) << '\n';
        }
        (void)sink;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact singular value spectra of periodic strided convolutional layers"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads,
                   "Upper bound on worker threads (0 = auto); results are thread-count independent")
        ->envname("SPCONV_THREADS");

    std::string input, out_path, out_prefix;
    std::optional<int> n_override, s_override;
    bool grouped = false;

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Singular values of a kernel file (CSV)");
    spectrum_cmd->add_option("input", input)->required();
    spectrum_cmd->add_option("--n", n_override, "Override signal size");
    spectrum_cmd->add_option("--s", s_override, "Override stride");
    spectrum_cmd->add_flag("--grouped", grouped, "Group values by frequency index (p1,p2)");
    spectrum_cmd->add_option("--out", out_path, "Output CSV path (default stdout)");

    double delta = 1.0;
    int every = 100;
    auto* clip_cmd = app.add_subcommand("clip", "Clip singular values at a threshold");
    clip_cmd->add_option("input", input)->required();
    clip_cmd->add_option("--delta", delta, "Clipping threshold")->capture_default_str();
    clip_cmd->add_option("--every", every, "Suggested clipping cadence in training iterations")
        ->capture_default_str();
    clip_cmd->add_option("--out", out_prefix, "Output prefix (.expanded.spck/.truncated.spck/.report.csv)")
        ->required();

    double target = 1.0;
    int iters = 1;
    std::uint64_t seed = 0;
    auto* divide_cmd = app.add_subcommand("divide", "Rescale a kernel to a target spectral norm");
    divide_cmd->add_option("input", input)->required();
    divide_cmd->add_option("--target", target, "Target sigma_1")->capture_default_str();
    divide_cmd->add_option("--iters", iters, "Power iterations")->capture_default_str();
    divide_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    divide_cmd->add_option("--out", out_path, "Output kernel file")->required();

    int r1 = 1, r2 = 1;
    bool do_orthogonalize = false;
    auto* decompose_cmd = app.add_subcommand("decompose", "TT-SVD a FULL kernel into a TT file");
    decompose_cmd->add_option("input", input)->required();
    decompose_cmd->add_option("--r1", r1, "Left rank")->required();
    decompose_cmd->add_option("--r2", r2, "Right rank")->required();
    decompose_cmd->add_flag("--orthogonalize", do_orthogonalize, "Orthogonalize frame matrices");
    decompose_cmd->add_option("--out", out_path, "Output TT kernel file")->required();

    std::string grid = "small";
    bool inject_fault = false;
    auto* verify_cmd = app.add_subcommand("verify", "Cross-check FFT spectra against the dense oracle");
    verify_cmd->add_option("--grid", grid, "small | full")->capture_default_str();
    verify_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    verify_cmd->add_option("--out", out_path, "Output CSV path (default stdout)");
    verify_cmd->add_flag("--inject-fault", inject_fault, "Test hook: corrupt spectra to force failure");

    int bench_n = 16, bench_s = 1, reps = 5;
    std::vector<int> c_list{64, 128}, r_list;
    auto* bench_cmd = app.add_subcommand("bench", "Time full vs TT spectrum computation");
    bench_cmd->add_option("--n", bench_n)->capture_default_str();
    bench_cmd->add_option("--s", bench_s)->capture_default_str();
    bench_cmd->add_option("--c-list", c_list, "Channel counts")->delimiter(',');
    bench_cmd->add_option("--r-list", r_list, "Ranks (default: c/2 and c/3 per channel count)")
        ->delimiter(',');
    bench_cmd->add_option("--reps", reps)->capture_default_str();
    bench_cmd->add_option("--out", out_path, "Output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum_cmd->parsed())
            return cmd_spectrum(input, n_override, s_override, grouped, out_path);
        if (clip_cmd->parsed()) return cmd_clip(input, delta, out_prefix);
        if (divide_cmd->parsed()) return cmd_divide(input, target, iters, seed, out_path);
        if (decompose_cmd->parsed()) return cmd_decompose(input, r1, r2, do_orthogonalize, out_path);
        if (verify_cmd->parsed()) return cmd_verify(grid, seed, out_path, inject_fault);
        if (bench_cmd->parsed()) return cmd_bench(bench_n, bench_s, c_list, r_list, reps, out_path);
    } catch (const FileFormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParseError;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerateInput;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDimensionError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerifyFailure;
    }
    return 0;
}
