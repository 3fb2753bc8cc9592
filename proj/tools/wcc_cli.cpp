// Command-line front end: per-image compression analysis, the
// quantization-vs-wavelet MSE sweep, network cost reports, and a CPU
// micro-benchmark of an inverted residual block.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wcc/cost.hpp"
#include "wcc/io.hpp"
#include "wcc/parallel.hpp"
#include "wcc/quant.hpp"
#include "wcc/shrink.hpp"
#include "wcc/tensor.hpp"
#include "wcc/wcc_layer.hpp"

namespace {

struct InputFlags {
    std::string path;
    int channels = 0;
    int height = 0;
    int width = 0;
};

void add_input_flags(CLI::App* cmd, InputFlags& in) {
    cmd->add_option("--input", in.path, "PGM image, or raw f32 file with dims")
        ->required();
    cmd->add_option("--channels", in.channels, "raw input: channel count");
    cmd->add_option("--height", in.height, "raw input: height");
    cmd->add_option("--width", in.width, "raw input: width");
}

wcc::Tensor3 load_input(const InputFlags& in) {
    if (in.channels > 0 || in.height > 0 || in.width > 0) {
        if (in.channels < 1 || in.height < 1 || in.width < 1) {
            throw wcc::DimError(
                "raw input needs --channels, --height and --width together");
        }
        return wcc::load_raw(in.path, in.channels, in.height, in.width);
    }
    return wcc::load_pgm(in.path);
}

double variance(const wcc::Tensor3& t) {
    double mean = 0.0;
    for (float v : t.data()) mean += v;
    mean /= static_cast<double>(t.size());
    double acc = 0.0;
    for (float v : t.data()) {
        acc += (v - mean) * (v - mean);
    }
    return acc / static_cast<double>(t.size());
}

// Direct b-bit quantization of the tensor, signedness chosen by the data.
double direct_quant_mse(const wcc::Tensor3& x, int bits) {
    const bool is_signed =
        std::any_of(x.data().begin(), x.data().end(), [](float v) { return v < 0.0f; });
    wcc::QuantSpec spec{bits, is_signed, wcc::calibrate_alpha(x, is_signed).alpha};
    return wcc::mse(wcc::quantize(x, spec), x);
}

struct WaveletBranch {
    double mse = 0.0;
    wcc::ShrinkSet kept;
};

// Transform, joint top-k, 8-bit signed coefficient quantization, zero-fill,
// inverse transform; the compression pipeline without a convolution.
WaveletBranch wavelet_mse(const wcc::Tensor3& x, int levels, double rate,
                          int coeff_bits) {
    const wcc::WaveletSpec wavelet{levels, wcc::FilterBank::Haar,
                                   wcc::BoundaryPolicy::ReflectPad};
    const wcc::HwtResult fw = wcc::hwt(x, wavelet);
    wcc::ShrinkSet kept =
        wcc::select_topk(wcc::channel_norms(fw.coeffs), rate);
    std::vector<float> block = wcc::gather(fw.coeffs, kept);
    if (coeff_bits > 0) {
        float alpha = 0.0f;
        for (float v : block) alpha = std::max(alpha, std::fabs(v));
        const wcc::QuantSpec q{coeff_bits, true, alpha > 0.0f ? alpha : 1.0f};
        for (float& v : block) v = wcc::quantize_value(v, q);
    }
    const wcc::Tensor3 back = wcc::ihwt(
        wcc::scatter(block, kept, x.channels(), fw.layout.padded_height,
                     fw.layout.padded_width),
        fw.layout, wavelet);
    return {wcc::mse(back, x), std::move(kept)};
}

int cmd_analyze(const InputFlags& in, int levels, double rate, int bits,
                const std::string& indices_path) {
    const wcc::Tensor3 x = load_input(in);
    const double qmse = direct_quant_mse(x, bits);
    const WaveletBranch wb = wavelet_mse(x, levels, rate, 8);

    std::printf("input: %s (%dx%dx%d)\n", in.path.c_str(), x.channels(),
                x.height(), x.width());
    std::printf("input_variance: %.17g\n", variance(x));
    std::printf("quant_bits: %d\n", bits);
    std::printf("quant_mse: %.17g\n", qmse);
    std::printf("rate: %.17g\n", rate);
    std::printf("levels: %d\n", levels);
    std::printf("wavelet_mse: %.17g\n", wb.mse);
    std::printf("effective_bits: %.17g\n", wcc::effective_bit_rate(8, rate));

    if (!indices_path.empty()) {
        const auto blob = wb.kept.to_blob();
        std::ofstream out(indices_path, std::ios::binary);
        if (!out) throw wcc::IoError("cannot open " + indices_path);
        out.write(reinterpret_cast<const char*>(blob.data()),
                  static_cast<std::streamsize>(blob.size()));
        std::printf("indices: %s (%zu entries)\n", indices_path.c_str(),
                    wb.kept.k());
    }
    return 0;
}

int cmd_sweep(const InputFlags& in, int levels, const std::string& out_path) {
    const wcc::Tensor3 x = load_input(in);
    std::string csv = "effective_bits,quant_mse,wavelet_mse\n";
    for (int bits = 2; bits <= 8; ++bits) {
        const double rate = static_cast<double>(bits) / 8.0;
        const double qmse = direct_quant_mse(x, bits);
        const double wmse = wavelet_mse(x, levels, rate, 8).mse;
        char line[128];
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g\n", bits, qmse, wmse);
        csv += line;
    }
    if (out_path == "-") {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw wcc::IoError("cannot open " + out_path);
        out << csv;
    }
    return 0;
}

int cmd_cost(const std::string& spec_path, int bits_w, int bits_a,
             std::optional<double> rate, int levels) {
    const auto layers = wcc::load_layer_file(spec_path);
    const wcc::CostReport report =
        wcc::network_report(layers, bits_w, bits_a, rate, levels);

    std::printf("%-16s %5s %5s %2s %4s %2s %2s %5s %5s %16s %18s", "layer",
                "c_in", "c_out", "K", "grp", "S", "D", "H", "W", "MACs", "BOPs");
    if (rate) std::printf(" %18s", "WCC_BOPs");
    std::printf("\n");
    for (const auto& row : report.rows) {
        std::printf("%-16s %5lld %5lld %2lld %4lld %2lld %2lld %5lld %5lld "
                    "%16lld %18lld",
                    row.layer.name.c_str(),
                    static_cast<long long>(row.layer.c_in),
                    static_cast<long long>(row.layer.c_out),
                    static_cast<long long>(row.layer.kernel_w),
                    static_cast<long long>(row.layer.groups),
                    static_cast<long long>(row.layer.stride_w),
                    static_cast<long long>(row.layer.dilation),
                    static_cast<long long>(row.layer.height),
                    static_cast<long long>(row.layer.width),
                    static_cast<long long>(row.macs),
                    static_cast<long long>(row.bops));
        if (rate) {
            if (row.wcc) {
                std::printf(" %18lld", static_cast<long long>(row.wcc->total_bops));
            } else {
                std::printf(" %18s", "-");
            }
        }
        std::printf("\n");
    }
    std::printf("total_1x1_macs: %lld\n",
                static_cast<long long>(report.total_macs_pointwise));
    std::printf("total_spatial_macs: %lld\n",
                static_cast<long long>(report.total_macs_spatial));
    std::printf("total_macs: %lld\n", static_cast<long long>(report.total_macs()));
    std::printf("total_1x1_bops: %lld\n",
                static_cast<long long>(report.total_bops_pointwise));
    std::printf("total_spatial_bops: %lld\n",
                static_cast<long long>(report.total_bops_spatial));
    std::printf("total_bops: %lld\n", static_cast<long long>(report.total_bops()));
    if (rate) {
        std::printf("rate: %.17g\n", *rate);
        std::printf("effective_bits: %.17g\n",
                    wcc::effective_bit_rate(bits_a, *rate));
        std::printf("total_wcc_1x1_bops: %lld\n",
                    static_cast<long long>(report.total_wcc_bops));
        std::printf("total_wcc_bops: %lld\n",
                    static_cast<long long>(report.total_wcc_bops +
                                           report.total_bops_spatial));
    }
    return 0;
}

// Depthwise 3x3 binomial stencil, zero-padded borders. Bench plumbing for
// the inverted residual block; not part of the library surface.
wcc::Tensor3 depthwise3x3(const wcc::Tensor3& x) {
    static const float kStencil[3][3] = {
        {1.0f / 16, 2.0f / 16, 1.0f / 16},
        {2.0f / 16, 4.0f / 16, 2.0f / 16},
        {1.0f / 16, 2.0f / 16, 1.0f / 16}};
    wcc::Tensor3 y(x.channels(), x.height(), x.width());
    wcc::parallel_chunks(x.channels(), [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c) {
            for (int i = 0; i < x.height(); ++i) {
                for (int j = 0; j < x.width(); ++j) {
                    float acc = 0.0f;
                    for (int di = -1; di <= 1; ++di) {
                        for (int dj = -1; dj <= 1; ++dj) {
                            const int si = i + di;
                            const int sj = j + dj;
                            if (si < 0 || sj < 0 || si >= x.height() ||
                                sj >= x.width()) {
                                continue;
                            }
                            acc += kStencil[di + 1][dj + 1] *
                                   x(static_cast<int>(c), si, sj);
                        }
                    }
                    y(static_cast<int>(c), i, j) = acc;
                }
            }
        }
    });
    return y;
}

struct Block {
    wcc::Kernel1x1 expand;
    wcc::Kernel1x1 project;
};

wcc::Tensor3 run_block_standard(const Block& blk, const wcc::Tensor3& x) {
    wcc::Tensor3 mid = depthwise3x3(wcc::conv1x1_reference(blk.expand, x));
    wcc::Tensor3 out = wcc::conv1x1_reference(blk.project, mid);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += x.data()[i];
    return out;
}

wcc::Tensor3 run_block_wcc(const Block& blk, const wcc::Tensor3& x,
                           double rate, int levels) {
    const wcc::WaveletSpec wavelet{levels, wcc::FilterBank::Haar,
                                   wcc::BoundaryPolicy::RequireDivisible};
    wcc::WccLayerSpec expand{blk.expand, wavelet, rate, {}, {}};
    wcc::WccLayerSpec project{blk.project, wavelet, rate, {}, {}};
    wcc::Tensor3 mid = depthwise3x3(wcc::wcc_forward(expand, x).output);
    wcc::Tensor3 out = wcc::wcc_forward(project, mid).output;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += x.data()[i];
    return out;
}

int cmd_bench(int c_in, int expansion, int size, double rate, int trials,
              int levels, std::uint64_t seed) {
    if (c_in < 1 || expansion < 1 || trials < 1) {
        throw wcc::DimError("bench needs positive --cin, --expansion, --trials");
    }
    if (size < (1 << levels) || size % (1 << levels) != 0) {
        throw wcc::DimError("bench --size must be a positive multiple of 2^levels");
    }

    Block blk;
    blk.expand = wcc::Kernel1x1(c_in * expansion, c_in);
    blk.project = wcc::Kernel1x1(c_in, c_in * expansion);
    wcc::SplitMix64 rng(seed);
    for (auto& w : blk.expand.weights) w = rng.next_symmetric() * 0.2f;
    for (auto& w : blk.project.weights) w = rng.next_symmetric() * 0.2f;
    const wcc::Tensor3 x = wcc::random_tensor(c_in, size, size, seed + 1);

    // correctness gate: at rate 1 both variants must agree
    {
        const wcc::Tensor3 ref = run_block_standard(blk, x);
        const wcc::Tensor3 got = run_block_wcc(blk, x, 1.0, levels);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double d = ref.data()[i] - got.data()[i];
            num += d * d;
            den += static_cast<double>(ref.data()[i]) * ref.data()[i];
        }
        const double rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
        if (rel > 1e-3) {
            throw wcc::Error("bench correctness gate failed: relative deviation " +
                             std::to_string(rel));
        }
        std::printf("gate_rel_error: %.3e\n", rel);
    }

    auto time_variant = [&](auto&& fn) {
        double total = 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (int t = 0; t < trials; ++t) {
            const auto t0 = std::chrono::steady_clock::now();
            const wcc::Tensor3 out = fn();
            const auto t1 = std::chrono::steady_clock::now();
            // keep the result alive so the work cannot be elided
            volatile float sink = out.data()[0];
            (void)sink;
            const double dt = std::chrono::duration<double>(t1 - t0).count();
            total += dt;
            best = std::min(best, dt);
        }
        return std::pair{total / trials, best};
    };

    std::printf("block: cin %d expansion %d size %dx%d rate %.17g levels %d "
                "trials %d\n",
                c_in, expansion, size, size, rate, levels, trials);
    const auto [std_mean, std_min] =
        time_variant([&] { return run_block_standard(blk, x); });
    const auto [wcc_mean, wcc_min] =
        time_variant([&] { return run_block_wcc(blk, x, rate, levels); });
    std::printf("standard: trials %d mean %.6f s  min %.6f s\n", trials,
                std_mean, std_min);
    std::printf("wcc:      trials %d mean %.6f s  min %.6f s\n", trials,
                wcc_mean, wcc_min);
    std::printf("speedup: %.3fx\n", std_mean / wcc_mean);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet compressed convolution toolkit"};
    app.require_subcommand(1);

    int threads = 1;
    app.add_option("--threads", threads, "worker threads (results identical)");

    InputFlags analyze_in;
    int analyze_levels = 3;
    double analyze_rate = 0.25;
    int analyze_bits = 8;
    std::string analyze_indices;
    CLI::App* analyze =
        app.add_subcommand("analyze", "compression analysis of one input");
    add_input_flags(analyze, analyze_in);
    analyze->add_option("--levels", analyze_levels, "transform levels")
        ->check(CLI::Range(1, 10));
    analyze->add_option("--rate", analyze_rate, "shrinkage rate in (0,1]")
        ->check(CLI::Range(1e-9, 1.0));
    analyze->add_option("--bits", analyze_bits, "direct quantization bits")
        ->check(CLI::Range(2, 16));
    analyze->add_option("--save-indices", analyze_indices,
                        "write the retained-index blob here");

    InputFlags sweep_in;
    int sweep_levels = 3;
    std::string sweep_out;
    CLI::App* sweep =
        app.add_subcommand("sweep", "quantization-vs-wavelet MSE sweep");
    add_input_flags(sweep, sweep_in);
    sweep->add_option("--levels", sweep_levels, "transform levels")
        ->check(CLI::Range(1, 10));
    sweep->add_option("--out", sweep_out, "CSV path, or - for stdout")
        ->required();

    std::string cost_spec;
    int cost_bw = 8;
    int cost_ba = 8;
    double cost_rate = 0.0;
    int cost_levels = 3;
    CLI::App* cost = app.add_subcommand("cost", "network MAC/BOPs report");
    cost->add_option("--spec", cost_spec, "layer-spec file")->required();
    cost->add_option("--bw", cost_bw, "weight bits")->check(CLI::Range(1, 64));
    cost->add_option("--ba", cost_ba, "activation bits")->check(CLI::Range(1, 64));
    CLI::Option* cost_rate_opt =
        cost->add_option("--rate", cost_rate, "WCC shrinkage rate for 1x1 rows")
            ->check(CLI::Range(1e-9, 1.0));
    cost->add_option("--levels", cost_levels, "transform levels")
        ->check(CLI::Range(1, 10));

    int bench_cin = 256;
    int bench_expansion = 4;
    int bench_size = 128;
    double bench_rate = 0.25;
    int bench_trials = 5;
    int bench_levels = 3;
    std::uint64_t bench_seed = 1;
    CLI::App* bench =
        app.add_subcommand("bench", "time an inverted residual block");
    bench->add_option("--cin", bench_cin, "input channels");
    bench->add_option("--expansion", bench_expansion, "expansion factor");
    bench->add_option("--size", bench_size, "square spatial size");
    bench->add_option("--rate", bench_rate, "shrinkage rate in (0,1]")
        ->check(CLI::Range(1e-9, 1.0));
    bench->add_option("--trials", bench_trials, "timing repetitions");
    bench->add_option("--levels", bench_levels, "transform levels")
        ->check(CLI::Range(1, 10));
    bench->add_option("--seed", bench_seed, "input generator seed");

    CLI11_PARSE(app, argc, argv);
    wcc::set_num_threads(threads);

    try {
        if (*analyze) {
            return cmd_analyze(analyze_in, analyze_levels, analyze_rate,
                               analyze_bits, analyze_indices);
        }
        if (*sweep) return cmd_sweep(sweep_in, sweep_levels, sweep_out);
        if (*cost) {
            std::optional<double> rate;
            if (cost_rate_opt->count() > 0) rate = cost_rate;
            return cmd_cost(cost_spec, cost_bw, cost_ba, rate, cost_levels);
        }
        if (*bench) {
            return cmd_bench(bench_cin, bench_expansion, bench_size, bench_rate,
                             bench_trials, bench_levels, bench_seed);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
