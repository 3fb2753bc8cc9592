#include "wcc/wcc_layer.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "wcc/parallel.hpp"

namespace wcc {

namespace {

float max_abs_value(const std::vector<float>& v) {
    float m = 0.0f;
    for (float x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Per-call clipping scale: max-abs of the values being quantized, falling
// back to 1 when there is no range.
QuantSpec calibrated(const QuantSpec& base, const std::vector<float>& values) {
    QuantSpec q = base;
    const float m = max_abs_value(values);
    q.alpha = m > 0.0f ? m : 1.0f;
    return q;
}

void quantize_block(std::vector<float>& block, const QuantSpec& q) {
    for (float& v : block) v = quantize_value(v, q);
}

// Straight-through mask over a compact block: zero the gradient where the
// pre-quantization value sat on or outside the clip boundary.
void ste_mask_block(std::vector<float>& grad, const std::vector<float>& pre,
                    const QuantSpec& q) {
    const float lo = q.is_signed ? -1.0f : 0.0f;
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const float t = pre[i] / q.alpha;
        if (!(t > lo && t < 1.0f)) grad[i] = 0.0f;
    }
}

// grad_out zero-extended onto the padded plane: the adjoint of the crop
// step of ihwt.
Tensor3 zero_extend(const Tensor3& t, const CoeffLayout& layout) {
    if (t.height() == layout.padded_height && t.width() == layout.padded_width) {
        return t;
    }
    Tensor3 out(t.channels(), layout.padded_height, layout.padded_width);
    for (int c = 0; c < t.channels(); ++c) {
        for (int i = 0; i < t.height(); ++i) {
            for (int j = 0; j < t.width(); ++j) out(c, i, j) = t(c, i, j);
        }
    }
    return out;
}

int reflect_index(int i, int n) {
    const int period = 2 * n;
    const int m = i % period;
    return m < n ? m : period - 1 - m;
}

// Adjoint of the mirror padding used by hwt under ReflectPad: every padded
// position folds its value back onto the source position it mirrored.
Tensor3 reflect_pad_transpose(const Tensor3& padded, int height, int width) {
    if (padded.height() == height && padded.width() == width) return padded;
    Tensor3 out(padded.channels(), height, width);
    for (int c = 0; c < padded.channels(); ++c) {
        for (int i = 0; i < padded.height(); ++i) {
            const int si = reflect_index(i, height);
            for (int j = 0; j < padded.width(); ++j) {
                out(c, si, reflect_index(j, width)) += padded(c, i, j);
            }
        }
    }
    return out;
}

WaveletSpec on_padded_plane(const WaveletSpec& spec) {
    WaveletSpec s = spec;
    s.boundary = BoundaryPolicy::RequireDivisible;
    return s;
}

}  // namespace

Kernel1x1::Kernel1x1(int out_ch, int in_ch)
    : out_channels(out_ch), in_channels(in_ch) {
    validate();
    weights.assign(static_cast<std::size_t>(out_ch) * in_ch, 0.0f);
}

Kernel1x1::Kernel1x1(int out_ch, int in_ch, std::vector<float> w)
    : out_channels(out_ch), in_channels(in_ch), weights(std::move(w)) {
    validate();
    const std::size_t expected = static_cast<std::size_t>(out_ch) * in_ch;
    if (weights.size() != expected) {
        throw DimError("kernel weight count " + std::to_string(weights.size()) +
                       " != out*in = " + std::to_string(expected));
    }
    for (float v : weights) {
        if (!std::isfinite(v)) throw DimError("kernel weights must be finite");
    }
}

void Kernel1x1::validate() const {
    if (out_channels < 1 || in_channels < 1) {
        throw DimError("kernel dims must be >= 1, got " +
                       std::to_string(out_channels) + "x" +
                       std::to_string(in_channels));
    }
}

void WccLayerSpec::validate() const {
    kernel.validate();
    wavelet.validate();
    if (!(rate > 0.0) || rate > 1.0) {
        throw DimError("wcc rate must lie in (0,1], got " + std::to_string(rate));
    }
    if (coeff_quant) {
        coeff_quant->validate();
        if (!coeff_quant->is_signed) {
            throw DimError("coefficient quantization must be signed");
        }
    }
    if (weight_quant) {
        weight_quant->validate();
        if (!weight_quant->is_signed) {
            throw DimError("weight quantization must be signed");
        }
    }
}

Tensor3 conv1x1_reference(const Kernel1x1& k, const Tensor3& x) {
    k.validate();
    if (x.channels() != k.in_channels) {
        throw DimError("conv1x1: input has " + std::to_string(x.channels()) +
                       " channels, kernel expects " + std::to_string(k.in_channels));
    }
    Tensor3 y(k.out_channels, x.height(), x.width());
    const std::size_t plane = x.plane_size();
    parallel_chunks(k.out_channels, [&](std::size_t o0, std::size_t o1) {
        for (std::size_t i = o0; i < o1; ++i) {
            float* out = y.channel(static_cast<int>(i));
            for (int j = 0; j < k.in_channels; ++j) {
                const float w = k.at(static_cast<int>(i), j);
                const float* in = x.channel(j);
                for (std::size_t p = 0; p < plane; ++p) out[p] += w * in[p];
            }
        }
    });
    return y;
}

std::vector<float> conv1x1_compact(const Kernel1x1& k,
                                   const std::vector<float>& block,
                                   std::size_t positions) {
    k.validate();
    if (block.size() != static_cast<std::size_t>(k.in_channels) * positions) {
        throw DimError("compact block size mismatch");
    }
    std::vector<float> out(static_cast<std::size_t>(k.out_channels) * positions,
                           0.0f);
    for (int i = 0; i < k.out_channels; ++i) {
        float* dst = out.data() + static_cast<std::size_t>(i) * positions;
        for (int j = 0; j < k.in_channels; ++j) {
            const float w = k.at(i, j);
            const float* src = block.data() + static_cast<std::size_t>(j) * positions;
            for (std::size_t p = 0; p < positions; ++p) dst[p] += w * src[p];
        }
    }
    return out;
}

WccForwardResult wcc_forward(const WccLayerSpec& spec, const Tensor3& x) {
    spec.validate();
    if (x.channels() != spec.kernel.in_channels) {
        throw DimError("wcc_forward: input has " + std::to_string(x.channels()) +
                       " channels, kernel expects " +
                       std::to_string(spec.kernel.in_channels));
    }

    HwtResult fw = hwt(x, spec.wavelet);
    const ShrinkSet kept = select_topk(channel_norms(fw.coeffs), spec.rate);
    std::vector<float> block = gather(fw.coeffs, kept);

    if (spec.coeff_quant) {
        quantize_block(block, calibrated(*spec.coeff_quant, block));
    }

    Kernel1x1 weights = spec.kernel;
    if (spec.weight_quant) {
        const QuantSpec wq = calibrated(*spec.weight_quant, weights.weights);
        quantize_block(weights.weights, wq);
    }

    const std::vector<float> out_block = conv1x1_compact(weights, block, kept.k());
    Tensor3 coeffs_out = scatter(out_block, kept, spec.kernel.out_channels,
                                 fw.layout.padded_height, fw.layout.padded_width);
    Tensor3 output = ihwt(coeffs_out, fw.layout, spec.wavelet);
    return {std::move(output), kept};
}

WccGradients wcc_backward(const WccLayerSpec& spec, const Tensor3& x,
                          const Tensor3& grad_out) {
    spec.validate();
    if (x.channels() != spec.kernel.in_channels) {
        throw DimError("wcc_backward: input channel mismatch");
    }
    if (grad_out.channels() != spec.kernel.out_channels ||
        grad_out.height() != x.height() || grad_out.width() != x.width()) {
        throw DimError("wcc_backward: grad_out shape mismatch");
    }

    // Recompute the forward-pass state; the index set and calibrations are
    // deterministic functions of x, so this reproduces them exactly.
    HwtResult fw = hwt(x, spec.wavelet);
    const ShrinkSet kept = select_topk(channel_norms(fw.coeffs), spec.rate);
    const std::vector<float> pre_quant = gather(fw.coeffs, kept);

    std::vector<float> block = pre_quant;
    QuantSpec coeff_q;
    if (spec.coeff_quant) {
        coeff_q = calibrated(*spec.coeff_quant, pre_quant);
        quantize_block(block, coeff_q);
    }

    Kernel1x1 weights = spec.kernel;
    QuantSpec weight_q;
    if (spec.weight_quant) {
        weight_q = calibrated(*spec.weight_quant, spec.kernel.weights);
        quantize_block(weights.weights, weight_q);
    }

    // Adjoint of scatter -> inverse transform -> crop: zero-extend the
    // output gradient, run the forward transform on the padded plane,
    // gather on the same index set.
    const WaveletSpec padded_spec = on_padded_plane(spec.wavelet);
    HwtResult bw = hwt(zero_extend(grad_out, fw.layout), padded_spec);
    const std::vector<float> grad_conv_out = gather(bw.coeffs, kept);

    const std::size_t k = kept.k();

    // grad wrt kernel: grad_conv_out (C_out x k) times block^T (k x C_in),
    // ascending position order.
    Kernel1x1 grad_kernel(spec.kernel.out_channels, spec.kernel.in_channels);
    for (int i = 0; i < spec.kernel.out_channels; ++i) {
        const float* go = grad_conv_out.data() + static_cast<std::size_t>(i) * k;
        for (int j = 0; j < spec.kernel.in_channels; ++j) {
            const float* vq = block.data() + static_cast<std::size_t>(j) * k;
            float acc = 0.0f;
            for (std::size_t p = 0; p < k; ++p) acc += go[p] * vq[p];
            grad_kernel.at(i, j) = acc;
        }
    }
    if (spec.weight_quant) {
        ste_mask_block(grad_kernel.weights, spec.kernel.weights, weight_q);
    }

    // grad wrt gathered coefficients: K^T applied to grad_conv_out.
    std::vector<float> grad_block(
        static_cast<std::size_t>(spec.kernel.in_channels) * k, 0.0f);
    for (int j = 0; j < spec.kernel.in_channels; ++j) {
        float* dst = grad_block.data() + static_cast<std::size_t>(j) * k;
        for (int i = 0; i < spec.kernel.out_channels; ++i) {
            const float w = weights.at(i, j);
            const float* src = grad_conv_out.data() + static_cast<std::size_t>(i) * k;
            for (std::size_t p = 0; p < k; ++p) dst[p] += w * src[p];
        }
    }
    if (spec.coeff_quant) {
        ste_mask_block(grad_block, pre_quant, coeff_q);
    }

    // Adjoint of pad -> forward transform -> gather.
    Tensor3 grad_coeffs = scatter(grad_block, kept, spec.kernel.in_channels,
                                  fw.layout.padded_height, fw.layout.padded_width);
    CoeffLayout padded_layout = fw.layout;
    padded_layout.original_height = fw.layout.padded_height;
    padded_layout.original_width = fw.layout.padded_width;
    Tensor3 grad_padded = ihwt(grad_coeffs, padded_layout, padded_spec);
    Tensor3 grad_input = reflect_pad_transpose(grad_padded, x.height(), x.width());

    return {std::move(grad_input), std::move(grad_kernel)};
}

ToyFitResult wcc_toy_fit(const Kernel1x1& target, const WccLayerSpec& tmpl,
                         const std::vector<Tensor3>& dataset, int steps,
                         double lr) {
    tmpl.validate();
    target.validate();
    if (dataset.empty()) throw DimError("toy fit needs a nonempty dataset");
    if (target.in_channels != tmpl.kernel.in_channels ||
        target.out_channels != tmpl.kernel.out_channels) {
        throw DimError("toy fit: target/template kernel shape mismatch");
    }

    std::vector<Tensor3> refs;
    refs.reserve(dataset.size());
    for (const Tensor3& x : dataset) refs.push_back(conv1x1_reference(target, x));

    WccLayerSpec cur = tmpl;
    const double inv_n = 1.0 / static_cast<double>(dataset.size());

    auto epoch = [&](bool update) -> double {
        double total = 0.0;
        Kernel1x1 grad(cur.kernel.out_channels, cur.kernel.in_channels);
        for (std::size_t n = 0; n < dataset.size(); ++n) {
            const Tensor3& x = dataset[n];
            const Tensor3 out = wcc_forward(cur, x).output;
            const double inv_elems = 1.0 / static_cast<double>(out.size());
            Tensor3 grad_out = out;
            double sample_loss = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double d =
                    static_cast<double>(out.data()[i]) - refs[n].data()[i];
                sample_loss += d * d;
                grad_out.data()[i] = static_cast<float>(2.0 * d * inv_elems);
            }
            total += sample_loss * inv_elems;
            if (update) {
                const WccGradients g = wcc_backward(cur, x, grad_out);
                for (std::size_t i = 0; i < grad.weights.size(); ++i) {
                    grad.weights[i] += g.grad_kernel.weights[i];
                }
            }
        }
        total *= inv_n;
        if (!std::isfinite(total)) {
            throw Error("toy fit diverged: loss is not finite");
        }
        if (update) {
            for (std::size_t i = 0; i < cur.kernel.weights.size(); ++i) {
                cur.kernel.weights[i] -= static_cast<float>(
                    lr * inv_n * static_cast<double>(grad.weights[i]));
            }
        }
        return total;
    };

    ToyFitResult result;
    result.loss.reserve(static_cast<std::size_t>(steps) + 1);
    for (int s = 0; s < steps; ++s) result.loss.push_back(epoch(true));
    result.loss.push_back(epoch(false));  // loss at the fitted kernel
    result.kernel = cur.kernel;
    return result;
}

std::string to_text(const WccLayerSpec& spec) {
    spec.validate();
    std::ostringstream out;
    out.precision(9);  // round-trips float32
    out << "wcc-layer v1\n";
    out << "channels " << spec.kernel.out_channels << " "
        << spec.kernel.in_channels << "\n";
    out << "weights\n";
    for (int i = 0; i < spec.kernel.out_channels; ++i) {
        for (int j = 0; j < spec.kernel.in_channels; ++j) {
            out << (j ? " " : "") << spec.kernel.at(i, j);
        }
        out << "\n";
    }
    out << "levels " << spec.wavelet.levels << "\n";
    out << "bank " << (spec.wavelet.bank == FilterBank::Haar ? "haar" : "db2")
        << "\n";
    out << "boundary "
        << (spec.wavelet.boundary == BoundaryPolicy::RequireDivisible
                ? "divisible"
                : "reflect")
        << "\n";
    std::ostringstream rate;
    rate.precision(17);
    rate << spec.rate;
    out << "rate " << rate.str() << "\n";
    out << "coeff_bits "
        << (spec.coeff_quant ? std::to_string(spec.coeff_quant->bits) : "none")
        << "\n";
    out << "weight_bits "
        << (spec.weight_quant ? std::to_string(spec.weight_quant->bits) : "none")
        << "\n";
    return out.str();
}

WccLayerSpec wcc_spec_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;

    auto next_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return line;
        }
        throw ParseError("wcc-layer text ended early");
    };
    auto expect_key = [&](const std::string& got, const char* key) {
        if (got.rfind(key, 0) != 0) {
            throw ParseError(std::string("expected '") + key + "', got '" + got +
                             "'");
        }
        return std::istringstream(got.substr(std::string(key).size()));
    };

    if (next_line() != "wcc-layer v1") {
        throw ParseError("missing 'wcc-layer v1' header");
    }

    WccLayerSpec spec;
    int out_ch = 0;
    int in_ch = 0;
    {
        auto fields = expect_key(next_line(), "channels");
        if (!(fields >> out_ch >> in_ch)) throw ParseError("malformed channels line");
    }
    if (out_ch < 1 || in_ch < 1) throw ParseError("channels must be positive");
    if (next_line() != "weights") throw ParseError("expected 'weights'");
    std::vector<float> w(static_cast<std::size_t>(out_ch) * in_ch);
    for (int i = 0; i < out_ch; ++i) {
        std::istringstream row(next_line());
        for (int j = 0; j < in_ch; ++j) {
            if (!(row >> w[static_cast<std::size_t>(i) * in_ch + j])) {
                throw ParseError("weights row " + std::to_string(i) +
                                 " has fewer than " + std::to_string(in_ch) +
                                 " values");
            }
        }
    }
    spec.kernel = Kernel1x1(out_ch, in_ch, std::move(w));

    {
        auto fields = expect_key(next_line(), "levels");
        if (!(fields >> spec.wavelet.levels)) throw ParseError("malformed levels");
    }
    {
        auto fields = expect_key(next_line(), "bank");
        std::string bank;
        fields >> bank;
        if (bank == "haar") {
            spec.wavelet.bank = FilterBank::Haar;
        } else if (bank == "db2") {
            spec.wavelet.bank = FilterBank::Daubechies2;
        } else {
            throw ParseError("unknown bank '" + bank + "'");
        }
    }
    {
        auto fields = expect_key(next_line(), "boundary");
        std::string policy;
        fields >> policy;
        if (policy == "divisible") {
            spec.wavelet.boundary = BoundaryPolicy::RequireDivisible;
        } else if (policy == "reflect") {
            spec.wavelet.boundary = BoundaryPolicy::ReflectPad;
        } else {
            throw ParseError("unknown boundary '" + policy + "'");
        }
    }
    {
        auto fields = expect_key(next_line(), "rate");
        if (!(fields >> spec.rate)) throw ParseError("malformed rate");
    }
    auto parse_bits = [&](const char* key) -> std::optional<QuantSpec> {
        auto fields = expect_key(next_line(), key);
        std::string value;
        fields >> value;
        if (value == "none") return std::nullopt;
        QuantSpec q;
        q.bits = std::stoi(value);
        q.is_signed = true;
        return q;
    };
    spec.coeff_quant = parse_bits("coeff_bits");
    spec.weight_quant = parse_bits("weight_bits");
    spec.validate();
    return spec;
}

}  // namespace wcc
