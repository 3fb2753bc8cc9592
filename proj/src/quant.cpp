#include "wcc/quant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcc/parallel.hpp"

namespace wcc {

int QuantSpec::grid_levels() const {
    return is_signed ? (1 << (bits - 1)) - 1 : (1 << bits) - 1;
}

void QuantSpec::validate() const {
    if (bits < 2 || bits > 16) {
        throw DimError("quantizer bits must lie in [2,16], got " +
                       std::to_string(bits));
    }
    if (!(alpha > 0.0f) || !std::isfinite(alpha)) {
        throw DimError("quantizer alpha must be positive and finite");
    }
}

float quantize_value(float x, const QuantSpec& spec) {
    const float levels = static_cast<float>(spec.grid_levels());
    float t = x / spec.alpha;
    t = std::clamp(t, spec.is_signed ? -1.0f : 0.0f, 1.0f);
    // std::round is round-half-away-from-zero, which keeps the signed grid
    // symmetric
    return spec.alpha * (std::round(levels * t) / levels);
}

Tensor3 quantize(const Tensor3& x, const QuantSpec& spec) {
    spec.validate();
    Tensor3 y = x;
    parallel_chunks(y.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            y.data()[i] = quantize_value(x.data()[i], spec);
        }
    });
    return y;
}

Calibration calibrate_alpha(const Tensor3& x, bool is_signed) {
    float best = 0.0f;
    for (float v : x.data()) {
        const float candidate = is_signed ? std::fabs(v) : std::max(v, 0.0f);
        best = std::max(best, candidate);
    }
    if (best > 0.0f) return {best, false};
    return {1.0f, true};
}

Tensor3 ste_backward(const Tensor3& grad_out, const Tensor3& x,
                     const QuantSpec& spec) {
    spec.validate();
    if (!grad_out.same_shape(x)) {
        throw DimError("ste_backward: grad/input shape mismatch");
    }
    const float lo = spec.is_signed ? -1.0f : 0.0f;
    Tensor3 grad_in = grad_out;
    parallel_chunks(x.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const float t = x.data()[i] / spec.alpha;
            if (!(t > lo && t < 1.0f)) grad_in.data()[i] = 0.0f;
        }
    });
    return grad_in;
}

}  // namespace wcc
