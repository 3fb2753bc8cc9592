#pragma once

#include "wcc/tensor.hpp"

namespace wcc {

/// Uniform per-layer quantizer. Forward pass is scale, clip, round:
///   signed:   alpha * q(clip(x/alpha, -1, 1)),  q over 2^(b-1)-1 levels
///   unsigned: alpha * q(clip(x/alpha,  0, 1)),  q over 2^b-1 levels
/// where q(t) = round(L*t)/L and rounding is half away from zero.
struct QuantSpec {
    int bits = 8;
    bool is_signed = true;
    float alpha = 1.0f;

    /// Grid denominator L: 2^b-1 unsigned, 2^(b-1)-1 signed.
    int grid_levels() const;
    void validate() const;  // bits in [2,16], alpha > 0
};

float quantize_value(float x, const QuantSpec& spec);
Tensor3 quantize(const Tensor3& x, const QuantSpec& spec);

struct Calibration {
    float alpha = 1.0f;
    bool degenerate = false;  // no usable range; alpha fell back to 1.0
};

/// Max-abs (signed) or max-positive (unsigned) clipping scale for x.
Calibration calibrate_alpha(const Tensor3& x, bool is_signed);

/// Straight-through gradient: grad_out passes where x/alpha is strictly
/// inside the clip interval, zero where clipped. Exact masking.
Tensor3 ste_backward(const Tensor3& grad_out, const Tensor3& x,
                     const QuantSpec& spec);

}  // namespace wcc
