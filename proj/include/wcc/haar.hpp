#pragma once

#include <vector>

#include "wcc/tensor.hpp"

namespace wcc {

enum class FilterBank { Haar, Daubechies2 };

enum class BoundaryPolicy {
    RequireDivisible,  // reject H or W not divisible by 2^levels
    ReflectPad,        // mirror-pad right/bottom to the next multiple, crop on inverse
};

/// Multi-level 2D wavelet transform configuration.
struct WaveletSpec {
    int levels = 3;
    FilterBank bank = FilterBank::Haar;
    BoundaryPolicy boundary = BoundaryPolicy::RequireDivisible;

    void validate() const;  // throws DimError on levels < 1
};

/// Axis-aligned rectangle inside a coefficient plane.
struct SubbandRect {
    int row = 0;
    int col = 0;
    int height = 0;
    int width = 0;
};

/// Detail bands produced at one decomposition level.
struct LevelBands {
    SubbandRect lh;  // horizontal difference, top-right quadrant
    SubbandRect hl;  // vertical difference, bottom-left quadrant
    SubbandRect hh;  // diagonal difference, bottom-right quadrant
};

/// Where each subband of the in-place (Mallat) layout lives in the padded
/// plane. detail[l-1] holds the level-l bands; ll is the deepest low-pass
/// corner. The ll rectangle plus every detail rectangle tile the padded
/// plane exactly.
struct CoeffLayout {
    int original_height = 0;
    int original_width = 0;
    int padded_height = 0;
    int padded_width = 0;
    int levels = 0;
    std::vector<LevelBands> detail;
    SubbandRect ll;
};

CoeffLayout make_layout(int height, int width, const WaveletSpec& spec);

/// One transform level over every channel: each channel becomes the
/// (LL, LH | HL, HH) quadrant arrangement, stride-2 kernels with weights
/// +-1/2, so the per-level map is orthonormal. H and W must be even.
Tensor3 hwt_level(const Tensor3& x);

/// Exact inverse of hwt_level (transposed kernels).
Tensor3 ihwt_level(const Tensor3& y);

struct HwtResult {
    Tensor3 coeffs;
    CoeffLayout layout;
};

/// Multi-level transform: level l is applied to the level-(l-1) LL
/// rectangle, l = 1..levels. Under ReflectPad the input is mirror-padded
/// right/bottom to the next multiple of 2^levels first.
HwtResult hwt(const Tensor3& x, const WaveletSpec& spec);

/// Inverts hwt and, under ReflectPad, crops back to the original H x W.
/// Throws DimError when the layout does not match the spec or tensor.
Tensor3 ihwt(const Tensor3& y, const CoeffLayout& layout, const WaveletSpec& spec);

}  // namespace wcc
