#include "wcc/haar.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "wcc/parallel.hpp"

namespace wcc {

namespace {

// Daubechies-2 orthonormal taps; highpass is the quadrature mirror
// g[k] = (-1)^k h[3-k]. Stored as float32 constants derived from
// (1±sqrt(3))/(4 sqrt(2)) and (3±sqrt(3))/(4 sqrt(2)).
constexpr std::array<float, 4> kDb2Lo = {
    0.48296291314469025f, 0.8365163037378079f,
    0.22414386804185735f, -0.12940952255092145f};
constexpr std::array<float, 4> kDb2Hi = {
    -0.12940952255092145f, -0.22414386804185735f,
    0.8365163037378079f, -0.48296291314469025f};

void require_even(int h, int w) {
    if (h % 2 != 0 || w % 2 != 0) {
        throw DimError("transform level needs even dims, got " +
                       std::to_string(h) + "x" + std::to_string(w));
    }
}

// One Haar level on the top-left h x w rectangle of a plane with row
// stride `stride`. Quadrant order: (LL, LH | HL, HH); kernel weights are
// +-1/2 exactly.
void haar_level_forward(float* p, int stride, int h, int w,
                        std::vector<float>& scratch) {
    const int h2 = h / 2;
    const int w2 = w / 2;
    for (int i = 0; i < h2; ++i) {
        for (int j = 0; j < w2; ++j) {
            const float a = p[(2 * i) * stride + 2 * j];
            const float b = p[(2 * i) * stride + 2 * j + 1];
            const float c = p[(2 * i + 1) * stride + 2 * j];
            const float d = p[(2 * i + 1) * stride + 2 * j + 1];
            scratch[i * w + j] = 0.5f * (a + b + c + d);
            scratch[i * w + j + w2] = 0.5f * (a - b + c - d);
            scratch[(i + h2) * w + j] = 0.5f * (a + b - c - d);
            scratch[(i + h2) * w + j + w2] = 0.5f * (a - b - c + d);
        }
    }
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) p[i * stride + j] = scratch[i * w + j];
    }
}

void haar_level_inverse(float* p, int stride, int h, int w,
                        std::vector<float>& scratch) {
    const int h2 = h / 2;
    const int w2 = w / 2;
    for (int i = 0; i < h2; ++i) {
        for (int j = 0; j < w2; ++j) {
            const float ll = p[i * stride + j];
            const float lh = p[i * stride + j + w2];
            const float hl = p[(i + h2) * stride + j];
            const float hh = p[(i + h2) * stride + j + w2];
            scratch[(2 * i) * w + 2 * j] = 0.5f * (ll + lh + hl + hh);
            scratch[(2 * i) * w + 2 * j + 1] = 0.5f * (ll - lh + hl - hh);
            scratch[(2 * i + 1) * w + 2 * j] = 0.5f * (ll + lh - hl - hh);
            scratch[(2 * i + 1) * w + 2 * j + 1] = 0.5f * (ll - lh - hl + hh);
        }
    }
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) p[i * stride + j] = scratch[i * w + j];
    }
}

// db2 level, separable with periodic extension: rows then columns.
// Low-pass halves go left/top, high-pass halves right/bottom, matching the
// Haar quadrant convention.
void db2_filter_pair(const float* src, int n, int step, float* lo, float* hi) {
    const int half = n / 2;
    for (int i = 0; i < half; ++i) {
        float a = 0.0f;
        float d = 0.0f;
        for (int k = 0; k < 4; ++k) {
            const float v = src[((2 * i + k) % n) * step];
            a += kDb2Lo[k] * v;
            d += kDb2Hi[k] * v;
        }
        lo[i] = a;
        hi[i] = d;
    }
}

void db2_unfilter_pair(const float* lo, const float* hi, int n, int step,
                       float* dst) {
    const int half = n / 2;
    for (int i = 0; i < n; ++i) dst[i * step] = 0.0f;
    for (int i = 0; i < half; ++i) {
        for (int k = 0; k < 4; ++k) {
            dst[((2 * i + k) % n) * step] += kDb2Lo[k] * lo[i] + kDb2Hi[k] * hi[i];
        }
    }
}

void db2_level_forward(float* p, int stride, int h, int w,
                       std::vector<float>& scratch) {
    const int h2 = h / 2;
    const int w2 = w / 2;
    std::vector<float> line(static_cast<std::size_t>(std::max(h, w)));
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) line[j] = p[i * stride + j];
        db2_filter_pair(line.data(), w, 1, &scratch[i * w], &scratch[i * w + w2]);
    }
    std::vector<float> lo(h2), hi(h2);
    for (int j = 0; j < w; ++j) {
        for (int i = 0; i < h; ++i) line[i] = scratch[i * w + j];
        db2_filter_pair(line.data(), h, 1, lo.data(), hi.data());
        for (int i = 0; i < h2; ++i) {
            p[i * stride + j] = lo[i];
            p[(i + h2) * stride + j] = hi[i];
        }
    }
}

void db2_level_inverse(float* p, int stride, int h, int w,
                       std::vector<float>& scratch) {
    const int h2 = h / 2;
    const int w2 = w / 2;
    std::vector<float> lo(std::max(h2, w2)), hi(std::max(h2, w2));
    std::vector<float> line(static_cast<std::size_t>(std::max(h, w)));
    for (int j = 0; j < w; ++j) {
        for (int i = 0; i < h2; ++i) {
            lo[i] = p[i * stride + j];
            hi[i] = p[(i + h2) * stride + j];
        }
        db2_unfilter_pair(lo.data(), hi.data(), h, 1, line.data());
        for (int i = 0; i < h; ++i) scratch[i * w + j] = line[i];
    }
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w2; ++j) {
            lo[j] = scratch[i * w + j];
            hi[j] = scratch[i * w + j + w2];
        }
        db2_unfilter_pair(lo.data(), hi.data(), w, 1, &p[i * stride]);
    }
}

void level_forward(FilterBank bank, float* p, int stride, int h, int w,
                   std::vector<float>& scratch) {
    if (bank == FilterBank::Haar) {
        haar_level_forward(p, stride, h, w, scratch);
    } else {
        db2_level_forward(p, stride, h, w, scratch);
    }
}

void level_inverse(FilterBank bank, float* p, int stride, int h, int w,
                   std::vector<float>& scratch) {
    if (bank == FilterBank::Haar) {
        haar_level_inverse(p, stride, h, w, scratch);
    } else {
        db2_level_inverse(p, stride, h, w, scratch);
    }
}

int next_multiple(int v, int m) { return ((v + m - 1) / m) * m; }

// Mirror (symmetric, edge repeated) source index for padded coordinate i.
int reflect_index(int i, int n) {
    const int period = 2 * n;
    int m = i % period;
    return m < n ? m : period - 1 - m;
}

}  // namespace

void WaveletSpec::validate() const {
    if (levels < 1) {
        throw DimError("wavelet levels must be >= 1, got " + std::to_string(levels));
    }
}

CoeffLayout make_layout(int height, int width, const WaveletSpec& spec) {
    spec.validate();
    const int factor = 1 << spec.levels;
    CoeffLayout layout;
    layout.original_height = height;
    layout.original_width = width;
    layout.levels = spec.levels;
    if (spec.boundary == BoundaryPolicy::RequireDivisible) {
        if (height % factor != 0 || width % factor != 0) {
            throw DimError("dims " + std::to_string(height) + "x" +
                           std::to_string(width) + " not divisible by 2^" +
                           std::to_string(spec.levels));
        }
        layout.padded_height = height;
        layout.padded_width = width;
    } else {
        if (height < 2 || width < 2) {
            throw DimError("ReflectPad needs H, W >= 2");
        }
        layout.padded_height = next_multiple(height, factor);
        layout.padded_width = next_multiple(width, factor);
    }
    int h = layout.padded_height;
    int w = layout.padded_width;
    for (int l = 1; l <= spec.levels; ++l) {
        const int h2 = h / 2;
        const int w2 = w / 2;
        LevelBands bands;
        bands.lh = {0, w2, h2, w2};
        bands.hl = {h2, 0, h2, w2};
        bands.hh = {h2, w2, h2, w2};
        layout.detail.push_back(bands);
        h = h2;
        w = w2;
    }
    layout.ll = {0, 0, h, w};
    return layout;
}

Tensor3 hwt_level(const Tensor3& x) {
    require_even(x.height(), x.width());
    Tensor3 y = x;
    parallel_chunks(x.channels(), [&](std::size_t c0, std::size_t c1) {
        std::vector<float> scratch(x.plane_size());
        for (std::size_t c = c0; c < c1; ++c) {
            haar_level_forward(y.channel(static_cast<int>(c)), x.width(),
                               x.height(), x.width(), scratch);
        }
    });
    return y;
}

Tensor3 ihwt_level(const Tensor3& y) {
    require_even(y.height(), y.width());
    Tensor3 x = y;
    parallel_chunks(y.channels(), [&](std::size_t c0, std::size_t c1) {
        std::vector<float> scratch(y.plane_size());
        for (std::size_t c = c0; c < c1; ++c) {
            haar_level_inverse(x.channel(static_cast<int>(c)), y.width(),
                               y.height(), y.width(), scratch);
        }
    });
    return x;
}

HwtResult hwt(const Tensor3& x, const WaveletSpec& spec) {
    const CoeffLayout layout = make_layout(x.height(), x.width(), spec);
    const int ph = layout.padded_height;
    const int pw = layout.padded_width;

    Tensor3 y(x.channels(), ph, pw);
    if (ph == x.height() && pw == x.width()) {
        y.data() = x.data();
    } else {
        for (int c = 0; c < x.channels(); ++c) {
            for (int i = 0; i < ph; ++i) {
                const int si = reflect_index(i, x.height());
                for (int j = 0; j < pw; ++j) {
                    y(c, i, j) = x(c, si, reflect_index(j, x.width()));
                }
            }
        }
    }

    parallel_chunks(y.channels(), [&](std::size_t c0, std::size_t c1) {
        std::vector<float> scratch(y.plane_size());
        for (std::size_t c = c0; c < c1; ++c) {
            float* plane = y.channel(static_cast<int>(c));
            for (int l = 0; l < spec.levels; ++l) {
                level_forward(spec.bank, plane, pw, ph >> l, pw >> l, scratch);
            }
        }
    });
    return {std::move(y), layout};
}

Tensor3 ihwt(const Tensor3& y, const CoeffLayout& layout, const WaveletSpec& spec) {
    spec.validate();
    if (layout.levels != spec.levels) {
        throw DimError("layout levels " + std::to_string(layout.levels) +
                       " != spec levels " + std::to_string(spec.levels));
    }
    if (y.height() != layout.padded_height || y.width() != layout.padded_width) {
        throw DimError("coefficient dims do not match layout");
    }
    if (layout.padded_height % (1 << spec.levels) != 0 ||
        layout.padded_width % (1 << spec.levels) != 0) {
        throw DimError("layout padded dims not divisible by 2^levels");
    }

    Tensor3 padded = y;
    const int ph = layout.padded_height;
    const int pw = layout.padded_width;
    parallel_chunks(y.channels(), [&](std::size_t c0, std::size_t c1) {
        std::vector<float> scratch(y.plane_size());
        for (std::size_t c = c0; c < c1; ++c) {
            float* plane = padded.channel(static_cast<int>(c));
            for (int l = spec.levels - 1; l >= 0; --l) {
                level_inverse(spec.bank, plane, pw, ph >> l, pw >> l, scratch);
            }
        }
    });

    if (ph == layout.original_height && pw == layout.original_width) {
        return padded;
    }
    Tensor3 x(y.channels(), layout.original_height, layout.original_width);
    for (int c = 0; c < x.channels(); ++c) {
        for (int i = 0; i < x.height(); ++i) {
            for (int j = 0; j < x.width(); ++j) x(c, i, j) = padded(c, i, j);
        }
    }
    return x;
}

}  // namespace wcc
