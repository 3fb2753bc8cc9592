// Regenerates the grayscale fixture images under data/images/. The scenes
// are synthetic but built the way photographs behave for a wavelet coder:
// large smooth regions, soft-edged shapes, and gentle global gradients.
//
// Usage: wcc_make_images <output-dir>

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "wcc/io.hpp"
#include "wcc/tensor.hpp"

namespace {

constexpr int kSize = 256;

float smoothstep(float edge0, float edge1, float x) {
    float t = (x - edge0) / (edge1 - edge0);
    t = std::clamp(t, 0.0f, 1.0f);
    return t * t * (3.0f - 2.0f * t);
}

// Soft-edged disk: 1 inside, 0 outside, ~4 px transition band.
float disk(float x, float y, float cx, float cy, float r) {
    const float d = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy));
    return 1.0f - smoothstep(r - 2.0f, r + 2.0f, d);
}

wcc::Tensor3 render(const std::function<float(float, float)>& shade) {
    wcc::Tensor3 t(1, kSize, kSize);
    for (int i = 0; i < kSize; ++i) {
        for (int j = 0; j < kSize; ++j) {
            t(0, i, j) = std::clamp(shade(static_cast<float>(j),
                                          static_cast<float>(i)),
                                    0.0f, 1.0f);
        }
    }
    return t;
}

// Band-limited texture somewhere between foliage and film grain: strong
// enough to survive 8-bit coefficient quantization, sparse enough that a
// wavelet coder still wins.
float texture(float x, float y, float amp, float fx, float fy) {
    return amp * std::sin(fx * x + 0.8f * std::sin(fy * y)) *
           std::cos(fy * y + 0.6f * std::sin(0.7f * fx * x));
}

wcc::Tensor3 scene_orbs() {
    return render([](float x, float y) {
        float v = 0.25f + 0.4f * (y / kSize);
        v += 0.45f * disk(x, y, 70, 80, 38);
        v -= 0.30f * disk(x, y, 170, 150, 52);
        v += 0.25f * disk(x, y, 210, 60, 24);
        v += texture(x, y, 0.045f, 0.55f, 0.40f);
        return v;
    });
}

wcc::Tensor3 scene_horizon() {
    return render([](float x, float y) {
        const float horizon = 120.0f + 18.0f * std::sin(x * 0.012f);
        const float sky = 0.85f - 0.35f * (y / kSize);
        const float ground = 0.30f - 0.10f * ((y - horizon) / kSize);
        const float mix = smoothstep(horizon - 3.0f, horizon + 3.0f, y);
        float v = sky * (1.0f - mix) + ground * mix;
        v += 0.10f * disk(x, y, 190, 52, 20);  // sun
        v += mix * texture(x, y, 0.06f, 0.9f, 0.7f);
        return v;
    });
}

wcc::Tensor3 scene_clouds() {
    return render([](float x, float y) {
        struct Puff {
            float cx, cy, sx, sy, a;
        };
        static const Puff puffs[] = {
            {60, 70, 42, 30, 0.45f},  {150, 60, 55, 26, 0.38f},
            {210, 120, 38, 34, 0.42f}, {90, 170, 60, 38, 0.35f},
            {180, 200, 46, 30, 0.40f}, {30, 210, 36, 28, 0.30f},
        };
        float v = 0.35f + 0.10f * (x + y) / (2.0f * kSize);
        for (const Puff& p : puffs) {
            const float dx = (x - p.cx) / p.sx;
            const float dy = (y - p.cy) / p.sy;
            v += p.a * std::exp(-(dx * dx + dy * dy));
        }
        v += texture(x, y, 0.035f, 0.30f, 0.24f);
        return v * 0.8f;
    });
}

wcc::Tensor3 scene_panels() {
    return render([](float x, float y) {
        // rotated soft-edged slabs over a corner gradient
        const float u = 0.866f * x + 0.5f * y;
        const float w = -0.5f * x + 0.866f * y;
        float v = 0.2f + 0.3f * (x / kSize);
        v += 0.35f * smoothstep(60, 66, u) * (1.0f - smoothstep(150, 156, u));
        v += 0.20f * smoothstep(40, 46, w) * (1.0f - smoothstep(110, 116, w));
        v -= 0.15f * smoothstep(190, 196, u);
        v += texture(x, y, 0.04f, 0.75f, 0.55f);
        return v;
    });
}

wcc::Tensor3 scene_waves() {
    return render([](float x, float y) {
        const float phase = 0.045f * y + 8.0f * std::sin(0.008f * x);
        float v = 0.5f + 0.18f * std::sin(phase);
        const float cx = x - 128.0f;
        const float cy = y - 128.0f;
        v *= 1.0f - 0.5f * (cx * cx + cy * cy) / (2.0f * 128.0f * 128.0f);
        return v + 0.15f + texture(x, y, 0.05f, 1.1f, 0.35f);
    });
}

wcc::Tensor3 scene_tiles() {
    return render([](float x, float y) {
        auto tile = [](float t) {
            const float period = 64.0f;
            const float m = t - period * std::floor(t / period);
            return smoothstep(2.0f, 6.0f, m) * (1.0f - smoothstep(58.0f, 62.0f, m));
        };
        const float grid = tile(x) * tile(y);
        float v = 0.25f + 0.45f * grid;
        v += 0.2f * (1.0f - y / kSize) * (x / kSize);
        v += grid * texture(x, y, 0.05f, 0.65f, 0.85f);
        return v;
    });
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
        return 1;
    }
    const std::string dir = argv[1];
    const std::pair<const char*, wcc::Tensor3 (*)()> scenes[] = {
        {"img1_orbs.pgm", scene_orbs},       {"img2_horizon.pgm", scene_horizon},
        {"img3_clouds.pgm", scene_clouds},   {"img4_panels.pgm", scene_panels},
        {"img5_waves.pgm", scene_waves},     {"img6_tiles.pgm", scene_tiles},
    };
    for (const auto& [name, fn] : scenes) {
        const std::string path = dir + "/" + name;
        wcc::save_pgm(fn(), path);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}
