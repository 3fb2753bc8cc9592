#include "wcc/tensor.hpp"

#include <cmath>
#include <string>

namespace wcc {

namespace {

void check_dims(int channels, int height, int width) {
    if (channels < 1 || height < 1 || width < 1) {
        throw DimError("tensor dims must be positive, got " +
                       std::to_string(channels) + "x" + std::to_string(height) +
                       "x" + std::to_string(width));
    }
}

}  // namespace

Tensor3::Tensor3(int channels, int height, int width)
    : channels_(channels), height_(height), width_(width) {
    check_dims(channels, height, width);
    data_.assign(static_cast<std::size_t>(channels) * height * width, 0.0f);
}

Tensor3::Tensor3(int channels, int height, int width, std::vector<float> data)
    : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
    check_dims(channels, height, width);
    const std::size_t expected = static_cast<std::size_t>(channels) * height * width;
    if (data_.size() != expected) {
        throw DimError("tensor data length " + std::to_string(data_.size()) +
                       " != channels*height*width = " + std::to_string(expected));
    }
}

std::uint64_t SplitMix64::next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

float SplitMix64::next_unit() {
    // top 24 bits / 2^24: exactly representable in float32
    return static_cast<float>(next() >> 40) * 0x1.0p-24f;
}

float SplitMix64::next_symmetric() { return 2.0f * next_unit() - 1.0f; }

Tensor3 random_tensor(int channels, int height, int width, std::uint64_t seed) {
    Tensor3 t(channels, height, width);
    SplitMix64 rng(seed);
    for (auto& v : t.data()) v = rng.next_symmetric();
    return t;
}

double l2_norm(const Tensor3& t) {
    double acc = 0.0;
    for (float v : t.data()) acc += static_cast<double>(v) * v;
    return std::sqrt(acc);
}

double max_abs(const Tensor3& t) {
    double m = 0.0;
    for (float v : t.data()) m = std::max(m, static_cast<double>(std::fabs(v)));
    return m;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
    if (!a.same_shape(b)) throw DimError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, static_cast<double>(std::fabs(a.data()[i] - b.data()[i])));
    }
    return m;
}

double mse(const Tensor3& a, const Tensor3& b) {
    if (!a.same_shape(b)) throw DimError("mse: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a.data()[i]) - b.data()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

}  // namespace wcc
