#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wcc/errors.hpp"

namespace wcc {

/// Dense C x H x W float32 tensor, channel-major then row-major:
/// element (c, i, j) lives at data[c*H*W + i*W + j].
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int channels, int height, int width);
    Tensor3(int channels, int height, int width, std::vector<float> data);

    int channels() const noexcept { return channels_; }
    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    std::size_t plane_size() const noexcept {
        return static_cast<std::size_t>(height_) * width_;
    }
    std::size_t size() const noexcept { return data_.size(); }

    float& operator()(int c, int i, int j) {
        return data_[offset(c, i, j)];
    }
    float operator()(int c, int i, int j) const {
        return data_[offset(c, i, j)];
    }

    float* channel(int c) { return data_.data() + c * plane_size(); }
    const float* channel(int c) const { return data_.data() + c * plane_size(); }

    std::vector<float>& data() noexcept { return data_; }
    const std::vector<float>& data() const noexcept { return data_; }

    bool same_shape(const Tensor3& other) const noexcept {
        return channels_ == other.channels_ && height_ == other.height_ &&
               width_ == other.width_;
    }

private:
    std::size_t offset(int c, int i, int j) const noexcept {
        return (static_cast<std::size_t>(c) * height_ + i) * width_ + j;
    }

    int channels_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

/// Deterministic fixture tensor with values in [-1, 1).
///
/// Generator: splitmix64. State update per draw:
///   s += 0x9E3779B97F4A7C15
///   z = s; z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
///   z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
/// The top 24 bits of z, divided by 2^24, give u in [0, 1); the stored
/// value is 2u - 1 (exact in float32). Elements are drawn in flat index
/// order, so the same (dims, seed) yields the same bytes on any platform.
Tensor3 random_tensor(int channels, int height, int width, std::uint64_t seed);

/// Raw splitmix64 stream, exposed so fixtures outside Tensor3 can share it.
struct SplitMix64 {
    std::uint64_t state = 0;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    /// 24-bit mantissa draw mapped to [-1, 1).
    float next_symmetric();
    /// 24-bit mantissa draw mapped to [0, 1).
    float next_unit();
};

double l2_norm(const Tensor3& t);
double max_abs(const Tensor3& t);
double max_abs_diff(const Tensor3& a, const Tensor3& b);
double mse(const Tensor3& a, const Tensor3& b);

}  // namespace wcc
