#pragma once

#include <cstdint>
#include <vector>

#include "wcc/tensor.hpp"

namespace wcc {

enum class ChannelNorm { L2, L1, Linf };

/// Joint retained-position set: one sorted index list shared by every
/// channel of a coefficient plane.
struct ShrinkSet {
    std::uint32_t plane_size = 0;
    std::vector<std::uint32_t> indices;  // strictly increasing, < plane_size

    std::size_t k() const noexcept { return indices.size(); }
    void validate() const;  // throws DimError on order/bound violations

    /// Binary blob: u32 count then the sorted u32 indices, little-endian.
    std::vector<std::uint8_t> to_blob() const;
    static ShrinkSet from_blob(const std::vector<std::uint8_t>& blob,
                               std::uint32_t plane_size);

    /// One bit per plane position, LSB-first within each byte.
    std::vector<std::uint8_t> to_bitmap() const;
};

/// Per-position norm of the C-vector of coefficients, as an H*W plane.
std::vector<float> channel_norms(const Tensor3& y,
                                 ChannelNorm norm = ChannelNorm::L2);

/// Top-ceil(rate * plane_size) positions by norm. Every retained norm is
/// >= every dropped norm; ties keep the lower flat index. rate in (0, 1].
ShrinkSet select_topk(const std::vector<float>& norms, double rate);

/// Compact C x k block (row per channel, retained positions in index order).
std::vector<float> gather(const Tensor3& y, const ShrinkSet& s);

/// Zero-filled C x H x W tensor with the compact block written back onto
/// the retained positions. Exact inverse of gather on those positions.
Tensor3 scatter(const std::vector<float>& compact, const ShrinkSet& s,
                int channels, int height, int width);

}  // namespace wcc
