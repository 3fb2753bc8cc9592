#include "wcc/shrink.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "wcc/parallel.hpp"

namespace wcc {

void ShrinkSet::validate() const {
    if (indices.empty()) throw DimError("shrink set must retain at least one index");
    std::uint32_t prev = 0;
    bool first = true;
    for (std::uint32_t idx : indices) {
        if (idx >= plane_size) {
            throw DimError("shrink index " + std::to_string(idx) +
                           " out of bounds for plane of " +
                           std::to_string(plane_size));
        }
        if (!first && idx <= prev) {
            throw DimError("shrink indices must be strictly increasing");
        }
        prev = idx;
        first = false;
    }
}

std::vector<std::uint8_t> ShrinkSet::to_blob() const {
    std::vector<std::uint8_t> blob(4 + 4 * indices.size());
    const std::uint32_t count = static_cast<std::uint32_t>(indices.size());
    auto put_u32 = [&](std::size_t at, std::uint32_t v) {
        blob[at] = static_cast<std::uint8_t>(v & 0xff);
        blob[at + 1] = static_cast<std::uint8_t>((v >> 8) & 0xff);
        blob[at + 2] = static_cast<std::uint8_t>((v >> 16) & 0xff);
        blob[at + 3] = static_cast<std::uint8_t>((v >> 24) & 0xff);
    };
    put_u32(0, count);
    for (std::size_t i = 0; i < indices.size(); ++i) put_u32(4 + 4 * i, indices[i]);
    return blob;
}

ShrinkSet ShrinkSet::from_blob(const std::vector<std::uint8_t>& blob,
                               std::uint32_t plane_size) {
    auto get_u32 = [&](std::size_t at) -> std::uint32_t {
        return std::uint32_t(blob[at]) | (std::uint32_t(blob[at + 1]) << 8) |
               (std::uint32_t(blob[at + 2]) << 16) |
               (std::uint32_t(blob[at + 3]) << 24);
    };
    if (blob.size() < 4) throw ParseError("shrink blob shorter than its header");
    const std::uint32_t count = get_u32(0);
    if (blob.size() != 4 + 4 * static_cast<std::size_t>(count)) {
        throw ParseError("shrink blob size " + std::to_string(blob.size()) +
                         " inconsistent with count " + std::to_string(count));
    }
    ShrinkSet s;
    s.plane_size = plane_size;
    s.indices.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) s.indices[i] = get_u32(4 + 4 * i);
    s.validate();
    return s;
}

std::vector<std::uint8_t> ShrinkSet::to_bitmap() const {
    std::vector<std::uint8_t> bits((plane_size + 7) / 8, 0);
    for (std::uint32_t idx : indices) bits[idx / 8] |= std::uint8_t(1u << (idx % 8));
    return bits;
}

std::vector<float> channel_norms(const Tensor3& y, ChannelNorm norm) {
    const std::size_t n = y.plane_size();
    std::vector<float> out(n, 0.0f);
    parallel_chunks(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            double acc = 0.0;
            for (int c = 0; c < y.channels(); ++c) {
                const double v = y.channel(c)[p];
                switch (norm) {
                    case ChannelNorm::L2: acc += v * v; break;
                    case ChannelNorm::L1: acc += std::fabs(v); break;
                    case ChannelNorm::Linf: acc = std::max(acc, std::fabs(v)); break;
                }
            }
            out[p] = static_cast<float>(norm == ChannelNorm::L2 ? std::sqrt(acc) : acc);
        }
    });
    return out;
}

ShrinkSet select_topk(const std::vector<float>& norms, double rate) {
    if (!(rate > 0.0) || rate > 1.0) {
        throw DimError("shrinkage rate must lie in (0,1], got " +
                       std::to_string(rate));
    }
    const std::size_t n = norms.size();
    if (n == 0) throw DimError("select_topk on an empty plane");
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(rate * static_cast<double>(n)));

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    // ties keep the lower flat index, so the selection is deterministic
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         if (norms[a] != norms[b]) return norms[a] > norms[b];
                         return a < b;
                     });
    order.resize(k);
    std::sort(order.begin(), order.end());

    ShrinkSet s;
    s.plane_size = static_cast<std::uint32_t>(n);
    s.indices = std::move(order);
    return s;
}

std::vector<float> gather(const Tensor3& y, const ShrinkSet& s) {
    if (s.plane_size != y.plane_size()) {
        throw DimError("shrink set plane size mismatch");
    }
    s.validate();
    const std::size_t k = s.k();
    std::vector<float> block(static_cast<std::size_t>(y.channels()) * k);
    for (int c = 0; c < y.channels(); ++c) {
        const float* plane = y.channel(c);
        float* row = block.data() + static_cast<std::size_t>(c) * k;
        for (std::size_t i = 0; i < k; ++i) row[i] = plane[s.indices[i]];
    }
    return block;
}

Tensor3 scatter(const std::vector<float>& compact, const ShrinkSet& s,
                int channels, int height, int width) {
    const std::size_t plane = static_cast<std::size_t>(height) * width;
    if (s.plane_size != plane) throw DimError("shrink set plane size mismatch");
    s.validate();
    const std::size_t k = s.k();
    if (compact.size() != static_cast<std::size_t>(channels) * k) {
        throw DimError("compact block size " + std::to_string(compact.size()) +
                       " != channels*k = " + std::to_string(channels * k));
    }
    Tensor3 y(channels, height, width);  // zero-filled
    for (int c = 0; c < channels; ++c) {
        float* out = y.channel(c);
        const float* row = compact.data() + static_cast<std::size_t>(c) * k;
        for (std::size_t i = 0; i < k; ++i) out[s.indices[i]] = row[i];
    }
    return y;
}

}  // namespace wcc
