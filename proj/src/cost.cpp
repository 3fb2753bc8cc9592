#include "wcc/cost.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wcc/errors.hpp"

namespace wcc {

namespace {

using i128 = __int128;

std::int64_t to_i64(i128 v, const char* what) {
    if (v < 0 || v > static_cast<i128>(std::numeric_limits<std::int64_t>::max())) {
        throw DimError(std::string(what) + " overflows 63-bit range");
    }
    return static_cast<std::int64_t>(v);
}

void require_positive(std::int64_t v, const char* field, const std::string& name) {
    if (v < 1) {
        throw DimError("layer '" + name + "': " + field + " must be positive");
    }
}

}  // namespace

void ConvLayerSpec::validate() const {
    require_positive(c_in, "c_in", name);
    require_positive(c_out, "c_out", name);
    require_positive(kernel_w, "kernel_w", name);
    require_positive(kernel_h, "kernel_h", name);
    require_positive(groups, "groups", name);
    require_positive(stride_w, "stride_w", name);
    require_positive(stride_h, "stride_h", name);
    require_positive(dilation, "dilation", name);
    require_positive(height, "height", name);
    require_positive(width, "width", name);
    if (c_in % groups != 0 || c_out % groups != 0) {
        throw DimError("layer '" + name + "': groups=" + std::to_string(groups) +
                       " must divide c_in=" + std::to_string(c_in) +
                       " and c_out=" + std::to_string(c_out));
    }
}

std::int64_t mac_conv(const ConvLayerSpec& spec) {
    spec.validate();
    const i128 numerator = i128(spec.c_in) * spec.c_out * spec.width *
                           spec.height * spec.kernel_w * spec.kernel_h;
    const i128 divisor = i128(spec.groups) * spec.stride_w * spec.stride_h;
    if (numerator % divisor != 0) {
        throw DimError("layer '" + spec.name +
                       "': MAC count is not an integer (product not divisible "
                       "by groups*stride = " +
                       std::to_string(static_cast<long long>(divisor)) + ")");
    }
    return to_i64(numerator / divisor, "MAC count");
}

std::int64_t bops_conv(const ConvLayerSpec& spec, int bits_w, int bits_a) {
    if (bits_w < 1 || bits_a < 1) throw DimError("bit widths must be positive");
    return to_i64(i128(mac_conv(spec)) * bits_w * bits_a, "BOPs count");
}

std::int64_t bops_transform(std::int64_t channels, std::int64_t n_w,
                            std::int64_t n_h, int levels, int bits_a) {
    if (channels < 1 || n_w < 1 || n_h < 1) {
        throw DimError("transform cost needs positive channels and spatial size");
    }
    if (levels < 1) throw DimError("transform cost needs levels >= 1");
    if (bits_a < 1) throw DimError("bit widths must be positive");
    const i128 base = i128(4) * channels * n_w * n_h * bits_a;
    i128 total = 0;
    i128 denom = 1;
    for (int l = 1; l <= levels; ++l) {
        if (base % denom != 0) {
            throw DimError("transform cost at level " + std::to_string(l) +
                           " is not an integer (term not divisible by 4^" +
                           std::to_string(l - 1) + ")");
        }
        total += base / denom;
        denom *= 4;
    }
    return to_i64(total, "transform BOPs");
}

WccLayerCost bops_wcc_layer(const ConvLayerSpec& layer, double rate, int levels,
                            int bits_w, int bits_a) {
    layer.validate();
    if (!layer.is_pointwise()) {
        throw DimError("layer '" + layer.name +
                       "': WCC accounting supports 1x1 kernels only");
    }
    if (layer.groups != 1 || layer.stride_w != 1 || layer.stride_h != 1) {
        throw DimError("layer '" + layer.name +
                       "': WCC accounting needs groups=1 and stride=1");
    }
    if (!(rate > 0.0) || rate > 1.0) {
        throw DimError("shrinkage rate must lie in (0,1]");
    }
    if (bits_w < 1 || bits_a < 1) throw DimError("bit widths must be positive");

    const std::int64_t positions = to_i64(i128(layer.width) * layer.height,
                                          "plane position count");
    const std::int64_t kept = static_cast<std::int64_t>(
        std::ceil(rate * static_cast<double>(positions)));

    WccLayerCost cost;
    cost.kept_positions = kept;
    cost.conv_bops =
        to_i64(i128(layer.c_in) * layer.c_out * kept * bits_w * bits_a,
               "WCC conv BOPs");
    cost.transform_bops =
        bops_transform(layer.c_in, layer.width, layer.height, levels, bits_a) +
        bops_transform(layer.c_out, layer.width, layer.height, levels, bits_a);
    cost.total_bops = cost.conv_bops + cost.transform_bops;
    cost.bitmap_bits = positions;
    cost.index_list_bytes = 4 * kept;
    return cost;
}

double effective_bit_rate(int bits_a, double rate) {
    if (bits_a < 1) throw DimError("bit width must be positive");
    if (!(rate > 0.0) || rate > 1.0) {
        throw DimError("shrinkage rate must lie in (0,1]");
    }
    return static_cast<double>(bits_a) * rate;
}

SeparableSavings separable_savings(std::int64_t c_in, std::int64_t c_out,
                                   std::int64_t kernel, std::int64_t n_w,
                                   std::int64_t n_h) {
    if (c_in < 1 || c_out < 1 || kernel < 1 || n_w < 1 || n_h < 1) {
        throw DimError("separable_savings needs positive dimensions");
    }
    SeparableSavings s;
    const i128 hw = i128(n_w) * n_h;
    s.full_macs = to_i64(i128(c_in) * c_out * kernel * kernel * hw, "full MACs");
    s.depthwise_macs = to_i64(i128(c_in) * kernel * kernel * hw, "depthwise MACs");
    s.pointwise_macs = to_i64(i128(c_in) * c_out * hw, "pointwise MACs");
    s.ratio = static_cast<double>(s.full_macs) /
              static_cast<double>(s.depthwise_macs + s.pointwise_macs);
    return s;
}

std::vector<ConvLayerSpec> parse_layer_text(const std::string& text,
                                            const std::string& origin) {
    std::vector<ConvLayerSpec> layers;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        ConvLayerSpec spec;
        if (!(fields >> spec.name)) continue;  // blank or comment-only line

        std::int64_t kernel = 0;
        std::int64_t stride = 0;
        if (!(fields >> spec.c_in >> spec.c_out >> kernel >> spec.groups >>
              stride >> spec.dilation >> spec.height >> spec.width)) {
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": expected 'name c_in c_out K groups stride "
                             "dilation H W'");
        }
        std::string extra;
        if (fields >> extra) {
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": unexpected trailing field '" + extra + "'");
        }
        spec.kernel_w = kernel;
        spec.kernel_h = kernel;
        spec.stride_w = stride;
        spec.stride_h = stride;
        try {
            spec.validate();
        } catch (const DimError& e) {
            throw ParseError(origin + ":" + std::to_string(lineno) + ": " +
                             e.what());
        }
        layers.push_back(std::move(spec));
    }
    return layers;
}

std::vector<ConvLayerSpec> load_layer_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_layer_text(buf.str(), path);
}

CostReport network_report(const std::vector<ConvLayerSpec>& layers, int bits_w,
                          int bits_a, std::optional<double> wcc_rate,
                          int levels) {
    CostReport report;
    for (const ConvLayerSpec& layer : layers) {
        CostReport::Row row;
        row.layer = layer;
        row.macs = mac_conv(layer);
        row.bops = bops_conv(layer, bits_w, bits_a);
        if (layer.is_pointwise()) {
            report.total_macs_pointwise += row.macs;
            report.total_bops_pointwise += row.bops;
            if (wcc_rate) {
                row.wcc = bops_wcc_layer(layer, *wcc_rate, levels, bits_w, bits_a);
                report.total_wcc_bops += row.wcc->total_bops;
            }
        } else {
            report.total_macs_spatial += row.macs;
            report.total_bops_spatial += row.bops;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace wcc
