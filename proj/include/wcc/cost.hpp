#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wcc {

/// One convolution layer row for cost accounting. Spatial sizes are taken
/// verbatim from the caller (or spec file); nothing is derived from
/// padding or stride.
struct ConvLayerSpec {
    std::string name;
    std::int64_t c_in = 0;
    std::int64_t c_out = 0;
    std::int64_t kernel_w = 1;
    std::int64_t kernel_h = 1;
    std::int64_t groups = 1;
    std::int64_t stride_w = 1;
    std::int64_t stride_h = 1;
    std::int64_t dilation = 1;  // metadata only, no effect on counts
    std::int64_t height = 0;
    std::int64_t width = 0;

    bool is_pointwise() const noexcept { return kernel_w == 1 && kernel_h == 1; }
    void validate() const;  // positivity, groups dividing both channel counts
};

/// Exact MAC count: C_in*C_out*N_W*N_H*K_W*K_H / (groups*S_W*S_H).
/// Throws DimError when the division is not exact, naming the divisor.
std::int64_t mac_conv(const ConvLayerSpec& spec);

/// mac_conv scaled by the weight and activation bit widths, exact.
std::int64_t bops_conv(const ConvLayerSpec& spec, int bits_w, int bits_a);

/// Multi-level transform cost: sum over l=1..levels of
/// 4*C*N_W*N_H*b_a / 4^(l-1), summed exactly (each term must divide).
/// Forward transforms pass C_in, inverse transforms pass C_out.
std::int64_t bops_transform(std::int64_t channels, std::int64_t n_w,
                            std::int64_t n_h, int levels, int bits_a);

/// Cost of running a pointwise layer through the compressed path.
struct WccLayerCost {
    std::int64_t kept_positions = 0;   // k = ceil(rate * positions)
    std::int64_t conv_bops = 0;        // convolution on k positions
    std::int64_t transform_bops = 0;   // forward (C_in) + inverse (C_out)
    std::int64_t total_bops = 0;       // conv_bops + transform_bops
    // Informational only, never added to total_bops: the shared index
    // list / bitmap the compressed layer has to keep around.
    std::int64_t bitmap_bits = 0;
    std::int64_t index_list_bytes = 0;
};

WccLayerCost bops_wcc_layer(const ConvLayerSpec& layer, double rate,
                            int levels, int bits_w, int bits_a);

/// Coefficient bit width times shrinkage rate, the equivalence currency
/// between shrinkage and aggressive quantization.
double effective_bit_rate(int bits_a, double rate);

struct SeparableSavings {
    std::int64_t full_macs = 0;       // c_in*c_out*K^2*H*W
    std::int64_t depthwise_macs = 0;  // c_in*K^2*H*W
    std::int64_t pointwise_macs = 0;  // c_in*c_out*H*W
    double ratio = 0.0;               // full / (depthwise + pointwise)
};

SeparableSavings separable_savings(std::int64_t c_in, std::int64_t c_out,
                                   std::int64_t kernel, std::int64_t n_w,
                                   std::int64_t n_h);

struct CostReport {
    struct Row {
        ConvLayerSpec layer;
        std::int64_t macs = 0;
        std::int64_t bops = 0;
        std::optional<WccLayerCost> wcc;  // set for pointwise rows when a rate is given
    };
    std::vector<Row> rows;
    std::int64_t total_macs_pointwise = 0;
    std::int64_t total_macs_spatial = 0;
    std::int64_t total_bops_pointwise = 0;
    std::int64_t total_bops_spatial = 0;
    std::int64_t total_wcc_bops = 0;  // pointwise rows with WCC accounting applied

    std::int64_t total_macs() const { return total_macs_pointwise + total_macs_spatial; }
    std::int64_t total_bops() const { return total_bops_pointwise + total_bops_spatial; }
};

/// Layer-spec file: one layer per line,
///   name c_in c_out K groups stride dilation H W
/// with '#' comments and blank lines ignored. Errors carry line numbers.
std::vector<ConvLayerSpec> parse_layer_text(const std::string& text,
                                            const std::string& origin);
std::vector<ConvLayerSpec> load_layer_file(const std::string& path);

CostReport network_report(const std::vector<ConvLayerSpec>& layers, int bits_w,
                          int bits_a, std::optional<double> wcc_rate = {},
                          int levels = 3);

}  // namespace wcc
