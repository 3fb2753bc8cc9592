#include <doctest.h>

#include <cstdlib>
#include <string>

#include "wcc/cost.hpp"
#include "wcc/errors.hpp"

using namespace wcc;

namespace {

ConvLayerSpec pointwise(std::int64_t c_in, std::int64_t c_out, std::int64_t h,
                        std::int64_t w) {
    ConvLayerSpec spec;
    spec.name = "pw";
    spec.c_in = c_in;
    spec.c_out = c_out;
    spec.height = h;
    spec.width = w;
    return spec;
}

std::string data_dir() {
    const char* dir = std::getenv("WCC_DATA_DIR");
    REQUIRE_MESSAGE(dir != nullptr, "WCC_DATA_DIR must point at data/");
    return dir;
}

}  // namespace

TEST_SUITE("mac-bops") {

TEST_CASE("pointwise rows of the network table") {
    CHECK(mac_conv(pointwise(16, 96, 513, 1025)) == 807'667'200);
    CHECK(mac_conv(pointwise(32, 16, 511, 1023)) == 267'649'536);
    CHECK(mac_conv(pointwise(144, 24, 256, 512)) == 452'984'832);
}

TEST_CASE("depthwise rows need the groups divisor") {
    ConvLayerSpec dw;
    dw.name = "dw";
    dw.c_in = 32;
    dw.c_out = 32;
    dw.kernel_w = dw.kernel_h = 3;
    dw.groups = 32;
    dw.height = 511;
    dw.width = 1023;
    CHECK(mac_conv(dw) == 150'552'864);
}

TEST_CASE("non-integer division is rejected with the divisor named") {
    ConvLayerSpec spec = pointwise(3, 3, 3, 3);
    spec.stride_w = spec.stride_h = 2;
    CHECK_THROWS_WITH_AS(mac_conv(spec), doctest::Contains("groups*stride"),
                         DimError);
}

TEST_CASE("groups must divide both channel counts") {
    ConvLayerSpec spec = pointwise(6, 8, 4, 4);
    spec.groups = 3;
    CHECK_THROWS_AS(mac_conv(spec), DimError);
}

TEST_CASE("expansion layer BOPs at 8/8 bits") {
    CHECK(bops_conv(pointwise(160, 960, 34, 34), 8, 8) == 11'363'942'400LL);
}

TEST_CASE("unit bit widths reduce BOPs to MACs") {
    const ConvLayerSpec spec = pointwise(17, 33, 10, 14);
    CHECK(bops_conv(spec, 1, 1) == mac_conv(spec));
}

TEST_CASE("BOPs are linear in each bit width") {
    const ConvLayerSpec spec = pointwise(8, 8, 12, 12);
    CHECK(bops_conv(spec, 8, 16) == 2 * bops_conv(spec, 8, 8));
    CHECK(bops_conv(spec, 32, 32) == 16 * bops_conv(spec, 8, 8));
}

}  // TEST_SUITE("mac-bops")

TEST_SUITE("transform-cost") {

TEST_CASE("three-level costs of the worked example") {
    CHECK(bops_transform(160, 34, 34, 3, 8) == 7'768'320);
    CHECK(bops_transform(960, 34, 34, 3, 8) == 46'609'920);
    CHECK(bops_transform(160, 34, 34, 3, 8) + bops_transform(960, 34, 34, 3, 8) ==
          54'378'240);
}

TEST_CASE("single level is the closed form") {
    CHECK(bops_transform(7, 10, 12, 1, 8) == 4 * 7 * 10 * 12 * 8);
}

TEST_CASE("indivisible level terms are rejected") {
    // 4*1*3*3*1 = 36 is not divisible by 16 at level 3
    CHECK_THROWS_AS(bops_transform(1, 3, 3, 3, 1), DimError);
}

}  // TEST_SUITE("transform-cost")

TEST_SUITE("wcc-cost") {

TEST_CASE("half rate on the worked example") {
    const WccLayerCost cost =
        bops_wcc_layer(pointwise(160, 960, 34, 34), 0.5, 3, 8, 8);
    CHECK(cost.kept_positions == 578);
    CHECK(cost.conv_bops == 5'681'971'200LL);
    CHECK(cost.transform_bops == 54'378'240);
    CHECK(cost.total_bops == 5'736'349'440LL);
    CHECK(cost.bitmap_bits == 34 * 34);
    CHECK(cost.index_list_bytes == 4 * 578);
}

TEST_CASE("full rate costs the dense conv plus transform overhead") {
    const ConvLayerSpec layer = pointwise(160, 960, 34, 34);
    const WccLayerCost cost = bops_wcc_layer(layer, 1.0, 3, 8, 8);
    CHECK(cost.conv_bops == bops_conv(layer, 8, 8));
    CHECK(cost.total_bops == bops_conv(layer, 8, 8) + cost.transform_bops);
}

TEST_CASE("conv term is linear in the rate, transform term constant") {
    const ConvLayerSpec layer = pointwise(64, 128, 32, 32);
    const WccLayerCost half = bops_wcc_layer(layer, 0.5, 3, 8, 8);
    const WccLayerCost quarter = bops_wcc_layer(layer, 0.25, 3, 8, 8);
    CHECK(half.conv_bops == 2 * quarter.conv_bops);
    CHECK(half.transform_bops == quarter.transform_bops);
}

TEST_CASE("shrinkage saves on the worked example for every rate <= 0.99") {
    const ConvLayerSpec layer = pointwise(160, 960, 34, 34);
    const std::int64_t plain = bops_conv(layer, 8, 8);
    for (const double rate : {0.99, 0.75, 0.5, 0.25, 0.125}) {
        CHECK(bops_wcc_layer(layer, rate, 3, 8, 8).total_bops < plain);
    }
}

TEST_CASE("spatial kernels are unsupported") {
    ConvLayerSpec spatial = pointwise(8, 8, 16, 16);
    spatial.kernel_w = spatial.kernel_h = 3;
    CHECK_THROWS_AS(bops_wcc_layer(spatial, 0.5, 3, 8, 8), DimError);
}

TEST_CASE("effective bit rate") {
    CHECK(effective_bit_rate(8, 0.25) == 2.0);
    CHECK(effective_bit_rate(8, 1.0) == 8.0);
    CHECK(effective_bit_rate(8, 0.125) == 1.0);
}

}  // TEST_SUITE("wcc-cost")

TEST_SUITE("separable") {

TEST_CASE("64-channel 3x3 example") {
    const SeparableSavings s = separable_savings(64, 64, 3, 32, 32);
    CHECK(s.full_macs == 37'748'736);
    CHECK(s.depthwise_macs == 589'824);
    CHECK(s.pointwise_macs == 4'194'304);
    CHECK(s.ratio == doctest::Approx(7.89).epsilon(1e-3));
}

TEST_CASE("1x1 kernels cannot save") {
    const SeparableSavings s = separable_savings(16, 16, 1, 8, 8);
    CHECK(s.ratio < 1.0);
}

TEST_CASE("wide-output limit approaches K^2 c_out / (K^2 + c_out)") {
    const std::int64_t c_out = 10'000;
    const SeparableSavings s = separable_savings(64, c_out, 3, 16, 16);
    const double limit = 9.0 * c_out / (9.0 + c_out);
    CHECK(std::abs(s.ratio - limit) / limit < 0.01);
}

}  // TEST_SUITE("separable")

TEST_SUITE("layer-file") {

TEST_CASE("parses fields and comments") {
    const auto layers = parse_layer_text(
        "# header\n"
        "conv_a 16 96 1 1 1 1 513 1025\n"
        "\n"
        "conv_b 96 96 3 96 2 1 511 1023  # depthwise\n",
        "inline");
    REQUIRE(layers.size() == 2);
    CHECK(layers[0].name == "conv_a");
    CHECK(layers[0].is_pointwise());
    CHECK(layers[1].groups == 96);
    CHECK(layers[1].stride_w == 2);
    CHECK(layers[1].height == 511);
    CHECK(layers[1].width == 1023);
}

TEST_CASE("errors carry the line number") {
    CHECK_THROWS_WITH_AS(parse_layer_text("ok 1 1 1 1 1 1 4 4\nbad 1 2\n", "f"),
                         doctest::Contains("f:2"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_layer_text("x 1 1 1 1 1 1 4 4 extra\n", "f"),
        doctest::Contains("trailing field"), ParseError);
    CHECK_THROWS_WITH_AS(parse_layer_text("x 6 8 1 3 1 1 4 4\n", "f"),
                         doctest::Contains("f:1"), ParseError);
}

TEST_CASE("empty input gives a zero report") {
    const CostReport report = network_report({}, 8, 8);
    CHECK(report.rows.empty());
    CHECK(report.total_macs() == 0);
    CHECK(report.total_bops() == 0);
}

TEST_CASE("network fixture reproduces the published totals") {
    const auto layers =
        load_layer_file(data_dir() + "/mobilenet_v2_cityscapes.layers");
    const CostReport report = network_report(layers, 8, 8);

    CHECK(report.total_macs_pointwise == 18'022'413'312LL);
    CHECK(report.total_macs_spatial == 1'056'190'968LL);

    std::int64_t sum = 0;
    for (const auto& row : report.rows) sum += row.macs;
    CHECK(sum == report.total_macs());

    bool found = false;
    for (const auto& row : report.rows) {
        if (row.layer.name == "InvRes17_conv3") {
            CHECK(row.macs == 2'516'582'400LL);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("report applies WCC accounting to pointwise rows only") {
    const auto layers = parse_layer_text(
        "pw 8 16 1 1 1 1 16 16\n"
        "dw 8 8 3 8 1 1 16 16\n",
        "inline");
    const CostReport report = network_report(layers, 8, 8, 0.5, 3);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].wcc.has_value());
    CHECK_FALSE(report.rows[1].wcc.has_value());
    CHECK(report.total_wcc_bops == report.rows[0].wcc->total_bops);
}

}  // TEST_SUITE("layer-file")
