#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wcc/haar.hpp"
#include "wcc/quant.hpp"
#include "wcc/shrink.hpp"
#include "wcc/tensor.hpp"

namespace wcc {

/// Dense pointwise convolution weights, row-major out x in.
struct Kernel1x1 {
    int out_channels = 0;
    int in_channels = 0;
    std::vector<float> weights;

    Kernel1x1() = default;
    Kernel1x1(int out_ch, int in_ch);
    Kernel1x1(int out_ch, int in_ch, std::vector<float> w);

    float& at(int i, int j) { return weights[static_cast<std::size_t>(i) * in_channels + j]; }
    float at(int i, int j) const { return weights[static_cast<std::size_t>(i) * in_channels + j]; }

    void validate() const;
};

/// Full compressed-convolution layer configuration.
///
/// The alpha fields of coeff_quant and weight_quant are recalibrated on
/// every call (coefficients: max-abs of the gathered block; weights:
/// max-abs of the kernel); only their bit widths are taken from the spec.
/// Both quantizers must be signed.
struct WccLayerSpec {
    Kernel1x1 kernel;
    WaveletSpec wavelet;
    double rate = 1.0;
    std::optional<QuantSpec> coeff_quant;
    std::optional<QuantSpec> weight_quant;

    void validate() const;
};

/// Dense reference: y_i = sum_j k_ij x_j per position, ascending j.
Tensor3 conv1x1_reference(const Kernel1x1& k, const Tensor3& x);

/// The same contraction on a compact C_in x positions block.
std::vector<float> conv1x1_compact(const Kernel1x1& k,
                                   const std::vector<float>& block,
                                   std::size_t positions);

struct WccForwardResult {
    Tensor3 output;
    ShrinkSet kept;
};

/// Forward pass: transform per channel, joint top-k by channel norm,
/// gather, optional signed coefficient quantization, pointwise convolution
/// on the compact block (optionally with quantized weights), scatter onto a
/// zeroed plane, inverse transform.
WccForwardResult wcc_forward(const WccLayerSpec& spec, const Tensor3& x);

struct WccGradients {
    Tensor3 grad_input;
    Kernel1x1 grad_kernel;
};

/// Gradients of sum(grad_out * forward(x)) treating the retained-index set
/// as a constant of the forward pass and passing quantizers through by the
/// straight-through rule with clip masking.
WccGradients wcc_backward(const WccLayerSpec& spec, const Tensor3& x,
                          const Tensor3& grad_out);

struct ToyFitResult {
    Kernel1x1 kernel;
    std::vector<double> loss;  // per-step values of the fitted objective
};

/// Gradient descent fitting the layer to a dense target convolution.
/// Objective: mean over the dataset of per-element squared error between
/// the layer output and conv1x1_reference(target, x). Throws Error when
/// the loss turns non-finite.
ToyFitResult wcc_toy_fit(const Kernel1x1& target, const WccLayerSpec& tmpl,
                         const std::vector<Tensor3>& dataset, int steps,
                         double lr);

/// Human-readable layer-spec form (see README for the grammar).
std::string to_text(const WccLayerSpec& spec);
WccLayerSpec wcc_spec_from_text(const std::string& text);

}  // namespace wcc
