#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "lagiir/design.hpp"
#include "lagiir/image.hpp"

namespace lagiir {

/// Gradient-based flow / moving-target configuration. Defaults reproduce the
/// airborne-video setup: non-causal B=2 spatial differentiators, a causal
/// B=2, kappa=1, q=4 temporal differentiator (both sigma = -1) and B=0
/// product smoothers with pole exp(-1/16).
struct FlowConfig {
    double spatial_sigma = -1.0;
    double temporal_sigma = -1.0;
    double temporal_q = 4.0;
    int temporal_kappa = 1;
    double smoothing_pole = std::exp(-1.0 / 16.0);
    double det_threshold = 1e-6;
    double T_space = 1.0;
    double T_time = 1.0;

    void validate() const;

    /// Frames the spatial gradients are delayed by; temporal_q must be a
    /// non-negative integer.
    [[nodiscard]] std::size_t delay_frames() const;
    /// temporal_q + ceil(6 / (1 - p_temporal)).
    [[nodiscard]] std::size_t warmup_frames() const;
    /// ceil(4 / (1 - p_spatial)) pixels affected by start-up transients.
    [[nodiscard]] std::size_t spatial_guard() const;

    [[nodiscard]] NonCausalPair spatial_differentiator() const;
    [[nodiscard]] LdeCoefficients temporal_differentiator() const;
    [[nodiscard]] NonCausalPair spatial_smoother() const;
    [[nodiscard]] LdeCoefficients temporal_smoother() const;
};

struct GradientFrames {
    Image ix;
    Image iy;
    Image iz;
};

struct ProductMaps {
    // Smoothed ("averaged") products.
    Image jxx, jxy, jxz, jyy, jyz;
    // Raw pointwise products.
    Image ixix, ixiy, ixiz, iyiy, iyiz;
};

struct FlowField {
    Image vx;
    Image vy;
    std::vector<std::uint8_t> valid;
};

struct DisparityMap {
    Image dj;
};

/// (Ix, Iy): non-causal differentiator along rows and along columns.
std::pair<Image, Image> spatial_gradients(const Image& img, const FlowConfig& cfg);

/// Streaming temporal derivative. Frame n yields Iz for time n - delay and
/// the input frame from that time, so spatial gradients computed on it line up.
class TemporalGradient {
public:
    struct Sample {
        Image iz;
        Image delayed;
        std::size_t frame_index = 0;
        bool warmup = true;
    };

    TemporalGradient(const FlowConfig& cfg, std::size_t width, std::size_t height);
    Sample push(const Image& frame);

private:
    FlowConfig cfg_;
    TemporalFilter filter_;
    std::deque<Image> history_;
    std::size_t frames_ = 0;
};

GradientFrames gradient_frames(const TemporalGradient::Sample& sample, const FlowConfig& cfg);

/// Raw products only; the smoothed fields are left empty.
ProductMaps raw_products(const GradientFrames& gradients);

/// Spatial smoothing of one frame's products (both axes, non-causal B=0).
/// Equivalent to the full smoother on its first (primed) frame.
ProductMaps smooth_products(const GradientFrames& gradients, const FlowConfig& cfg);

/// Spatial plus causal temporal smoothing across frames.
class ProductSmoother {
public:
    ProductSmoother(const FlowConfig& cfg, std::size_t width, std::size_t height);
    /// While `restart` is set the temporal state is re-primed on this frame.
    ProductMaps push(const GradientFrames& gradients, bool restart);

private:
    FlowConfig cfg_;
    std::vector<TemporalFilter> filters_;
};

/// Per-pixel 2x2 normal-equation solve; ill-conditioned pixels are invalid.
FlowField solve_flow(const ProductMaps& products, const FlowConfig& cfg);

/// Norm of the raw spatiotemporal products not explained by the background
/// flow acting on the raw spatial products.
DisparityMap background_disparity(const ProductMaps& products, const FlowField& flow);

struct FrameResult {
    std::size_t frame_index = 0;
    bool warmup = true;
    FlowField flow;
    DisparityMap disparity;
};

class FlowPipeline {
public:
    FlowPipeline(const FlowConfig& cfg, std::size_t width, std::size_t height);
    FrameResult push(const Image& frame);
    [[nodiscard]] const FlowConfig& config() const { return cfg_; }

private:
    FlowConfig cfg_;
    TemporalGradient temporal_;
    ProductSmoother smoother_;
};

struct SequenceResult {
    std::vector<FrameResult> frames;
    std::size_t warmup_frames = 0;
};

SequenceResult process_sequence(std::span<const Image> stream, const FlowConfig& cfg);

} // namespace lagiir
