#include "lagiir/flow.hpp"

#include <cmath>
#include <string>

#include "lagiir/error.hpp"
#include "lagiir/kernels.hpp"

namespace lagiir {

namespace {

Image smooth_spatial(const NonCausalPair& smoother, const Image& img) {
    return filter_image_separable(smoother, filter_image_separable(smoother, img, Axis::Rows), Axis::Cols);
}

} // namespace

void FlowConfig::validate() const {
    if (!(spatial_sigma < 0.0) || !(temporal_sigma < 0.0)) {
        throw DesignError("flow sigmas must be negative");
    }
    if (!(smoothing_pole > 0.0 && smoothing_pole < 1.0)) {
        throw DesignError("smoothing pole must lie in (0, 1)");
    }
    if (temporal_kappa < 0) {
        throw DesignError("temporal kappa must be non-negative");
    }
    if (!(temporal_q >= 0.0) || std::floor(temporal_q) != temporal_q) {
        throw DesignError("temporal q must be a non-negative integer so frames can be aligned");
    }
    if (!(det_threshold >= 0.0)) {
        throw DesignError("det threshold must be non-negative");
    }
    if (!(T_space > 0.0) || !(T_time > 0.0)) {
        throw DesignError("sample periods must be positive");
    }
}

std::size_t FlowConfig::delay_frames() const {
    return static_cast<std::size_t>(temporal_q);
}

std::size_t FlowConfig::warmup_frames() const {
    const double p = std::exp(temporal_sigma);
    return delay_frames() + static_cast<std::size_t>(std::ceil(6.0 / (1.0 - p)));
}

std::size_t FlowConfig::spatial_guard() const {
    const double p = std::exp(spatial_sigma);
    return static_cast<std::size_t>(std::ceil(4.0 / (1.0 - p)));
}

NonCausalPair FlowConfig::spatial_differentiator() const {
    FilterDesign d;
    d.degree = 2;
    d.derivative = 1;
    d.weight = WeightSpec{spatial_sigma, 0, Causality::TwoSided};
    d.sample_period = T_space;
    return derive_noncausal_pair(d);
}

LdeCoefficients FlowConfig::temporal_differentiator() const {
    FilterDesign d;
    d.degree = 2;
    d.derivative = 1;
    d.weight = WeightSpec{temporal_sigma, temporal_kappa, Causality::Causal};
    d.delay = temporal_q;
    d.sample_period = T_time;
    return derive_causal_lde(d);
}

NonCausalPair FlowConfig::spatial_smoother() const {
    FilterDesign d;
    d.degree = 0;
    d.weight = WeightSpec::from_pole(smoothing_pole, 0, Causality::TwoSided);
    return derive_noncausal_pair(d);
}

LdeCoefficients FlowConfig::temporal_smoother() const {
    FilterDesign d;
    d.degree = 0;
    d.weight = WeightSpec::from_pole(smoothing_pole, 0, Causality::Causal);
    return derive_causal_lde(d);
}

std::pair<Image, Image> spatial_gradients(const Image& img, const FlowConfig& cfg) {
    const auto diff = cfg.spatial_differentiator();
    return {filter_image_separable(diff, img, Axis::Rows), filter_image_separable(diff, img, Axis::Cols)};
}

TemporalGradient::TemporalGradient(const FlowConfig& cfg, std::size_t width, std::size_t height)
    : cfg_(cfg), filter_((cfg.validate(), cfg.temporal_differentiator()), width, height, Priming::HoldFirst) {}

TemporalGradient::Sample TemporalGradient::push(const Image& frame) {
    Sample s;
    s.iz = filter_.push(frame);
    const std::size_t delay = cfg_.delay_frames();
    if (history_.empty()) {
        // Before the first frame the scene is taken to be static.
        history_.assign(delay, frame);
    }
    history_.push_back(frame);
    s.delayed = history_.front();
    history_.pop_front();
    s.frame_index = frames_;
    s.warmup = frames_ < cfg_.warmup_frames();
    ++frames_;
    return s;
}

GradientFrames gradient_frames(const TemporalGradient::Sample& sample, const FlowConfig& cfg) {
    auto [ix, iy] = spatial_gradients(sample.delayed, cfg);
    return {std::move(ix), std::move(iy), sample.iz};
}

ProductMaps raw_products(const GradientFrames& g) {
    if (!g.ix.same_shape(g.iy) || !g.ix.same_shape(g.iz)) {
        throw IoError("gradient frames have mismatched dimensions");
    }
    const std::size_t w = g.ix.width;
    const std::size_t h = g.ix.height;
    ProductMaps p;
    for (Image* img : {&p.ixix, &p.ixiy, &p.ixiz, &p.iyiy, &p.iyiz}) {
        *img = Image(w, h);
    }
    kernels::gradient_products(g.ix.pixels.data(), g.iy.pixels.data(), g.iz.pixels.data(), w * h,
                               p.ixix.pixels.data(), p.ixiy.pixels.data(), p.ixiz.pixels.data(),
                               p.iyiy.pixels.data(), p.iyiz.pixels.data());
    return p;
}

ProductMaps smooth_products(const GradientFrames& gradients, const FlowConfig& cfg) {
    auto p = raw_products(gradients);
    const auto smoother = cfg.spatial_smoother();
    p.jxx = smooth_spatial(smoother, p.ixix);
    p.jxy = smooth_spatial(smoother, p.ixiy);
    p.jxz = smooth_spatial(smoother, p.ixiz);
    p.jyy = smooth_spatial(smoother, p.iyiy);
    p.jyz = smooth_spatial(smoother, p.iyiz);
    return p;
}

ProductSmoother::ProductSmoother(const FlowConfig& cfg, std::size_t width, std::size_t height) : cfg_(cfg) {
    const auto lde = cfg.temporal_smoother();
    for (int i = 0; i < 5; ++i) {
        filters_.emplace_back(lde, width, height, Priming::HoldFirst);
    }
}

ProductMaps ProductSmoother::push(const GradientFrames& gradients, bool restart) {
    auto p = smooth_products(gradients, cfg_);
    Image* fields[5] = {&p.jxx, &p.jxy, &p.jxz, &p.jyy, &p.jyz};
    for (std::size_t i = 0; i < 5; ++i) {
        if (restart) {
            filters_[i].restart();
        }
        *fields[i] = filters_[i].push(*fields[i]);
    }
    return p;
}

FlowField solve_flow(const ProductMaps& p, const FlowConfig& cfg) {
    const std::size_t w = p.jxx.width;
    const std::size_t h = p.jxx.height;
    FlowField f{Image(w, h), Image(w, h), std::vector<std::uint8_t>(w * h, 0)};
    for (std::size_t i = 0; i < w * h; ++i) {
        const double jxx = p.jxx.pixels[i];
        const double jxy = p.jxy.pixels[i];
        const double jyy = p.jyy.pixels[i];
        const double trace = jxx + jyy;
        const double det = jxx * jyy - jxy * jxy;
        if (!(trace > 0.0) || det < cfg.det_threshold * trace * trace || !(det > 0.0)) {
            continue;
        }
        const double jxz = p.jxz.pixels[i];
        const double jyz = p.jyz.pixels[i];
        f.vx.pixels[i] = -(jyy * jxz - jxy * jyz) / det;
        f.vy.pixels[i] = -(jxx * jyz - jxy * jxz) / det;
        f.valid[i] = 1;
    }
    return f;
}

DisparityMap background_disparity(const ProductMaps& p, const FlowField& flow) {
    const std::size_t w = p.ixix.width;
    const std::size_t h = p.ixix.height;
    DisparityMap d{Image(w, h)};
    for (std::size_t i = 0; i < w * h; ++i) {
        if (!flow.valid[i]) {
            continue;
        }
        const double vx = flow.vx.pixels[i];
        const double vy = flow.vy.pixels[i];
        const double pred_xz = -(p.ixix.pixels[i] * vx + p.ixiy.pixels[i] * vy);
        const double pred_yz = -(p.ixiy.pixels[i] * vx + p.iyiy.pixels[i] * vy);
        const double ex = p.ixiz.pixels[i] - pred_xz;
        const double ey = p.iyiz.pixels[i] - pred_yz;
        d.dj.pixels[i] = std::sqrt(ex * ex + ey * ey);
    }
    return d;
}

FlowPipeline::FlowPipeline(const FlowConfig& cfg, std::size_t width, std::size_t height)
    : cfg_(cfg), temporal_(cfg, width, height), smoother_(cfg, width, height) {}

FrameResult FlowPipeline::push(const Image& frame) {
    const auto sample = temporal_.push(frame);
    const auto gradients = gradient_frames(sample, cfg_);
    const auto products = smoother_.push(gradients, sample.warmup);
    FrameResult r;
    r.frame_index = sample.frame_index;
    r.warmup = sample.warmup;
    r.flow = solve_flow(products, cfg_);
    r.disparity = background_disparity(products, r.flow);
    return r;
}

SequenceResult process_sequence(std::span<const Image> stream, const FlowConfig& cfg) {
    cfg.validate();
    validate_stream(stream);
    FlowPipeline pipeline(cfg, stream.front().width, stream.front().height);
    SequenceResult result;
    result.warmup_frames = cfg.warmup_frames();
    result.frames.reserve(stream.size());
    for (const auto& frame : stream) {
        result.frames.push_back(pipeline.push(frame));
    }
    return result;
}

} // namespace lagiir
