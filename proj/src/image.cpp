#include "lagiir/image.hpp"

#include <algorithm>
#include <string>

#include "lagiir/error.hpp"
#include "lagiir/kernels.hpp"

namespace lagiir {

namespace {

// Loads the steady state for per-lane constant inputs x0 into lane-major state.
void prime_lanes(std::span<const double> b, std::span<const double> a, std::span<const double> x0,
                 std::vector<double>& state) {
    const std::size_t lanes = x0.size();
    const std::size_t order = b.size() - 1;
    std::vector<double> single(order);
    for (std::size_t l = 0; l < lanes; ++l) {
        steady_state(b, a, x0[l], single);
        for (std::size_t i = 0; i < order; ++i) {
            state[i * lanes + l] = single[i];
        }
    }
}

// Filters every column of img top-down (or bottom-up when reverse is set).
Image filter_columns(const LdeCoefficients& lde, const Image& img, bool reverse, Priming priming) {
    std::vector<double> b;
    std::vector<double> a;
    normalized_taps(lde, b, a);
    const std::size_t w = img.width;
    const std::size_t h = img.height;
    Image out(w, h);
    if (w == 0 || h == 0) {
        return out;
    }
    std::vector<double> state((b.size() - 1) * w, 0.0);
    const std::size_t first = reverse ? h - 1 : 0;
    if (priming == Priming::HoldFirst) {
        prime_lanes(b, a, img.row(first), state);
    }
    for (std::size_t n = 0; n < h; ++n) {
        const std::size_t y = reverse ? h - 1 - n : n;
        kernels::iir_lanes_step(b, a, state.data(), img.row(y).data(), out.row(y).data(), w);
    }
    return out;
}

void check_extent(const Image& img, Axis axis, std::size_t taps) {
    img.validate();
    const std::size_t extent = axis == Axis::Rows ? img.width : img.height;
    if (extent < taps) {
        throw DesignError("image extent " + std::to_string(extent) + " is shorter than the filter order");
    }
}

} // namespace

void Image::validate() const {
    if (pixels.size() != width * height) {
        throw IoError("image pixel count does not match its dimensions");
    }
}

void validate_stream(std::span<const Image> stream) {
    if (stream.empty()) {
        throw IoError("frame stream is empty");
    }
    for (const auto& frame : stream) {
        frame.validate();
        if (!frame.same_shape(stream.front())) {
            throw IoError("frame stream has non-uniform dimensions");
        }
    }
}

Image transpose(const Image& img) {
    Image out(img.height, img.width);
    for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < img.width; ++x) {
            out.at(y, x) = img.at(x, y);
        }
    }
    return out;
}

Image filter_image_separable(const LdeCoefficients& lde, const Image& img, Axis axis, Priming priming) {
    check_extent(img, axis, lde.taps());
    if (axis == Axis::Cols) {
        return filter_columns(lde, img, false, priming);
    }
    return transpose(filter_columns(lde, transpose(img), false, priming));
}

Image filter_image_separable(const NonCausalPair& pair, const Image& img, Axis axis, Priming priming) {
    check_extent(img, axis, std::max(pair.forward.taps(), pair.backward.taps()));
    const Image src = axis == Axis::Cols ? img : transpose(img);
    Image out = filter_columns(pair.forward, src, false, priming);
    const Image backward = filter_columns(pair.backward, src, true, priming);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        out.pixels[i] += backward.pixels[i];
    }
    return axis == Axis::Cols ? out : transpose(out);
}

TemporalFilter::TemporalFilter(const LdeCoefficients& lde, std::size_t width, std::size_t height, Priming priming)
    : width_(width), height_(height), priming_(priming) {
    normalized_taps(lde, b_, a_);
    state_.assign((b_.size() - 1) * width * height, 0.0);
}

void TemporalFilter::restart() {
    std::fill(state_.begin(), state_.end(), 0.0);
    frames_ = 0;
}

Image TemporalFilter::push(const Image& frame) {
    frame.validate();
    if (frame.width != width_ || frame.height != height_) {
        throw IoError("frame dimensions do not match the temporal filter");
    }
    if (frames_ == 0 && priming_ == Priming::HoldFirst) {
        prime_lanes(b_, a_, frame.pixels, state_);
    }
    Image out(width_, height_);
    kernels::iir_lanes_step(b_, a_, state_.data(), frame.pixels.data(), out.pixels.data(), frame.pixels.size());
    ++frames_;
    return out;
}

FrameStream filter_time_stack(const LdeCoefficients& lde, std::span<const Image> stream, Priming priming) {
    validate_stream(stream);
    TemporalFilter filter(lde, stream.front().width, stream.front().height, priming);
    FrameStream out;
    out.reserve(stream.size());
    for (const auto& frame : stream) {
        out.push_back(filter.push(frame));
    }
    return out;
}

} // namespace lagiir
