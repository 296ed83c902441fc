#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lagiir/design.hpp"
#include "lagiir/runtime.hpp"

namespace lagiir {

/// Row-major monochrome image. Intensities are nominally in [0, 1]; filtered
/// products (derivatives) may leave that range.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), pixels(w * h, fill) {}

    [[nodiscard]] double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
    double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
    [[nodiscard]] std::span<const double> row(std::size_t y) const { return {pixels.data() + y * width, width}; }
    std::span<double> row(std::size_t y) { return {pixels.data() + y * width, width}; }
    [[nodiscard]] std::size_t size() const { return pixels.size(); }
    [[nodiscard]] bool same_shape(const Image& other) const {
        return width == other.width && height == other.height;
    }

    /// Throws IoError when the pixel count does not match the dimensions.
    void validate() const;
};

using FrameStream = std::vector<Image>;

/// Non-empty, uniform dimensions.
void validate_stream(std::span<const Image> stream);

enum class Axis {
    Rows, ///< filter along each row (x direction)
    Cols, ///< filter along each column (y direction)
};

Image transpose(const Image& img);

Image filter_image_separable(const LdeCoefficients& lde, const Image& img, Axis axis,
                             Priming priming = Priming::HoldFirst);
Image filter_image_separable(const NonCausalPair& pair, const Image& img, Axis axis,
                             Priming priming = Priming::HoldFirst);

/// Causal filter applied independently to every pixel's time series; frames
/// are consumed one at a time.
class TemporalFilter {
public:
    TemporalFilter(const LdeCoefficients& lde, std::size_t width, std::size_t height,
                   Priming priming = Priming::HoldFirst);

    Image push(const Image& frame);
    /// Discards history; the next frame is treated as the first.
    void restart();
    [[nodiscard]] std::size_t frames_seen() const { return frames_; }

private:
    std::vector<double> b_;
    std::vector<double> a_;
    std::size_t width_;
    std::size_t height_;
    Priming priming_;
    std::vector<double> state_;
    std::size_t frames_ = 0;
};

FrameStream filter_time_stack(const LdeCoefficients& lde, std::span<const Image> stream,
                              Priming priming = Priming::HoldFirst);

} // namespace lagiir
