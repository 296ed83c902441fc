#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lagiir/image.hpp"

namespace lagiir::synthetic {

/// Two crossed sinusoidal gratings translating rigidly.
struct Plaid {
    std::size_t width = 128;
    std::size_t height = 128;
    double vx = 0.5;  ///< pixels per frame
    double vy = -0.25;
    double frequency = 1.0 / 32.0; ///< cycles per pixel
    double mean = 0.5;
    double contrast = 0.2;
};

Image plaid_frame(const Plaid& spec, double t);
FrameStream plaid_sequence(const Plaid& spec, std::size_t frames);

/// Gaussian blob added on top of a background.
struct Blob {
    double x0 = 72.0;
    double y0 = 56.0;
    double vx = -0.5;
    double vy = 0.25;
    double sigma = 4.0;
    double amplitude = 0.3;

    [[nodiscard]] double x_at(double t) const { return x0 + vx * t; }
    [[nodiscard]] double y_at(double t) const { return y0 + vy * t; }
};

FrameStream plaid_with_blob(const Plaid& background, const Blob& blob, std::size_t frames);

/// Nearest-neighbour rotation of img by `angle` radians about (cx, cy).
Image rotate_nearest(const Image& img, double angle, double cx, double cy);
/// Frame n is `base` rotated by n * angle_per_frame.
FrameStream rotating_sequence(const Image& base, double angle_per_frame, double cx, double cy, std::size_t frames);

/// J(x', y') = I(y', H-1-x'); motion (vx, vy) becomes (-vy, vx).
Image rotate90(const Image& img);

/// Uniform image whose level increases by `step` every frame.
FrameStream brightness_ramp(std::size_t width, std::size_t height, std::size_t frames, double start, double step);

/// Standard normal samples from a fixed-seed Mersenne twister.
std::vector<double> white_noise(std::size_t n, std::uint64_t seed);

} // namespace lagiir::synthetic
