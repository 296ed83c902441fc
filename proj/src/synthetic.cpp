#include "lagiir/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace lagiir::synthetic {

Image plaid_frame(const Plaid& spec, double t) {
    Image img(spec.width, spec.height);
    const double k = 2.0 * std::numbers::pi * spec.frequency;
    for (std::size_t y = 0; y < spec.height; ++y) {
        for (std::size_t x = 0; x < spec.width; ++x) {
            const double u = static_cast<double>(x) - spec.vx * t;
            const double v = static_cast<double>(y) - spec.vy * t;
            img.at(x, y) = spec.mean + spec.contrast * (std::sin(k * u) + std::sin(k * v + 0.7));
        }
    }
    return img;
}

FrameStream plaid_sequence(const Plaid& spec, std::size_t frames) {
    FrameStream out;
    out.reserve(frames);
    for (std::size_t n = 0; n < frames; ++n) {
        out.push_back(plaid_frame(spec, static_cast<double>(n)));
    }
    return out;
}

FrameStream plaid_with_blob(const Plaid& background, const Blob& blob, std::size_t frames) {
    auto out = plaid_sequence(background, frames);
    for (std::size_t n = 0; n < frames; ++n) {
        const double t = static_cast<double>(n);
        const double cx = blob.x_at(t);
        const double cy = blob.y_at(t);
        const double inv = 1.0 / (2.0 * blob.sigma * blob.sigma);
        auto& img = out[n];
        for (std::size_t y = 0; y < img.height; ++y) {
            for (std::size_t x = 0; x < img.width; ++x) {
                const double dx = static_cast<double>(x) - cx;
                const double dy = static_cast<double>(y) - cy;
                img.at(x, y) += blob.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
            }
        }
    }
    return out;
}

Image rotate_nearest(const Image& img, double angle, double cx, double cy) {
    Image out(img.width, img.height);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const auto w = static_cast<long>(img.width);
    const auto h = static_cast<long>(img.height);
    for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < img.width; ++x) {
            // Inverse map: source = R(-angle) (dest - centre) + centre.
            const double dx = static_cast<double>(x) - cx;
            const double dy = static_cast<double>(y) - cy;
            const long sx = std::lround(c * dx + s * dy + cx);
            const long sy = std::lround(-s * dx + c * dy + cy);
            const long clx = sx < 0 ? 0 : (sx >= w ? w - 1 : sx);
            const long cly = sy < 0 ? 0 : (sy >= h ? h - 1 : sy);
            out.at(x, y) = img.at(static_cast<std::size_t>(clx), static_cast<std::size_t>(cly));
        }
    }
    return out;
}

FrameStream rotating_sequence(const Image& base, double angle_per_frame, double cx, double cy, std::size_t frames) {
    FrameStream out;
    out.reserve(frames);
    for (std::size_t n = 0; n < frames; ++n) {
        out.push_back(rotate_nearest(base, angle_per_frame * static_cast<double>(n), cx, cy));
    }
    return out;
}

Image rotate90(const Image& img) {
    Image out(img.height, img.width);
    for (std::size_t yp = 0; yp < out.height; ++yp) {
        for (std::size_t xp = 0; xp < out.width; ++xp) {
            out.at(xp, yp) = img.at(yp, img.height - 1 - xp);
        }
    }
    return out;
}

FrameStream brightness_ramp(std::size_t width, std::size_t height, std::size_t frames, double start, double step) {
    FrameStream out;
    out.reserve(frames);
    for (std::size_t n = 0; n < frames; ++n) {
        out.emplace_back(width, height, start + step * static_cast<double>(n));
    }
    return out;
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> out(n);
    for (double& v : out) {
        v = dist(rng);
    }
    return out;
}

} // namespace lagiir::synthetic
