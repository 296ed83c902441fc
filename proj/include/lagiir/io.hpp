#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lagiir/design.hpp"
#include "lagiir/image.hpp"
#include "lagiir/response.hpp"

namespace lagiir::io {

using Filter = std::variant<LdeCoefficients, NonCausalPair>;

/// Coefficient file contents: the filter plus, when known, its design.
struct CoefficientDocument {
    Filter filter;
    std::optional<FilterDesign> design;
};

/// {"b": [...], "a": [...], "T": .., "design": {...}}; non-causal pairs carry
/// the forward filter in b/a and the backward filter under "backward".
std::string coefficients_json(const CoefficientDocument& doc);
CoefficientDocument parse_coefficients_json(std::string_view text);

/// Two rows, b then a, zero-padded to equal length. Causal filters only.
std::string coefficients_csv(const LdeCoefficients& lde);
CoefficientDocument parse_coefficients_csv(std::string_view text);

/// Dispatches on the first non-blank character ('{' means JSON).
CoefficientDocument read_coefficients(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// One value per line; blank lines and lines starting with '#' are skipped.
std::vector<double> parse_signal_csv(std::string_view text);
std::string signal_csv(std::span<const double> signal);

/// Binary PGM (P5), 8- or 16-bit; samples are normalized by maxval.
Image parse_pgm(std::string_view bytes);
Image read_pgm(const std::filesystem::path& path);
/// Values are clamped to [0, 1] and scaled to maxval (255 or 65535).
std::string pgm_bytes(const Image& img, int maxval = 255);
void write_pgm(const std::filesystem::path& path, const Image& img, int maxval = 255);

/// Frames of a directory's *.pgm files in lexicographic order.
FrameStream read_pgm_directory(const std::filesystem::path& dir);

/// Raw little-endian float32 frames written back to back, plus a JSON
/// sidecar at `<data>.json` with {width, height, frames}.
void write_raw_stack(const std::filesystem::path& data, std::span<const Image> frames);
/// Accepts the data path or the sidecar path.
FrameStream read_raw_stack(const std::filesystem::path& path);

/// Header `omega,magnitude_db,phase_rad,group_delay`, 9 significant digits.
std::string response_csv(std::span<const ResponseSample> samples);

/// %.Ng formatting independent of the global locale.
std::string format_number(double value, int significant_digits);

} // namespace lagiir::io
