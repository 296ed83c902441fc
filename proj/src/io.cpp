#include "lagiir/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lagiir/error.hpp"

namespace lagiir::io {

namespace {

using json = nlohmann::ordered_json;

json design_json(const FilterDesign& d) {
    return json{{"B", d.degree},
                {"D", d.derivative},
                {"kappa", d.weight.kappa},
                {"sigma", d.weight.sigma},
                {"q", d.delay},
                {"causality", d.weight.causality == Causality::Causal ? "causal" : "noncausal"}};
}

FilterDesign design_from_json(const json& j, double period) {
    FilterDesign d;
    d.degree = j.at("B").get<int>();
    d.derivative = j.at("D").get<int>();
    d.weight.kappa = j.at("kappa").get<int>();
    d.weight.sigma = j.at("sigma").get<double>();
    d.delay = j.at("q").get<double>();
    const auto causality = j.at("causality").get<std::string>();
    if (causality == "causal") {
        d.weight.causality = Causality::Causal;
    } else if (causality == "noncausal") {
        d.weight.causality = Causality::TwoSided;
    } else {
        throw IoError("unknown causality '" + causality + "'");
    }
    d.sample_period = period;
    return d;
}

std::vector<double> parse_row(std::string_view line) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t comma = line.find(',', pos);
        const auto field = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        std::string trimmed(field);
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
        if (trimmed.empty()) {
            throw IoError("empty CSV field");
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
        if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size()) {
            throw IoError("malformed number '" + trimmed + "'");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

std::vector<std::string_view> content_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') {
            continue;
        }
        lines.push_back(line);
    }
    return lines;
}

json number_array(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) {
        arr.push_back(x);
    }
    return arr;
}

std::vector<double> array_from(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw IoError(std::string("coefficient document lacks array '") + key + "'");
    }
    return j.at(key).get<std::vector<double>>();
}

float to_little_endian(float v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        auto bits = std::bit_cast<std::uint32_t>(v);
        bits = ((bits & 0xFFu) << 24) | ((bits & 0xFF00u) << 8) | ((bits >> 8) & 0xFF00u) | (bits >> 24);
        return std::bit_cast<float>(bits);
    }
}

} // namespace

std::string format_number(double value, int significant_digits) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (value == 0.0) {
        value = 0.0; // drop the sign of negative zero
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
    return buf;
}

std::string coefficients_json(const CoefficientDocument& doc) {
    json j;
    if (const auto* lde = std::get_if<LdeCoefficients>(&doc.filter)) {
        j["b"] = number_array(lde->b);
        j["a"] = number_array(lde->a);
        j["T"] = lde->sample_period;
    } else {
        const auto& pair = std::get<NonCausalPair>(doc.filter);
        j["b"] = number_array(pair.forward.b);
        j["a"] = number_array(pair.forward.a);
        j["backward"] = json{{"b", number_array(pair.backward.b)}, {"a", number_array(pair.backward.a)}};
        j["T"] = pair.forward.sample_period;
    }
    if (doc.design) {
        j["design"] = design_json(*doc.design);
    }
    return j.dump(2) + "\n";
}

CoefficientDocument parse_coefficients_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("invalid coefficient JSON: ") + e.what());
    }
    try {
        const double period = j.value("T", 1.0);
        LdeCoefficients fwd{array_from(j, "b"), array_from(j, "a"), period};
        CoefficientDocument doc{fwd, std::nullopt};
        if (j.contains("backward")) {
            const auto& bj = j.at("backward");
            NonCausalPair pair;
            pair.forward = fwd;
            pair.backward = LdeCoefficients{array_from(bj, "b"), array_from(bj, "a"), period};
            doc.filter = pair;
        }
        if (j.contains("design")) {
            doc.design = design_from_json(j.at("design"), period);
        }
        return doc;
    } catch (const json::exception& e) {
        throw IoError(std::string("invalid coefficient document: ") + e.what());
    }
}

std::string coefficients_csv(const LdeCoefficients& lde) {
    const std::size_t n = lde.taps();
    std::string out;
    for (const auto* row : {&lde.b, &lde.a}) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                out += ',';
            }
            out += format_number(i < row->size() ? (*row)[i] : 0.0, 17);
        }
        out += '\n';
    }
    return out;
}

CoefficientDocument parse_coefficients_csv(std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.size() != 2) {
        throw IoError("coefficient CSV must have exactly two rows (b, a)");
    }
    LdeCoefficients lde{parse_row(lines[0]), parse_row(lines[1]), 1.0};
    return {lde, std::nullopt};
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

CoefficientDocument read_coefficients(const std::filesystem::path& path) {
    const auto text = read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return parse_coefficients_json(text);
    }
    return parse_coefficients_csv(text);
}

std::vector<double> parse_signal_csv(std::string_view text) {
    std::vector<double> out;
    for (auto line : content_lines(text)) {
        const auto row = parse_row(line);
        if (row.size() != 1) {
            throw IoError("signal CSV must hold one value per line");
        }
        out.push_back(row[0]);
    }
    if (out.empty()) {
        throw IoError("signal CSV is empty");
    }
    return out;
}

std::string signal_csv(std::span<const double> signal) {
    std::string out;
    for (double v : signal) {
        out += format_number(v, 12);
        out += '\n';
    }
    return out;
}

Image parse_pgm(std::string_view bytes) {
    std::size_t pos = 0;
    auto next_token = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') {
                    ++pos;
                }
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            ++pos;
        }
        return std::string(bytes.substr(start, pos - start));
    };
    if (next_token() != "P5") {
        throw IoError("not a binary PGM (P5) file");
    }
    auto number = [&](const char* what) {
        const auto tok = next_token();
        long v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || v <= 0) {
            throw IoError(std::string("malformed PGM ") + what);
        }
        return v;
    };
    const long width = number("width");
    const long height = number("height");
    const long maxval = number("maxval");
    if (maxval > 65535) {
        throw IoError("PGM maxval exceeds 65535");
    }
    ++pos; // single whitespace before the raster
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (pos > bytes.size() || bytes.size() - pos < count * bytes_per) {
        throw IoError("truncated PGM raster");
    }
    Image img(static_cast<std::size_t>(width), static_cast<std::size_t>(height));
    const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < count; ++i) {
        const unsigned v = bytes_per == 1 ? raster[i] : (static_cast<unsigned>(raster[2 * i]) << 8) | raster[2 * i + 1];
        img.pixels[i] = static_cast<double>(v) * scale;
    }
    return img;
}

Image read_pgm(const std::filesystem::path& path) {
    return parse_pgm(read_text(path));
}

std::string pgm_bytes(const Image& img, int maxval) {
    if (maxval != 255 && maxval != 65535) {
        throw IoError("PGM output supports maxval 255 or 65535");
    }
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                      std::to_string(maxval) + "\n";
    for (double v : img.pixels) {
        const double clamped = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
        const auto q = static_cast<unsigned>(std::lround(clamped * maxval));
        if (maxval == 255) {
            out += static_cast<char>(q);
        } else {
            out += static_cast<char>(q >> 8);
            out += static_cast<char>(q & 0xFF);
        }
    }
    return out;
}

void write_pgm(const std::filesystem::path& path, const Image& img, int maxval) {
    write_text(path, pgm_bytes(img, maxval));
}

FrameStream read_pgm_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    FrameStream frames;
    for (const auto& f : files) {
        frames.push_back(read_pgm(f));
    }
    if (frames.empty()) {
        throw IoError("no .pgm frames in " + dir.string());
    }
    validate_stream(frames);
    return frames;
}

void write_raw_stack(const std::filesystem::path& data, std::span<const Image> frames) {
    validate_stream(frames);
    std::string raw;
    raw.reserve(frames.size() * frames.front().size() * sizeof(float));
    for (const auto& frame : frames) {
        for (double v : frame.pixels) {
            const float f = to_little_endian(static_cast<float>(v));
            char bytes[sizeof(float)];
            std::memcpy(bytes, &f, sizeof f);
            raw.append(bytes, sizeof bytes);
        }
    }
    write_text(data, raw);
    json side{{"width", frames.front().width}, {"height", frames.front().height}, {"frames", frames.size()}};
    write_text(data.string() + ".json", side.dump(2) + "\n");
}

FrameStream read_raw_stack(const std::filesystem::path& path) {
    std::filesystem::path data = path;
    std::filesystem::path sidecar = path.string() + ".json";
    if (path.extension() == ".json") {
        sidecar = path;
        data = path.parent_path() / path.stem();
    }
    json side;
    try {
        side = json::parse(read_text(sidecar));
    } catch (const json::exception& e) {
        throw IoError(std::string("invalid raw sidecar: ") + e.what());
    }
    const auto width = side.at("width").get<std::size_t>();
    const auto height = side.at("height").get<std::size_t>();
    const auto count = side.at("frames").get<std::size_t>();
    const auto raw = read_text(data);
    if (raw.size() != width * height * count * sizeof(float)) {
        throw IoError("raw stack size does not match its sidecar");
    }
    FrameStream frames;
    std::size_t offset = 0;
    for (std::size_t n = 0; n < count; ++n) {
        Image img(width, height);
        for (double& v : img.pixels) {
            float f = 0.0f;
            std::memcpy(&f, raw.data() + offset, sizeof f);
            offset += sizeof f;
            v = static_cast<double>(to_little_endian(f));
        }
        frames.push_back(std::move(img));
    }
    return frames;
}

std::string response_csv(std::span<const ResponseSample> samples) {
    std::string out = "omega,magnitude_db,phase_rad,group_delay\n";
    for (const auto& s : samples) {
        out += format_number(s.omega, 9) + ',' + format_number(s.magnitude_db, 9) + ',' + format_number(s.phase, 9) +
               ',' + format_number(s.group_delay, 9) + '\n';
    }
    return out;
}

} // namespace lagiir::io
