#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lagiir/acceptance.hpp"
#include "lagiir/design.hpp"
#include "lagiir/error.hpp"
#include "lagiir/flow.hpp"
#include "lagiir/io.hpp"
#include "lagiir/response.hpp"
#include "lagiir/runtime.hpp"
#include "lagiir/tables.hpp"

namespace lagiir::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string message) {
    throw CliError{code, std::move(message)};
}

struct DesignFlags {
    int degree = 2;
    int derivative = 0;
    int kappa = 0;
    double sigma = -0.5;
    double pole = 0.0; // 0 = use sigma
    std::string q = "0";
    double period = 1.0;
    std::string causality = "causal";
};

void add_design_flags(CLI::App* cmd, DesignFlags& f) {
    cmd->add_option("--B", f.degree, "Polynomial degree B (0..6)");
    cmd->add_option("--D", f.derivative, "Derivative order D (0..B)");
    cmd->add_option("--kappa", f.kappa, "Weight exponent kappa (0 or 1; causal only)");
    cmd->add_option("--sigma", f.sigma, "Log pole sigma < 0");
    cmd->add_option("--pole", f.pole, "Pole p in (0,1); overrides --sigma when set")->default_str("unset");
    cmd->add_option("--q", f.q, "Delay in samples, or 'auto' for the optimal delay of tabulated B=2 designs");
    cmd->add_option("--T", f.period, "Sample period");
    cmd->add_option("--causality", f.causality, "causal or noncausal")
        ->check(CLI::IsMember({"causal", "noncausal"}));
}

bool tabulated(const FilterDesign& d) {
    if (d.degree != 2 || d.derivative > 1) {
        return false;
    }
    return d.weight.causality == Causality::Causal ? d.weight.kappa <= 1 : d.weight.kappa == 0;
}

TableEntry entry_for(const FilterDesign& d) {
    const bool smooth = d.derivative == 0;
    if (d.weight.causality == Causality::TwoSided) {
        return smooth ? TableEntry::II_Smoother : TableEntry::II_Differentiator;
    }
    if (d.weight.kappa == 0) {
        return smooth ? TableEntry::I_Smoother : TableEntry::I_Differentiator;
    }
    return smooth ? TableEntry::III_Smoother : TableEntry::III_Differentiator;
}

FilterDesign build_design(const DesignFlags& f) {
    FilterDesign d;
    d.degree = f.degree;
    d.derivative = f.derivative;
    d.sample_period = f.period;
    const auto causality = f.causality == "causal" ? Causality::Causal : Causality::TwoSided;
    if (f.pole != 0.0) {
        if (!(f.pole > 0.0 && f.pole < 1.0)) {
            fail(kBadInput, "--pole must lie in (0, 1)");
        }
        d.weight = WeightSpec::from_pole(f.pole, f.kappa, causality);
    } else {
        d.weight.sigma = f.sigma;
        d.weight.kappa = f.kappa;
        d.weight.causality = causality;
    }
    if (f.q == "auto") {
        if (causality != Causality::Causal || !tabulated(d)) {
            fail(kUnsupportedAutoQ, "--q auto is only defined for causal B=2, D<=1, kappa<=1 designs");
        }
        d.weight.validate();
        d.delay = optimal_q(entry_for(d), d.weight.pole());
    } else {
        std::size_t used = 0;
        try {
            d.delay = std::stod(f.q, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != f.q.size() || !std::isfinite(d.delay)) {
            fail(kBadInput, "--q must be a number or 'auto'");
        }
    }
    d.validate();
    return d;
}

io::Filter derive(const FilterDesign& d) {
    if (d.weight.causality == Causality::Causal) {
        return derive_causal_lde(d);
    }
    return derive_noncausal_pair(d);
}

io::Filter from_table(const FilterDesign& d) {
    if (!tabulated(d)) {
        fail(kBadInput, "closed-form tables cover B=2, D<=1 (kappa=0 for noncausal) only");
    }
    return table_coefficients(entry_for(d), d.weight.pole(), d.delay, d.sample_period);
}

double discrepancy(const io::Filter& x, const io::Filter& y) {
    auto diff = [](const std::vector<double>& u, const std::vector<double>& v) {
        double worst = 0.0;
        for (std::size_t i = 0; i < std::max(u.size(), v.size()); ++i) {
            worst = std::max(worst, std::abs((i < u.size() ? u[i] : 0.0) - (i < v.size() ? v[i] : 0.0)));
        }
        return worst;
    };
    auto lde_diff = [&](const LdeCoefficients& u, const LdeCoefficients& v) {
        return std::max(diff(u.b, v.b), diff(u.a, v.a));
    };
    if (const auto* u = std::get_if<LdeCoefficients>(&x)) {
        return lde_diff(*u, std::get<LdeCoefficients>(y));
    }
    const auto& u = std::get<NonCausalPair>(x);
    const auto& v = std::get<NonCausalPair>(y);
    return std::max(lde_diff(u.forward, v.forward), lde_diff(u.backward, v.backward));
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        io::write_text(path, text);
    }
}

int run_design(const DesignFlags& flags, const std::string& source, const std::string& format,
               const std::string& out_path, std::ostream& out) {
    const auto design = build_design(flags);
    io::CoefficientDocument doc{source == "table" ? from_table(design) : derive(design), design};
    std::optional<double> gap;
    if (source == "both-compare") {
        gap = discrepancy(doc.filter, from_table(design));
    }
    std::string text;
    if (format == "json") {
        text = io::coefficients_json(doc);
        if (gap) {
            auto j = json::parse(text);
            j["max_abs_discrepancy"] = *gap;
            text = j.dump(2) + "\n";
        }
    } else {
        const auto* lde = std::get_if<LdeCoefficients>(&doc.filter);
        if (lde == nullptr) {
            fail(kBadInput, "CSV export holds a single causal filter; use --format json for noncausal pairs");
        }
        text = io::coefficients_csv(*lde);
        if (gap) {
            text += "# max_abs_discrepancy " + io::format_number(*gap, 9) + "\n";
        }
    }
    emit(text, out_path, out);
    return kOk;
}

std::string flatness_lines(const LdeCoefficients& lde) {
    const auto report = flatness_report(lde, kMaxFlatnessOrder);
    std::string text = "# flatness reference |H(0)|^2 = " + io::format_number(report.reference, 9) + "\n";
    for (std::size_t i = 0; i < report.derivatives.size(); ++i) {
        text += "# flatness order " + std::to_string(i + 1) + " derivative " +
                io::format_number(report.derivatives[i], 9) + (report.flat[i] ? " flat" : " not-flat") + "\n";
    }
    return text;
}

int run_response(const DesignFlags& flags, const std::string& coeff, std::size_t points, bool report_flatness,
                 const std::string& out_path, std::ostream& out) {
    if (points < 2) {
        fail(kBadInput, "--points must be at least 2");
    }
    io::Filter filter;
    if (!coeff.empty()) {
        try {
            filter = io::read_coefficients(coeff).filter;
        } catch (const IoError& e) {
            fail(kBadInput, e.what());
        }
    } else {
        filter = derive(build_design(flags));
    }
    const double dc = std::visit([](const auto& f) { return std::abs(frequency_response(f, 0.0)); }, filter);
    const auto grid = frequency_grid(points, dc < 1e-12);
    const auto samples = std::visit([&](const auto& f) { return evaluate_response(f, grid); }, filter);
    std::string text = io::response_csv(samples);
    if (report_flatness) {
        if (const auto* lde = std::get_if<LdeCoefficients>(&filter)) {
            text += flatness_lines(*lde);
        } else {
            text += "# flatness report covers causal filters only\n";
        }
    }
    emit(text, out_path, out);
    return kOk;
}

enum class InputKind { Signal, Image, Stack };

InputKind classify(const fs::path& path) {
    if (fs::is_directory(path)) {
        return InputKind::Stack;
    }
    const auto ext = path.extension().string();
    if (ext == ".csv" || ext == ".txt") {
        return InputKind::Signal;
    }
    if (ext == ".pgm") {
        return InputKind::Image;
    }
    return InputKind::Stack;
}

FrameStream load_frames(const fs::path& path) {
    return fs::is_directory(path) ? io::read_pgm_directory(path) : io::read_raw_stack(path);
}

int run_filter(const std::string& coeff, const std::string& input, const std::string& mode, const std::string& axis,
               const std::string& priming_name, const std::string& out_path, std::ostream& out) {
    if (coeff.empty() || input.empty()) {
        fail(kBadInput, "filter requires --coeff and --input");
    }
    const auto filter = io::read_coefficients(coeff).filter;
    const auto priming = priming_name == "zero" ? Priming::Zero : Priming::HoldFirst;
    const bool noncausal = mode == "noncausal";
    if (noncausal != std::holds_alternative<NonCausalPair>(filter)) {
        fail(kBadInput, noncausal ? "--mode noncausal needs a coefficient file with a backward filter"
                                  : "--mode causal needs a single causal filter");
    }
    const auto kind = classify(input);
    if (kind == InputKind::Signal) {
        const auto signal = io::parse_signal_csv(io::read_text(input));
        const auto y = noncausal ? filter_noncausal(std::get<NonCausalPair>(filter), signal, priming)
                                 : filter_causal(std::get<LdeCoefficients>(filter), signal, priming);
        emit(io::signal_csv(y), out_path, out);
        return kOk;
    }
    if (out_path.empty()) {
        fail(kBadInput, "image filtering writes a raw float stack; --out is required");
    }
    FrameStream frames = kind == InputKind::Image ? FrameStream{io::read_pgm(input)} : load_frames(input);
    FrameStream result;
    if (axis == "time") {
        if (noncausal) {
            fail(kBadInput, "the time axis is filtered causally");
        }
        result = filter_time_stack(std::get<LdeCoefficients>(filter), frames, priming);
    } else {
        const Axis a = axis == "rows" ? Axis::Rows : Axis::Cols;
        for (const auto& f : frames) {
            result.push_back(std::visit([&](const auto& flt) { return filter_image_separable(flt, f, a, priming); },
                                        filter));
        }
    }
    io::write_raw_stack(out_path, result);
    return kOk;
}

Image normalized_preview(const Image& img) {
    const auto [lo, hi] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    Image preview(img.width, img.height);
    const double span = *hi - *lo;
    if (span > 0.0) {
        for (std::size_t i = 0; i < img.size(); ++i) {
            preview.pixels[i] = (img.pixels[i] - *lo) / span;
        }
    }
    return preview;
}

json config_json(const FlowConfig& cfg) {
    return json{{"spatial_sigma", cfg.spatial_sigma},   {"temporal_sigma", cfg.temporal_sigma},
                {"temporal_q", cfg.temporal_q},         {"temporal_kappa", cfg.temporal_kappa},
                {"smoothing_pole", cfg.smoothing_pole}, {"det_threshold", cfg.det_threshold},
                {"T_space", cfg.T_space},               {"T_time", cfg.T_time}};
}

int run_flow(const FlowConfig& cfg, const std::string& frames_dir, const std::string& raw, const std::string& out_dir,
             bool strict, std::ostream& err) {
    if (frames_dir.empty() == raw.empty()) {
        fail(kBadInput, "flow needs exactly one of --frames or --raw");
    }
    if (out_dir.empty()) {
        fail(kBadInput, "flow requires --out");
    }
    cfg.validate();
    const auto frames = frames_dir.empty() ? io::read_raw_stack(raw) : io::read_pgm_directory(frames_dir);
    const auto warmup = cfg.warmup_frames();
    if (frames.size() < warmup) {
        if (strict) {
            fail(kStreamTooShort, "stream has " + std::to_string(frames.size()) + " frames, warm-up needs " +
                                      std::to_string(warmup));
        }
        err << "warning: stream shorter than the " << warmup << "-frame warm-up; all outputs are transient\n";
    }
    const auto result = process_sequence(frames, cfg);
    fs::create_directories(out_dir);
    FrameStream vx;
    FrameStream vy;
    FrameStream dj;
    json frame_list = json::array();
    for (const auto& r : result.frames) {
        vx.push_back(r.flow.vx);
        vy.push_back(r.flow.vy);
        dj.push_back(r.disparity.dj);
        char name[32];
        std::snprintf(name, sizeof name, "disparity_%04zu.pgm", r.frame_index);
        io::write_pgm(fs::path(out_dir) / name, normalized_preview(r.disparity.dj));
        const auto valid = std::count(r.flow.valid.begin(), r.flow.valid.end(), std::uint8_t{1});
        frame_list.push_back(json{{"index", r.frame_index}, {"warmup", r.warmup}, {"valid_pixels", valid},
                                  {"preview", name}});
    }
    io::write_raw_stack(fs::path(out_dir) / "vx.f32", vx);
    io::write_raw_stack(fs::path(out_dir) / "vy.f32", vy);
    io::write_raw_stack(fs::path(out_dir) / "disparity.f32", dj);
    json manifest{{"config", config_json(cfg)},
                  {"width", frames.front().width},
                  {"height", frames.front().height},
                  {"frames", frames.size()},
                  {"delay_frames", cfg.delay_frames()},
                  {"warmup_frames", warmup},
                  {"spatial_guard", cfg.spatial_guard()},
                  {"outputs", {{"vx", "vx.f32"}, {"vy", "vy.f32"}, {"disparity", "disparity.f32"}}},
                  {"per_frame", frame_list}};
    io::write_text(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    return kOk;
}

int run_selftest(const std::vector<int>& only, std::ostream& out) {
    AcceptanceOptions options;
    options.only = only;
    const auto results = run_acceptance(options);
    out << format_report(results);
    return all_passed(results) ? kOk : kSelftestFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discounted least-squares IIR filter design, analysis and optical-flow tools", "lagiir"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    DesignFlags design_flags;
    std::string source = "derive";
    std::string format = "json";
    std::string design_out;
    auto* design = app.add_subcommand("design", "Derive or tabulate filter coefficients");
    add_design_flags(design, design_flags);
    design->add_option("--source", source, "derive, table or both-compare")
        ->check(CLI::IsMember({"derive", "table", "both-compare"}));
    design->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    design->add_option("--out", design_out, "Output file (standard output when unset)")->default_str("stdout");

    DesignFlags response_flags;
    std::string response_coeff;
    std::size_t points = 512;
    bool report_flatness = false;
    std::string response_out;
    auto* response = app.add_subcommand("response", "Tabulate magnitude, phase and group delay as CSV");
    add_design_flags(response, response_flags);
    response->add_option("--coeff", response_coeff, "Coefficient file (JSON or CSV); overrides design flags")
        ->default_str("unset");
    response->add_option("--points", points, "Frequency grid size over [0, pi]");
    response->add_flag("--report-flatness", report_flatness, "Append |H|^2 derivative report as # comments")->default_str("off");
    response->add_option("--out", response_out, "Output file (standard output when unset)")->default_str("stdout");

    std::string filter_coeff;
    std::string filter_input;
    std::string mode = "causal";
    std::string axis = "rows";
    std::string priming = "hold";
    std::string filter_out;
    auto* filter = app.add_subcommand("filter", "Run a coefficient file over a signal, image or frame stack");
    filter->add_option("--coeff", filter_coeff, "Coefficient file (JSON or CSV)")->default_str("required");
    filter->add_option("--input", filter_input, "Signal CSV, PGM image, PGM directory or raw stack")
        ->default_str("required");
    filter->add_option("--mode", mode, "causal or noncausal")->check(CLI::IsMember({"causal", "noncausal"}));
    filter->add_option("--axis", axis, "rows, cols or time (images and stacks)")
        ->check(CLI::IsMember({"rows", "cols", "time"}));
    filter->add_option("--priming", priming, "zero or hold (steady state of the first sample)")
        ->check(CLI::IsMember({"zero", "hold"}));
    filter->add_option("--out", filter_out, "Output file (signals default to standard output)")
        ->default_str("stdout");

    FlowConfig cfg;
    std::string frames_dir;
    std::string raw;
    std::string flow_out;
    bool strict = false;
    auto* flow = app.add_subcommand("flow", "Gradient optical flow and background-disparity maps");
    flow->add_option("--frames", frames_dir, "Directory of PGM frames (lexicographic order)")->default_str("unset");
    flow->add_option("--raw", raw, "Raw float32 stack or its JSON sidecar")->default_str("unset");
    flow->add_option("--out", flow_out, "Output directory")->default_str("required");
    flow->add_option("--spatial-sigma", cfg.spatial_sigma, "Log pole of the spatial differentiators");
    flow->add_option("--temporal-sigma", cfg.temporal_sigma, "Log pole of the temporal differentiator");
    flow->add_option("--temporal-q", cfg.temporal_q, "Temporal differentiator delay (integer frames)");
    flow->add_option("--temporal-kappa", cfg.temporal_kappa, "Temporal weight exponent kappa");
    flow->add_option("--smoothing-pole", cfg.smoothing_pole, "Pole of the product smoothers (exp(-1/16))");
    flow->add_option("--det-threshold", cfg.det_threshold, "Relative determinant threshold of the 2x2 solve");
    flow->add_option("--T-space", cfg.T_space, "Pixel pitch");
    flow->add_option("--T-time", cfg.T_time, "Frame period");
    flow->add_flag("--strict", strict, "Fail with exit code 4 when the stream is shorter than the warm-up")->default_str("off");

    std::vector<int> only;
    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    selftest->add_option("--only", only, "Criterion ids to run")->default_str("all");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kBadInput;
    }

    try {
        if (*design) {
            return run_design(design_flags, source, format, design_out, out);
        }
        if (*response) {
            return run_response(response_flags, response_coeff, points, report_flatness, response_out, out);
        }
        if (*filter) {
            return run_filter(filter_coeff, filter_input, mode, axis, priming, filter_out, out);
        }
        if (*flow) {
            return run_flow(cfg, frames_dir, raw, flow_out, strict, err);
        }
        return run_selftest(only, out);
    } catch (const CliError& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
}

} // namespace lagiir::cli
