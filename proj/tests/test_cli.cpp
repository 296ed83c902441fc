#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cli_app.hpp"
#include "lagiir/io.hpp"
#include "lagiir/synthetic.hpp"
#include "temp_dir.hpp"

using namespace lagiir;
using json = nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<double> numbers(const json& j) {
    return j.get<std::vector<double>>();
}

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

} // namespace

TEST_CASE("help enumerates every flag with its default") {
    const auto top = run({"--help"});
    CHECK(top.code == 0);
    for (const char* sub : {"design", "response", "filter", "flow", "selftest"}) {
        CHECK(top.out.find(sub) != std::string::npos);
        const auto help = run({sub, "--help"});
        CHECK(help.code == 0);
        std::istringstream lines(help.out);
        std::string line;
        int options = 0;
        while (std::getline(lines, line)) {
            if (line.rfind("  --", 0) != 0) {
                continue;
            }
            ++options;
            INFO(sub << ": " << line);
            CHECK(line.find('[') != std::string::npos);
        }
        CHECK(options >= 1);
    }
    const auto design = run({"design", "--help"}).out;
    for (const char* flag : {"--B", "--D", "--kappa", "--sigma", "--pole", "--q", "--T", "--causality", "--source",
                             "--format", "--out"}) {
        CHECK(design.find(std::string("  ") + flag + " ") != std::string::npos);
    }
    const auto flow = run({"flow", "--help"}).out;
    for (const char* flag : {"--frames", "--raw", "--spatial-sigma", "--temporal-sigma", "--temporal-q",
                             "--temporal-kappa", "--smoothing-pole", "--det-threshold", "--T-space", "--T-time",
                             "--strict"}) {
        CHECK(flow.find(flag) != std::string::npos);
    }
}

TEST_CASE("design examples") {
    auto r = run({"design", "--B", "2", "--D", "0", "--kappa", "0", "--sigma", "-0.5", "--q", "auto"});
    REQUIRE(r.code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["design"]["q"].get<double>() == doctest::Approx(2.12).epsilon(0.01 / 2.12));

    r = run({"design", "--B", "2", "--D", "1", "--kappa", "0", "--pole", "0.5", "--q", "4"});
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    const auto b = numbers(doc["b"]);
    const std::vector<double> expected{0.0625, 0, -0.0625, 0};
    REQUIRE(b.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(b[i] == doctest::Approx(expected[i]).scale(1.0));
    }

    r = run({"design", "--B", "0", "--D", "0", "--kappa", "0", "--pole", "0.3679", "--q", "0"});
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    const auto b0 = numbers(doc["b"]);
    CHECK(b0[0] == doctest::Approx(1 - 0.3679).epsilon(1e-15));
    CHECK(std::all_of(b0.begin() + 1, b0.end(), [](double v) { return v == 0.0; }));
    CHECK(numbers(doc["a"]) == std::vector<double>{1, -0.3679});

    r = run({"design", "--kappa", "1", "--D", "1", "--pole", "0.5", "--q", "6", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
}

TEST_CASE("design sources") {
    for (const char* causality : {"causal", "noncausal"}) {
        for (const char* d : {"0", "1"}) {
            const auto r = run({"design", "--causality", causality, "--D", d, "--pole", "0.4", "--source",
                                "both-compare"});
            REQUIRE(r.code == 0);
            CHECK(json::parse(r.out)["max_abs_discrepancy"].get<double>() < 1e-10);
        }
    }
    const auto table = run({"design", "--source", "table", "--pole", "0.5", "--q", "0"});
    REQUIRE(table.code == 0);
    CHECK(numbers(json::parse(table.out)["b"]) == std::vector<double>{0.875, -1.125, 0.375, 0});
    CHECK(run({"design", "--source", "table", "--B", "3"}).code == 2);
    const auto csv = run({"design", "--format", "csv", "--source", "both-compare", "--q", "1"});
    CHECK(csv.out.find("# max_abs_discrepancy") != std::string::npos);
    CHECK(run({"design", "--causality", "noncausal", "--format", "csv"}).code == 2);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"design", "--bogus"}).code == 2);
    CHECK(run({"design", "--B", "9"}).code == 2);
    CHECK(run({"design", "--sigma", "0.1"}).code == 2);
    CHECK(run({"design", "--pole", "1.5"}).code == 2);
    CHECK(run({"design", "--q", "abc"}).code == 2);
    CHECK(run({"design", "--causality", "sideways"}).code == 2);
    CHECK(run({"design", "--causality", "noncausal", "--q", "1"}).code == 2);
    CHECK(run({"design", "--B", "3", "--q", "auto"}).code == 3);
    CHECK(run({"design", "--D", "2", "--q", "auto"}).code == 3);
    CHECK(run({"design", "--causality", "noncausal", "--q", "auto"}).code == 3);
    CHECK(run({"response", "--coeff", "/nonexistent.json"}).code == 2);
    CHECK(run({"filter", "--coeff", "/nonexistent.json", "--input", "/nonexistent.csv"}).code == 2);
    CHECK(run({"flow", "--out", "/tmp/x"}).code == 2);
}

TEST_CASE("response subcommand") {
    auto r = run({"response", "--pole", "0.5", "--q", "2", "--points", "16"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::string first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "omega,magnitude_db,phase_rad,group_delay");
    CHECK(first.rfind("0,", 0) == 0);
    const double db = std::stod(first.substr(2, first.find(',', 2) - 2));
    CHECK(std::abs(db) < 1e-9);
    CHECK(std::stod(first.substr(first.rfind(',') + 1)) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 17);

    r = run({"response", "--sigma", "-0.5", "--q", "auto", "--report-flatness"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("3.14159265,-300,") != std::string::npos);
    CHECK(r.out.find("# flatness order 3 derivative") != std::string::npos);
    CHECK(r.out.find("# flatness order 3 derivative") < r.out.find("not-flat"));

    // Differentiators skip DC and rise over the low band.
    r = run({"response", "--D", "1", "--pole", "0.5", "--q", "auto", "--points", "100"});
    REQUIRE(r.code == 0);
    std::istringstream rows(r.out);
    std::string row;
    std::getline(rows, row);
    double previous = -INFINITY;
    while (std::getline(rows, row)) {
        const double w = std::stod(row.substr(0, row.find(',')));
        if (w > 0.3) {
            break;
        }
        const double mag = std::stod(row.substr(row.find(',') + 1));
        CHECK(mag > previous);
        previous = mag;
    }

    TempDir dir;
    REQUIRE(run({"design", "--causality", "noncausal", "--out", (dir / "pair.json").string()}).code == 0);
    r = run({"response", "--coeff", (dir / "pair.json").string(), "--points", "8"});
    CHECK(r.code == 0);
    std::istringstream pair_rows(r.out);
    std::getline(pair_rows, row);
    while (std::getline(pair_rows, row)) {
        // Zero phase and zero group delay throughout.
        CHECK(row.substr(row.find(',', row.find(',') + 1)) == ",0,0");
    }
}

TEST_CASE("filter subcommand") {
    TempDir dir;
    const auto coeff = (dir / "smooth.json").string();
    REQUIRE(run({"design", "--pole", "0.6", "--q", "1", "--out", coeff}).code == 0);
    io::write_text(dir / "constant.csv", io::signal_csv(std::vector<double>(50, 0.7)));
    auto r = run({"filter", "--coeff", coeff, "--input", (dir / "constant.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(io::parse_signal_csv(r.out) == std::vector<double>(50, 0.7));

    r = run({"filter", "--coeff", coeff, "--input", (dir / "constant.csv").string(), "--priming", "zero"});
    REQUIRE(r.code == 0);
    CHECK(io::parse_signal_csv(r.out).front() != doctest::Approx(0.7));

    const auto pair = (dir / "pair.json").string();
    REQUIRE(run({"design", "--causality", "noncausal", "--D", "1", "--sigma", "-1", "--out", pair}).code == 0);
    Image ramp(40, 10);
    for (std::size_t y = 0; y < ramp.height; ++y) {
        for (std::size_t x = 0; x < ramp.width; ++x) {
            ramp.at(x, y) = 0.02 * static_cast<double>(x);
        }
    }
    io::write_pgm(dir / "ramp.pgm", ramp, 65535);
    const auto out = (dir / "ix.f32").string();
    r = run({"filter", "--coeff", pair, "--mode", "noncausal", "--input", (dir / "ramp.pgm").string(), "--axis",
             "rows", "--out", out});
    REQUIRE(r.code == 0);
    const auto ix = io::read_raw_stack(out);
    REQUIRE(ix.size() == 1);
    CHECK(ix[0].at(20, 5) == doctest::Approx(0.02).epsilon(1e-3));

    CHECK(run({"filter", "--coeff", pair, "--input", (dir / "constant.csv").string()}).code == 2);
    CHECK(run({"filter", "--coeff", coeff, "--mode", "noncausal", "--input", (dir / "constant.csv").string()})
              .code == 2);
    CHECK(run({"filter", "--coeff", coeff, "--input", (dir / "ramp.pgm").string()}).code == 2);

    // Time axis over a raw stack.
    io::write_raw_stack(dir / "ramp_t.f32", synthetic::brightness_ramp(4, 3, 40, 0.1, 0.005));
    const auto diff = (dir / "diff.json").string();
    REQUIRE(run({"design", "--D", "1", "--kappa", "1", "--sigma", "-1", "--q", "4", "--out", diff}).code == 0);
    r = run({"filter", "--coeff", diff, "--input", (dir / "ramp_t.f32").string(), "--axis", "time", "--out",
             (dir / "iz.f32").string()});
    REQUIRE(r.code == 0);
    CHECK(io::read_raw_stack(dir / "iz.f32").back().pixels[0] == doctest::Approx(0.005).epsilon(1e-4));
}

TEST_CASE("flow subcommand") {
    TempDir dir;
    const synthetic::Plaid plaid{64, 64};
    synthetic::Blob blob{40, 28};
    const auto frames = synthetic::plaid_with_blob(plaid, blob, 24);
    std::filesystem::create_directories(dir / "frames");
    for (std::size_t n = 0; n < frames.size(); ++n) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03zu.pgm", n);
        io::write_pgm(dir / "frames" / name, frames[n], 65535);
    }
    const auto out = (dir / "out").string();
    auto r = run({"flow", "--frames", (dir / "frames").string(), "--out", out});
    REQUIRE(r.code == 0);
    const auto manifest = json::parse(io::read_text(dir / "out" / "manifest.json"));
    CHECK(manifest["warmup_frames"] == 14);
    CHECK(manifest["frames"] == 24);
    CHECK(manifest["config"]["temporal_q"].get<double>() == 4.0);
    CHECK(manifest["config"]["smoothing_pole"].get<double>() == std::exp(-1.0 / 16));
    CHECK(manifest["per_frame"].size() == 24);

    const auto vx = io::read_raw_stack(dir / "out" / "vx.f32");
    const auto vy = io::read_raw_stack(dir / "out" / "vy.f32");
    REQUIRE(vx.size() == 24);
    // Far from the blob the background motion is recovered.
    std::vector<double> errors;
    for (std::size_t y = 12; y < 52; ++y) {
        for (std::size_t x = 12; x < 52; ++x) {
            if (std::hypot(x - blob.x_at(19.0), y - blob.y_at(19.0)) > 6 * blob.sigma) {
                errors.push_back(std::hypot(vx[23].at(x, y) - plaid.vx, vy[23].at(x, y) - plaid.vy) /
                                 std::hypot(plaid.vx, plaid.vy));
            }
        }
    }
    REQUIRE(!errors.empty());
    CHECK(median(errors) < 0.10);

    // The brightest preview pixel lies on the blob.
    const auto preview = io::read_pgm(dir / "out" / "disparity_0023.pgm");
    const auto brightest = std::max_element(preview.pixels.begin(), preview.pixels.end()) - preview.pixels.begin();
    const double bx = static_cast<double>(brightest % preview.width);
    const double by = static_cast<double>(brightest / preview.width);
    CHECK(std::hypot(bx - blob.x_at(19.0), by - blob.y_at(19.0)) < 3 * blob.sigma);
    CHECK(*std::max_element(preview.pixels.begin(), preview.pixels.end()) == 1.0);

    // Byte-identical reruns.
    REQUIRE(run({"flow", "--frames", (dir / "frames").string(), "--out", (dir / "again").string()}).code == 0);
    for (const char* file : {"vx.f32", "vy.f32", "disparity.f32", "manifest.json", "disparity_0020.pgm"}) {
        CHECK(io::read_text(dir / "out" / file) == io::read_text(dir / "again" / file));
    }

    // Raw input and overrides.
    io::write_raw_stack(dir / "short.f32", FrameStream(frames.begin(), frames.begin() + 10));
    r = run({"flow", "--raw", (dir / "short.f32").string(), "--out", (dir / "short").string(), "--strict"});
    CHECK(r.code == 4);
    r = run({"flow", "--raw", (dir / "short.f32.json").string(), "--out", (dir / "short").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    r = run({"flow", "--raw", (dir / "short.f32").string(), "--out", (dir / "short").string(), "--temporal-q",
             "2.5"});
    CHECK(r.code == 2);
    r = run({"flow", "--raw", (dir / "short.f32").string(), "--out", (dir / "q2").string(), "--temporal-q", "2",
             "--smoothing-pole", "0.8"});
    REQUIRE(r.code == 0);
    const auto q2 = json::parse(io::read_text(dir / "q2" / "manifest.json"));
    CHECK(q2["delay_frames"] == 2);
    CHECK(q2["config"]["smoothing_pole"].get<double>() == 0.8);
}

TEST_CASE("outputs are deterministic") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"design", "--kappa", "1", "--q", "auto"},
          std::vector<std::string>{"response", "--D", "1", "--q", "3", "--report-flatness"}}) {
        const auto a = run(args);
        const auto b = run(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}
