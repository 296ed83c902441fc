#include "lagiir/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "lagiir/design.hpp"
#include "lagiir/flow.hpp"
#include "lagiir/polynomial.hpp"
#include "lagiir/response.hpp"
#include "lagiir/runtime.hpp"
#include "lagiir/synthetic.hpp"
#include "lagiir/tables.hpp"

namespace lagiir {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::max(x.size(), y.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = i < x.size() ? x[i] : 0.0;
        const double yi = i < y.size() ? y[i] : 0.0;
        worst = std::max(worst, std::abs(xi - yi));
    }
    return worst;
}

FilterDesign causal_design(int degree, int derivative, int kappa, double p, double q) {
    FilterDesign d;
    d.degree = degree;
    d.derivative = derivative;
    d.weight = WeightSpec::from_pole(p, kappa, Causality::Causal);
    d.delay = q;
    return d;
}

FilterDesign two_sided_design(int degree, int derivative, double p) {
    FilterDesign d;
    d.degree = degree;
    d.derivative = derivative;
    d.weight = WeightSpec::from_pole(p, 0, Causality::TwoSided);
    return d;
}

TableEntry causal_entry(int derivative, int kappa) {
    if (kappa == 0) {
        return derivative == 0 ? TableEntry::I_Smoother : TableEntry::I_Differentiator;
    }
    return derivative == 0 ? TableEntry::III_Smoother : TableEntry::III_Differentiator;
}

const double kHalfSigmaPole = std::exp(-0.5);

double median(std::vector<double> v) {
    if (v.empty()) {
        return std::nan("");
    }
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

CriterionResult table_reproduction(const AcceptanceOptions& opt) {
    const auto start = Clock::now();
    double worst = 0.0;
    int cases = 0;
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        for (double q : {-2.0, 0.0, 1.0, 2.5, 6.0}) {
            for (int derivative : {0, 1}) {
                for (int kappa : {0, 1}) {
                    const auto derived = derive_causal_lde(causal_design(2, derivative, kappa, p, q));
                    auto table = table_causal(causal_entry(derivative, kappa), p, q);
                    table.b[0] += opt.table_b0_perturbation;
                    worst = std::max({worst, max_abs_diff(derived.b, table.b), max_abs_diff(derived.a, table.a)});
                    ++cases;
                }
            }
        }
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const bool fast = seconds < 1.0;
    return {1, "table reproduction", worst <= 1e-10 && fast,
            fmt("%d designs, max |derived - table| = %.3e (tol 1e-10), runtime %s 1 s", cases, worst,
                fast ? "<" : ">=")};
}

CriterionResult optimal_delay() {
    const double p = kHalfSigmaPole;
    const double q0 = optimal_q(TableEntry::I_Smoother, p);
    const double q1 = optimal_q(TableEntry::III_Smoother, p);
    const double n0 = std::abs(nyquist_gain(derive_causal_lde(causal_design(2, 0, 0, p, q0))));
    const double n1 = std::abs(nyquist_gain(derive_causal_lde(causal_design(2, 0, 1, p, q1))));
    const bool ok = std::abs(q0 - 2.12) <= 0.01 && std::abs(q1 - 4.14) <= 0.01 && n0 < 1e-10 && n1 < 1e-10;
    return {2, "optimal q", ok,
            fmt("kappa=0 q=%.5f |H(pi)|=%.2e; kappa=1 q=%.5f |H(pi)|=%.2e (want 2.12, 4.14 +-0.01; gain < 1e-10)", q0,
                n0, q1, n1)};
}

CriterionResult flatness() {
    const double p = kHalfSigmaPole;
    bool ok = true;
    std::string detail;
    for (int kappa : {0, 1}) {
        const auto entry = causal_entry(0, kappa);
        const auto lde = derive_causal_lde(causal_design(2, 0, kappa, p, optimal_q(entry, p)));
        const auto report = flatness_report(lde, 3);
        ok = ok && report.flat_through(3);
        double worst = 0.0;
        for (double d : report.derivatives) {
            worst = std::max(worst, std::abs(d) / report.reference);
        }
        detail += fmt("%s%s max |d^k|H|^2/dw^k| / |H(0)|^2 = %.2e", detail.empty() ? "" : "; ",
                      std::string(to_string(entry)).c_str(), worst);
    }
    return {3, "flatness at optimal q", ok, detail + " (k = 1..3, tol 1e-4)"};
}

CriterionResult pole_multiplicity_check() {
    int cases = 0;
    int failures = 0;
    for (double p : {0.2, 0.5, 0.8, 0.95}) {
        for (int degree = 0; degree <= kMaxBasisDegree; ++degree) {
            for (int kappa : {0, 1}) {
                for (int derivative = 0; derivative <= std::min(degree, 2); ++derivative) {
                    const auto lde = derive_causal_lde(causal_design(degree, derivative, kappa, p, 1.5));
                    // Expected (1 - p z^-1)^n expanded with integer binomials.
                    const int n = degree + kappa + 1;
                    std::vector<double> expected(static_cast<std::size_t>(n) + 1);
                    double binom = 1.0;
                    for (int k = 0; k <= n; ++k) {
                        expected[static_cast<std::size_t>(k)] = binom * std::pow(-p, k);
                        binom = binom * (n - k) / (k + 1);
                    }
                    const bool exact = max_abs_diff(lde.a, expected) <= 1e-12 * std::pow(1 + p, n) &&
                                       pole_multiplicity(lde.a, p) == n;
                    failures += exact ? 0 : 1;
                    ++cases;
                }
            }
        }
    }
    return {4, "pole multiplicity", failures == 0,
            fmt("%d causal designs (B=0..6, kappa=0..1, D<=2), %d with a != (1 - p z^-1)^(B+kappa+1)", cases,
                failures)};
}

CriterionResult group_delay_tuning() {
    const double p = kHalfSigmaPole;
    double worst = 0.0;
    for (int kappa : {0, 1}) {
        for (double q : {0.0, 1.0, 2.0, 4.0}) {
            const auto lde = derive_causal_lde(causal_design(2, 0, kappa, p, q));
            const auto gd = group_delay(lde, 0.01);
            worst = std::max(worst, gd ? std::abs(*gd - q) : INFINITY);
        }
    }
    return {5, "group delay tuning", worst < 0.05,
            fmt("max |tau(0.01) - q| = %.4f samples over kappa 0..1, q in {0,1,2,4} (tol 0.05)", worst)};
}

CriterionResult differentiator_law() {
    const double p = kHalfSigmaPole;
    const double omega = 1e-3;
    struct Case {
        const char* name;
        std::function<std::complex<double>(double)> response;
    };
    const double qi = optimal_q(TableEntry::I_Differentiator, p);
    const double qiii = optimal_q(TableEntry::III_Differentiator, p);
    const auto ti = table_causal(TableEntry::I_Differentiator, p, qi);
    const auto tiii = table_causal(TableEntry::III_Differentiator, p, qiii);
    const auto tiii4 = table_causal(TableEntry::III_Differentiator, p, 4.0);
    const auto tii = table_noncausal(TableEntry::II_Differentiator, p);
    const std::vector<Case> cases{
        {"I_differentiator(q opt)", [&](double w) { return frequency_response(ti, w); }},
        {"II_differentiator", [&](double w) { return frequency_response(tii, w); }},
        {"III_differentiator(q opt)", [&](double w) { return frequency_response(tiii, w); }},
        {"III_differentiator(q=4)", [&](double w) { return frequency_response(tiii4, w); }},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const double ratio = std::abs(c.response(omega)) / omega;
        ok = ok && ratio >= 0.999 && ratio <= 1.001;
        detail += fmt("%s%s %.6f", detail.empty() ? "" : ", ", c.name, ratio);
    }
    return {6, "differentiator low-frequency law", ok, "|H|T/w at w=1e-3: " + detail + " (want [0.999, 1.001])"};
}

CriterionResult noncausal_equivalence() {
    const auto grid = frequency_grid(64);
    double worst = 0.0;
    double smoother_imag = 0.0;
    double smoother_min_real = INFINITY;
    double differentiator_real = 0.0;
    for (double p : {0.25, 0.5, 0.75}) {
        for (int derivative : {0, 1}) {
            const auto derived = derive_noncausal_pair(two_sided_design(2, derivative, p));
            const auto table = table_noncausal(derivative == 0 ? TableEntry::II_Smoother : TableEntry::II_Differentiator,
                                               p);
            for (double w : grid) {
                const auto hd = frequency_response(derived, w);
                const auto ht = frequency_response(table, w);
                worst = std::max(worst, std::abs(hd - ht));
                if (derivative == 0) {
                    smoother_imag = std::max(smoother_imag, std::abs(hd.imag()));
                    smoother_min_real = std::min(smoother_min_real, hd.real());
                } else {
                    differentiator_real = std::max(differentiator_real, std::abs(hd.real()));
                }
            }
        }
    }
    const bool ok = worst < 1e-8 && smoother_imag < 1e-12 && smoother_min_real >= 0.0 && differentiator_real < 1e-12;
    return {7, "non-causal equivalence", ok,
            fmt("max |H_derived - H_table| = %.2e (tol 1e-8); smoother max|Im H| = %.1e, min Re H = %.3e; "
                "differentiator max|Re H| = %.1e",
                worst, smoother_imag, smoother_min_real, differentiator_real)};
}

CriterionResult vrf_minimum() {
    const double p = kHalfSigmaPole;
    bool ok = true;
    std::string detail;
    for (int kappa : {0, 1}) {
        const auto entry = causal_entry(0, kappa);
        const double target = optimal_q(entry, p);
        double best_q = 0.0;
        double best = INFINITY;
        for (int i = 0; i <= 800; ++i) {
            const double q = 0.01 * i;
            const double vrf = white_noise_gain(derive_causal_lde(causal_design(2, 0, kappa, p, q)));
            if (vrf < best) {
                best = vrf;
                best_q = q;
            }
        }
        ok = ok && std::abs(best_q - target) <= 0.05;
        detail += fmt("%s%s argmin %.2f vs %.4f", detail.empty() ? "" : "; ", std::string(to_string(entry)).c_str(),
                      best_q, target);
    }
    return {8, "VRF minimization", ok, detail + " (q sweep 0..8 step 0.01, tol 0.05)"};
}

CriterionResult spectrum_bank() {
    const auto noise = synthetic::white_noise(100, 7);
    double worst = 0.0;
    for (int kappa : {0, 1}) {
        for (int derivative : {0, 1}) {
            const auto design = causal_design(2, derivative, kappa, kHalfSigmaPole, 2.0);
            const auto bank = spectrum_filter_bank(design);
            const auto direct = filter_causal(derive_causal_lde(design), noise);
            std::vector<double> combined(noise.size(), 0.0);
            for (std::size_t k = 0; k < bank.per_k.size(); ++k) {
                const auto beta = filter_causal(bank.per_k[k], noise);
                for (std::size_t n = 0; n < noise.size(); ++n) {
                    combined[n] += bank.synthesis[k] * beta[n];
                }
            }
            worst = std::max(worst, max_abs_diff(direct, combined));
        }
    }
    return {9, "spectrum-bank equivalence", worst < 1e-9,
            fmt("max |sum c_k beta_k - combined| = %.2e on 100 white-noise samples (tol 1e-9)", worst)};
}

struct FlowCheck {
    double worst_median_error = 0.0;
    double min_blob_ratio = INFINITY;
    double table_mismatch = 0.0;
};

CriterionResult flow_reproduction() {
    const auto start = Clock::now();
    const FlowConfig cfg;
    const synthetic::Plaid plaid; // 128x128, (0.5, -0.25) px/frame
    const synthetic::Blob blob;   // sigma 4 px, moving opposite to the background
    constexpr std::size_t frames = 40;
    constexpr std::size_t guard = 16;

    FlowCheck check;
    // The pipeline's derived filters are the closed-form table filters.
    const double ps = std::exp(cfg.spatial_sigma);
    const double pt = std::exp(cfg.temporal_sigma);
    const auto spatial = cfg.spatial_differentiator();
    const auto spatial_table = table_noncausal(TableEntry::II_Differentiator, ps);
    const auto temporal = cfg.temporal_differentiator();
    const auto temporal_table = table_causal(TableEntry::III_Differentiator, pt, cfg.temporal_q);
    check.table_mismatch = std::max({max_abs_diff(spatial.forward.b, spatial_table.forward.b),
                                     max_abs_diff(spatial.backward.b, spatial_table.backward.b),
                                     max_abs_diff(spatial.forward.a, spatial_table.forward.a),
                                     max_abs_diff(temporal.b, temporal_table.b),
                                     max_abs_diff(temporal.a, temporal_table.a)});

    const auto background = process_sequence(synthetic::plaid_sequence(plaid, frames), cfg);
    const auto with_blob = process_sequence(synthetic::plaid_with_blob(plaid, blob, frames), cfg);
    const double speed = std::hypot(plaid.vx, plaid.vy);
    for (std::size_t n = background.warmup_frames; n < frames; ++n) {
        const auto& flow = background.frames[n].flow;
        const auto& dj = with_blob.frames[n].disparity.dj;
        // Outputs at frame n describe time n - delay.
        const double t = static_cast<double>(n) - static_cast<double>(cfg.delay_frames());
        std::vector<double> errors;
        std::vector<double> inside;
        std::vector<double> outside;
        for (std::size_t y = guard; y < plaid.height - guard; ++y) {
            for (std::size_t x = guard; x < plaid.width - guard; ++x) {
                errors.push_back(std::hypot(flow.vx.at(x, y) - plaid.vx, flow.vy.at(x, y) - plaid.vy) / speed);
                const double r = std::hypot(x - blob.x_at(t), y - blob.y_at(t));
                if (r <= 2 * blob.sigma) {
                    inside.push_back(dj.at(x, y));
                } else if (r > 6 * blob.sigma) {
                    outside.push_back(dj.at(x, y));
                }
            }
        }
        check.worst_median_error = std::max(check.worst_median_error, median(errors));
        check.min_blob_ratio = std::min(check.min_blob_ratio, median(inside) / median(outside));
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const bool fast = seconds < 30.0;
    const bool ok = check.worst_median_error < 0.10 && check.min_blob_ratio > 5.0 && check.table_mismatch < 1e-10 &&
                    fast;
    return {10, "optical-flow reproduction", ok,
            fmt("frames %zu..%zu: worst median flow error %.2f%% (tol 10%%), min blob/background dJ ratio %.1f "
                "(want > 5), filters vs tables %.1e, runtime %s 30 s",
                background.warmup_frames, frames - 1, 100 * check.worst_median_error, check.min_blob_ratio,
                check.table_mismatch, fast ? "<" : ">=")};
}

double impulse_error(const LdeCoefficients& lde, const FilterDesign& design, std::size_t length) {
    std::vector<double> impulse(length, 0.0);
    impulse[0] = 1.0;
    const auto oracle = impulse_response_prefix(design, orthonormal_basis(design.degree, design.weight), length);
    return max_abs_diff(filter_causal(lde, impulse), oracle);
}

double impulse_error(const NonCausalPair& pair, const FilterDesign& design, std::size_t half) {
    std::vector<double> centred(2 * half + 1, 0.0);
    centred[half] = 1.0;
    const auto out = filter_noncausal(pair, centred, Priming::Zero);
    return max_abs_diff(out, two_sided_impulse_response(design, orthonormal_basis(design.degree, design.weight), half));
}

// Realized filters: the B <= 2 families of the closed-form tables (derived
// and tabulated), exponential smoothers, and the optical-flow filters.
CriterionResult runtime_correctness() {
    constexpr std::size_t length = 50;
    double worst_impulse = 0.0;
    int filters = 0;
    for (double p : {0.1, 0.3, kHalfSigmaPole, 0.75, 0.9}) {
        for (int degree = 0; degree <= 2; ++degree) {
            for (int kappa : {0, 1}) {
                for (int derivative = 0; derivative <= std::min(degree, 1); ++derivative) {
                    for (double q : {0.0, 1.0, 4.0}) {
                        const auto design = causal_design(degree, derivative, kappa, p, q);
                        worst_impulse = std::max(worst_impulse, impulse_error(derive_causal_lde(design), design, length));
                        ++filters;
                        if (degree == 2) {
                            const auto table = table_causal(causal_entry(derivative, kappa), p, q);
                            worst_impulse = std::max(worst_impulse, impulse_error(table, design, length));
                            ++filters;
                        }
                    }
                }
            }
            for (int derivative = 0; derivative <= std::min(degree, 1); ++derivative) {
                const auto design = two_sided_design(degree, derivative, p);
                worst_impulse = std::max(worst_impulse, impulse_error(derive_noncausal_pair(design), design, 24));
                ++filters;
                if (degree == 2) {
                    const auto table =
                        table_noncausal(derivative == 0 ? TableEntry::II_Smoother : TableEntry::II_Differentiator, p);
                    worst_impulse = std::max(worst_impulse, impulse_error(table, design, 24));
                    ++filters;
                }
            }
        }
    }
    const FlowConfig cfg;
    const double pt = std::exp(cfg.temporal_sigma);
    const double ps = std::exp(cfg.spatial_sigma);
    worst_impulse = std::max({worst_impulse,
                              impulse_error(cfg.temporal_differentiator(),
                                            causal_design(2, 1, cfg.temporal_kappa, pt, cfg.temporal_q), length),
                              impulse_error(cfg.temporal_smoother(), causal_design(0, 0, 0, cfg.smoothing_pole, 0.0),
                                            length),
                              impulse_error(cfg.spatial_differentiator(), two_sided_design(2, 1, ps), 24),
                              impulse_error(cfg.spatial_smoother(), two_sided_design(0, 0, cfg.smoothing_pole), 24)});
    filters += 4;

    // Randomized linearity and shift invariance.
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> scale(-3.0, 3.0);
    double worst_linear = 0.0;
    double worst_shift = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto lde = derive_causal_lde(causal_design(2, trial % 2, (trial / 2) % 2, 0.4 + 0.025 * trial, 2.0));
        std::vector<double> x(128);
        std::vector<double> y(128);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = normal(rng);
            y[i] = normal(rng);
        }
        const double alpha = scale(rng);
        const double beta = scale(rng);
        std::vector<double> mix(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            mix[i] = alpha * x[i] + beta * y[i];
        }
        const auto fx = filter_causal(lde, x);
        const auto fy = filter_causal(lde, y);
        const auto fm = filter_causal(lde, mix);
        for (std::size_t i = 0; i < x.size(); ++i) {
            worst_linear = std::max(worst_linear, std::abs(fm[i] - (alpha * fx[i] + beta * fy[i])));
        }
        const std::size_t shift = 1 + static_cast<std::size_t>(trial) % 17;
        std::vector<double> shifted(x.size() + shift, 0.0);
        std::copy(x.begin(), x.end(), shifted.begin() + static_cast<std::ptrdiff_t>(shift));
        const auto fs = filter_causal(lde, shifted);
        for (std::size_t i = 0; i < x.size(); ++i) {
            worst_shift = std::max(worst_shift, std::abs(fs[i + shift] - fx[i]));
        }
    }
    const bool ok = worst_impulse <= 1e-12 && worst_linear <= 1e-10 && worst_shift == 0.0;
    return {11, "runtime correctness", ok,
            fmt("%d filters, max impulse error %.2e (tol 1e-12); linearity %.2e (tol 1e-10); shift %.1e (exact)",
                filters, worst_impulse, worst_linear, worst_shift)};
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    const std::vector<std::function<CriterionResult()>> criteria{
        [&] { return table_reproduction(options); },
        optimal_delay,
        flatness,
        pole_multiplicity_check,
        group_delay_tuning,
        differentiator_law,
        noncausal_equivalence,
        vrf_minimum,
        spectrum_bank,
        flow_reproduction,
        runtime_correctness,
    };
    std::vector<CriterionResult> results;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
            continue;
        }
        try {
            results.push_back(criteria[i]());
        } catch (const std::exception& e) {
            results.push_back({id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()});
        }
    }
    return results;
}

std::string format_report(const std::vector<CriterionResult>& results) {
    std::string out;
    int passed = 0;
    for (const auto& r : results) {
        out += fmt("[%s] %2d %s: ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str()) + r.detail + "\n";
        passed += r.passed ? 1 : 0;
    }
    out += fmt("%d/%zu criteria passed\n", passed, results.size());
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

} // namespace lagiir
