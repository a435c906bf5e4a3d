// Copyright 2026 The dipne-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "dipne/analytics.hpp"
#include "dipne/experiments.hpp"

namespace dipne::exp {

namespace {

constexpr double kPi = std::numbers::pi;

// Runs f(0..n-1) on a small pool; results land in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int threads, F&& f) {
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t t = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
    t = std::min(t, std::max<std::size_t>(n, 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < t; ++i) pool.emplace_back(worker);
        worker();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

ResultTable start_table(const ExperimentConfig& cfg, std::vector<std::string> columns) {
    ResultTable t;
    t.experiment = std::string(experiment_name(cfg.experiment()));
    t.columns = std::move(columns);
    t.config = cfg.values();
    // Thread count never changes the output, so it stays out of the echo.
    t.config.erase("threads");
    return t;
}

int positive(const ExperimentConfig& cfg, const std::string& key, int min = 1) {
    int v = cfg.integer(key);
    if (v < min) throw ConfigError(key + " must be >= " + std::to_string(min));
    return v;
}

CatFitOptions fit_options(const ExperimentConfig& cfg) {
    CatFitOptions o;
    const auto& b = cfg.raw("budget");
    if (b == "component") {
        o.budget = PhotonBudget::Component;
    } else if (b == "state") {
        o.budget = PhotonBudget::State;
    } else {
        throw ConfigError("budget must be component or state, got '" + b + "'");
    }
    return o;
}

void check_theta_sub(double theta) {
    if (!(theta > 0 && theta < kPi / 2)) throw ConfigError("theta_sub must lie in (0, pi/2)");
}

void check_squeezing(double s) {
    if (!(s >= 0)) throw ConfigError("squeeze_photons must be >= 0 or inf");
}

// Builds the kitten and rejects cutoffs that leave it leaking, suggesting the
// smallest doubling that does not.
KittenState make_kitten(const KittenSpec& spec) {
    auto build = [](const KittenSpec& sp) -> std::optional<KittenState> {
        try {
            auto kit = kitten_direct(sp);
            if (kit.state.leakage() <= kLeakageThreshold) return kit;
        } catch (const std::domain_error&) {
        }
        return std::nullopt;
    };
    if (auto kit = build(spec)) return std::move(*kit);
    KittenSpec bigger = spec;
    while (bigger.cutoff < (1 << 16)) {
        bigger.cutoff = std::max(2 * bigger.cutoff, 1);
        if (build(bigger)) break;
    }
    throw ConfigError("cutoff " + std::to_string(spec.cutoff) + " is too small for squeeze_photons " +
                      format_double(spec.squeeze_photons) + ", k=" + std::to_string(spec.k) +
                      "; use cutoff >= " + std::to_string(bigger.cutoff));
}

std::string key_of(const char* name, double v) { return std::string(name) + "=" + format_double(v); }

// ---------------------------------------------------------------------------

const std::vector<std::string> kFamilies = {"vacuum", "photon0", "photon-both", "photon-both+squeeze-i"};

// Zero-displacement core fed into input `which` (0 or 1) before displacing.
FockState family_core(const std::string& family, int which, int cutoff) {
    auto layout = ModeLayout::uniform(1, cutoff);
    auto vac = FockState::vacuum(layout);
    auto one = FockState::basis(layout, {1});
    if (family == "vacuum") return vac;
    if (family == "photon0") return which == 0 ? one : vac;
    if (family == "photon-both") return one;
    if (which == 0) return one;
    return squeeze_op(one, Mode{0}, Squeeze::from_photons(1.0, kPi / 2));
}

}  // namespace

RunResult run_interference(const ExperimentConfig& cfg) {
    const double ts = cfg.number("theta_split");
    const double tr = cfg.number("theta_recomb");
    const double phase = cfg.number("phase");
    bool pi_shift;
    if (std::abs(phase) < 1e-12) {
        pi_shift = false;
    } else if (std::abs(phase - kPi) < 1e-12) {
        pi_shift = true;
    } else {
        throw ConfigError("phase must be 0 or pi");
    }
    auto families = cfg.strings("families");
    for (const auto& f : families) {
        if (std::find(kFamilies.begin(), kFamilies.end(), f) == kFamilies.end()) {
            throw ConfigError("unknown family '" + f +
                              "' (valid: vacuum, photon0, photon-both, photon-both+squeeze-i)");
        }
    }
    const double total = cfg.number("total_photons");
    if (!(total >= 0 && std::isfinite(total))) throw ConfigError("total_photons must be finite and >= 0");
    const int steps = positive(cfg, "fraction_steps", 2);
    const int cutoff = positive(cfg, "cutoff", 2);
    GadgetSpec spec{ts, tr, pi_shift};
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    struct Row {
        double fraction, sim, theory, leakage;
    };
    const std::size_t n = families.size() * static_cast<std::size_t>(steps);
    auto rows = parallel_map<Row>(n, cfg.integer("threads"), [&](std::size_t i) {
        const auto& fam = families[i / static_cast<std::size_t>(steps)];
        const double f = static_cast<double>(i % static_cast<std::size_t>(steps)) / (steps - 1);
        const double a0 = std::sqrt(f * total), a1 = std::sqrt((1 - f) * total);
        auto in0 = displace(family_core(fam, 0, cutoff), Mode{0}, a0);
        auto in1 = displace(family_core(fam, 1, cutoff), Mode{0}, a1);
        auto li = l_intf_detailed(in0, in1, spec);
        double leak = std::max({li.leakage, in0.leakage(), in1.leakage()});
        return Row{f, li.value, interference_loss_theory(a0, a1, ts, tr, pi_shift), leak};
    });

    RunResult out{start_table(cfg, {"family", "fraction", "L_intf_sim", "L_intf_theory", "abs_error"})};
    auto& t = out.table;
    t.cutoffs = {cutoff};
    double max_err = 0, spread = 0;
    for (std::size_t s = 0; s < static_cast<std::size_t>(steps); ++s) {
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t fi = 0; fi < families.size(); ++fi) {
            const auto& r = rows[fi * static_cast<std::size_t>(steps) + s];
            lo = std::min(lo, r.sim), hi = std::max(hi, r.sim);
        }
        spread = std::max(spread, hi - lo);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i];
        double err = std::abs(r.sim - r.theory);
        max_err = std::max(max_err, err);
        t.max_leakage = std::max(t.max_leakage, r.leakage);
        t.add_row({families[i / static_cast<std::size_t>(steps)], r.fraction, r.sim, r.theory, err});
    }
    t.summary["max_abs_error"] = max_err;
    t.summary["max_family_spread"] = spread;
    return out;
}

RunResult run_kitten(const ExperimentConfig& cfg) {
    const double theta = cfg.number("theta_sub");
    check_theta_sub(theta);
    auto squeezing = cfg.numbers("squeeze_photons");
    for (double s : squeezing) check_squeezing(s);
    if (cfg.flag("include_infinite")) squeezing.push_back(kInfiniteSqueezing);
    std::sort(squeezing.begin(), squeezing.end());
    squeezing.erase(std::unique(squeezing.begin(), squeezing.end()), squeezing.end());
    auto ks = cfg.integers("k");
    for (int k : ks) {
        if (k < 0) throw ConfigError("k must be >= 0");
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    const int cutoff = positive(cfg, "cutoff");
    const auto opts = fit_options(cfg);

    struct Row {
        double probability, mean_n, inf_sq, inf_plain, fraction, leakage;
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::size_t n = squeezing.size() * ks.size();
    auto rows = parallel_map<Row>(n, cfg.integer("threads"), [&](std::size_t i) {
        const double s = squeezing[i / ks.size()];
        const int k = ks[i % ks.size()];
        KittenSpec spec{s, theta, k, cutoff};
        if (s == 0) {
            // Vacuum input: only k = 0 can occur and there is nothing to fit.
            return Row{k == 0 ? 1.0 : 0.0, nan, nan, nan, nan, 0.0};
        }
        if (std::isinf(s) && k == 0) return Row{nan, nan, nan, nan, nan, 0.0};
        auto kit = make_kitten(spec);
        auto fit = fit_squeezed_cat(kit, opts);
        return Row{kit.probability.value_or(nan), kit.mean_photons, fit.infidelity, 1 - fit.plain_cat_fidelity,
                   fit.squeeze_fraction, kit.state.leakage()};
    });

    // Outcome probabilities over every k, per finite squeezing level.
    std::vector<double> finite;
    for (double s : squeezing) {
        if (std::isfinite(s)) finite.push_back(s);
    }
    struct Totals {
        double total, odd;
    };
    auto totals = parallel_map<Totals>(finite.size(), cfg.integer("threads"), [&](std::size_t i) {
        Totals tot{0, 0};
        for (int k = 0; k <= cutoff; ++k) {
            double p = kitten_probability({finite[i], theta, k, cutoff});
            tot.total += p;
            if (k % 2 == 1 && k <= 9) tot.odd += p;
        }
        return tot;
    });

    RunResult out{start_table(cfg, {"squeeze_photons", "k", "probability", "mean_n", "infidelity_sqcat",
                                    "infidelity_plaincat", "squeeze_fraction"})};
    auto& t = out.table;
    t.cutoffs = {cutoff};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i];
        const double s = squeezing[i / ks.size()];
        const int k = ks[i % ks.size()];
        t.max_leakage = std::max(t.max_leakage, r.leakage);
        t.add_row({s, std::int64_t{k}, r.probability, r.mean_n, r.inf_sq, r.inf_plain, r.fraction});
    }

    double worst_total = 0, best_odd = -1, best_odd_s = nan;
    for (std::size_t i = 0; i < finite.size(); ++i) {
        worst_total = std::max(worst_total, std::abs(1 - totals[i].total));
        if (totals[i].odd > best_odd) best_odd = totals[i].odd, best_odd_s = finite[i];
    }
    if (!finite.empty()) {
        t.summary["probability_total_max_deviation"] = worst_total;
        t.summary["odd_probability_k_le_9_max"] = best_odd;
        t.summary["odd_probability_k_le_9_argmax_squeeze_photons"] = best_odd_s;
    }
    double best_plain = -INFINITY;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        double best = INFINITY, best_s = nan, worst_frac = -INFINITY;
        for (std::size_t si = 0; si < squeezing.size(); ++si) {
            const auto& r = rows[si * ks.size() + ki];
            if (std::isnan(r.inf_sq)) continue;
            if (std::isfinite(squeezing[si]) && r.inf_sq < best) best = r.inf_sq, best_s = squeezing[si];
            worst_frac = std::max(worst_frac, r.fraction);
            best_plain = std::max(best_plain, 1 - r.inf_plain);
        }
        if (std::isfinite(best)) {
            t.summary[key_of("best_infidelity_sqcat.k", ks[ki])] = best;
            t.summary[key_of("best_squeeze_photons.k", ks[ki])] = best_s;
        }
        if (std::isfinite(worst_frac)) t.summary[key_of("max_squeeze_fraction.k", ks[ki])] = worst_frac;
    }
    if (std::isfinite(best_plain)) t.summary["best_plaincat_fidelity"] = best_plain;
    t.notes.push_back("best_* entries take the minimum over the finite squeezing sweep (plateau)");
    t.notes.push_back("probability totals sum kitten_probability over k = 0..cutoff per finite squeezing level");
    return out;
}

RunResult run_catfit(const ExperimentConfig& cfg) {
    auto thetas = cfg.numbers("theta_sub");
    for (double th : thetas) check_theta_sub(th);
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
    const double s = cfg.number("squeeze_photons");
    check_squeezing(s);
    auto ks = cfg.integers("k");
    for (int k : ks) {
        if (k < 1) throw ConfigError("k must be >= 1");
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    const int cutoff = positive(cfg, "cutoff");
    const auto opts = fit_options(cfg);

    struct Row {
        double mean_n, peak, inf_sq, inf_plain, fraction, leakage;
    };
    const std::size_t n = thetas.size() * ks.size();
    auto rows = parallel_map<Row>(n, cfg.integer("threads"), [&](std::size_t i) {
        const double th = thetas[i / ks.size()];
        const int k = ks[i % ks.size()];
        auto kit = make_kitten({s, th, k, cutoff});
        auto fit = fit_squeezed_cat(kit, opts);
        return Row{kit.mean_photons, peak_estimate(k, th), fit.infidelity, 1 - fit.plain_cat_fidelity,
                   fit.squeeze_fraction, kit.state.leakage()};
    });

    RunResult out{start_table(cfg, {"theta_sub", "k", "mean_n", "peak_estimate", "peak_relative_error",
                                    "infidelity_sqcat", "infidelity_plaincat", "squeeze_fraction"})};
    auto& t = out.table;
    t.cutoffs = {cutoff};
    bool mono_theta = true, mono_k = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i];
        const std::size_t ti = i / ks.size(), ki = i % ks.size();
        double rel = std::abs(r.mean_n - r.peak) / r.mean_n;
        t.max_leakage = std::max(t.max_leakage, r.leakage);
        t.add_row({thetas[ti], std::int64_t{ks[ki]}, r.mean_n, r.peak, rel, r.inf_sq, r.inf_plain, r.fraction});
        // Thetas ascend, so mean photons must fall along ti and rise along ki.
        if (ti > 0 && !(r.mean_n < rows[i - ks.size()].mean_n)) mono_theta = false;
        if (ki > 0 && !(r.mean_n > rows[i - 1].mean_n)) mono_k = false;
        const std::string key = key_of("peak_relative_error.k", ks[ki]) + "." + key_of("theta_sub", thetas[ti]);
        t.summary[key] = rel;
    }
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        double worst = 0;
        for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
            if (thetas[ti] > kPi / 5 + 1e-12) continue;
            const auto& r = rows[ti * ks.size() + ki];
            worst = std::max(worst, std::abs(r.mean_n - r.peak) / r.mean_n);
        }
        t.summary[key_of("max_peak_relative_error_theta_le_pi_5.k", ks[ki])] = worst;
    }
    t.summary["monotone_decreasing_in_theta"] = mono_theta ? 1 : 0;
    t.summary["monotone_increasing_in_k"] = mono_k ? 1 : 0;
    return out;
}

RunResult run_numberdiff(const ExperimentConfig& cfg) {
    auto ks = cfg.integers("k");
    for (int k : ks) {
        if (k < 0) throw ConfigError("k must be >= 0");
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    const double s = cfg.number("squeeze_photons");
    check_squeezing(s);
    if (std::isinf(s)) {
        for (int k : ks) {
            if (k == 0) throw ConfigError("k = 0 needs finite squeezing");
        }
    }
    const double theta = cfg.number("theta_sub");
    check_theta_sub(theta);
    const int cutoff = positive(cfg, "cutoff");
    const auto& rule = cfg.raw("lo_rule");
    if (rule != "sqrt_plus_2" && rule != "sqrt_of_plus_2") {
        throw ConfigError("lo_rule must be sqrt_plus_2 or sqrt_of_plus_2");
    }
    const auto& view = cfg.raw("view");
    if (view != "joint" && view != "difference") throw ConfigError("view must be joint or difference");
    const double pmin = cfg.number("min_probability");
    if (!(pmin >= 0)) throw ConfigError("min_probability must be >= 0");

    struct Result {
        JointDistribution joint;
        double mean_n, lo, leakage;
    };
    auto results = parallel_map<Result>(ks.size(), cfg.integer("threads"), [&](std::size_t i) {
        auto kit = make_kitten({s, theta, ks[i], cutoff});
        const double nbar = kit.mean_photons;
        const double lo = rule == "sqrt_plus_2" ? std::sqrt(nbar) + 2 : std::sqrt(nbar + 2);
        // The kitten's components sit at +-a e^{i psi}; the oscillator is
        // placed a quarter turn behind so the pair reads as a +-i phase code.
        double psi = 0;
        if (nbar > 0) psi = (cat_frame(kit.state).theta + kPi) / 2;
        auto lo_state = coherent(std::polar(lo, psi - kPi / 2), cutoff);
        auto out = phase_to_dide(tensor(kit.state, lo_state), Mode{0}, Mode{1});
        double leak = std::max({kit.state.leakage(), lo_state.leakage(), out.leakage()});
        return Result{joint_number_distribution(out, {0, 1}), nbar, lo, leak};
    });

    RunResult out;
    if (view == "joint") {
        out.table = start_table(cfg, {"k", "n0", "n1", "probability"});
    } else {
        out.table = start_table(cfg, {"k", "n0_minus_n1", "probability"});
    }
    auto& t = out.table;
    t.cutoffs = {cutoff, cutoff};
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const auto& r = results[i];
        const int k = ks[i];
        const int d = cutoff + 1;
        std::vector<double> diff(static_cast<std::size_t>(2 * cutoff + 1), 0.0);
        double equal = 0;
        for (int n0 = 0; n0 <= cutoff; ++n0) {
            for (int n1 = 0; n1 <= cutoff; ++n1) {
                double p = r.joint.probability[static_cast<std::size_t>(n0 * d + n1)];
                diff[static_cast<std::size_t>(n0 - n1 + cutoff)] += p;
                if (n0 == n1) equal += p;
                if (view == "joint" && p >= pmin && p > 0) {
                    t.add_row({std::int64_t{k}, std::int64_t{n0}, std::int64_t{n1}, p});
                }
            }
        }
        if (view == "difference") {
            for (int dd = -cutoff; dd <= cutoff; ++dd) {
                double p = diff[static_cast<std::size_t>(dd + cutoff)];
                if (p >= pmin && p > 0) t.add_row({std::int64_t{k}, std::int64_t{dd}, p});
            }
        }
        t.max_leakage = std::max(t.max_leakage, r.leakage);
        t.summary[key_of("p_equal.k", k)] = equal;
        t.summary[key_of("total_probability.k", k)] = r.joint.total();
        t.summary[key_of("kitten_mean_photons.k", k)] = r.mean_n;
        t.summary[key_of("lo_amplitude.k", k)] = r.lo;
    }
    t.notes.push_back("rows with probability below min_probability are omitted; summary totals use every cell");
    return out;
}

RunResult run_match(const ExperimentConfig& cfg) {
    auto src = cfg.integers("k_source");
    auto dst = cfg.integers("k_target");
    const double theta = cfg.number("theta_sub");
    check_theta_sub(theta);
    const double s = cfg.number("squeeze_photons");
    check_squeezing(s);
    const int cutoff = positive(cfg, "cutoff");
    std::set<int> all(src.begin(), src.end());
    all.insert(dst.begin(), dst.end());
    for (int k : all) {
        if (k < 1) throw ConfigError("k_source and k_target must be >= 1");
    }
    std::sort(src.begin(), src.end());
    src.erase(std::unique(src.begin(), src.end()), src.end());
    std::sort(dst.begin(), dst.end());
    dst.erase(std::unique(dst.begin(), dst.end()), dst.end());

    const std::vector<int> kv(all.begin(), all.end());
    struct Fitted {
        KittenState kitten;
        CatFitResult fit;
    };
    auto fitted = parallel_map<Fitted>(kv.size(), cfg.integer("threads"), [&](std::size_t i) {
        auto kit = make_kitten({s, theta, kv[i], cutoff});
        auto fit = fit_squeezed_cat(kit);
        return Fitted{std::move(kit), fit};
    });
    auto at = [&](int k) -> const Fitted& {
        return fitted[static_cast<std::size_t>(std::find(kv.begin(), kv.end(), k) - kv.begin())];
    };

    const std::size_t n = src.size() * dst.size();
    auto rows = parallel_map<MatchResult>(n, cfg.integer("threads"), [&](std::size_t i) {
        const auto& a = at(src[i / dst.size()]);
        const auto& b = at(dst[i % dst.size()]);
        return squeeze_to_match(a.kitten, a.fit, b.fit.alpha);
    });

    RunResult out{start_table(cfg, {"k_source", "k_target", "r_required", "excess_fraction", "source_displacement",
                                    "target_displacement", "mean_n"})};
    auto& t = out.table;
    t.cutoffs = {cutoff};
    double best = -INFINITY, best_src = 0, best_rest = -INFINITY, diag = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = rows[i];
        const int ks = src[i / dst.size()], kt = dst[i % dst.size()];
        t.max_leakage = std::max({t.max_leakage, m.leakage, at(ks).kitten.state.leakage()});
        t.add_row({std::int64_t{ks}, std::int64_t{kt}, m.r_required, m.excess_fraction, m.source_displacement,
                   at(kt).fit.alpha, m.mean_photons});
        if (m.excess_fraction > best) best = m.excess_fraction, best_src = ks;
        if (ks > 1) best_rest = std::max(best_rest, m.excess_fraction);
        if (ks == kt) diag = std::max(diag, std::abs(m.r_required));
    }
    t.summary["max_excess_fraction"] = best;
    t.summary["max_excess_fraction_k_source"] = best_src;
    if (std::isfinite(best_rest)) t.summary["max_excess_fraction_k_source_gt_1"] = best_rest;
    t.summary["max_abs_r_on_diagonal"] = diag;
    t.notes.push_back("target displacement is the fitted squeezed-cat |alpha| of the target kitten");
    return out;
}

RunResult run_gaussdrive(const ExperimentConfig& cfg) {
    auto d0s = cfg.numbers("d0");
    auto r0ps = cfg.numbers("r0_photons");
    const double rmax = cfg.number("r_max");
    const int steps = positive(cfg, "r_steps", 2);
    for (double d : d0s) {
        if (!(d > 0 && std::isfinite(d))) throw ConfigError("d0 values must be finite and > 0");
    }
    for (double p : r0ps) {
        if (!(p >= 0 && std::isfinite(p))) throw ConfigError("r0_photons values must be finite and >= 0");
    }
    if (!(rmax >= 0 && std::isfinite(rmax))) throw ConfigError("r_max must be finite and >= 0");

    RunResult out{start_table(cfg, {"d0", "r0", "r", "fraction_exact", "fraction_strong_limit"})};
    auto& t = out.table;
    for (double d0 : d0s) {
        for (double p : r0ps) {
            const double r0 = std::asinh(std::sqrt(p));
            SqueezeFraction last{};
            for (int i = 0; i < steps; ++i) {
                const double r = rmax * i / (steps - 1);
                last = squeeze_fraction_strong(d0, r0, r);
                t.add_row({d0, r0, r, last.fraction_exact, last.fraction_strong});
            }
            const std::string tag = "(d0=" + format_double(d0) + ",r0_photons=" + format_double(p) + ")";
            t.summary["fraction_strong_limit" + tag] = last.fraction_strong;
            t.summary["relative_gap_at_r_max" + tag] =
                std::abs(last.fraction_exact - last.fraction_strong) / last.fraction_strong;
        }
    }
    return out;
}

namespace {

struct Enumerator {
    std::mt19937_64 engine;
    // 53-bit uniform in [0, 1); the standard distributions are not portable.
    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * n)); }
};

std::vector<Element> enumerate_circuit(std::uint64_t seed, std::size_t id, std::size_t modes, double r_max,
                                       double alpha_max) {
    std::vector<Element> c;
    if (id == 0) return c;
    Enumerator e{std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL + id)};
    for (std::size_t m = 0; m < modes; ++m) {
        if (e.uniform() < 0.7) c.push_back(SqueezeOp{m, Squeeze{r_max * e.uniform(), 2 * kPi * e.uniform()}});
        if (e.uniform() < 0.8) c.push_back(DisplaceOp{m, std::polar(alpha_max * e.uniform(), 2 * kPi * e.uniform())});
    }
    const std::size_t passive = e.below(5);
    for (std::size_t i = 0; i < passive; ++i) {
        if (modes >= 2 && e.uniform() < 0.6) {
            std::size_t a = e.below(modes), b = e.below(modes - 1);
            if (b >= a) ++b;
            c.push_back(BeamsplitOp{a, b, kPi * e.uniform()});
        } else {
            c.push_back(PhaseOp{e.below(modes), 2 * kPi * e.uniform()});
        }
    }
    return c;
}

}  // namespace

RunResult run_oracle_check(const ExperimentConfig& cfg) {
    const double seed_d = cfg.number("seed");
    if (!(seed_d >= 0 && seed_d == std::floor(seed_d) && seed_d < 9.0e15)) {
        throw ConfigError("seed must be a non-negative integer");
    }
    const auto seed = static_cast<std::uint64_t>(seed_d);
    const int count = positive(cfg, "circuits");
    const int cutoff = positive(cfg, "cutoff", 2);
    const int max_modes = positive(cfg, "max_modes");
    if (max_modes > 4) throw ConfigError("max_modes must be <= 4");
    const double r_max = cfg.number("r_max"), alpha_max = cfg.number("alpha_max");
    if (!(r_max >= 0 && alpha_max >= 0)) throw ConfigError("r_max and alpha_max must be >= 0");
    const int ceq = positive(cfg, "c_equal_max", 0);
    if (2 * ceq > 24) throw ConfigError("c_equal_max must be <= 12 (brute-force guard)");
    const double tol_n = cfg.number("tol_photons"), tol_q = cfg.number("tol_quadrature"),
                 tol_c = cfg.number("tol_c_equal");

    struct Row {
        std::size_t modes;
        std::string text;
        double err_n, err_q, leakage;
    };
    auto rows = parallel_map<Row>(static_cast<std::size_t>(count), cfg.integer("threads"), [&](std::size_t id) {
        Enumerator pick{std::mt19937_64(seed ^ (0xD1B54A32D192ED03ULL * (id + 1)))};
        const std::size_t modes = id == 0 ? 1 : 1 + pick.below(static_cast<std::size_t>(max_modes));
        auto circuit = enumerate_circuit(seed, id, modes, r_max, alpha_max);
        auto state = run_circuit(FockState::vacuum(ModeLayout::uniform(modes, cutoff)), circuit);
        auto g = GaussianMoments::vacuum(modes);
        std::string text;
        for (const auto& el : circuit) {
            g = gaussian_propagate(g, el);
            text += (text.empty() ? "" : "; ") + format_element(el);
        }
        double en = 0, eq = 0;
        for (std::size_t m = 0; m < modes; ++m) {
            en = std::max(en, std::abs(mean_photon_number(state, Mode{m}) - mean_photons_from_moments(g, m)));
            auto q = mean_quadrature(state, Mode{m});
            eq = std::max({eq, std::abs(q.x - g.mean(static_cast<Eigen::Index>(2 * m))),
                           std::abs(q.p - g.mean(static_cast<Eigen::Index>(2 * m + 1)))});
        }
        return Row{modes, text, en, eq, state.leakage()};
    });

    RunResult out{start_table(cfg, {"circuit_id", "modes", "max_meanphoton_error", "max_quadrature_error", "leakage",
                                    "circuit"})};
    auto& t = out.table;
    t.cutoffs = {cutoff};
    double worst_n = 0, worst_q = 0;
    int breaches = 0;
    for (std::size_t id = 0; id < rows.size(); ++id) {
        const auto& r = rows[id];
        t.max_leakage = std::max(t.max_leakage, r.leakage);
        worst_n = std::max(worst_n, r.err_n);
        worst_q = std::max(worst_q, r.err_q);
        if (!(r.err_n <= tol_n) || !(r.err_q <= tol_q)) ++breaches;
        t.add_row({static_cast<std::int64_t>(id), static_cast<std::int64_t>(r.modes), r.err_n, r.err_q, r.leakage,
                   r.text});
    }
    double worst_c = 0;
    int odd_nonzero = 0;
    for (int a = 0; a <= ceq; ++a) {
        for (int b = 0; b <= ceq; ++b) {
            auto closed = c_equal(a, b);
            worst_c = std::max(worst_c, std::abs(closed - c_equal_bruteforce(a, b)));
            if (a % 2 == 1 && b % 2 == 1 && closed != Amplitude{}) ++odd_nonzero;
        }
    }
    if (!(worst_c <= tol_c)) ++breaches;
    breaches += odd_nonzero;
    t.summary["max_meanphoton_error"] = worst_n;
    t.summary["max_quadrature_error"] = worst_q;
    t.summary["c_equal_max_deviation"] = worst_c;
    t.summary["c_equal_odd_odd_nonzero"] = odd_nonzero;
    t.summary["breaches"] = breaches;
    out.exit_code = breaches > 0 ? 3 : 0;
    return out;
}

RunResult run(const ExperimentConfig& cfg) {
    switch (cfg.experiment()) {
        case Experiment::Interference: return run_interference(cfg);
        case Experiment::Kitten: return run_kitten(cfg);
        case Experiment::Catfit: return run_catfit(cfg);
        case Experiment::Numberdiff: return run_numberdiff(cfg);
        case Experiment::Match: return run_match(cfg);
        case Experiment::Gaussdrive: return run_gaussdrive(cfg);
        case Experiment::OracleCheck: return run_oracle_check(cfg);
    }
    throw ConfigError("unknown experiment");
}

}  // namespace dipne::exp
