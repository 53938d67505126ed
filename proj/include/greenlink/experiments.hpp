#pragma once

#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "greenlink/monte_carlo.hpp"
#include "greenlink/nonuniform.hpp"

namespace greenlink {

inline constexpr const char* version_string = "1.0.0";

// ---------------------------------------------------------------------------
// CSV tables with a '#'-prefixed metadata header. Cells are kept as text so
// a written table re-reads byte-identically.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

}  // namespace detail

struct CsvTable {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(std::string key, std::string value) {
        meta.emplace_back(std::move(key), std::move(value));
    }

    void add_row(std::vector<std::string> cells) {
        detail::require(cells.size() == columns.size(), "row width must match column count");
        rows.push_back(std::move(cells));
    }

    void write(std::ostream& out) const {
        for (const auto& [key, value] : meta) out << "# " << key << ": " << value << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }

    std::string to_string() const {
        std::ostringstream out;
        write(out);
        return out.str();
    }

    static CsvTable read(std::istream& in) {
        CsvTable t;
        std::string line;
        bool have_header = false;
        auto split = [](const std::string& s) {
            std::vector<std::string> cells;
            std::size_t start = 0;
            while (true) {
                const std::size_t comma = s.find(',', start);
                if (comma == std::string::npos) {
                    cells.push_back(s.substr(start));
                    return cells;
                }
                cells.push_back(s.substr(start, comma - start));
                start = comma + 1;
            }
        };
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (line.front() == '#') {
                const std::size_t sep = line.find(": ");
                if (sep == std::string::npos)
                    throw std::invalid_argument("malformed metadata line: " + line);
                std::size_t key_start = 1;
                while (key_start < sep && line[key_start] == ' ') ++key_start;
                t.add_meta(line.substr(key_start, sep - key_start), line.substr(sep + 2));
                continue;
            }
            if (!have_header) {
                t.columns = split(line);
                have_header = true;
                continue;
            }
            auto cells = split(line);
            if (cells.size() != t.columns.size())
                throw std::invalid_argument("row width mismatch in CSV row: " + line);
            t.rows.push_back(std::move(cells));
        }
        if (!have_header) throw std::invalid_argument("CSV input has no header row");
        return t;
    }

    static CsvTable read_text(const std::string& text) {
        std::istringstream in(text);
        return read(in);
    }
};

namespace detail {

inline void standard_meta(CsvTable& t, const Scenario& sc, std::uint64_t seed) {
    t.add_meta("tool", std::string("greenlink ") + version_string);
    t.add_meta("config_hash", config_hash_hex(sc));
    t.add_meta("battery_profile", sc.battery_profile_label);
    t.add_meta("seed", std::to_string(seed));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sweep plumbing.
// ---------------------------------------------------------------------------

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 50;

    void validate_distance() const {
        detail::require(steps >= 2, "sweep needs at least 2 steps");
        detail::require_positive(start, "sweep start");
        detail::require(start < stop, "sweep start must be below stop");
    }
};

inline std::vector<double> log_grid(double start, double stop, std::size_t steps) {
    detail::require_positive(start, "grid start");
    detail::require(start < stop, "grid start must be below stop");
    detail::require(steps >= 2, "grid needs at least 2 points");
    std::vector<double> g(steps);
    const double ratio = std::log(stop / start);
    for (std::size_t i = 0; i < steps; ++i)
        g[i] = start * std::exp(ratio * static_cast<double>(i) / static_cast<double>(steps - 1));
    g.front() = start;
    g.back() = stop;
    return g;
}

inline const std::array<Scheme, 3>& all_schemes() {
    static const std::array<Scheme, 3> s{Scheme::no_cooperation, Scheme::inter_network,
                                         Scheme::intra_network};
    return s;
}

namespace detail {

inline std::vector<std::string> sweep_columns(const std::string& variable) {
    return {variable,
            "scheme",
            "p1_exchange_w",
            "p2_exchange_w",
            "p1_cellular_w",
            "p2_cellular_w",
            "e1_exchange_j",
            "e2_exchange_j",
            "e1_cellular_j",
            "e2_cellular_j",
            "cellular_multiplier",
            "total_j",
            "status"};
}

inline void append_sweep_row(CsvTable& t, double variable_value, Scheme scheme,
                             const Scenario& sc) {
    std::vector<std::string> row;
    row.push_back(csv_number(variable_value));
    row.push_back(scheme_name(scheme));
    try {
        const EnergyReport e = evaluate_scheme(sc, scheme);
        row.push_back(csv_number(e.allocation.p1_exchange_w));
        row.push_back(csv_number(e.allocation.p2_exchange_w));
        row.push_back(csv_number(e.allocation.p1_cellular_w));
        row.push_back(csv_number(e.allocation.p2_cellular_w));
        row.push_back(csv_number(e.e1_exchange_j));
        row.push_back(csv_number(e.e2_exchange_j));
        row.push_back(csv_number(e.e1_cellular_j));
        row.push_back(csv_number(e.e2_cellular_j));
        row.push_back(csv_number(e.cellular_multiplier));
        row.push_back(csv_number(e.total_j));
        row.push_back("ok");
    } catch (const std::exception&) {
        for (int i = 0; i < 10; ++i) row.push_back("nan");
        row.push_back("infeasible");
    }
    t.add_row(std::move(row));
}

}  // namespace detail

/// Both users at the same base-station distance, swept log-spaced.
inline CsvTable sweep_distance_to_bs(const Scenario& base, const SweepSpec& spec,
                                     std::uint64_t seed = 0) {
    spec.validate_distance();
    CsvTable t;
    detail::standard_meta(t, base, seed);
    t.add_meta("sweep", "distance_to_bs");
    t.columns = detail::sweep_columns("distance_m");
    for (const double d : log_grid(spec.start, spec.stop, spec.steps)) {
        Scenario sc = base;
        sc.topology.d_1b_m = d;
        sc.topology.d_2b_m = d;
        for (const Scheme scheme : all_schemes()) detail::append_sweep_row(t, d, scheme, sc);
    }
    return t;
}

/// Exchange-link distance swept, both directions equal; uplink distances fixed.
inline CsvTable sweep_inter_user_distance(const Scenario& base, const SweepSpec& spec,
                                          std::uint64_t seed = 0) {
    spec.validate_distance();
    CsvTable t;
    detail::standard_meta(t, base, seed);
    t.add_meta("sweep", "inter_user_distance");
    t.columns = detail::sweep_columns("inter_user_distance_m");
    for (const double d : log_grid(spec.start, spec.stop, spec.steps)) {
        Scenario sc = base;
        sc.topology.d_12_m = d;
        sc.topology.d_21_m = d;
        for (const Scheme scheme : all_schemes()) detail::append_sweep_row(t, d, scheme, sc);
    }
    return t;
}

/// Distances drawn uniformly on (0, bound): since solved powers scale with
/// d^2, the expectation over each link is the power at d = bound/sqrt(3)
/// (E[d^2] = bound^2/3). The inter-user bound is swept; the two uplink bounds
/// are taken from the scenario's configured distances.
inline CsvTable sweep_random_distance(const Scenario& base, const SweepSpec& spec,
                                      std::uint64_t seed = 0) {
    spec.validate_distance();
    CsvTable t;
    detail::standard_meta(t, base, seed);
    t.add_meta("sweep", "random_distance_bound");
    t.columns = detail::sweep_columns("inter_user_bound_m");
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    for (const double bound : log_grid(spec.start, spec.stop, spec.steps)) {
        Scenario sc = base;
        sc.topology.d_1b_m = base.topology.d_1b_m * inv_sqrt3;
        sc.topology.d_2b_m = base.topology.d_2b_m * inv_sqrt3;
        sc.topology.d_12_m = bound * inv_sqrt3;
        sc.topology.d_21_m = bound * inv_sqrt3;
        for (const Scheme scheme : all_schemes()) detail::append_sweep_row(t, bound, scheme, sc);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Exact vs series-approximate outage over a transmit-power grid.
// ---------------------------------------------------------------------------

inline CsvTable surface_exact_vs_approx(const Scenario& base, double p_lo_dbm, double p_hi_dbm,
                                        double step_db = 1.0, double delta = 0.005,
                                        std::uint64_t seed = 0) {
    detail::require(p_lo_dbm < p_hi_dbm, "power range must be increasing");
    detail::require_positive(step_db, "step_db");
    const NonUniformProblem prob = build_problem(base, base.qos, delta);
    CsvTable t;
    detail::standard_meta(t, base, seed);
    t.add_meta("sweep", "exact_vs_approx_surface");
    t.columns = {"p1_dbm",     "p2_dbm",     "z1",          "z2",
                 "exact_u1",   "approx_u1",  "rel_gap_u1",  "exact_u2",
                 "approx_u2",  "rel_gap_u2", "in_domain",   "clamped"};
    const double a = prob.alpha;
    for (double p1_dbm = p_lo_dbm; p1_dbm <= p_hi_dbm + 1e-9; p1_dbm += step_db) {
        for (double p2_dbm = p_lo_dbm; p2_dbm <= p_hi_dbm + 1e-9; p2_dbm += step_db) {
            const double p1 = dbm_to_watt(p1_dbm);
            const double p2 = dbm_to_watt(p2_dbm);
            const double z1 = p1 * prob.mean_per_watt_1 / prob.threshold1;
            const double z2 = p2 * prob.mean_per_watt_2 / prob.threshold1;
            const double exact1 = exact_outage_at(prob, z1, z2, 1);
            const double exact2 = exact_outage_at(prob, z1, z2, 2);
            const ApproxOutage b1 = approx_outage_both_decoded(z1, z2, prob.beta, 1, delta);
            const ApproxOutage b2 = approx_outage_both_decoded(z1, z2, prob.beta, 2, delta);
            const ApproxOutage f1 = approx_outage_fallback(z1, delta);
            const ApproxOutage f2 = approx_outage_fallback(z2, delta);
            double approx1 = a * b1.value + (1.0 - a) * f1.value;
            double approx2 = a * b2.value + (1.0 - a) * f2.value;
            const bool in_domain =
                b1.in_domain && b2.in_domain && f1.in_domain && f2.in_domain;
            bool clamped = false;
            if (approx1 > 1.0) {
                approx1 = 1.0;
                clamped = true;
            }
            if (approx2 > 1.0) {
                approx2 = 1.0;
                clamped = true;
            }
            t.add_row({detail::csv_number(p1_dbm), detail::csv_number(p2_dbm),
                       detail::csv_number(z1), detail::csv_number(z2),
                       detail::csv_number(exact1), detail::csv_number(approx1),
                       detail::csv_number(std::abs(approx1 - exact1) / exact1),
                       detail::csv_number(exact2), detail::csv_number(approx2),
                       detail::csv_number(std::abs(approx2 - exact2) / exact2),
                       in_domain ? "1" : "0", clamped ? "1" : "0"});
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Per-user QoS optimization table over a list of outage-target pairs.
// ---------------------------------------------------------------------------

inline CsvTable run_nonuniform_table(const Scenario& base,
                                     const std::vector<std::pair<double, double>>& target_pairs,
                                     double delta = 0.005, std::size_t grid_resolution = 2000,
                                     bool user2_rate_variant = false, std::uint64_t seed = 0) {
    detail::require(!target_pairs.empty(), "at least one target pair required");
    CsvTable t;
    detail::standard_meta(t, base, seed);
    t.add_meta("sweep", "nonuniform_targets");
    t.columns = {"pout1",          "pout2",          "z1",
                 "z2",             "mu1",            "mu2",
                 "active_set",     "objective",      "z1_search",
                 "z2_search",      "objective_search", "p1_cellular_w",
                 "p2_cellular_w",  "p1_exchange_w",  "p2_exchange_w",
                 "exact_outage_1", "exact_outage_2", "correction_scale",
                 "energy_cooperative_j", "energy_no_cooperation_j", "status"};
    for (const auto& [pout1, pout2] : target_pairs) {
        std::vector<std::string> row{detail::csv_number(pout1), detail::csv_number(pout2)};
        try {
            Scenario sc = base;
            sc.qos.target_outage_1 = pout1;
            sc.qos.target_outage_2 = pout2;
            const NonUniformReport r =
                solve_nonuniform(sc, sc.qos, delta, grid_resolution, user2_rate_variant);

            PowerAllocation alloc;
            solve_exchange_powers(sc, Scheme::inter_network, alloc);
            alloc.p1_cellular_w = r.p1_cellular_w;
            alloc.p2_cellular_w = r.p2_cellular_w;
            const EnergyReport coop = scheme_total_energy(Scheme::inter_network, alloc,
                                                          sc.battery, r.problem.alpha);
            const EnergyReport base_line = scheme_total_energy(
                Scheme::no_cooperation, solve_no_cooperation(sc), sc.battery, 0.0);

            std::string active = "none";
            if (r.heuristic_found) {
                if (r.heuristic.active1 && r.heuristic.active2)
                    active = "c1+c2";
                else if (r.heuristic.active1)
                    active = "c1";
                else if (r.heuristic.active2)
                    active = "c2";
            }
            row.push_back(detail::csv_number(r.z1));
            row.push_back(detail::csv_number(r.z2));
            row.push_back(detail::csv_number(r.heuristic_found ? r.heuristic.mu1 : 0.0));
            row.push_back(detail::csv_number(r.heuristic_found ? r.heuristic.mu2 : 0.0));
            row.push_back(active);
            row.push_back(detail::csv_number(r.objective));
            row.push_back(detail::csv_number(r.exhaustive.z1));
            row.push_back(detail::csv_number(r.exhaustive.z2));
            row.push_back(detail::csv_number(r.exhaustive.objective));
            row.push_back(detail::csv_number(r.p1_cellular_w));
            row.push_back(detail::csv_number(r.p2_cellular_w));
            row.push_back(detail::csv_number(alloc.p1_exchange_w));
            row.push_back(detail::csv_number(alloc.p2_exchange_w));
            row.push_back(detail::csv_number(r.exact_outage_1));
            row.push_back(detail::csv_number(r.exact_outage_2));
            row.push_back(detail::csv_number(r.correction_scale));
            row.push_back(detail::csv_number(coop.total_j));
            row.push_back(detail::csv_number(base_line.total_j));
            row.push_back(r.heuristic_found ? "ok" : "search-fallback");
        } catch (const std::exception&) {
            while (row.size() + 1 < t.columns.size()) row.push_back("nan");
            row.push_back("infeasible");
        }
        t.add_row(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Self-check report: closed forms vs the stochastic oracle, inversion round
// trips, Lambert identities, optimizer cross-checks. Output is strictly
// deterministic for a given (config, seed, trials) so reruns can be diffed.
// ---------------------------------------------------------------------------

struct ValidationReport {
    std::string text;
    bool passed = true;
};

namespace detail {

inline double log_uniform(double lo, double hi, std::uint64_t seed, std::uint64_t trial,
                          std::uint64_t draw) {
    return lo * std::exp(std::log(hi / lo) * uniform_open(seed, trial, draw));
}

}  // namespace detail

inline ValidationReport validate(const Scenario& base, std::uint64_t seed,
                                 std::uint64_t trials = 200000, unsigned parallelism = 0) {
    std::ostringstream out;
    bool all_ok = true;
    auto verdict = [&](bool ok) {
        all_ok = all_ok && ok;
        return ok ? "PASS" : "FAIL";
    };

    out << "greenlink validate\n";
    out << "version: " << version_string << "\n";
    out << "config_hash: " << config_hash_hex(base) << "\n";
    out << "battery_profile: " << base.battery_profile_label << "\n";
    out << "seed: " << seed << "\n";
    out << "trials: " << trials << "\n";

    // --- Closed form vs simulation over a 27-point grid, per scheme. -------
    {
        const double distances[] = {500.0, 1000.0, 2000.0};
        const double rates[] = {2e6, 5e6, 1e7};
        const double targets[] = {1e-2, 3e-3, 1e-3};
        for (const Scheme scheme : all_schemes()) {
            int agreed = 0, total = 0;
            for (const double d : distances)
                for (const double rate : rates)
                    for (const double target : targets) {
                        Scenario sc = base;
                        sc.topology.d_1b_m = d;
                        sc.topology.d_2b_m = d;
                        sc.qos = QosSpec::uniform(target, rate);
                        const PowerAllocation a = solve_allocation(sc, scheme);
                        const SimConfig cfg{seed + static_cast<std::uint64_t>(total), trials,
                                            parallelism};
                        const SimResult sim = estimate_outage(sc, scheme, a, cfg);
                        const double closed1 = outage_total(sc, scheme, a, 1);
                        const double closed2 = outage_total(sc, scheme, a, 2);
                        const bool ok1 =
                            std::abs(sim.user1.p_hat - closed1) <= 3.0 * sim.user1.std_error;
                        const bool ok2 =
                            std::abs(sim.user2.p_hat - closed2) <= 3.0 * sim.user2.std_error;
                        agreed += (ok1 && ok2) ? 1 : 0;
                        ++total;
                    }
            const bool ok = agreed * 20 >= total * 19;  // at least 95%
            out << "check mc-closed-form scheme=" << scheme_name(scheme) << " agreed=" << agreed
                << "/" << total << ": " << verdict(ok) << "\n";
        }
    }

    // --- Power inversion round trips on randomized uniform-QoS scenarios. ---
    {
        int failures = 0;
        for (std::uint64_t i = 0; i < 100; ++i) {
            Scenario sc = base;
            sc.topology.d_1b_m = detail::log_uniform(200.0, 5000.0, seed, i, 10);
            sc.topology.d_2b_m = detail::log_uniform(200.0, 5000.0, seed, i, 11);
            sc.topology.d_12_m = detail::log_uniform(5.0, 500.0, seed, i, 12);
            sc.topology.d_21_m = sc.topology.d_12_m;
            const double rate = detail::log_uniform(1e6, 2e7, seed, i, 13);
            const double target = detail::log_uniform(1e-4, 1e-2, seed, i, 14);
            sc.qos = QosSpec::uniform(target, rate);
            for (const Scheme scheme : all_schemes()) {
                const PowerAllocation a = solve_allocation(sc, scheme);
                for (int user = 1; user <= 2; ++user) {
                    const double got = outage_total(sc, scheme, a, user);
                    if (std::abs(got - target) > 1e-9 * target) ++failures;
                }
            }
        }
        out << "check power-round-trip failures=" << failures << "/600: " << verdict(failures == 0)
            << "\n";
    }

    // --- Lambert identities and the uniform-QoS threshold-ratio equation. ---
    {
        int failures = 0;
        const double inv_e = std::exp(-1.0);
        for (int i = 0; i < 2000; ++i) {
            const double u = (i + 0.5) / 2000.0;
            const double x_pos = std::exp(-18.0 + 36.0 * u);  // branch 0, positive side
            const double w0 = lambert_w(0, x_pos);
            if (std::abs(w0 * std::exp(w0) - x_pos) > 1e-12 * x_pos) ++failures;
            const double x_neg = -inv_e * u;  // both branches' shared range
            if (x_neg < 0.0) {
                const double wa = lambert_w(0, x_neg);
                const double wb = lambert_w(-1, x_neg);
                if (std::abs(wa * std::exp(wa) - x_neg) > 1e-12 * std::abs(x_neg)) ++failures;
                if (std::abs(wb * std::exp(wb) - x_neg) > 1e-12 * std::abs(x_neg)) ++failures;
            }
        }
        const bool branch_point_ok = std::abs(lambert_w(-1, -inv_e) + 1.0) <= 1e-8 &&
                                     std::abs(lambert_w(0, -inv_e) + 1.0) <= 1e-8;
        int ratio_failures = 0;
        for (const double target : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            const double tr = cooperative_threshold_ratio(target);
            const double s = 1.0 - target;
            const double residual = (1.0 + tr * s * s) * std::exp(-tr) - s;
            if (std::abs(residual) > 1e-12) ++ratio_failures;
        }
        out << "check lambert-identity failures=" << failures
            << " branch_point=" << (branch_point_ok ? "ok" : "bad")
            << " threshold_ratio_failures=" << ratio_failures << ": "
            << verdict(failures == 0 && branch_point_ok && ratio_failures == 0) << "\n";
    }

    // --- Optimizer cross-check and curvature diagnostic. --------------------
    {
        Scenario sc = base;
        sc.qos.rate_1_bps = 2.5e7;
        sc.qos.rate_2_bps = 1.5e7;
        sc.qos.target_outage_1 = 1e-3;
        sc.qos.target_outage_2 = 1e-3;
        sc.qos.exchange_outage_12 = 1e-3;
        sc.qos.exchange_outage_21 = 1e-3;
        const NonUniformProblem prob = build_problem(sc, sc.qos, 0.005);
        const auto candidates = enumerate_kkt_candidates(prob);
        const ExhaustiveResult search = exhaustive_search(prob, 2000);
        bool agree = false;
        if (!candidates.empty() && search.feasible) {
            const double rel = std::abs(candidates.front().objective - search.objective) /
                               std::abs(search.objective);
            agree = rel <= 1e-6;
        }
        const HessianDiagnostic diag = hessian_diagnostic(prob);
        const double beta2 = prob.beta * prob.beta;
        const bool minors_ok = diag.minor1_c1 == 0.0 && diag.minor1_c2 == 0.0 &&
                               diag.minor2_c1 == -4.0 * prob.pout1 * prob.pout1 &&
                               diag.minor2_c2 == -4.0 * prob.pout2 * prob.pout2 * beta2 * beta2;
        out << "check kkt-vs-search candidates=" << candidates.size()
            << " agree=" << (agree ? "yes" : "no") << ": " << verdict(agree) << "\n";
        out << "check hessian-diagnostic indefinite=" << (diag.indefinite ? "yes" : "no")
            << ": " << verdict(diag.indefinite && minors_ok) << "\n";
    }

    // --- Config round trip. --------------------------------------------------
    {
        const std::string first = serialize_scenario(base);
        const Scenario reparsed = parse_scenario_text(first);
        const bool ok = serialize_scenario(reparsed) == first;
        out << "check config-round-trip: " << verdict(ok) << "\n";
    }

    out << "RESULT: " << (all_ok ? "PASS" : "FAIL") << "\n";
    ValidationReport r;
    r.text = out.str();
    r.passed = all_ok;
    return r;
}

}  // namespace greenlink
