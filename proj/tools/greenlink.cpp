// Command-line front end: parameter sweeps, approximation surfaces, the
// per-user QoS optimizer table, and the self-validation report.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "greenlink/greenlink.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 42;
    double n_ebits = 0.0;  // 0 keeps the configured packet size
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "Scenario config file (key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_path, "Output file (default: stdout)");
    cmd->add_option("--seed", o.seed, "Seed recorded in metadata and used by stochastic checks");
    cmd->add_option("--n-ebits", o.n_ebits, "Override payload size in effective bits")
        ->check(CLI::PositiveNumber);
}

std::optional<std::string> battery_profile_from_env() {
    if (const char* env = std::getenv("GREENLINK_BATTERY_PROFILE"); env && *env)
        return std::string(env);
    return std::nullopt;
}

greenlink::Scenario load_scenario(const CommonOptions& o) {
    const auto profile = battery_profile_from_env();
    greenlink::Scenario sc;
    if (o.config_path.empty()) {
        sc = greenlink::default_scenario();
        if (profile) {
            sc.battery = greenlink::battery_profile(*profile);
            sc.battery_profile_label = *profile;
        }
    } else {
        std::ifstream in(o.config_path);
        if (!in) throw std::runtime_error("cannot open config file: " + o.config_path);
        sc = greenlink::parse_scenario(in, profile);
    }
    if (o.n_ebits > 0.0) sc.packet.effective_bits = o.n_ebits;
    sc.validate();
    return sc;
}

int write_output(const std::string& text, const CommonOptions& o) {
    if (o.out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(o.out_path);
    if (!out) {
        std::cerr << "error: cannot write " << o.out_path << "\n";
        return 2;
    }
    out << text;
    return 0;
}

void filter_scheme_rows(greenlink::CsvTable& t, const std::string& scheme) {
    if (scheme == "all") return;
    std::vector<std::vector<std::string>> kept;
    for (auto& row : t.rows)
        if (row.size() > 1 && row[1] == scheme) kept.push_back(std::move(row));
    t.rows = std::move(kept);
}

std::vector<std::pair<double, double>> parse_target_pairs(const std::string& text) {
    std::vector<std::pair<double, double>> pairs;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        if (semi == std::string::npos) semi = text.size();
        const std::string item = text.substr(start, semi - start);
        const std::size_t comma = item.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("target pair needs the form pout1,pout2: " + item);
        pairs.emplace_back(std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1)));
        start = semi + 1;
    }
    if (pairs.empty()) throw std::invalid_argument("no target pairs given");
    return pairs;
}

/// Geometry and per-user rates of the asymmetric-QoS study, used when the
/// `nonuniform` subcommand runs without an explicit config.
greenlink::Scenario nonuniform_default_scenario() {
    greenlink::Scenario sc = greenlink::default_scenario();
    sc.packet.effective_bits = 1000.0;
    sc.topology.d_1b_m = 8400.0;
    sc.topology.d_2b_m = 8500.0;
    sc.topology.d_12_m = 150.0;
    sc.topology.d_21_m = 150.0;
    sc.qos.rate_1_bps = 2.5e7;
    sc.qos.rate_2_bps = 1.5e7;
    sc.qos.exchange_outage_12 = 1e-3;
    sc.qos.exchange_outage_21 = 1e-3;
    if (const auto profile = battery_profile_from_env()) {
        sc.battery = greenlink::battery_profile(*profile);
        sc.battery_profile_label = *profile;
    }
    return sc;
}

const std::vector<std::string>& scheme_choices() {
    static const std::vector<std::string> names{"all", "no-cooperation", "inter-network",
                                                "intra-network"};
    return names;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "greenlink: outage, transmit-power, and battery-energy analysis of a two-user "
        "cellular uplink with optional device-to-device cooperation"};
    app.set_version_flag("--version", greenlink::version_string);
    app.require_subcommand(1);

    CommonOptions bs_opts;
    greenlink::SweepSpec bs_spec{100.0, 5000.0, 50};
    std::string bs_scheme = "all";
    auto* bs = app.add_subcommand(
        "sweep-bs-distance", "Scheme energy totals vs base-station distance (both users equal)");
    add_common(bs, bs_opts);
    bs->add_option("--start", bs_spec.start, "First distance in meters")
        ->check(CLI::PositiveNumber);
    bs->add_option("--stop", bs_spec.stop, "Last distance in meters")->check(CLI::PositiveNumber);
    bs->add_option("--steps", bs_spec.steps, "Number of log-spaced points");
    bs->add_option("--scheme", bs_scheme, "Restrict output to one scheme")
        ->check(CLI::IsMember(scheme_choices()));

    CommonOptions iu_opts;
    greenlink::SweepSpec iu_spec{1.0, 2000.0, 50};
    std::string iu_scheme = "all";
    auto* iu = app.add_subcommand("sweep-interuser",
                                  "Scheme energy totals vs exchange-link distance");
    add_common(iu, iu_opts);
    iu->add_option("--start", iu_spec.start, "First distance in meters")
        ->check(CLI::PositiveNumber);
    iu->add_option("--stop", iu_spec.stop, "Last distance in meters")->check(CLI::PositiveNumber);
    iu->add_option("--steps", iu_spec.steps, "Number of log-spaced points");
    iu->add_option("--scheme", iu_scheme, "Restrict output to one scheme")
        ->check(CLI::IsMember(scheme_choices()));

    CommonOptions rd_opts;
    greenlink::SweepSpec rd_spec{10.0, 5000.0, 50};
    std::string rd_scheme = "all";
    auto* rd = app.add_subcommand(
        "sweep-random",
        "Expected energy totals with distances uniform on (0, bound); inter-user bound swept");
    add_common(rd, rd_opts);
    rd->add_option("--start", rd_spec.start, "First inter-user bound in meters")
        ->check(CLI::PositiveNumber);
    rd->add_option("--stop", rd_spec.stop, "Last inter-user bound in meters")
        ->check(CLI::PositiveNumber);
    rd->add_option("--steps", rd_spec.steps, "Number of log-spaced points");
    rd->add_option("--scheme", rd_scheme, "Restrict output to one scheme")
        ->check(CLI::IsMember(scheme_choices()));

    CommonOptions surf_opts;
    double surf_lo_dbm = 0.0, surf_hi_dbm = 30.0, surf_step_db = 1.0, surf_delta = 0.005;
    auto* surf = app.add_subcommand("approx-surface",
                                    "Exact vs series-approximate outage over a power grid");
    add_common(surf, surf_opts);
    surf->add_option("--min-dbm", surf_lo_dbm, "Lowest transmit power in dBm");
    surf->add_option("--max-dbm", surf_hi_dbm, "Highest transmit power in dBm");
    surf->add_option("--step-db", surf_step_db, "Grid step in dB")->check(CLI::PositiveNumber);
    surf->add_option("--delta", surf_delta, "Series accuracy parameter")
        ->check(CLI::PositiveNumber);

    CommonOptions nu_opts;
    std::string nu_targets = "1e-3,1e-3;5e-4,5e-4;1e-4,1e-4";
    std::size_t nu_grid = 2000;
    double nu_delta = 0.005;
    bool nu_variant = false;
    auto* nu = app.add_subcommand("nonuniform",
                                  "Minimal-power allocation under per-user outage targets");
    add_common(nu, nu_opts);
    nu->add_option("--targets", nu_targets,
                   "Semicolon-separated pout1,pout2 pairs, e.g. '1e-3,1e-3;5e-4,1e-3'");
    nu->add_option("--grid", nu_grid, "Exhaustive-search grid resolution");
    nu->add_option("--delta", nu_delta, "Series accuracy parameter")->check(CLI::PositiveNumber);
    nu->add_flag("--user2-rate-variant", nu_variant,
                 "Price user 2's power against its own rate threshold");

    CommonOptions val_opts;
    std::uint64_t val_trials = 200000;
    unsigned val_parallelism = 0;
    auto* val = app.add_subcommand("validate",
                                   "Self-check: simulation vs closed forms, inversion round "
                                   "trips, special-function identities");
    add_common(val, val_opts);
    val->add_option("--trials", val_trials, "Simulation trials per grid point");
    val->add_option("--parallelism", val_parallelism,
                    "Worker threads for simulation (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bs->parsed()) {
            greenlink::CsvTable t =
                greenlink::sweep_distance_to_bs(load_scenario(bs_opts), bs_spec, bs_opts.seed);
            filter_scheme_rows(t, bs_scheme);
            return write_output(t.to_string(), bs_opts);
        }
        if (iu->parsed()) {
            greenlink::CsvTable t = greenlink::sweep_inter_user_distance(load_scenario(iu_opts),
                                                                         iu_spec, iu_opts.seed);
            filter_scheme_rows(t, iu_scheme);
            return write_output(t.to_string(), iu_opts);
        }
        if (rd->parsed()) {
            greenlink::CsvTable t =
                greenlink::sweep_random_distance(load_scenario(rd_opts), rd_spec, rd_opts.seed);
            filter_scheme_rows(t, rd_scheme);
            return write_output(t.to_string(), rd_opts);
        }
        if (surf->parsed()) {
            greenlink::CsvTable t =
                greenlink::surface_exact_vs_approx(load_scenario(surf_opts), surf_lo_dbm,
                                                   surf_hi_dbm, surf_step_db, surf_delta,
                                                   surf_opts.seed);
            return write_output(t.to_string(), surf_opts);
        }
        if (nu->parsed()) {
            greenlink::Scenario sc;
            if (nu_opts.config_path.empty()) {
                sc = nonuniform_default_scenario();
                if (nu_opts.n_ebits > 0.0) sc.packet.effective_bits = nu_opts.n_ebits;
                sc.validate();
            } else {
                sc = load_scenario(nu_opts);
            }
            greenlink::CsvTable t = greenlink::run_nonuniform_table(
                sc, parse_target_pairs(nu_targets), nu_delta, nu_grid, nu_variant, nu_opts.seed);
            return write_output(t.to_string(), nu_opts);
        }
        if (val->parsed()) {
            const greenlink::ValidationReport report = greenlink::validate(
                load_scenario(val_opts), val_opts.seed, val_trials, val_parallelism);
            const int write_rc = write_output(report.text, val_opts);
            if (write_rc != 0) return write_rc;
            return report.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
