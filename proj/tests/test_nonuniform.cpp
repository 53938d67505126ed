#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "greenlink/nonuniform.hpp"

using namespace greenlink;
using Catch::Approx;

namespace {

// Long-range uplink with per-user rates: the standard workload for the
// per-user QoS optimizer in these tests.
Scenario asymmetric_scenario() {
    Scenario sc = default_scenario();
    sc.packet.effective_bits = 1000.0;
    sc.topology.d_1b_m = 8400.0;
    sc.topology.d_2b_m = 8500.0;
    sc.topology.d_12_m = 150.0;
    sc.topology.d_21_m = 150.0;
    sc.qos.rate_1_bps = 2.5e7;
    sc.qos.rate_2_bps = 1.5e7;
    sc.qos.exchange_outage_12 = 1e-3;
    sc.qos.exchange_outage_21 = 1e-3;
    sc.qos.target_outage_1 = 1e-3;
    sc.qos.target_outage_2 = 1e-3;
    return sc;
}

// Fully symmetric problem whose both-active point has a closed form:
// z1 = z2 = ((1-a) + sqrt((1-a)^2 + 2 p a)) / (2 p).
NonUniformProblem symmetric_problem() {
    NonUniformProblem p;
    p.rho1 = p.rho2 = 1.0;
    p.alpha = 0.999 * 0.999;
    p.beta = 1.0;
    p.pout1 = p.pout2 = 1e-3;
    p.delta = 0.005;
    p.threshold1 = p.threshold2 = 40.0;
    p.mean_per_watt_1 = p.mean_per_watt_2 = 40.0;
    return p;
}

}  // namespace

TEST_CASE("build_problem") {
    const Scenario sc = asymmetric_scenario();
    const NonUniformProblem p = build_problem(sc, sc.qos);

    CHECK(p.beta == Approx(p.threshold1 / p.threshold2).epsilon(1e-15));
    CHECK(p.beta == Approx(7.08449860459).epsilon(1e-9));
    CHECK(p.alpha == Approx(0.998001).epsilon(1e-12));
    CHECK(p.pout1 == 1e-3);
    CHECK(p.pout2 == 1e-3);

    // Coefficients recomputed from first principles: rho_i = t1 * N0 B / (sigma2 k_i).
    const double n0b = sc.noise.n0_w_per_hz * sc.cellular.bandwidth_hz;
    const double k1 =
        free_space_gain(sc.cellular, sc.topology.d_1b_m, sc.topology.g_u1, sc.topology.g_bs);
    CHECK(p.rho1 == Approx(p.threshold1 * n0b / (sc.topology.sigma2_1b * k1)).epsilon(1e-12));

    // Both z coordinates are normalized by user 1's threshold.
    CHECK(p.rho2 == Approx(p.threshold1 / p.mean_per_watt_2).epsilon(1e-15));

    // Nearly equal distances put the per-z prices close to each other.
    CHECK(p.rho2 / p.rho1 == Approx(std::pow(8500.0 / 8400.0, 2.0)).epsilon(1e-12));

    CHECK(p.z_floor() == Approx(10.0).epsilon(1e-12));              // 1/sqrt(2 * 0.005)
    CHECK(p.inverse_sum_bound() == Approx(0.1).epsilon(1e-12));     // beta > 1

    // Equal rates collapse beta to exactly 1.
    Scenario even = sc;
    even.qos.rate_2_bps = even.qos.rate_1_bps;
    CHECK(build_problem(even, even.qos).beta == 1.0);
}

TEST_CASE("constraints_and_domain") {
    const NonUniformProblem p = symmetric_problem();

    // Constraint values recomputed literally.
    const double z1 = 30.0, z2 = 40.0;
    CHECK(constraint1(p, z1, z2) ==
          Approx(2.0 * 1e-3 * z1 * z2 - 2.0 * (1.0 - p.alpha) * z2 - p.alpha).epsilon(1e-15));
    CHECK(constraint2(p, z1, z2) ==
          Approx(2.0 * 1e-3 * z1 * z2 - 2.0 * (1.0 - p.alpha) * z1 - p.alpha).epsilon(1e-15));
    CHECK(objective_value(p, z1, z2) == Approx(-(z1 + z2)).epsilon(1e-15));

    CHECK(domain_ok(p, 30.0, 40.0));
    CHECK_FALSE(domain_ok(p, 9.0, 40.0));    // below the per-coordinate floor
    CHECK_FALSE(domain_ok(p, 11.0, 11.0));   // inverse sum 0.18 > 0.1
    CHECK_FALSE(domain_ok(p, -5.0, 40.0));
}

TEST_CASE("kkt_symmetric_closed_form") {
    const NonUniformProblem p = symmetric_problem();
    const double oma = 1.0 - p.alpha;
    const double z_expected =
        (oma + std::sqrt(oma * oma + 2.0 * p.pout1 * p.alpha)) / (2.0 * p.pout1);
    CHECK(z_expected == Approx(23.3601686002).epsilon(1e-9));

    const auto candidates = enumerate_kkt_candidates(p);
    REQUIRE_FALSE(candidates.empty());
    const KktCandidate& best = candidates.front();
    CHECK(best.z1 == Approx(z_expected).epsilon(1e-9));
    CHECK(best.z2 == Approx(z_expected).epsilon(1e-9));
    CHECK(best.z1 == Approx(best.z2).epsilon(1e-9));
    CHECK(best.active1);
    CHECK(best.active2);
    CHECK(best.mu1 > 0.0);
    CHECK(best.mu2 > 0.0);
    CHECK(best.mu1 == Approx(best.mu2).epsilon(1e-9));
    CHECK(best.is_local_max);
    CHECK(best.feasible);

    // Multipliers satisfy stationarity: mu1 d1 + mu2 d2 = rho, per coordinate.
    const auto d1 = detail::constraint1_grad(p, best.z1, best.z2);
    const auto d2 = detail::constraint2_grad(p, best.z1, best.z2);
    CHECK(best.mu1 * d1[0] + best.mu2 * d2[0] == Approx(p.rho1).epsilon(1e-9));
    CHECK(best.mu1 * d1[1] + best.mu2 * d2[1] == Approx(p.rho2).epsilon(1e-9));

    // Exhaustive search lands on the same point.
    const ExhaustiveResult search = exhaustive_search(p, 2000);
    REQUIRE(search.feasible);
    CHECK(std::abs(search.objective - best.objective) <= 1e-6 * std::abs(best.objective));
}

TEST_CASE("kkt_asymmetric_anchor") {
    const Scenario sc = asymmetric_scenario();
    const NonUniformProblem p = build_problem(sc, sc.qos);
    const auto candidates = enumerate_kkt_candidates(p);
    REQUIRE_FALSE(candidates.empty());

    const KktCandidate& best = candidates.front();
    CHECK(best.z1 == Approx(24.6032514654).epsilon(1e-8));
    CHECK(best.z2 == Approx(22.0755153412).epsilon(1e-8));
    CHECK(best.objective == Approx(-30.0704505254).epsilon(1e-9));
    CHECK(best.active1);
    CHECK_FALSE(best.active2);
    CHECK(best.mu1 == Approx(14.4273995658).epsilon(1e-6));
    CHECK(best.mu2 == 0.0);
    CHECK(best.is_local_max);

    // Complementary slackness and dual feasibility.
    for (const KktCandidate& c : candidates) {
        CHECK(c.mu1 >= 0.0);
        CHECK(c.mu2 >= 0.0);
        const double scale1 = std::max(1.0, std::abs(c.mu1));
        const double scale2 = std::max(1.0, std::abs(c.mu2));
        CHECK(std::abs(c.mu1 * constraint1(p, c.z1, c.z2)) < 1e-7 * scale1);
        CHECK(std::abs(c.mu2 * constraint2(p, c.z1, c.z2)) < 1e-7 * scale2);
    }

    // Local-max classification vs a perturbation oracle along the active
    // constraint curve z2(z1) = a / (2 (p1 z1 - (1-a))).
    const auto on_curve = [&p](double z1) {
        return p.alpha / (2.0 * (p.pout1 * z1 - (1.0 - p.alpha)));
    };
    for (const double h : {1e-4, -1e-4}) {
        const double z1 = best.z1 * (1.0 + h);
        const double z2 = on_curve(z1);
        CHECK(objective_value(p, z1, z2) < best.objective + 1e-12);
    }
}

TEST_CASE("check_second_order_cases") {
    const NonUniformProblem p = symmetric_problem();

    // No active constraint: a linear objective has no interior maximum.
    KktCandidate interior;
    interior.z1 = interior.z2 = 30.0;
    CHECK_FALSE(check_second_order(interior, p));

    // Single active constraint with positive multiplier: strict maximum.
    KktCandidate single;
    single.z1 = single.z2 = 23.3601686002;
    single.active1 = true;
    single.mu1 = 1.0;
    CHECK(check_second_order(single, p));

    // Zero curvature (mu = 0) cannot certify a maximum.
    single.mu1 = 0.0;
    CHECK_FALSE(check_second_order(single, p));

    // Both active with a full-rank Jacobian: trivial tangent space.
    KktCandidate corner = single;
    corner.active2 = true;
    corner.mu1 = corner.mu2 = 1.0;
    CHECK(check_second_order(corner, p));
}

TEST_CASE("exhaustive_search_refinement") {
    const Scenario sc = asymmetric_scenario();
    const NonUniformProblem p = build_problem(sc, sc.qos);

    const ExhaustiveResult coarse = exhaustive_search(p, 2000);
    const ExhaustiveResult fine = exhaustive_search(p, 4000);
    REQUIRE(coarse.feasible);
    REQUIRE(fine.feasible);
    CHECK(std::abs(coarse.objective - fine.objective) <= 1e-6 * std::abs(fine.objective));
    CHECK(coarse.objective == Approx(-30.0704505254).epsilon(1e-8));

    // The minimizer is feasible for both constraints and the domain.
    CHECK(constraint1(p, coarse.z1, coarse.z2) >= -1e-9);
    CHECK(constraint2(p, coarse.z1, coarse.z2) >= -1e-9);
    CHECK(domain_ok(p, coarse.z1, coarse.z2));

    CHECK_THROWS_AS(exhaustive_search(p, 10), std::invalid_argument);
}

TEST_CASE("recover_powers") {
    const Scenario sc = asymmetric_scenario();
    const NonUniformProblem p = build_problem(sc, sc.qos);

    const auto [p1, p2] = recover_powers(24.0, 22.0, p);
    CHECK(p1 == Approx(p.rho1 * 24.0).epsilon(1e-15));
    CHECK(p2 == Approx(p.rho2 * 22.0).epsilon(1e-15));

    // Linear in z.
    const auto [q1, q2] = recover_powers(48.0, 44.0, p);
    CHECK(q1 == Approx(2.0 * p1).epsilon(1e-15));
    CHECK(q2 == Approx(2.0 * p2).epsilon(1e-15));

    // The variant prices user 2's branch against its own threshold.
    const auto [v1, v2] = recover_powers(24.0, 22.0, p, true);
    CHECK(v1 == p1);
    CHECK(v2 == Approx(p2 / p.beta).epsilon(1e-14));

    // Powers reproduce the z coordinates through the mean-SNR chain.
    CHECK(p1 * p.mean_per_watt_1 / p.threshold1 == Approx(24.0).epsilon(1e-12));
    CHECK(p2 * p.mean_per_watt_2 / p.threshold1 == Approx(22.0).epsilon(1e-12));
}

TEST_CASE("exact_outage_at") {
    const Scenario sc = asymmetric_scenario();
    const NonUniformProblem p = build_problem(sc, sc.qos);

    // Mixture recomputed from the outage primitives.
    const double z1 = 24.0, z2 = 22.0;
    const double m1 = z1 * p.threshold1, m2 = z2 * p.threshold1;
    const double expected1 =
        p.alpha * outage_sum_two_exponentials(m1, m2, SnrThreshold{p.threshold1}) +
        (1.0 - p.alpha) * outage_single_link(m1, SnrThreshold{p.threshold1});
    CHECK(exact_outage_at(p, z1, z2, 1) == Approx(expected1).epsilon(1e-14));

    // User 2's own threshold is beta times smaller, so it fares better.
    CHECK(exact_outage_at(p, z1, z2, 2) < exact_outage_at(p, z1, z2, 1));
}

TEST_CASE("solve_nonuniform_anchor") {
    const Scenario sc = asymmetric_scenario();
    const NonUniformReport r = solve_nonuniform(sc, sc.qos);

    CHECK(r.heuristic_found);
    CHECK(r.z1 == Approx(24.6032514654).epsilon(1e-8));
    CHECK(r.z2 == Approx(22.0755153412).epsilon(1e-8));
    CHECK(r.objective == Approx(-30.0704505254).epsilon(1e-9));
    CHECK(r.correction_scale == 1.0);
    CHECK(r.p1_cellular_w == Approx(15.6718913313).epsilon(1e-9));
    CHECK(r.p2_cellular_w == Approx(14.3985591941).epsilon(1e-9));

    // Heuristic and exhaustive verifier agree.
    CHECK(std::abs(r.objective - r.exhaustive.objective) <= 1e-6 * std::abs(r.objective));

    // The exact mixture meets both targets at the recovered powers.
    CHECK(r.exact_outage_1 == Approx(0.00097247028245).epsilon(1e-8));
    CHECK(r.exact_outage_1 <= 1e-3);
    CHECK(r.exact_outage_2 <= 1e-3);
}

TEST_CASE("solve_nonuniform_tightening") {
    const Scenario base = asymmetric_scenario();
    double previous_cost = 0.0;
    for (const double target : {1e-3, 5e-4, 1e-4}) {
        Scenario sc = base;
        sc.qos.target_outage_1 = target;
        sc.qos.target_outage_2 = target;
        const NonUniformReport r = solve_nonuniform(sc, sc.qos);
        const double cost = -r.objective;
        CHECK(cost > previous_cost);
        previous_cost = cost;
        CHECK(r.correction_scale >= 1.0);
        CHECK(r.exact_outage_1 <= target * 1.0500001);
        CHECK(r.exact_outage_2 <= target * 1.0500001);
    }
}

TEST_CASE("nonuniform_energy_comparison") {
    const Scenario sc = asymmetric_scenario();
    const NonUniformReport r = solve_nonuniform(sc, sc.qos);

    PowerAllocation alloc;
    solve_exchange_powers(sc, Scheme::inter_network, alloc);
    alloc.p1_cellular_w = r.p1_cellular_w;
    alloc.p2_cellular_w = r.p2_cellular_w;
    CHECK(alloc.p1_exchange_w == Approx(78.553964013).epsilon(1e-9));
    CHECK(alloc.p2_exchange_w == Approx(1.58178119682).epsilon(1e-9));

    const EnergyReport coop =
        scheme_total_energy(Scheme::inter_network, alloc, sc.battery, r.problem.alpha);
    const EnergyReport solo = scheme_total_energy(Scheme::no_cooperation,
                                                  solve_no_cooperation(sc), sc.battery, 0.0);
    CHECK(coop.total_j == Approx(2.07902953952e-05).epsilon(1e-9));
    CHECK(solo.total_j == Approx(1.07868637199e-04).epsilon(1e-9));
    CHECK(coop.total_j < solo.total_j);
}

TEST_CASE("hessian_diagnostic_values") {
    NonUniformProblem p = symmetric_problem();
    const HessianDiagnostic d = hessian_diagnostic(p);

    // With beta = 1 both Hessians have minors exactly (0, -4 pout^2).
    CHECK(d.minor1_c1 == 0.0);
    CHECK(d.minor1_c2 == 0.0);
    CHECK(d.minor2_c1 == -4.0 * 1e-3 * 1e-3);
    CHECK(d.minor2_c2 == -4.0 * 1e-3 * 1e-3);
    CHECK(d.indefinite);

    // beta != 1 scales the second constraint's minor by beta^4.
    p.beta = 2.0;
    const HessianDiagnostic d2 = hessian_diagnostic(p);
    const double b2 = p.beta * p.beta;
    CHECK(d2.minor2_c2 == -4.0 * p.pout2 * p.pout2 * b2 * b2);
    CHECK(d2.minor2_c1 == d.minor2_c1);
    CHECK(d2.indefinite);
}

TEST_CASE("nonuniform_validation") {
    NonUniformProblem p = symmetric_problem();
    p.pout1 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::domain_error);

    p = symmetric_problem();
    p.rho1 = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = symmetric_problem();
    p.alpha = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
