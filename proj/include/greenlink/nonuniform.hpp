#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "greenlink/power_energy.hpp"

namespace greenlink {

// ---------------------------------------------------------------------------
// Per-user QoS power minimization over the cellular uplink, in normalized
// SNR coordinates z_i = mean branch SNR / threshold of user 1's rate.
// Maximize -(rho1*z1 + rho2*z2) subject to
//   c1: 2*pout1*z1*z2 - 2*(1-alpha)*z2 - alpha              >= 0
//   c2: 2*pout2*beta^2*z1*z2 - 2*(1-alpha)*beta^2*z1 - alpha >= 0
// within the accuracy domain of the underlying series expansion:
//   1/z1, 1/z2 < sqrt(2*delta),  1/z1 + 1/z2 < sqrt(2*delta)*min(1, beta).
// ---------------------------------------------------------------------------

struct NonUniformProblem {
    double rho1 = 0.0, rho2 = 0.0;  // watts per unit of z_i
    double alpha = 0.0;             // probability both exchange directions decode
    double beta = 1.0;              // threshold_1 / threshold_2
    double pout1 = 0.0, pout2 = 0.0;
    double delta = 0.005;           // expansion accuracy controlling the z domain
    double k1 = 0.0, k2 = 0.0;      // end-to-end uplink path gains
    double threshold1 = 0.0, threshold2 = 0.0;
    double mean_per_watt_1 = 0.0, mean_per_watt_2 = 0.0;

    double z_floor() const { return 1.0 / std::sqrt(2.0 * delta); }
    double inverse_sum_bound() const { return std::sqrt(2.0 * delta) * std::min(1.0, beta); }

    void validate() const {
        detail::require_positive(rho1, "rho1");
        detail::require_positive(rho2, "rho2");
        detail::require_probability(alpha, "alpha");
        detail::require_positive(beta, "beta");
        detail::require_positive(delta, "delta");
        detail::require_open_probability(pout1, "pout1");
        detail::require_open_probability(pout2, "pout2");
    }
};

inline NonUniformProblem build_problem(const Scenario& sc, const QosSpec& qos,
                                       double delta = 0.005) {
    sc.validate();
    qos.validate();
    detail::require_positive(delta, "delta");
    NonUniformProblem p;
    const double kappa_c = sc.kappa_cellular();
    p.threshold1 = snr_threshold(qos.rate_1_bps, sc.cellular, kappa_c).value;
    p.threshold2 = snr_threshold(qos.rate_2_bps, sc.cellular, kappa_c).value;
    detail::require_positive(p.threshold1, "threshold1");
    detail::require_positive(p.threshold2, "threshold2");
    p.beta = p.threshold1 / p.threshold2;
    p.alpha = decoding_state_probs(qos.exchange_outage_12, qos.exchange_outage_21).both_decoded;
    p.pout1 = qos.target_outage_1;
    p.pout2 = qos.target_outage_2;
    p.delta = delta;
    p.k1 = free_space_gain(sc.cellular, sc.topology.d_1b_m, sc.topology.g_u1, sc.topology.g_bs);
    p.k2 = free_space_gain(sc.cellular, sc.topology.d_2b_m, sc.topology.g_u2, sc.topology.g_bs);
    const double n0b = sc.noise.n0_w_per_hz * sc.cellular.bandwidth_hz;
    p.mean_per_watt_1 = sc.topology.sigma2_1b * p.k1 / n0b;
    p.mean_per_watt_2 = sc.topology.sigma2_2b * p.k2 / n0b;
    // Both coefficients carry user 1's threshold; z_2 is normalized the same way.
    p.rho1 = p.threshold1 / p.mean_per_watt_1;
    p.rho2 = p.threshold1 / p.mean_per_watt_2;
    p.validate();
    return p;
}

inline double constraint1(const NonUniformProblem& p, double z1, double z2) {
    return 2.0 * p.pout1 * z1 * z2 - 2.0 * (1.0 - p.alpha) * z2 - p.alpha;
}

inline double constraint2(const NonUniformProblem& p, double z1, double z2) {
    const double b2 = p.beta * p.beta;
    return 2.0 * p.pout2 * b2 * z1 * z2 - 2.0 * (1.0 - p.alpha) * b2 * z1 - p.alpha;
}

inline double objective_value(const NonUniformProblem& p, double z1, double z2) {
    return -(p.rho1 * z1 + p.rho2 * z2);
}

inline bool domain_ok(const NonUniformProblem& p, double z1, double z2) {
    if (!(z1 > 0.0) || !(z2 > 0.0)) return false;
    const double s = std::sqrt(2.0 * p.delta);
    return 1.0 / z1 < s && 1.0 / z2 < s && 1.0 / z1 + 1.0 / z2 < p.inverse_sum_bound();
}

struct KktCandidate {
    double z1 = 0.0, z2 = 0.0;
    double mu1 = 0.0, mu2 = 0.0;
    bool active1 = false, active2 = false;
    double objective = 0.0;
    bool is_local_max = false;
    bool feasible = false;
};

// ---------------------------------------------------------------------------
// Second-order sufficiency: the Lagrangian Hessian has zero diagonal and
// off-diagonal h = 2*(pout1*mu1 + pout2*beta^2*mu2); a candidate is a strict
// local maximum iff y^T H y = 2*h*y1*y2 < 0 on every nonzero tangent y of the
// active constraints (vacuously true when the tangent space is trivial).
// ---------------------------------------------------------------------------

namespace detail {

inline std::array<double, 2> constraint1_grad(const NonUniformProblem& p, double z1, double z2) {
    return {2.0 * p.pout1 * z2, 2.0 * p.pout1 * z1 - 2.0 * (1.0 - p.alpha)};
}

inline std::array<double, 2> constraint2_grad(const NonUniformProblem& p, double z1, double z2) {
    const double b2 = p.beta * p.beta;
    return {2.0 * p.pout2 * b2 * z2 - 2.0 * (1.0 - p.alpha) * b2, 2.0 * p.pout2 * b2 * z1};
}

}  // namespace detail

inline bool check_second_order(const KktCandidate& c, const NonUniformProblem& p) {
    const double h = 2.0 * (p.pout1 * c.mu1 + p.pout2 * p.beta * p.beta * c.mu2);
    const auto g1 = detail::constraint1_grad(p, c.z1, c.z2);
    const auto g2 = detail::constraint2_grad(p, c.z1, c.z2);
    if (c.active1 && c.active2) {
        const double det = g1[0] * g2[1] - g1[1] * g2[0];
        const double scale = std::max({std::abs(g1[0] * g2[1]), std::abs(g1[1] * g2[0]), 1e-300});
        if (std::abs(det) > 1e-10 * scale) return true;  // trivial tangent space
        // Degenerate Jacobian: fall through and test along the shared tangent.
    }
    std::array<double, 2> grad{0.0, 0.0};
    if (c.active1)
        grad = g1;
    else if (c.active2)
        grad = g2;
    else
        return false;  // unconstrained stationary point of a linear objective
    const double y1 = -grad[1], y2 = grad[0];
    return 2.0 * h * y1 * y2 < 0.0;
}

// ---------------------------------------------------------------------------
// First-order candidates, one nonlinear 2x2 system per active-set hypothesis,
// each solved by damped Newton from 8 log-spaced diagonal starts.
// ---------------------------------------------------------------------------

namespace detail {

struct Newton2System {
    // residuals F(z) and Jacobian rows {dF1/dz1, dF1/dz2, dF2/dz1, dF2/dz2}
    virtual std::array<double, 2> residual(double z1, double z2) const = 0;
    virtual std::array<double, 4> jacobian(double z1, double z2) const = 0;
    virtual double scale(double z1, double z2) const = 0;  // residual magnitude reference
    virtual ~Newton2System() = default;
};

inline bool newton2_solve(const Newton2System& sys, double& z1, double& z2) {
    for (int it = 0; it < 120; ++it) {
        const auto f = sys.residual(z1, z2);
        const double ref = std::max(sys.scale(z1, z2), 1e-300);
        const double fn = std::max(std::abs(f[0]), std::abs(f[1]));
        if (fn <= 1e-13 * ref) return true;
        const auto j = sys.jacobian(z1, z2);
        const double det = j[0] * j[3] - j[1] * j[2];
        if (det == 0.0 || !std::isfinite(det)) return false;
        const double dz1 = (f[0] * j[3] - f[1] * j[1]) / det;
        const double dz2 = (f[1] * j[0] - f[0] * j[2]) / det;
        double lambda = 1.0;
        bool stepped = false;
        for (int back = 0; back < 45; ++back) {
            const double t1 = z1 - lambda * dz1;
            const double t2 = z2 - lambda * dz2;
            if (t1 > 0.0 && t2 > 0.0) {
                const auto ft = sys.residual(t1, t2);
                const double ftn = std::max(std::abs(ft[0]), std::abs(ft[1]));
                if (ftn < fn) {
                    z1 = t1;
                    z2 = t2;
                    stepped = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!stepped) return false;
    }
    const auto f = sys.residual(z1, z2);
    return std::max(std::abs(f[0]), std::abs(f[1])) <= 1e-11 * std::max(sys.scale(z1, z2), 1e-300);
}

struct BothActiveSystem final : Newton2System {
    const NonUniformProblem& p;
    explicit BothActiveSystem(const NonUniformProblem& pp) : p(pp) {}
    std::array<double, 2> residual(double z1, double z2) const override {
        return {constraint1(p, z1, z2), constraint2(p, z1, z2)};
    }
    std::array<double, 4> jacobian(double z1, double z2) const override {
        const auto a = constraint1_grad(p, z1, z2);
        const auto b = constraint2_grad(p, z1, z2);
        return {a[0], a[1], b[0], b[1]};
    }
    double scale(double z1, double z2) const override {
        const double b2 = p.beta * p.beta;
        return std::max(2.0 * p.pout1 * z1 * z2 + 2.0 * (1.0 - p.alpha) * z2 + p.alpha,
                        2.0 * p.pout2 * b2 * z1 * z2 + 2.0 * (1.0 - p.alpha) * b2 * z1 + p.alpha);
    }
};

/// One active constraint: its zero set plus stationarity with mu for the other
/// constraint eliminated (rho1*dg/dz2 - rho2*dg/dz1 = 0, cross-multiplied).
struct SingleActiveSystem final : Newton2System {
    const NonUniformProblem& p;
    int which;  // 1 or 2
    SingleActiveSystem(const NonUniformProblem& pp, int w) : p(pp), which(w) {}
    std::array<double, 2> residual(double z1, double z2) const override {
        const double g = which == 1 ? constraint1(p, z1, z2) : constraint2(p, z1, z2);
        const auto d = which == 1 ? constraint1_grad(p, z1, z2) : constraint2_grad(p, z1, z2);
        return {g, p.rho1 * d[1] - p.rho2 * d[0]};
    }
    std::array<double, 4> jacobian(double z1, double z2) const override {
        const auto d = which == 1 ? constraint1_grad(p, z1, z2) : constraint2_grad(p, z1, z2);
        // Constraint Hessians have zero diagonal and a constant off-diagonal.
        const double hxy = which == 1 ? 2.0 * p.pout1 : 2.0 * p.pout2 * p.beta * p.beta;
        return {d[0], d[1], p.rho1 * hxy, -p.rho2 * hxy};
    }
    double scale(double z1, double z2) const override {
        const double b2 = p.beta * p.beta;
        const double gs =
            which == 1
                ? 2.0 * p.pout1 * z1 * z2 + 2.0 * (1.0 - p.alpha) * z2 + p.alpha
                : 2.0 * p.pout2 * b2 * z1 * z2 + 2.0 * (1.0 - p.alpha) * b2 * z1 + p.alpha;
        const auto d = which == 1 ? constraint1_grad(p, z1, z2) : constraint2_grad(p, z1, z2);
        const double ss = p.rho1 * std::abs(d[1]) + p.rho2 * std::abs(d[0]);
        return std::max(gs, ss);
    }
};

inline void append_candidate(std::vector<KktCandidate>& out, const NonUniformProblem& p,
                             double z1, double z2, bool a1, bool a2) {
    if (!(z1 > 0.0) || !(z2 > 0.0) || !std::isfinite(z1) || !std::isfinite(z2)) return;
    for (const KktCandidate& c : out) {
        if (c.active1 == a1 && c.active2 == a2 && std::abs(c.z1 - z1) <= 1e-8 * std::abs(z1) &&
            std::abs(c.z2 - z2) <= 1e-8 * std::abs(z2))
            return;  // duplicate root from another start
    }
    KktCandidate c;
    c.z1 = z1;
    c.z2 = z2;
    c.active1 = a1;
    c.active2 = a2;

    const auto d1 = constraint1_grad(p, z1, z2);
    const auto d2 = constraint2_grad(p, z1, z2);
    if (a1 && a2) {
        const double det = d1[0] * d2[1] - d1[1] * d2[0];
        if (det == 0.0 || !std::isfinite(det)) return;
        c.mu1 = (p.rho1 * d2[1] - p.rho2 * d2[0]) / det;
        c.mu2 = (p.rho2 * d1[0] - p.rho1 * d1[1]) / det;
    } else if (a1) {
        if (d1[0] == 0.0) return;
        c.mu1 = p.rho1 / d1[0];
    } else {
        if (d2[1] == 0.0) return;
        c.mu2 = p.rho2 / d2[1];
    }
    const double mu_scale = std::max({std::abs(c.mu1), std::abs(c.mu2), 1.0});
    if (c.mu1 < -1e-9 * mu_scale || c.mu2 < -1e-9 * mu_scale) return;
    c.mu1 = std::max(c.mu1, 0.0);
    c.mu2 = std::max(c.mu2, 0.0);

    const double g1 = constraint1(p, z1, z2);
    const double g2 = constraint2(p, z1, z2);
    const double slack_tol = 1e-9;
    c.feasible = domain_ok(p, z1, z2) && g1 >= -slack_tol && g2 >= -slack_tol;
    if (!c.feasible) return;
    c.objective = objective_value(p, z1, z2);
    c.is_local_max = check_second_order(c, p);
    out.push_back(c);
}

}  // namespace detail

inline std::vector<KktCandidate> enumerate_kkt_candidates(const NonUniformProblem& p) {
    p.validate();
    std::vector<KktCandidate> out;
    const double base = p.z_floor();
    for (int hypothesis = 0; hypothesis < 3; ++hypothesis) {
        for (int k = 0; k < 8; ++k) {
            double z1 = base * std::ldexp(1.0, k);
            double z2 = z1;
            bool ok = false;
            switch (hypothesis) {
                case 0: ok = detail::newton2_solve(detail::BothActiveSystem(p), z1, z2); break;
                case 1: ok = detail::newton2_solve(detail::SingleActiveSystem(p, 1), z1, z2); break;
                case 2: ok = detail::newton2_solve(detail::SingleActiveSystem(p, 2), z1, z2); break;
            }
            if (!ok) continue;
            detail::append_candidate(out, p, z1, z2, hypothesis != 2, hypothesis != 1);
        }
    }
    std::sort(out.begin(), out.end(), [](const KktCandidate& a, const KktCandidate& b) {
        if (a.objective != b.objective) return a.objective > b.objective;
        if (a.z1 != b.z1) return a.z1 < b.z1;
        return a.z2 < b.z2;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive verifier. All constraints bound z2 from below at fixed z1, and
// the objective falls with z2, so the inner minimization is closed-form; the
// outer cost in z1 is convex, refined by golden-section after a log grid.
// ---------------------------------------------------------------------------

struct ExhaustiveResult {
    double z1 = 0.0, z2 = 0.0;
    double objective = 0.0;
    bool feasible = false;
    std::string infeasible_reason;
};

namespace detail {

/// Smallest z2 meeting every constraint at this z1; infinity when none exists.
inline double min_feasible_z2(const NonUniformProblem& p, double z1) {
    constexpr double open_margin = 1.0 + 1e-12;
    const double inf = std::numeric_limits<double>::infinity();
    const double inv_budget = p.inverse_sum_bound() - 1.0 / z1;
    if (!(inv_budget > 0.0)) return inf;
    double z2 = std::max(p.z_floor() * open_margin, open_margin / inv_budget);
    const double c1_slope = 2.0 * (p.pout1 * z1 - (1.0 - p.alpha));
    if (!(c1_slope > 0.0)) return inf;  // constraint 1 unsatisfiable at this z1
    z2 = std::max(z2, p.alpha / c1_slope);
    const double b2 = p.beta * p.beta;
    z2 = std::max(z2, (1.0 - p.alpha) / p.pout2 + p.alpha / (2.0 * p.pout2 * b2 * z1));
    // The lower bounds from the strict domain may still collide with it.
    if (1.0 / z1 + 1.0 / z2 >= p.inverse_sum_bound()) return inf;
    return z2;
}

inline double reduced_cost(const NonUniformProblem& p, double z1) {
    const double z2 = min_feasible_z2(p, z1);
    if (!std::isfinite(z2)) return std::numeric_limits<double>::infinity();
    return p.rho1 * z1 + p.rho2 * z2;
}

}  // namespace detail

inline ExhaustiveResult exhaustive_search(const NonUniformProblem& p,
                                          std::size_t grid_resolution = 2000) {
    p.validate();
    detail::require(grid_resolution >= 100, "grid_resolution must be at least 100");
    ExhaustiveResult r;

    const double open_margin = 1.0 + 1e-9;
    const double z1_lo = std::max({p.z_floor(), 1.0 / p.inverse_sum_bound(),
                                   (1.0 - p.alpha) / p.pout1}) *
                         open_margin;
    const double z1_hi = z1_lo * 1e6;

    double best_cost = std::numeric_limits<double>::infinity();
    double best_z1 = 0.0;
    const double log_lo = std::log(z1_lo), log_hi = std::log(z1_hi);
    const std::size_t n = grid_resolution;
    for (std::size_t i = 0; i <= n; ++i) {
        const double z1 = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                                static_cast<double>(n));
        const double cost = detail::reduced_cost(p, z1);
        if (cost < best_cost) {
            best_cost = cost;
            best_z1 = z1;
        }
    }
    if (!std::isfinite(best_cost)) {
        r.infeasible_reason =
            "no grid point satisfies constraint 1 and the expansion domain bounds";
        return r;
    }

    // Golden-section refinement of the convex reduced cost around the best cell.
    double lo = best_z1 / std::exp((log_hi - log_lo) / static_cast<double>(n));
    double hi = best_z1 * std::exp((log_hi - log_lo) / static_cast<double>(n));
    lo = std::max(lo, z1_lo);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = detail::reduced_cost(p, x1), f2 = detail::reduced_cost(p, x2);
    for (int it = 0; it < 400; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = detail::reduced_cost(p, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = detail::reduced_cost(p, x2);
        }
        const double span = std::min(f1, f2);
        if (std::isfinite(span) && (b - a) <= 1e-12 * b &&
            std::abs(f1 - f2) <= 1e-10 * std::abs(span))
            break;
    }
    const double z1_star = f1 < f2 ? x1 : x2;
    const double cost_star = std::min({f1, f2, best_cost});
    const double z1_final = cost_star < std::min(f1, f2) ? best_z1 : z1_star;

    r.z1 = z1_final;
    r.z2 = detail::min_feasible_z2(p, z1_final);
    r.objective = -(p.rho1 * r.z1 + p.rho2 * r.z2);
    r.feasible = true;
    return r;
}

// ---------------------------------------------------------------------------
// Power recovery and exact-model verification of an approximate optimum.
// ---------------------------------------------------------------------------

/// Watts for the normalized optimum. Both coefficients use user 1's threshold,
/// matching the z_2 normalization; the variant instead prices z_2 against user
/// 2's own threshold (divides rho2 by beta).
inline std::pair<double, double> recover_powers(double z1, double z2, const NonUniformProblem& p,
                                                bool user2_rate_variant = false) {
    detail::require_positive(z1, "z1");
    detail::require_positive(z2, "z2");
    const double rho2 = user2_rate_variant ? p.rho2 / p.beta : p.rho2;
    return {p.rho1 * z1, rho2 * z2};
}

/// Exact mixture outage of a user at normalized branch SNRs (z1, z2).
inline double exact_outage_at(const NonUniformProblem& p, double z1, double z2, int user) {
    detail::require(user == 1 || user == 2, "user must be 1 or 2");
    const double m1 = z1 * p.threshold1;
    const double m2 = z2 * p.threshold1;
    const double thr = user == 1 ? p.threshold1 : p.threshold2;
    const double own = user == 1 ? m1 : m2;
    const double when_both = outage_sum_two_exponentials(m1, m2, SnrThreshold{thr});
    const double when_single = outage_single_link(own, SnrThreshold{thr});
    return p.alpha * when_both + (1.0 - p.alpha) * when_single;
}

struct HessianDiagnostic {
    // Leading principal minors of the two constraint Hessians.
    double minor1_c1 = 0.0, minor2_c1 = 0.0;
    double minor1_c2 = 0.0, minor2_c2 = 0.0;
    bool indefinite = false;
};

inline HessianDiagnostic hessian_diagnostic(const NonUniformProblem& p) {
    p.validate();
    HessianDiagnostic d;
    d.minor1_c1 = 0.0;
    d.minor2_c1 = -4.0 * p.pout1 * p.pout1;
    d.minor1_c2 = 0.0;
    const double b2 = p.beta * p.beta;
    d.minor2_c2 = -4.0 * p.pout2 * p.pout2 * b2 * b2;
    d.indefinite = d.minor2_c1 < 0.0 && d.minor2_c2 < 0.0;
    detail::require(d.indefinite, "constraint Hessians must be indefinite");
    return d;
}

// ---------------------------------------------------------------------------
// End-to-end solve: first-order candidates, exhaustive cross-check, power
// recovery, and an exact-model feasibility correction.
// ---------------------------------------------------------------------------

struct NonUniformReport {
    NonUniformProblem problem;
    std::vector<KktCandidate> candidates;
    KktCandidate heuristic;           // best second-order-confirmed candidate
    bool heuristic_found = false;
    ExhaustiveResult exhaustive;
    double z1 = 0.0, z2 = 0.0;        // adopted optimum
    double objective = 0.0;
    double p1_cellular_w = 0.0, p2_cellular_w = 0.0;
    double exact_outage_1 = 0.0, exact_outage_2 = 0.0;
    double correction_scale = 1.0;    // common power factor if exact model needed more
};

inline NonUniformReport solve_nonuniform(const Scenario& sc, const QosSpec& qos,
                                         double delta = 0.005, std::size_t grid_resolution = 2000,
                                         bool user2_rate_variant = false) {
    NonUniformReport r;
    r.problem = build_problem(sc, qos, delta);
    r.candidates = enumerate_kkt_candidates(r.problem);
    for (const KktCandidate& c : r.candidates) {
        if (c.is_local_max) {
            r.heuristic = c;
            r.heuristic_found = true;
            break;  // list is sorted best-objective-first
        }
    }
    r.exhaustive = exhaustive_search(r.problem, grid_resolution);
    if (r.heuristic_found) {
        r.z1 = r.heuristic.z1;
        r.z2 = r.heuristic.z2;
    } else {
        detail::require(r.exhaustive.feasible, "non-uniform problem infeasible");
        r.z1 = r.exhaustive.z1;
        r.z2 = r.exhaustive.z2;
    }
    r.objective = objective_value(r.problem, r.z1, r.z2);

    // The series expansion can be slightly optimistic; if the exact mixture
    // misses a target by more than 5%, scale both powers up to exact
    // feasibility (outage is monotone decreasing in the common scale).
    auto exact_ok = [&](double s, double tol) {
        return exact_outage_at(r.problem, s * r.z1, s * r.z2, 1) <= r.problem.pout1 * tol &&
               exact_outage_at(r.problem, s * r.z1, s * r.z2, 2) <= r.problem.pout2 * tol;
    };
    if (!exact_ok(1.0, 1.05)) {
        double lo = 1.0, hi = 2.0;
        while (!exact_ok(hi, 1.0) && hi < 1e6) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (exact_ok(mid, 1.0) ? hi : lo) = mid;
        }
        r.correction_scale = hi;
    }
    const auto powers =
        recover_powers(r.correction_scale * r.z1, r.correction_scale * r.z2, r.problem,
                       user2_rate_variant);
    r.p1_cellular_w = powers.first;
    r.p2_cellular_w = powers.second;
    r.exact_outage_1 =
        exact_outage_at(r.problem, r.correction_scale * r.z1, r.correction_scale * r.z2, 1);
    r.exact_outage_2 =
        exact_outage_at(r.problem, r.correction_scale * r.z1, r.correction_scale * r.z2, 2);
    return r;
}

}  // namespace greenlink
