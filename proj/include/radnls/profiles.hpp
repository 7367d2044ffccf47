#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "radnls/field.hpp"

namespace radnls {

// Reference profiles of the two limit problems: the closed-form 1D soliton of
// -U'' + U = U^{q-1} and the N-dimensional radial ground state of
// -Lap(phi) + phi = phi^{q-1}, computed by shooting.

/// Closed form U(x) = [ (q/2) sech^2( (q-2)/2 x ) ]^{1/(q-2)}; U(0) = (2/q)^{-1/(q-2)}.
inline double soliton_value(double q, double x) {
    const double alpha = 0.5 * (q - 2.0);
    const double s = 1.0 / std::cosh(alpha * x);
    return std::pow(0.5 * q, 1.0 / (q - 2.0)) * std::pow(s, 2.0 / (q - 2.0));
}

/// Analytic second derivative of the closed form (independent route for
/// residual checks: hyperbolic identities rather than the ODE itself).
inline double soliton_second_derivative(double q, double x) {
    const double alpha = 0.5 * (q - 2.0);
    const double beta = 2.0 / (q - 2.0);
    const double s = 1.0 / std::cosh(alpha * x);
    const double t = std::tanh(alpha * x);
    return alpha * alpha * beta * soliton_value(q, x) * (beta * t * t - s * s);
}

/// -U'' + U - U^{q-1} with the analytic U''; machine-zero for the closed form.
inline double soliton_ode_residual(double q, double x) {
    const double U = soliton_value(q, x);
    return -soliton_second_derivative(q, x) + U - std::pow(U, q - 1.0);
}

inline RadialField soliton_profile_1d(double q, const GridPtr& grid) {
    if (grid->dim() != 1) throw invalid_parameter("soliton_profile_1d: need a 1D two-sided grid");
    if (!(q > 2)) throw invalid_parameter("soliton_profile_1d: q must exceed 2");
    return RadialField::sample(grid, [q](double x) { return soliton_value(q, x); });
}

namespace detail {

struct ShotOutcome {
    enum Kind { crossed, rebounded, decayed } kind;
    std::vector<double> phi;  // node samples accumulated so far
    double r_tail = 0;        // radius where |phi| dropped below the floor
};

/// Integrate phi'' + (N-1)/r phi' = phi - phi^{q-1} outward from phi(0)=a,
/// phi'(0)=0, sampling at `nodes` (strictly increasing from 0).
inline ShotOutcome shoot_ground_state(int N, double q, double a, const std::vector<double>& nodes,
                                      double floor_value = 1e-10, double max_step = 2.5e-3) {
    ShotOutcome out;
    out.phi.assign(nodes.size(), 0.0);
    out.phi[0] = a;
    auto rhs = [&](double r, double phi, double psi) {
        double f = phi - std::copysign(std::pow(std::abs(phi), q - 1.0), phi);
        return r > 0 ? f - (N - 1) / r * psi : f / 1.0;  // r=0 handled by series start
    };
    // series start over the first step: phi ~ a + (a - a^{q-1}) r^2 / (2N)
    const double c2 = (a - std::pow(a, q - 1.0)) / (2.0 * N);
    double r = std::min(nodes.size() > 1 ? nodes[1] : max_step, max_step);
    double phi = a + c2 * r * r;
    double psi = 2.0 * c2 * r;
    std::size_t next = 1;
    if (nodes.size() > 1 && nodes[1] <= r + 1e-300) {
        out.phi[1] = phi;
        next = 2;
    }
    bool below_floor = false;
    while (next < nodes.size()) {
        const double target = nodes[next];
        const int steps = std::max(1, int(std::ceil((target - r) / max_step)));
        const double h = (target - r) / steps;
        for (int s = 0; s < steps; ++s) {
            const double k1p = psi, k1q = rhs(r, phi, psi);
            const double k2p = psi + 0.5 * h * k1q, k2q = rhs(r + 0.5 * h, phi + 0.5 * h * k1p, psi + 0.5 * h * k1q);
            const double k3p = psi + 0.5 * h * k2q, k3q = rhs(r + 0.5 * h, phi + 0.5 * h * k2p, psi + 0.5 * h * k2q);
            const double k4p = psi + h * k3q, k4q = rhs(r + h, phi + h * k3p, psi + h * k3q);
            phi += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
            psi += h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
            r += h;
            if (phi <= 0) {
                out.kind = ShotOutcome::crossed;
                return out;
            }
            if (!below_floor && psi > 0) {
                out.kind = ShotOutcome::rebounded;
                return out;
            }
            if (phi < floor_value && psi < 0) {
                below_floor = true;
                out.r_tail = r;
                // fill the remaining nodes with the matched exponential tail
                for (std::size_t j = next; j < nodes.size(); ++j)
                    out.phi[j] = phi * std::pow(nodes[j] / r, -0.5 * (N - 1)) *
                                 std::exp(-(nodes[j] - r));
                out.kind = ShotOutcome::decayed;
                return out;
            }
        }
        out.phi[next++] = phi;
    }
    out.kind = ShotOutcome::rebounded;  // never decayed within the domain
    return out;
}

}  // namespace detail

/// Radial ground state of -Lap(phi) + phi = phi^{q-1} in R^N by bisection on
/// phi(0) between sign-crossing and rebound trajectories; the returned profile
/// decays monotonically below 1e-10 before r_max and carries a matched
/// exponential tail beyond that radius.
inline RadialField ground_state_Nd(int N, double q, const GridPtr& grid) {
    if (N < 2) throw invalid_parameter("ground_state_Nd: N must be >= 2");
    if (grid->dim() != N) throw dimension_mismatch("ground_state_Nd: grid dimension mismatch");
    const std::vector<double>& nodes = grid->nodes();

    double lo = 1.0 + 1e-9;  // rebounds (too little mass)
    double hi = 2.0;         // grown until it crosses
    for (int k = 0; k < 60; ++k) {
        auto shot = detail::shoot_ground_state(N, q, hi, nodes);
        if (shot.kind == detail::ShotOutcome::crossed) break;
        lo = hi;
        hi *= 1.5;
        if (k == 59) throw bracket_not_found("ground_state_Nd: no sign-crossing amplitude found");
    }
    detail::ShotOutcome best;
    best.kind = detail::ShotOutcome::rebounded;
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        auto shot = detail::shoot_ground_state(N, q, mid, nodes);
        if (shot.kind == detail::ShotOutcome::decayed) best = std::move(shot);
        if (shot.kind == detail::ShotOutcome::crossed) hi = mid;
        else lo = mid;
    }
    if (best.kind != detail::ShotOutcome::decayed)
        throw bracket_not_found(
            "ground_state_Nd: trajectory never decayed below 1e-10 before r_max; enlarge r_max");
    return {grid, std::move(best.phi)};
}

}  // namespace radnls
