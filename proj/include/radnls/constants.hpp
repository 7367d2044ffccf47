#pragma once

#include <limits>
#include <random>
#include <string>

#include "radnls/energy.hpp"
#include "radnls/profiles.hpp"
#include "radnls/spectral.hpp"

namespace radnls {

inline double theta_exponent(int N, double q) { return 0.5 * (2.0 * q - N * (q - 2.0)); }
inline double xi_exponent(int N, double q) { return 0.5 * N * (q - 2.0); }

/// Gagliardo-Nirenberg quotient ||u||_q^q / ( ||u||_2^theta ||grad u||_2^xi ).
inline double gn_quotient(int N, double q, const RadialField& u) {
    const double th = theta_exponent(N, q), xi = xi_exponent(N, q);
    const double m2 = u.mass2(), kin = u.grad_norm2();
    if (m2 <= 0 || kin <= 0) throw zero_mass_error("gn_quotient: degenerate field");
    return u.norm_pow(q) / (std::pow(m2, 0.5 * th) * std::pow(kin, 0.5 * xi));
}

struct GNConstant {
    int N = 0;
    double q = 0;
    double value = 0;  // reported constant (quotient-maximization route)
    double theta = 0, xi = 0;
    double value_ascent = 0;        // normalized gradient ascent on the quotient
    double value_ground_state = 0;  // quotient evaluated at the shooting ground state
    std::string method = "quotient_maximization";
    std::string grid_id;
};

struct GNOptions {
    int max_iterations = 4000;
    double rel_tol = 1e-11;
    double cross_check_tol = 1e-3;
    bool cross_check = true;
};

namespace detail {

inline double quotient(const RadialField& u, double q, double th, double xi) {
    const double m2 = u.mass2(), kin = u.grad_norm2();
    if (m2 <= 0 || kin <= 0) throw zero_mass_error("GN quotient: degenerate field");
    return u.norm_pow(q) / (std::pow(std::sqrt(m2), th) * std::pow(std::sqrt(kin), xi));
}

/// Gradient of the Dirichlet form: d/du_j [ sum b_i (u_{i+1}-u_i)^2 ] / 2.
inline std::vector<double> dirichlet_form_gradient(const RadialGrid& g,
                                                   std::span<const double> u) {
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double f = g.edge_weight(i) * (u[i + 1] - u[i]);
        out[i] -= f;
        out[i + 1] += f;
    }
    return out;
}

/// Solve (-Lap + c) d = rhs on the operator rows (H^1-metric smoothing).
inline std::vector<double> precondition(const RadialGrid& g, std::span<const double> rhs,
                                        double c) {
    const std::size_t b = g.row_begin(), e = g.row_end(), n = e - b;
    Tridiag A;
    A.diag.resize(n);
    A.sub.assign(n, 0.0);
    A.sup.assign(n, 0.0);
    std::vector<double> f(n);
    for (std::size_t i = b; i < e; ++i) {
        A.diag[i - b] = g.lap_diag(i) + c;
        if (i > b) A.sub[i - b] = g.lap_sub(i);
        if (i + 1 < e) A.sup[i - b] = g.lap_super(i);
        f[i - b] = rhs[i];
    }
    std::vector<double> x = solve_tridiag(std::move(A), std::move(f));
    std::vector<double> out(rhs.size(), 0.0);
    for (std::size_t i = b; i < e; ++i) out[i] = x[i - b];
    return out;
}

}  // namespace detail

/// Optimal Gagliardo-Nirenberg constant on the grid, by normalized gradient
/// ascent of the quotient from a Gaussian start, cross-checked against the
/// quotient at the shooting ground state of -Lap W + W = W^{q-1}.
inline GNConstant gn_constant(int N, double q, const GridPtr& grid, GNOptions opts = {}) {
    if (N < 2) throw invalid_parameter("gn_constant: N must be >= 2");
    if (!(q > 2) || (N >= 3 && !(q < 2.0 * N / (N - 2.0))))
        throw window_violation("gn_constant: q must lie in (2, 2*)");
    if (grid->dim() != N) throw dimension_mismatch("gn_constant: grid dimension mismatch");
    const double th = theta_exponent(N, q), xi = xi_exponent(N, q);

    RadialField u = RadialField::sample(grid, [](double r) { return std::exp(-0.5 * r * r); });
    u.v.back() = 0.0;
    u.project_mass(1.0);
    double J = detail::quotient(u, q, th, xi);

    const RadialGrid& g = *grid;
    int stalled = 0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const double nq = u.norm_pow(q), m2 = u.mass2(), kin = u.grad_norm2();
        // gradient of log J, weighted by the quadrature
        std::vector<double> grad(u.size(), 0.0);
        std::vector<double> kgrad = detail::dirichlet_form_gradient(g, u.v);
        for (std::size_t i = g.row_begin(); i < g.row_end(); ++i) {
            const double wq = g.weight(i) * q * std::pow(std::abs(u[i]), q - 2.0) * u[i];
            grad[i] = wq / nq - th * g.weight(i) * u[i] / m2 - xi * kgrad[i] / kin;
        }
        std::vector<double> d = detail::precondition(g, grad, 1.0);
        double slope = 0;
        for (std::size_t i = 0; i < d.size(); ++i) slope += grad[i] * d[i];
        if (slope <= 0) d = grad;

        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            RadialField trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += step * d[i];
            trial.project_mass(1.0);
            const double Jt = detail::quotient(trial, q, th, xi);
            if (Jt > J) {
                const double gain = (Jt - J) / J;
                u = std::move(trial);
                J = Jt;
                accepted = true;
                stalled = gain < opts.rel_tol ? stalled + 1 : 0;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) ++stalled;
        if (stalled >= 8) break;
        if (!accepted && it < 8)
            throw ascent_stall("gn_constant: no ascent step accepted from the Gaussian start");
    }

    GNConstant out;
    out.N = N;
    out.q = q;
    out.theta = th;
    out.xi = xi;
    out.value_ascent = J;
    out.value = J;
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "N%d_rmax%g_M%d", grid->dim(), grid->r_max(),
                      grid->resolution());
        out.grid_id = buf;
    }
    if (opts.cross_check) {
        RadialField W = ground_state_Nd(N, q, grid);
        out.value_ground_state = detail::quotient(W, q, th, xi);
        const double rel = std::abs(out.value_ascent - out.value_ground_state) /
                           out.value_ground_state;
        if (rel > opts.cross_check_tol)
            throw method_disagreement("gn_constant: ascent and ground-state routes differ by " +
                                      std::to_string(rel));
    }
    return out;
}

/// Local-minimum geometry data at mass mu: the gradient-ball radius t_mu, the
/// mass threshold mu0 (+infinity when the gap vanishes), the maximum of the
/// pure Gagliardo-Nirenberg part f(t) = t^2/2 - (C/q) mu^theta t^xi, and the
/// sphere-slice lower bound f(t_mu) + mu^2 gap / 2.
struct Geometry {
    double t_mu = 0;
    double mu0 = 0;
    double f_mu_at_tmu = 0;
    double sigma_infimum_bound = 0;
    double mu = 0;
    double gap = 0;
    double C = 0;
    int N = 0;
    double q = 0;
};

inline Geometry geometry(int N, double q, const GNConstant& C, double mu, double gap) {
    const double th = theta_exponent(N, q), xi = xi_exponent(N, q);
    if (!(xi > 2))
        throw window_violation("geometry: need the mass-supercritical window (xi_q > 2)");
    if (gap > 0)
        throw positive_gap_error("geometry: essinf V - lambda_ess(V) must be <= 0");
    if (!(mu > 0) || !(C.value > 0)) throw invalid_parameter("geometry: mu and C must be positive");

    Geometry out;
    out.N = N;
    out.q = q;
    out.C = C.value;
    out.mu = mu;
    out.gap = gap;
    out.t_mu = std::pow(q / (xi * C.value * std::pow(mu, th)), 1.0 / (xi - 2.0));
    out.f_mu_at_tmu = sqr(out.t_mu) * (0.5 - 1.0 / xi);
    out.sigma_infimum_bound = out.f_mu_at_tmu + 0.5 * sqr(mu) * gap;

    auto f_at = [&](double m) {
        // g(m) = m^{-2 theta/(xi-2)} (q/(xi C))^{2/(xi-2)} (1/2 - 1/xi) + m^2 gap / 2
        return std::pow(m, -2.0 * th / (xi - 2.0)) *
                   std::pow(q / (xi * C.value), 2.0 / (xi - 2.0)) * (0.5 - 1.0 / xi) +
               0.5 * sqr(m) * gap;
    };
    if (gap == 0) {
        out.mu0 = std::numeric_limits<double>::infinity();
        return out;
    }
    double lo = 1e-6, hi = 1e6;
    while (f_at(lo) <= 0 && lo > 1e-30) lo *= 0.1;
    while (f_at(hi) >= 0 && hi < 1e30) hi *= 10;
    if (!(f_at(lo) > 0 && f_at(hi) < 0))
        throw convergence_failure("geometry: could not bracket mu0");
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f_at(mid) > 0 ? lo : hi) = mid;
    }
    out.mu0 = 0.5 * (lo + hi);
    return out;
}

/// Sampling certificate for the three strict inequalities of the mountain-pass
/// geometry (not a proof: the sphere-slice infimum is probed on a profile
/// family; the analytic bound sigma_infimum_bound is reported alongside).
struct MPGeometryReport {
    double lambda1 = 0;
    double lambda_ess = 0;
    double e_u0 = 0;
    double ajoutx_residual = 0;  // E(u0) - mu^2 lambda1 / 2 + (rho/q)||u0||_q^q
    double min_slice_margin = 0;
    double analytic_slice_bound = 0;
    double e_u1 = 0;
    double dilation_t1 = 0;
    bool slice_positive = false;
    bool endpoints_below = false;

    bool passed() const { return slice_positive && endpoints_below; }
};

namespace detail {

/// L^2-invariant dilation t^{N/2} u(t r) by resampling, then mass projection.
inline RadialField dilate_mass(const RadialField& u, double t, double mu) {
    RadialField v(u.grid);
    const double amp = std::pow(t, 0.5 * u.grid->dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = amp * interp(u, t * std::abs(u.grid->node(i)));
    v.v.back() = 0.0;
    v.project_mass(mu);
    return v;
}

/// Dilate u to the prescribed gradient norm on the fixed grid (bisection in t).
inline RadialField dilate_to_grad(const RadialField& u, double target, double mu) {
    double lo = 1e-3, hi = 1e3;
    auto gn = [&](double t) { return dilate_mass(u, t, mu).grad_norm(); };
    while (gn(lo) > target && lo > 1e-9) lo *= 0.5;
    while (gn(hi) < target && hi < 1e9) hi *= 2;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gn(mid) < target ? lo : hi) = mid;
    }
    return dilate_mass(u, 0.5 * (lo + hi), mu);
}

}  // namespace detail

inline MPGeometryReport check_mp_geometry(const EnergyParams& p, const Potential& V,
                                          const Geometry& geom, const GridPtr& grid,
                                          int n_random_profiles = 8, unsigned seed = 1234) {
    p.validate();
    if (!(p.mu < geom.mu0))
        throw geometry_violated("check_mp_geometry: requires mu < mu0 (mu too large)");
    MPGeometryReport rep;
    rep.lambda_ess = V.essential_spectrum_floor();
    rep.analytic_slice_bound = geom.sigma_infimum_bound;
    const RadialField Vs = V.sample_on(grid);

    auto [l1, phi1] = ground_mode(V, grid);
    rep.lambda1 = l1;
    RadialField u0 = phi1;
    u0.project_mass(p.mu);
    rep.e_u0 = energy(p, Vs, u0);
    rep.ajoutx_residual =
        rep.e_u0 - 0.5 * sqr(p.mu) * l1 + (p.rho / p.q) * u0.norm_pow(p.q);

    // sphere-slice samples: dilations of the eigenfunction, Gaussians, and
    // seeded random bump sums, all carried to { mass = mu, grad = t_mu }
    std::vector<RadialField> family;
    family.push_back(u0);
    for (double sigma : {0.5, 1.0, 2.0, 4.0})
        family.push_back(RadialField::sample(
            grid, [sigma](double r) { return std::exp(-0.5 * sqr(r / sigma)); }));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < n_random_profiles; ++k) {
        RadialField f(grid);
        for (int b = 0; b < 4; ++b) {
            const double c = 0.6 * grid->r_max() * unif(rng);
            const double s = 0.3 + 2.0 * unif(rng);
            const double a = 0.2 + unif(rng);
            for (std::size_t i = 0; i < f.size(); ++i)
                f[i] += a * std::exp(-0.5 * sqr((std::abs(grid->node(i)) - c) / s));
        }
        family.push_back(std::move(f));
    }
    rep.min_slice_margin = std::numeric_limits<double>::infinity();
    for (auto& f : family) {
        f.v.back() = 0.0;
        f.project_mass(p.mu);
        RadialField on_slice = detail::dilate_to_grad(f, geom.t_mu, p.mu);
        const double margin = energy(p, Vs, on_slice) - 0.5 * sqr(p.mu) * rep.lambda_ess;
        rep.min_slice_margin = std::min(rep.min_slice_margin, margin);
    }
    rep.slice_positive = rep.min_slice_margin > 0;

    // dilated endpoint: E drops below E(u0) once t is large enough
    double t = 2.0;
    RadialField u1 = detail::dilate_mass(u0, t, p.mu);
    while ((energy(p, Vs, u1) >= rep.e_u0 || u1.grad_norm() <= geom.t_mu) && t < 1e12) {
        t *= 2.0;
        u1 = detail::dilate_mass(u0, t, p.mu);
    }
    rep.dilation_t1 = t;
    rep.e_u1 = energy(p, Vs, u1);
    rep.endpoints_below = rep.e_u1 <= rep.e_u0 && u1.grad_norm() > geom.t_mu &&
                          rep.e_u0 < 0.5 * sqr(p.mu) * rep.lambda1;
    if (!rep.passed()) {
        std::string which = !rep.slice_positive
                                ? "sphere-slice margin not positive"
                                : "endpoint inequalities failed";
        throw geometry_violated("check_mp_geometry: " + which +
                                " (mu too large or grid too coarse)");
    }
    return rep;
}

}  // namespace radnls
