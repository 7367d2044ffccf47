#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "radnls/field.hpp"
#include "radnls/potential.hpp"

namespace radnls {

/// Parameters of E_rho on the mass sphere: N, exponent q in the
/// mass-supercritical window, continuation weight rho, prescribed mass mu.
struct EnergyParams {
    int N = 2;
    double q = 6.0;
    double rho = 1.0;
    double mu = 1.0;

    void validate() const {
        if (N < 2) throw invalid_parameter("EnergyParams: N must be >= 2");
        if (!(N * (q - 2.0) - 4.0 > 0))
            throw window_violation("q must exceed 2 + 4/N (mass-supercritical window), got q = " +
                                   std::to_string(q) + " at N = " + std::to_string(N));
        if (N >= 3 && !(q < 2.0 * N / (N - 2.0)))
            throw window_violation("q must stay below 2N/(N-2)");
        if (!(rho >= 0.5 && rho <= 1.0))
            throw invalid_parameter("rho must lie in [1/2, 1]");
        if (!(mu > 0)) throw invalid_parameter("mu must be positive");
    }
};

/// Apply the discrete -Laplacian stencil; entries outside the operator rows
/// (Dirichlet boundary nodes) are returned as 0.
inline std::vector<double> apply_neg_laplacian(const RadialGrid& g, std::span<const double> u) {
    g.check_size(u.size());
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = g.row_begin(); i < g.row_end(); ++i) {
        double s = g.lap_diag(i) * u[i] + g.lap_super(i) * u[i + 1];
        if (i > 0) s += g.lap_sub(i) * u[i - 1];
        out[i] = s;
    }
    return out;
}

inline double energy(const EnergyParams& p, const RadialField& V_samples, const RadialField& u) {
    u.check_same_grid(V_samples);
    const RadialGrid& g = *u.grid;
    double pot = 0;
    for (std::size_t i = 0; i < u.size(); ++i) pot += g.weight(i) * V_samples[i] * u[i] * u[i];
    return 0.5 * u.grad_norm2() + 0.5 * pot - (p.rho / p.q) * u.norm_pow(p.q);
}

inline double energy(const EnergyParams& p, const Potential& V, const RadialField& u) {
    return energy(p, V.sample_on(u.grid), u);
}

/// Exact gradient of energy() with respect to the node values, i.e. the field
/// -Lap u + V u - rho |u|^{q-2} u multiplied by the quadrature weights.
/// Entries at Dirichlet boundary nodes are 0 (those values are pinned).
inline std::vector<double> energy_gradient(const EnergyParams& p, const RadialField& V_samples,
                                           const RadialField& u) {
    u.check_same_grid(V_samples);
    const RadialGrid& g = *u.grid;
    std::vector<double> grad = apply_neg_laplacian(g, u.v);
    for (std::size_t i = g.row_begin(); i < g.row_end(); ++i) {
        grad[i] += V_samples[i] * u[i] - p.rho * std::pow(std::abs(u[i]), p.q - 2.0) * u[i];
        grad[i] *= g.weight(i);
    }
    return grad;
}

/// Nodewise residual of -u'' - (N-1)/r u' + V u + lambda u - rho |u|^{q-2} u.
/// At r = 0 the singular term uses the N u''(0) limit; at Dirichlet boundary
/// nodes the residual is the boundary defect u itself.
inline RadialField pde_residual(const EnergyParams& p, const RadialField& V_samples,
                                const RadialField& u, double lambda) {
    u.check_same_grid(V_samples);
    const RadialGrid& g = *u.grid;
    RadialField res(u.grid);
    std::vector<double> lap = apply_neg_laplacian(g, u.v);
    for (std::size_t i = g.row_begin(); i < g.row_end(); ++i)
        res[i] = lap[i] + (V_samples[i] + lambda) * u[i] -
                 p.rho * std::pow(std::abs(u[i]), p.q - 2.0) * u[i];
    res[g.size() - 1] = u[g.size() - 1];
    if (g.dim() == 1) res[0] = u[0];
    return res;
}

inline RadialField pde_residual(const EnergyParams& p, const Potential& V, const RadialField& u,
                                double lambda) {
    return pde_residual(p, V.sample_on(u.grid), u, lambda);
}

/// lambda = (rho ||u||_q^q - ||grad u||_2^2 - int V u^2) / ||u||_2^2,
/// the weak form of the equation tested against u itself.
inline double lagrange_multiplier(const EnergyParams& p, const RadialField& V_samples,
                                  const RadialField& u) {
    u.check_same_grid(V_samples);
    const RadialGrid& g = *u.grid;
    const double m2 = u.mass2();
    if (m2 <= 0) throw zero_mass_error("lagrange_multiplier: zero-mass input");
    double pot = 0;
    for (std::size_t i = 0; i < u.size(); ++i) pot += g.weight(i) * V_samples[i] * u[i] * u[i];
    return (p.rho * u.norm_pow(p.q) - u.grad_norm2() - pot) / m2;
}

inline double lagrange_multiplier(const EnergyParams& p, const Potential& V, const RadialField& u) {
    return lagrange_multiplier(p, V.sample_on(u.grid), u);
}

}  // namespace radnls
