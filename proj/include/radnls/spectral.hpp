#pragma once

#include <utility>
#include <vector>

#include "radnls/record.hpp"
#include "radnls/tridiag.hpp"

namespace radnls {

// Symmetric eigenproblems for radial Schrodinger operators -Lap + W with
// Dirichlet truncation.  The stencil is symmetrized by the grid's weight
// vector (a diagonal congruence), which turns it into a real symmetric
// tridiagonal problem on the coupled node block.

/// -Lap + diagonal_potential on the grid, Dirichlet at r_max (both ends in 1D).
struct LinearizedOperator {
    GridPtr grid;
    RadialField diagonal_potential;

    LinearizedOperator(GridPtr g, RadialField W) : grid(std::move(g)), diagonal_potential(std::move(W)) {
        grid->check_size(diagonal_potential.size());
        if (!grid->operator_supported())
            throw invalid_parameter("operator assembly unsupported on this grid "
                                    "(dimension > 3 or too strong grading)");
    }
};

/// Quadratic form density of Q_V^N (or Q_V^1) at a solution (u, lambda):
/// W = V + lambda - rho (q-1) |u|^{q-2}.
inline LinearizedOperator linearized_operator(const EnergyParams& p, const RadialField& V_samples,
                                              const RadialField& u, double lambda) {
    u.check_same_grid(V_samples);
    RadialField W(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        W[i] = V_samples[i] + lambda - p.rho * (p.q - 1.0) * std::pow(std::abs(u[i]), p.q - 2.0);
    return {u.grid, std::move(W)};
}

namespace detail {

/// Symmetric tridiagonal representation on nodes [coupled_begin, row_end).
inline SymTridiag assemble(const LinearizedOperator& op) {
    const RadialGrid& g = *op.grid;
    const std::size_t b = g.coupled_begin(), e = g.row_end();
    SymTridiag T;
    T.d.resize(e - b);
    T.e.resize(e - b - 1);
    for (std::size_t i = b; i < e; ++i) T.d[i - b] = g.lap_diag(i) + op.diagonal_potential[i];
    for (std::size_t i = b; i + 1 < e; ++i)
        T.e[i - b] = -std::sqrt(g.lap_super(i) * g.lap_sub(i + 1));
    return T;
}

/// Transform a symmetrized eigenvector back to node samples (L^2-normalized
/// against the grid quadrature), reconstructing slaved nodes from their rows.
inline RadialField to_field(const LinearizedOperator& op, const std::vector<double>& z,
                            double eigenvalue) {
    const RadialGrid& g = *op.grid;
    const std::size_t b = g.coupled_begin(), e = g.row_end();
    RadialField f(op.grid);
    for (std::size_t i = b; i < e; ++i) f[i] = z[i - b] / std::sqrt(g.weight(i));
    for (std::size_t i = b; i-- > g.row_begin();) {
        const double denom = g.lap_diag(i) + op.diagonal_potential[i] - eigenvalue;
        f[i] = denom != 0 ? -g.lap_super(i) * f[i + 1] / denom : f[i + 1];
    }
    // sign convention: nonnegative integral
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += g.weight(i) * f[i];
    if (s < 0)
        for (double& x : f.v) x = -x;
    return f;
}

}  // namespace detail

/// k smallest eigenvalues of the operator, ascending, with L^2-normalized
/// eigenfields; inverse-iteration residual <= 1e-9 (relative to the operator
/// scale) is enforced by the tridiagonal engine.
inline std::vector<std::pair<double, RadialField>> lowest_eigenpairs(const LinearizedOperator& op,
                                                                     int k) {
    const SymTridiag T = detail::assemble(op);
    if (k < 1 || std::size_t(k) > T.size() / 4)
        throw invalid_parameter("lowest_eigenpairs: require 1 <= k <= M/4");
    auto pairs = lowest_eigenpairs(T, k);
    std::vector<std::pair<double, RadialField>> out;
    out.reserve(pairs.size());
    for (auto& pr : pairs) out.emplace_back(pr.value, detail::to_field(op, pr.vector, pr.value));
    return out;
}

/// Number of eigenvalues strictly below `threshold`.
inline int count_below(const LinearizedOperator& op, double threshold) {
    return detail::assemble(op).count_below(threshold);
}

/// Number of eigenvalues of the form restricted to { phi : <u, phi>_2 = 0 }
/// lying strictly below `threshold`, via the inertia of the bordered matrix.
inline int count_below_restricted(const LinearizedOperator& op, const RadialField& u,
                                  double threshold) {
    const RadialGrid& g = *op.grid;
    SymTridiag T = detail::assemble(op);
    const std::size_t b = g.coupled_begin(), n = T.size();
    const double scale = T.norm_scale();
    // constraint vector in symmetrized coordinates
    std::vector<double> c(n);
    double cnorm = 0;
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = std::sqrt(g.weight(b + i)) * u[b + i];
        cnorm += c[i] * c[i];
    }
    if (cnorm == 0) return T.count_below(threshold);  // empty constraint

    for (int attempt = 0; attempt < 4; ++attempt) {
        const double x = threshold + attempt * 3e-13 * scale;
        Tridiag A;
        A.diag = T.d;
        for (double& v : A.diag) v -= x;
        A.sub.assign(n, 0.0);
        A.sup.assign(n, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) A.sub[i + 1] = A.sup[i] = T.e[i];
        try {
            const std::vector<double> y = solve_tridiag(std::move(A), c);
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += c[i] * y[i];
            return T.count_below(x) + (s > 0 ? 1 : 0) - 1;
        } catch (const convergence_failure&) {
            continue;  // shifted matrix exactly singular: nudge and retry
        }
    }
    throw convergence_failure("restricted inertia: shifted solves kept failing");
}

struct Lambda1Options {
    bool require_stable = true;
    double stability_tol = 1e-6;
};

/// Smallest eigenvalue of -Lap + V on radial functions (Dirichlet truncation).
/// When required, the value must be stable under doubling r_max at fixed
/// spacing, certifying that the truncated domain already resolves it.
inline double lambda1(const Potential& V, const GridPtr& grid, Lambda1Options opts = {}) {
    if (grid->dim() < 2) throw invalid_parameter("lambda1: grid dimension must be >= 2");
    LinearizedOperator op(grid, V.sample_on(grid));
    const double v1 = lowest_eigenvalues(detail::assemble(op), 1)[0];
    if (opts.require_stable) {
        GridPtr big = RadialGrid::build(grid->dim(), 2 * grid->r_max(), 2 * grid->resolution(),
                                        grid->spacing(), grid->grade_ratio());
        LinearizedOperator op2(big, V.sample_on(big));
        const double v2 = lowest_eigenvalues(detail::assemble(op2), 1)[0];
        if (std::abs(v1 - v2) > opts.stability_tol)
            throw truncation_unstable("lambda1 moved by " + std::to_string(std::abs(v1 - v2)) +
                                      " under r_max doubling; enlarge the domain");
    }
    return v1;
}

/// Lowest eigenpair of -Lap + V (the lambda_1 eigenfunction, mass-normalized
/// to 1, nonnegative sign convention).
inline std::pair<double, RadialField> ground_mode(const Potential& V, const GridPtr& grid) {
    LinearizedOperator op(grid, V.sample_on(grid));
    auto pairs = lowest_eigenpairs(op, 1);
    return std::move(pairs[0]);
}

/// Morse data of the linearized operator at a solution record.  Strictly
/// negative means below -index_tol where index_tol = tol_factor * operator
/// scale; an eigenvalue inside (-index_tol, index_tol) sets `ambiguous`.
inline MorseReport morse_index(const EnergyParams& p, const RadialField& V_samples,
                               const SolutionRecord& rec, double tol_factor = 1e-6) {
    LinearizedOperator op = linearized_operator(p, V_samples, rec.u, rec.lambda);
    const SymTridiag T = detail::assemble(op);
    MorseReport m;
    m.index_tol = tol_factor * T.norm_scale();
    m.free_index = T.count_below(-m.index_tol);
    m.ambiguous = T.count_below(m.index_tol) > m.free_index;
    m.restricted_index = count_below_restricted(op, rec.u, -m.index_tol);
    m.smallest_eigenvalue = lowest_eigenvalues(T, 1)[0];
    return m;
}

inline MorseReport morse_index(const EnergyParams& p, const Potential& V,
                               const SolutionRecord& rec, double tol_factor = 1e-6) {
    return morse_index(p, V.sample_on(rec.u.grid), rec, tol_factor);
}

}  // namespace radnls
