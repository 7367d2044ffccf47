#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "radnls/grid.hpp"

namespace radnls {

/// Real-valued samples of a radial function on the nodes of a RadialGrid.
struct RadialField {
    GridPtr grid;
    std::vector<double> v;

    RadialField() = default;
    RadialField(GridPtr g, std::vector<double> values) : grid(std::move(g)), v(std::move(values)) {
        grid->check_size(v.size());
    }
    explicit RadialField(GridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}

    template <class F>
    static RadialField sample(GridPtr g, F&& f) {
        RadialField u(g);
        for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] = f(g->node(i));
        return u;
    }

    std::size_t size() const { return v.size(); }
    double operator[](std::size_t i) const { return v[i]; }
    double& operator[](std::size_t i) { return v[i]; }
    std::span<const double> values() const { return v; }

    double mass2() const { return grid->integrate_pow(v, 2.0); }
    double mass() const { return std::sqrt(mass2()); }
    double grad_norm2() const { return grid->kinetic(v); }
    double grad_norm() const { return std::sqrt(grad_norm2()); }
    double norm_pow(double p) const { return grid->integrate_pow(v, p); }
    double max_abs() const {
        double m = 0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double min_value() const {
        double m = v.empty() ? 0.0 : v[0];
        for (double x : v) m = std::min(m, x);
        return m;
    }

    RadialField derivative() const { return {grid, grid->derivative(v)}; }

    /// Rescale in place so that the L^2 norm equals mu.
    void project_mass(double mu) {
        const double m = mass();
        if (m <= 0) throw zero_mass_error("cannot project a zero field to positive mass");
        const double s = mu / m;
        for (double& x : v) x *= s;
    }

    void take_abs() {
        for (double& x : v) x = std::abs(x);
    }

    void check_same_grid(const RadialField& other) const {
        if (grid.get() != other.grid.get() &&
            (grid->dim() != other.grid->dim() || grid->size() != other.grid->size() ||
             grid->r_max() != other.grid->r_max()))
            throw dimension_mismatch("fields live on different grids");
    }
};

inline double inner(const RadialField& a, const RadialField& b) {
    a.check_same_grid(b);
    return a.grid->inner(a.v, b.v);
}

/// Linear interpolation of samples at an arbitrary radius (constant beyond
/// the last node, even reflection below the first for N >= 2).
inline double interp(const RadialField& u, double r) {
    const auto& x = u.grid->nodes();
    if (u.grid->dim() >= 2 && r < 0) r = -r;
    if (r <= x.front()) return u.v.front();
    if (r >= x.back()) return u.v.back();
    auto it = std::upper_bound(x.begin(), x.end(), r);
    const std::size_t j = it - x.begin();
    const double t = (r - x[j - 1]) / (x[j] - x[j - 1]);
    return (1 - t) * u.v[j - 1] + t * u.v[j];
}

}  // namespace radnls
