#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "radnls/field.hpp"

namespace radnls {

// Bounded radial potentials with the spectral metadata the solver needs:
// essinf V and the essential-spectrum floor lambda_ess(V).  For potentials
// with a limit at infinity the floor equals that limit; potentials without
// one must carry a user-supplied value.

struct GaussianWell {
    double depth;  // V0 > 0
    double sigma;
    double operator()(double r) const { return -depth * std::exp(-r * r / (sigma * sigma)); }
};

struct SquareWell {
    double depth;
    double radius;
    double operator()(double r) const { return std::abs(r) < radius ? -depth : 0.0; }
};

struct Constant {
    double c;
    double operator()(double) const { return c; }
};

struct Tabulated {
    std::vector<double> r, V;  // r strictly increasing; linear interpolation,
                               // constant extrapolation beyond the last sample
    double operator()(double x) const {
        if (x <= r.front()) return V.front();
        if (x >= r.back()) return V.back();
        auto it = std::upper_bound(r.begin(), r.end(), x);
        const std::size_t j = it - r.begin();
        const double t = (x - r[j - 1]) / (r[j] - r[j - 1]);
        return (1 - t) * V[j - 1] + t * V[j];
    }
};

class Potential {
public:
    static Potential gaussian_well(double depth, double sigma) {
        if (!(depth > 0) || !(sigma > 0))
            throw invalid_parameter("gaussian_well: depth and sigma must be positive");
        Potential p;
        p.terms_.push_back(GaussianWell{depth, sigma});
        p.ess_inf_ = -depth;
        p.floor_ = 0.0;
        p.has_limit_ = true;
        return p;
    }
    static Potential square_well(double depth, double radius) {
        if (!(depth > 0) || !(radius > 0))
            throw invalid_parameter("square_well: depth and radius must be positive");
        Potential p;
        p.terms_.push_back(SquareWell{depth, radius});
        p.ess_inf_ = -depth;
        p.floor_ = 0.0;
        p.has_limit_ = true;
        return p;
    }
    static Potential constant(double c) {
        Potential p;
        p.terms_.push_back(Constant{c});
        p.ess_inf_ = c;
        p.floor_ = c;
        p.has_limit_ = true;
        return p;
    }
    static Potential tabulated(std::vector<double> r, std::vector<double> V,
                               double tail_tol = 1e-9) {
        if (r.size() != V.size() || r.size() < 2)
            throw invalid_parameter("tabulated potential: need matching r/V samples");
        for (std::size_t i = 1; i < r.size(); ++i)
            if (!(r[i] > r[i - 1]))
                throw invalid_parameter("tabulated potential: radii must increase");
        Potential p;
        Tabulated t{std::move(r), std::move(V)};
        p.ess_inf_ = *std::min_element(t.V.begin(), t.V.end());
        // tail variation over the last 10% of the samples decides whether a
        // limit at infinity is credible
        const std::size_t n = t.V.size();
        const std::size_t k = std::max<std::size_t>(2, n / 10);
        double lo = t.V[n - 1], hi = t.V[n - 1];
        for (std::size_t i = n - k; i < n; ++i) {
            lo = std::min(lo, t.V[i]);
            hi = std::max(hi, t.V[i]);
        }
        p.has_limit_ = (hi - lo) <= tail_tol;
        p.floor_ = p.has_limit_ ? t.V[n - 1] : std::numeric_limits<double>::quiet_NaN();
        p.terms_.push_back(std::move(t));
        return p;
    }

    double operator()(double r) const { return evaluate(r); }
    double evaluate(double r) const {
        if (r < 0) throw invalid_parameter("potential evaluated at negative radius");
        double s = offset_;
        for (const auto& t : terms_)
            s += std::visit([&](const auto& f) { return f(r); }, t);
        return s;
    }

    /// essinf V; exact for the closed-form kinds, sample minimum for sums.
    double ess_inf() const { return ess_inf_ + offset_; }

    bool has_limit_at_infinity() const { return has_limit_ || manual_floor_.has_value(); }

    /// lambda_ess(V): the tail limit when one exists, else the user override.
    double essential_spectrum_floor() const {
        if (manual_floor_) return *manual_floor_ + offset_;
        if (!has_limit_)
            throw no_limit_detected(
                "potential has no detectable limit at infinity; supply lambda_ess manually");
        return floor_ + offset_;
    }

    /// V_bar - lambda_ess(V), shift-invariant; must be <= 0 for admissibility.
    double gap() const { return ess_inf() - essential_spectrum_floor(); }

    /// Caller-supplied essential-spectrum floor (before any shift).
    void set_essential_spectrum_floor(double v) { manual_floor_ = v; }

    Potential shifted(double d) const {
        Potential p = *this;
        p.offset_ += d;
        return p;
    }

    /// Pointwise sum; metadata falls back to dense sampling for essinf.
    Potential operator+(const Potential& other) const {
        Potential p;
        p.terms_ = terms_;
        p.terms_.insert(p.terms_.end(), other.terms_.begin(), other.terms_.end());
        p.offset_ = offset_ + other.offset_;
        p.has_limit_ = has_limit_ && other.has_limit_;
        p.floor_ = p.has_limit_ ? floor_ + other.floor_ : std::numeric_limits<double>::quiet_NaN();
        // dense scan for essinf of the sum (refined around the minimum);
        // ess_inf_ is stored offset-free
        double best = std::numeric_limits<double>::infinity();
        double best_r = 0;
        const double span = 4 * scan_radius() + 4 * other.scan_radius() + 1;
        const int m = 20000;
        for (int i = 0; i <= m; ++i) {
            const double r = span * i / m;
            double v = 0;
            for (const auto& t : p.terms_)
                v += std::visit([&](const auto& f) { return f(r); }, t);
            if (v < best) {
                best = v;
                best_r = r;
            }
        }
        for (double h = span / m; h > 1e-14 * span; h /= 3) {
            for (int s : {-1, 0, 1}) {
                const double r = std::max(0.0, best_r + s * h);
                double v = 0;
                for (const auto& t : p.terms_)
                    v += std::visit([&](const auto& f) { return f(r); }, t);
                if (v < best) {
                    best = v;
                    best_r = r;
                }
            }
        }
        p.ess_inf_ = best;
        return p;
    }

    double sup_abs(double r_max, int samples = 4096) const {
        double m = 0;
        for (int i = 0; i <= samples; ++i) m = std::max(m, std::abs(evaluate(r_max * i / samples)));
        return m;
    }

    RadialField sample_on(const GridPtr& g) const {
        RadialField f(g);
        for (std::size_t i = 0; i < g->size(); ++i) f.v[i] = evaluate(std::abs(g->node(i)));
        return f;
    }

    /// Canonical text form, also used as the record's potential id.
    std::string describe() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            if (!first) os << " + ";
            first = false;
            std::visit(
                [&](const auto& f) {
                    using T = std::decay_t<decltype(f)>;
                    if constexpr (std::is_same_v<T, GaussianWell>)
                        os << "gaussian_well(" << f.depth << "," << f.sigma << ")";
                    else if constexpr (std::is_same_v<T, SquareWell>)
                        os << "square_well(" << f.depth << "," << f.radius << ")";
                    else if constexpr (std::is_same_v<T, Constant>)
                        os << "constant(" << f.c << ")";
                    else
                        os << "tabulated[" << f.r.size() << "]";
                },
                t);
        }
        if (offset_ != 0) os << (offset_ > 0 ? " + " : " - ") << "constant(" << std::abs(offset_) << ")";
        if (first) os << "zero";
        return os.str();
    }

private:
    Potential() = default;
    double scan_radius() const {
        double r = 1;
        for (const auto& t : terms_)
            std::visit(
                [&](const auto& f) {
                    using T = std::decay_t<decltype(f)>;
                    if constexpr (std::is_same_v<T, GaussianWell>) r = std::max(r, 6 * f.sigma);
                    else if constexpr (std::is_same_v<T, SquareWell>) r = std::max(r, f.radius);
                    else if constexpr (std::is_same_v<T, Tabulated>) r = std::max(r, f.r.back());
                },
                t);
        return r;
    }

    using Term = std::variant<GaussianWell, SquareWell, Constant, Tabulated>;
    std::vector<Term> terms_;
    double offset_ = 0;  // accumulated shift, kept separate so gap() is exact
    double ess_inf_ = 0;
    double floor_ = 0;
    bool has_limit_ = false;
    std::optional<double> manual_floor_;
};

inline Potential shift(const Potential& V, double d) { return V.shifted(d); }

}  // namespace radnls
