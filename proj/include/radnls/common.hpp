#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace radnls {

/// Base class for all errors thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_parameter : error {
    using error::error;
};
struct dimension_mismatch : error {
    using error::error;
};
struct zero_mass_error : error {
    using error::error;
};
struct no_limit_detected : error {
    using error::error;
};
struct convergence_failure : error {
    using error::error;
};
struct truncation_unstable : error {
    using error::error;
};
struct window_violation : error {
    using error::error;
};
struct positive_gap_error : error {
    using error::error;
};
struct geometry_violated : error {
    using error::error;
};
struct ascent_stall : error {
    using error::error;
};
struct method_disagreement : error {
    using error::error;
};
struct left_sigma_error : error {
    left_sigma_error(const std::string& what, int iter, double grad_norm)
        : error(what), iteration(iter), grad_norm_at_exit(grad_norm) {}
    int iteration;
    double grad_norm_at_exit;
};
struct path_collapse : error {
    using error::error;
};
struct newton_divergence : error {
    using error::error;
};
struct bracket_not_found : error {
    using error::error;
};
struct no_maxima_found : error {
    using error::error;
};
struct interval_out_of_range : error {
    using error::error;
};
struct far_set_empty : error {
    using error::error;
};
struct parse_error : error {
    using error::error;
};

inline constexpr double pi = 3.14159265358979323846;

/// Surface area of the unit sphere S^{N-1} in R^N (N >= 2).
inline double unit_sphere_area(int dim) {
    if (dim < 2) throw invalid_parameter("unit_sphere_area: dimension must be >= 2");
    // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)
    return 2.0 * std::pow(pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

inline double sqr(double x) { return x * x; }

}  // namespace radnls
