#pragma once

#include <string>

#include "radnls/energy.hpp"

namespace radnls {

enum class SolutionKind { local_min, mountain_pass, continuation };

inline const char* to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::local_min: return "local_min";
        case SolutionKind::mountain_pass: return "mountain_pass";
        default: return "continuation";
    }
}

/// Negative-direction counts of the linearized operator at a solution.
/// `free_index` counts the Dirichlet problem's strictly negative eigenvalues;
/// `restricted_index` the same for the form restricted to the discrete
/// tangent space { phi : <u, phi>_2 = 0 }.  `ambiguous` marks an eigenvalue
/// inside (-index_tol, index_tol).
struct MorseReport {
    int free_index = 0;
    int restricted_index = 0;
    bool ambiguous = false;
    double smallest_eigenvalue = 0;
    double index_tol = 0;
};

/// A converged solution with its diagnostics and provenance.
struct SolutionRecord {
    RadialField u;
    double lambda = 0;
    double energy = 0;
    double mass = 0;
    double grad_norm = 0;
    double residual_inf = 0;
    MorseReport morse;
    SolutionKind kind = SolutionKind::local_min;
    EnergyParams params;
    std::string potential_id;

    // solver bookkeeping
    int iterations = 0;
    double projected_grad_norm = 0;
    double mp_level = 0;           // c_rho estimate for mountain-pass records
    double multiplier_margin = 0;  // lambda + lambda_1(V), reported > 0
};

}  // namespace radnls
