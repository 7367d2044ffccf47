#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "radnls/common.hpp"

namespace radnls {

// Dense-free linear algebra for the radial operators: every matrix in this
// project is tridiagonal, so eigenvalues come from Sturm-sequence bisection
// and eigenvectors from shifted inverse iteration with deflation, and linear
// systems from LU with partial pivoting.

/// Symmetric tridiagonal matrix: diagonal d[0..n-1], off-diagonal e[0..n-2].
struct SymTridiag {
    std::vector<double> d, e;
    std::size_t size() const { return d.size(); }

    double norm_scale() const {
        double m = 0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            double row = std::abs(d[i]);
            if (i > 0) row += std::abs(e[i - 1]);
            if (i + 1 < d.size()) row += std::abs(e[i]);
            m = std::max(m, row);
        }
        return m;
    }

    /// Number of eigenvalues strictly below x (Sturm count via LDL^T signs).
    int count_below(double x) const {
        const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
        int count = 0;
        double p = d[0] - x;
        if (p < 0) ++count;
        for (std::size_t i = 1; i < d.size(); ++i) {
            if (std::abs(p) < tiny) p = -tiny;
            p = (d[i] - x) - e[i - 1] * e[i - 1] / p;
            if (p < 0) ++count;
        }
        return count;
    }

    void mult(const std::vector<double>& x, std::vector<double>& y) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            double s = d[i] * x[i];
            if (i > 0) s += e[i - 1] * x[i - 1];
            if (i + 1 < n) s += e[i] * x[i + 1];
            y[i] = s;
        }
    }
};

/// General tridiagonal matrix with rows (sub[i], diag[i], sup[i]).
struct Tridiag {
    std::vector<double> sub, diag, sup;
    std::size_t size() const { return diag.size(); }
};

/// Solve T x = b by LU with partial pivoting (fill-in limited to one extra
/// superdiagonal). Throws convergence_failure on an exactly singular pivot.
inline std::vector<double> solve_tridiag(Tridiag T, std::vector<double> b) {
    const std::size_t n = T.size();
    std::vector<double> extra(n, 0.0);  // second superdiagonal created by pivoting
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (std::abs(T.sub[k + 1]) > std::abs(T.diag[k])) {
            std::swap(T.diag[k], T.sub[k + 1]);
            std::swap(T.sup[k], T.diag[k + 1]);
            std::swap(extra[k], T.sup[k + 1]);
            std::swap(b[k], b[k + 1]);
        }
        if (T.diag[k] == 0.0) throw convergence_failure("singular tridiagonal system");
        const double m = T.sub[k + 1] / T.diag[k];
        T.diag[k + 1] -= m * T.sup[k];
        T.sup[k + 1] -= m * extra[k];
        b[k + 1] -= m * b[k];
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        if (i + 1 < n) s -= T.sup[i] * x[i + 1];
        if (i + 2 < n) s -= extra[i] * x[i + 2];
        if (T.diag[i] == 0.0) throw convergence_failure("singular tridiagonal system");
        x[i] = s / T.diag[i];
    }
    return x;
}

struct EigenPair {
    double value;
    std::vector<double> vector;  // unit Euclidean norm
};

namespace detail {

inline void normalize(std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
}

inline void orthogonalize(std::vector<double>& v, const std::vector<EigenPair>& prev,
                          std::size_t upto) {
    for (std::size_t k = 0; k < upto; ++k) {
        double dot = 0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * prev[k].vector[i];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * prev[k].vector[i];
    }
}

}  // namespace detail

/// k smallest eigenvalues (ascending) with eigenvectors. Bisection isolates
/// each eigenvalue; inverse iteration with deflation recovers vectors, and
/// members of a cluster are reorthogonalized.
inline std::vector<EigenPair> lowest_eigenpairs(const SymTridiag& T, int k,
                                                double residual_tol = 1e-9) {
    const std::size_t n = T.size();
    if (k < 1 || std::size_t(k) > n) throw invalid_parameter("lowest_eigenpairs: bad k");
    const double scale = T.norm_scale();

    // Gershgorin bounds
    double lo = T.d[0], hi = T.d[0];
    for (std::size_t i = 0; i < n; ++i) {
        double r = (i > 0 ? std::abs(T.e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(T.e[i]) : 0.0);
        lo = std::min(lo, T.d[i] - r);
        hi = std::max(hi, T.d[i] + r);
    }

    std::vector<EigenPair> out;
    out.reserve(k);
    double cluster_floor = lo;
    for (int j = 0; j < k; ++j) {
        double a = cluster_floor, b = hi;
        // smallest x with count_below(x) >= j+1
        for (int it = 0; it < 120 && (b - a) > 1e-15 * scale; ++it) {
            const double m = 0.5 * (a + b);
            if (T.count_below(m) >= j + 1) b = m;
            else a = m;
        }
        const double nu = 0.5 * (a + b);

        // inverse iteration at a slightly displaced shift
        Tridiag A;
        A.diag = T.d;
        A.sub.assign(n, 0.0);
        A.sup.assign(n, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) A.sub[i + 1] = A.sup[i] = T.e[i];
        const double shift = nu + 1e-11 * scale;
        for (std::size_t i = 0; i < n; ++i) A.diag[i] -= shift;

        std::vector<double> v(n);
        std::uint64_t state = 0x9e3779b97f4a7c15ull + 0x100001b3ull * (j + 1);
        for (std::size_t i = 0; i < n; ++i) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            v[i] = double(state >> 11) * (1.0 / 9007199254740992.0) - 0.5;
        }
        detail::normalize(v);
        const bool clustered = j > 0 && std::abs(nu - out.back().value) < 1e-8 * scale;
        std::vector<double> w(n);
        double resid = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 40; ++it) {
            v = solve_tridiag(A, v);
            if (clustered || j > 0) detail::orthogonalize(v, out, j);
            detail::normalize(v);
            T.mult(v, w);
            resid = 0;
            for (std::size_t i = 0; i < n; ++i) resid += sqr(w[i] - nu * v[i]);
            resid = std::sqrt(resid);
            if (resid <= residual_tol * std::max(1.0, scale) * 1e-3 || resid <= residual_tol)
                break;
        }
        if (!(resid <= residual_tol * std::max(1.0, scale)))
            throw convergence_failure("inverse iteration failed to reach requested residual");
        // Rayleigh-quotient polish of the eigenvalue
        T.mult(v, w);
        double rq = 0;
        for (std::size_t i = 0; i < n; ++i) rq += v[i] * w[i];
        out.push_back({rq, std::move(v)});
        cluster_floor = std::max(lo, nu - 1e-9 * scale);
    }
    return out;
}

/// Eigenvalues only, via bisection (no vectors).
inline std::vector<double> lowest_eigenvalues(const SymTridiag& T, int k) {
    const std::size_t n = T.size();
    const double scale = T.norm_scale();
    double lo = T.d[0], hi = T.d[0];
    for (std::size_t i = 0; i < n; ++i) {
        double r = (i > 0 ? std::abs(T.e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(T.e[i]) : 0.0);
        lo = std::min(lo, T.d[i] - r);
        hi = std::max(hi, T.d[i] + r);
    }
    std::vector<double> out;
    for (int j = 0; j < k; ++j) {
        double a = lo, b = hi;
        for (int it = 0; it < 120 && (b - a) > 1e-15 * scale; ++it) {
            const double m = 0.5 * (a + b);
            if (T.count_below(m) >= j + 1) b = m;
            else a = m;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

}  // namespace radnls
