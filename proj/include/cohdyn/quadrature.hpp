// quadrature.hpp: adaptive panel-subdivided Gauss-Legendre integration
//
// The bath coefficient integrals mix an exponential cutoff (scale Lambda)
// with an oscillation sin(omega*t) (scale 1/t). The caller picks an initial
// panel width that resolves both; panels that still miss their error share
// are bisected recursively.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cohdyn/errors.hpp"

namespace cohdyn::quad {

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

struct GlNode {
    double x; // abscissa in [-1, 1]
    double w;
};

/// Gauss-Legendre nodes and weights of order n, computed by Newton iteration
/// on the Legendre polynomial (roots from the Chebyshev initial guess).
inline std::vector<GlNode> compute_gauss_legendre(int n) {
    std::vector<GlNode> nodes(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // recurrence for P_n(x) and its derivative
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[static_cast<std::size_t>(i)] = {-x, w};
        nodes[static_cast<std::size_t>(n - 1 - i)] = {x, w};
    }
    return nodes;
}

inline const std::vector<GlNode>& gl_rule(int n) {
    static const std::vector<GlNode> rule6 = compute_gauss_legendre(6);
    static const std::vector<GlNode> rule12 = compute_gauss_legendre(12);
    switch (n) {
        case 6: return rule6;
        case 12: return rule12;
        default: throw ParameterError("gl_rule: unsupported order");
    }
}

template <class F>
double gl_panel(const F& f, double a, double b, const std::vector<GlNode>& rule) {
    const double mid = 0.5 * (a + b);
    const double halfw = 0.5 * (b - a);
    double sum = 0.0;
    for (const auto& node : rule) sum += node.w * f(mid + halfw * node.x);
    return halfw * sum;
}

namespace detail {

template <class F>
void adapt_panel(const F& f, double a, double b, double local_tol, int depth,
                 const std::vector<GlNode>& hi, const std::vector<GlNode>& lo,
                 Result& out) {
    const double coarse = gl_panel(f, a, b, lo);
    const double fine = gl_panel(f, a, b, hi);
    out.evaluations += hi.size() + lo.size();
    const double err = std::abs(fine - coarse);
    if (err <= local_tol || depth >= 24) {
        out.value += fine;
        out.error_estimate += err;
        if (err > local_tol) out.converged = false;
        return;
    }
    const double mid = 0.5 * (a + b);
    adapt_panel(f, a, mid, 0.5 * local_tol, depth + 1, hi, lo, out);
    adapt_panel(f, mid, b, 0.5 * local_tol, depth + 1, hi, lo, out);
}

} // namespace detail

/// Integrate f over [a, b] with uniform initial panels no wider than
/// max_panel_width, refining panels until each meets its share of the
/// tolerance budget. The Gauss order pair (12 vs 6) supplies the per-panel
/// error estimate.
template <class F>
Result integrate(const F& f, double a, double b, double max_panel_width,
                 Tolerance tol = {}) {
    Result out;
    if (!(b > a)) return out;
    if (!(max_panel_width > 0.0))
        throw ParameterError("quad::integrate: panel width must be positive");

    const auto& hi = gl_rule(12);
    const auto& lo = gl_rule(6);

    const auto n_panels =
        static_cast<std::size_t>(std::ceil((b - a) / max_panel_width));
    const double width = (b - a) / static_cast<double>(n_panels);

    // First sweep to estimate the integral's magnitude, so the relative
    // part of the tolerance can be distributed over panels.
    std::vector<double> coarse_values(n_panels);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < n_panels; ++i) {
        const double pa = a + width * static_cast<double>(i);
        coarse_values[i] = gl_panel(f, pa, pa + width, hi);
        out.evaluations += hi.size();
        magnitude += std::abs(coarse_values[i]);
    }
    const double budget = std::max(tol.abs_tol, tol.rel_tol * magnitude);
    const double local_tol = budget / static_cast<double>(n_panels);

    for (std::size_t i = 0; i < n_panels; ++i) {
        const double pa = a + width * static_cast<double>(i);
        detail::adapt_panel(f, pa, pa + width, local_tol, 0, hi, lo, out);
    }
    return out;
}

} // namespace cohdyn::quad
