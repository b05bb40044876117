#pragma once

// Adaptive Gauss-Kronrod integration, Gauss-Legendre rules and a
// Filon-type rule for integrands carrying a known complex exponential.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "thzgeo/errors.hpp"

namespace thzgeo {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;

    /// Throws DomainError unless both tolerances are positive and at least
    /// one subdivision is allowed.
    void validate() const;
};

template <class V>
struct QuadResult {
    V value{};
    double abs_error = 0.0;
    int subdivisions = 0;
    int evaluations = 0;
    bool converged = false;
};

namespace quad_detail {

inline double norm(double x) { return std::abs(x); }
inline double norm(const std::complex<double>& x) { return std::abs(x); }
inline double norm(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double scaled(double x, double w) { return x * w; }
inline std::complex<double> scaled(const std::complex<double>& x, double w) { return x * w; }
inline std::vector<double> scaled(std::vector<double> x, double w) {
    for (double& v : x) v *= w;
    return x;
}

inline void add_to(double& acc, double x, double w) { acc += w * x; }
inline void add_to(std::complex<double>& acc, const std::complex<double>& x, double w) {
    acc += w * x;
}
inline void add_to(std::vector<double>& acc, const std::vector<double>& x, double w) {
    if (acc.size() < x.size()) acc.resize(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += w * x[i];
}

inline double diff_norm(double a, double b) { return std::abs(a - b); }
inline double diff_norm(const std::complex<double>& a, const std::complex<double>& b) {
    return std::abs(a - b);
}
inline double diff_norm(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// QUADPACK qk15 abscissae and weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
    double a, b;
    V value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class V, class F>
Segment<V> kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    V fc = f(center);
    V kron = scaled(fc, kWgk[7]);
    V gauss = scaled(fc, kWg[3]);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        V f1 = f(center - dx);
        V f2 = f(center + dx);
        add_to(kron, f1, kWgk[j]);
        add_to(kron, f2, kWgk[j]);
        if (j % 2 == 1) {
            add_to(gauss, f1, kWg[j / 2]);
            add_to(gauss, f2, kWg[j / 2]);
        }
    }
    kron = scaled(kron, half);
    gauss = scaled(gauss, half);
    const double err = diff_norm(kron, gauss);
    return {a, b, std::move(kron), err};
}

}  // namespace quad_detail

/// Globally adaptive G7/K15 quadrature of f over the finite interval [a, b].
/// V may be double, std::complex<double> or std::vector<double> (the error
/// norm is then the max-norm over components). Never throws on
/// non-convergence; inspect QuadResult::converged.
template <class V, class F>
QuadResult<V> integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec) {
    using quad_detail::Segment;
    QuadResult<V> out;
    if (a == b) {
        out.value = quad_detail::scaled(f(a), 0.0);
        out.converged = true;
        return out;
    }
    std::priority_queue<Segment<V>> heap;
    heap.push(quad_detail::kronrod15<V>(f, a, b));
    out.evaluations = 15;
    int intervals = 1;

    auto totals = [&heap]() {
        // Sum over a copy; the heap is small.
        auto copy = heap;
        V total = copy.top().value;
        double err = copy.top().error;
        copy.pop();
        while (!copy.empty()) {
            quad_detail::add_to(total, copy.top().value, 1.0);
            err += copy.top().error;
            copy.pop();
        }
        return std::pair<V, double>{total, err};
    };

    V total = heap.top().value;
    double err = heap.top().error;
    while (err > std::max(spec.abs_tol, spec.rel_tol * quad_detail::norm(total)) &&
           intervals < spec.max_subdivisions) {
        Segment<V> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;  // interval cannot be split further in double precision
        }
        auto left = quad_detail::kronrod15<V>(f, worst.a, mid);
        auto right = quad_detail::kronrod15<V>(f, mid, worst.b);
        quad_detail::add_to(total, worst.value, -1.0);
        quad_detail::add_to(total, left.value, 1.0);
        quad_detail::add_to(total, right.value, 1.0);
        err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
        out.evaluations += 30;
        ++intervals;
        if (intervals % 64 == 0) std::tie(total, err) = totals();
    }
    std::tie(total, err) = totals();
    out.value = total;
    out.abs_error = err;
    out.subdivisions = intervals;
    out.converged = err <= std::max(spec.abs_tol, spec.rel_tol * quad_detail::norm(total));
    return out;
}

/// Adaptive quadrature over [a, inf) through x = a + t / (1 - t).
template <class V, class F>
QuadResult<V> integrate_to_infinity(F&& f, double a, const QuadratureSpec& spec) {
    auto mapped = [&f, a](double t) {
        const double one_minus = 1.0 - t;
        const double x = a + t / one_minus;
        return quad_detail::scaled(f(x), 1.0 / (one_minus * one_minus));
    };
    return integrate_adaptive<V>(mapped, 0.0, 1.0, spec);
}

/// Same as integrate_adaptive<double> but throws QuadratureError when the
/// tolerance was not reached.
template <class F>
double integrate_or_throw(F&& f, double a, double b, const QuadratureSpec& spec,
                          const char* what) {
    auto r = integrate_adaptive<double>(std::forward<F>(f), a, b, spec);
    if (!r.converged)
        throw QuadratureError(std::string(what) + ": quadrature did not converge", r.value,
                              r.abs_error);
    return r.value;
}

template <class F>
double integrate_to_infinity_or_throw(F&& f, double a, const QuadratureSpec& spec,
                                      const char* what) {
    auto r = integrate_to_infinity<double>(std::forward<F>(f), a, spec);
    if (!r.converged)
        throw QuadratureError(std::string(what) + ": quadrature did not converge", r.value,
                              r.abs_error);
    return r.value;
}

/// n-point Gauss-Legendre rule on [-1, 1]. Cached per n; thread-safe.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

/// Legendre expansion coefficients of a function sampled at the nodes of
/// the n-point Gauss-Legendre rule (n = g_nodes.size() = coeff.size()).
void legendre_coefficients(std::span<const std::complex<double>> g_nodes,
                           std::span<std::complex<double>> coeff);

/// Integral over [a, b] of sum_k coeff[k] P_k(x(z)) * exp(-i * omega * z),
/// x(z) mapping [a, b] onto [-1, 1]. `bessel_scratch` must hold at least
/// coeff.size() doubles.
std::complex<double> filon_from_coefficients(std::span<const std::complex<double>> coeff,
                                             double a, double b, double omega,
                                             std::span<double> bessel_scratch);

/// Integral over [a, b] of g(z) * exp(-i * omega * z) where g is sampled at
/// the n Gauss-Legendre nodes of the panel (g_nodes[k] = g(mid + half * x_k)).
/// g is projected onto Legendre polynomials and each mode is integrated
/// against the exponential exactly, so the panel may span many periods.
std::complex<double> filon_legendre_panel(std::span<const std::complex<double>> g_nodes,
                                          double a, double b, double omega);

/// Spherical Bessel function j_n(x) for x >= 0, accurate for large x.
double spherical_bessel_j(int n, double x);

/// j_0(x) ... j_{out.size()-1}(x) in one pass.
void spherical_bessel_sequence(double x, std::span<double> out);

}  // namespace thzgeo
