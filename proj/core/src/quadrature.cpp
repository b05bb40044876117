#include "thzgeo/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace thzgeo {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw DomainError("QuadratureSpec: tolerances must be strictly positive");
    if (max_subdivisions < 1)
        throw DomainError("QuadratureSpec: max_subdivisions must be at least 1");
}

namespace {

GaussLegendreRule build_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: n must be at least 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
    return *slot;
}

void spherical_bessel_sequence(double x, std::span<double> out) {
    const int count = static_cast<int>(out.size());
    if (count == 0) return;
    if (x < 0.0) throw DomainError("spherical_bessel_sequence: negative argument");
    if (x == 0.0) {
        out[0] = 1.0;
        for (int k = 1; k < count; ++k) out[k] = 0.0;
        return;
    }
    const int nmax = count - 1;
    if (x < 1e-3) {
        double lead = 1.0;
        const double x2 = x * x;
        for (int k = 0; k <= nmax; ++k) {
            if (k > 0) lead *= x / (2.0 * k + 1.0);
            out[k] = lead * (1.0 - x2 / (2.0 * (2.0 * k + 3.0)) +
                             x2 * x2 / (8.0 * (2.0 * k + 3.0) * (2.0 * k + 5.0)));
        }
        return;
    }
    const double j0 = std::sin(x) / x;
    const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    out[0] = j0;
    if (nmax == 0) return;

    // The closed form for j1 cancels badly below x = 1.
    if (x >= 1.0 && x > nmax) {
        out[1] = j1;
        for (int k = 1; k < nmax; ++k) out[k + 1] = (2.0 * k + 1.0) / x * out[k] - out[k - 1];
        return;
    }

    // Miller's downward recurrence, normalized against j0 or j1.
    const int start = nmax + 16 + static_cast<int>(std::sqrt(40.0 * (nmax + x)));
    double above = 0.0, cur = 1e-300;
    for (int k = start; k >= 1; --k) {
        const double below = (2.0 * k + 1.0) / x * cur - above;
        above = cur;
        cur = below;  // index k-1
        if (k - 1 <= nmax) out[k - 1] = cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            above *= 1e-250;
            for (int i = std::max(k - 1, 0); i <= nmax; ++i) out[i] *= 1e-250;
        }
    }
    const double norm = std::abs(j0) >= std::abs(j1) ? j0 / out[0] : j1 / out[1];
    for (int k = 0; k <= nmax; ++k) out[k] *= norm;
}

double spherical_bessel_j(int n, double x) {
    if (n < 0) throw DomainError("spherical_bessel_j: negative order");
    std::vector<double> seq(n + 1);
    spherical_bessel_sequence(x, seq);
    return seq[n];
}

void legendre_coefficients(std::span<const std::complex<double>> g_nodes,
                           std::span<std::complex<double>> coeff) {
    const int n = static_cast<int>(g_nodes.size());
    const auto& rule = gauss_legendre(n);
    for (int k = 0; k < n; ++k) coeff[k] = {0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double x = rule.nodes[i];
        const std::complex<double> wg = rule.weights[i] * g_nodes[i];
        double p0 = 1.0, p1 = x;
        coeff[0] += wg;
        if (n > 1) coeff[1] += x * wg;
        for (int k = 2; k < n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
            coeff[k] += p2 * wg;
        }
    }
    for (int k = 0; k < n; ++k) coeff[k] *= (k + 0.5);
}

std::complex<double> filon_from_coefficients(std::span<const std::complex<double>> coeff,
                                             double a, double b, double omega,
                                             std::span<double> bessel_scratch) {
    const int n = static_cast<int>(coeff.size());
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double theta = omega * half;
    auto jk = bessel_scratch.subspan(0, n);
    spherical_bessel_sequence(std::abs(theta), jk);
    // int_{-1}^{1} P_k(x) e^{-i theta x} dx = 2 (-i)^k j_k(theta)
    double re = 0.0, im = 0.0;
    for (int k = 0; k < n; ++k) {
        double j = jk[k];
        if (theta < 0.0 && (k % 2 == 1)) j = -j;
        const std::complex<double> t = coeff[k] * j;
        switch (k % 4) {
            case 0: re += t.real(); im += t.imag(); break;
            case 1: re += t.imag(); im -= t.real(); break;
            case 2: re -= t.real(); im -= t.imag(); break;
            default: re -= t.imag(); im += t.real(); break;
        }
    }
    return 2.0 * half * std::polar(1.0, -omega * mid) * std::complex<double>(re, im);
}

std::complex<double> filon_legendre_panel(std::span<const std::complex<double>> g_nodes,
                                          double a, double b, double omega) {
    const std::size_t n = g_nodes.size();
    std::vector<std::complex<double>> coeff(n);
    std::vector<double> scratch(n);
    legendre_coefficients(g_nodes, coeff);
    return filon_from_coefficients(coeff, a, b, omega, scratch);
}

}  // namespace thzgeo
