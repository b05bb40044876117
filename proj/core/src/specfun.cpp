#include "thzgeo/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace thzgeo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

void check_en_args(int n, double x, const char* who) {
    if (n < 1) throw DomainError(std::string(who) + ": order must be >= 1");
    if (!(x > 0.0)) throw DomainError(std::string(who) + ": argument must be > 0");
}

// Continued fraction for e^x E_n(x), x > 1.
double en_scaled_cf(int n, double x) {
    const double tiny = 1e-300;
    double b = x + n;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("exp_integral_en: continued fraction did not converge", kMaxIter,
                           0.0, ConvergenceError::Reason::term_limit);
}

// Power series for E_n(x), 0 < x <= 1.
double en_series(int n, double x) {
    const int nm1 = n - 1;
    double ans = nm1 != 0 ? 1.0 / nm1 : -std::log(x) - std::numbers::egamma;
    double fact = 1.0;
    for (int i = 1; i <= kMaxIter; ++i) {
        fact *= -x / i;
        double del;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -std::numbers::egamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(x) + psi);
        }
        ans += del;
        if (std::abs(del) < std::abs(ans) * kEps) return ans;
    }
    throw ConvergenceError("exp_integral_en: series did not converge", kMaxIter, 0.0,
                           ConvergenceError::Reason::term_limit);
}

}  // namespace

double exp_integral_en(int n, double x) {
    check_en_args(n, x, "exp_integral_en");
    if (x > 1.0) return std::exp(-x) * en_scaled_cf(n, x);
    return en_series(n, x);
}

double exp_integral_en_scaled(int n, double x) {
    check_en_args(n, x, "exp_integral_en_scaled");
    if (x > 1.0) return en_scaled_cf(n, x);
    return std::exp(x) * en_series(n, x);
}

double upper_inc_gamma_nonpos(int a, double x) {
    if (a > 0) throw DomainError("upper_inc_gamma_nonpos: first argument must be <= 0");
    if (!(x > 0.0)) throw DomainError("upper_inc_gamma_nonpos: argument must be > 0");
    const int n = 1 - a;
    // x^{1-n} E_n(x) = exp((1-n) ln x - x) * scaled E_n
    const double log_mag = (1.0 - n) * std::log(x) - x;
    const double value = std::exp(log_mag) * exp_integral_en_scaled(n, x);
    if (!std::isfinite(value))
        throw DomainError("upper_inc_gamma_nonpos: result overflows a double");
    return value;
}

double upper_inc_gamma_2m2l(int l, double x) {
    if (l < 1) throw DomainError("upper_inc_gamma_2m2l: l must be >= 1");
    return upper_inc_gamma_nonpos(2 - 2 * l, x);
}

double gamma_fn(double x) {
    if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
    if (x <= 0.0 && x == std::floor(x))
        throw DomainError("gamma_fn: pole at non-positive integer " + std::to_string(x));
    return std::tgamma(x);
}

double parabolic_cylinder_dneg_at_zero(double nu) {
    if (!(nu > 0.0)) throw DomainError("parabolic_cylinder_dneg_at_zero: nu must be > 0");
    const double b = nu - 0.5;
    return std::sqrt(std::numbers::pi) /
           (std::pow(2.0, b / 2.0 + 0.25) * gamma_fn(0.75 + b / 2.0));
}

double log_parabolic_cylinder_dneg(double nu, double z, const QuadratureSpec& quad) {
    if (!(nu > 0.0)) throw DomainError("parabolic_cylinder_dneg: nu must be > 0");
    if (!(std::abs(z) <= kPcfMaxAbsArg))
        throw DomainError("parabolic_cylinder_dneg: |z| outside the safe range [0, 40]");
    quad.validate();

    // Log of the full integrand including the prefactor; its maximum sits at
    // the root of (nu-1)/t - t - z = 0.
    const double log_pref = -0.25 * z * z - std::lgamma(nu);
    auto log_integrand = [nu, z, log_pref](double t) {
        return (nu - 1.0) * std::log(t) - 0.5 * t * t - z * t + log_pref;
    };
    const double disc = z * z + 4.0 * (nu - 1.0);
    const double t_peak = disc >= 0.0 ? std::max(0.0, 0.5 * (-z + std::sqrt(disc))) : 0.0;
    const double t_split = 1.0;
    const double t_ref = std::max(t_peak, t_split);
    const double log_scale = std::max(log_integrand(t_ref), log_integrand(t_split));

    // [0, 1]: t = u^{1/nu} removes the t^{nu-1} endpoint behaviour.
    auto near_zero = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double t = std::pow(u, 1.0 / nu);
        return std::exp(-0.5 * t * t - z * t + log_pref - log_scale) / nu;
    };
    auto body = [&](double t) { return std::exp(log_integrand(t) - log_scale); };

    QuadratureSpec inner = quad;
    inner.abs_tol = std::min(quad.abs_tol, 1e-15);
    double sum = integrate_or_throw(near_zero, 0.0, 1.0, inner, "parabolic_cylinder_dneg");
    if (t_peak > t_split)
        sum += integrate_or_throw(body, t_split, t_peak, inner, "parabolic_cylinder_dneg");
    sum += integrate_to_infinity_or_throw(body, t_ref, inner, "parabolic_cylinder_dneg");
    return std::log(sum) + log_scale;
}

double parabolic_cylinder_dneg(double nu, double z, const QuadratureSpec& quad) {
    const double log_value = log_parabolic_cylinder_dneg(nu, z, quad);
    if (log_value > 700.0)
        throw DomainError("parabolic_cylinder_dneg: result would overflow a double");
    return std::exp(log_value);
}

double hypergeom_z(double tau, double alpha, const QuadratureSpec& quad) {
    if (!(alpha > 2.0)) throw DomainError("hypergeom_z: alpha must be > 2");
    if (!(tau > 0.0)) throw DomainError("hypergeom_z: tau must be > 0");
    quad.validate();
    const double p = alpha / 2.0;
    const double lower = std::pow(tau, -2.0 / alpha);
    const double split = std::max(lower, 2.0);

    double sum = 0.0;
    if (lower < split) {
        auto f = [p](double u) { return 1.0 / (1.0 + std::pow(u, p)); };
        QuadratureSpec inner = quad;
        inner.abs_tol = std::min(quad.abs_tol, 1e-14);
        sum += integrate_or_throw(f, lower, split, inner, "hypergeom_z");
    }
    // Tail: 1/(1+u^p) = sum_k (-1)^k u^{-p(k+1)} for u > 1, integrated termwise.
    const double ratio = std::pow(split, -p);
    double tail = 0.0;
    double power = std::pow(split, 1.0 - p);
    for (int k = 0; k < kMaxIter; ++k) {
        const double term = power / (p * (k + 1) - 1.0);
        tail += (k % 2 == 0) ? term : -term;
        if (term < kEps * std::abs(tail)) break;
        power *= ratio;
    }
    sum += tail;
    return std::pow(tau, 2.0 / alpha) * sum;
}

double hypergeom_2f1_series(double a, double b, double c, double z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("hypergeom_2f1_series: requires |z| < 1");
    if (c <= 0.0 && c == std::floor(c))
        throw DomainError("hypergeom_2f1_series: c is a non-positive integer");
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 100000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum)) return sum;
    }
    throw ConvergenceError("hypergeom_2f1_series: no convergence", 100000, term,
                           ConvergenceError::Reason::term_limit);
}

double sine_integral(double x) {
    if (std::isnan(x)) throw DomainError("sine_integral: NaN argument");
    if (x < 0.0) return -sine_integral(-x);
    if (x == 0.0) return 0.0;
    if (x <= 2.0) {
        double sum = x, term = x;
        for (int k = 1; k < 100; ++k) {
            term *= -x * x / ((2.0 * k) * (2.0 * k + 1.0));
            const double add = term / (2.0 * k + 1.0);
            sum += add;
            if (std::abs(add) < kEps * std::abs(sum)) break;
        }
        return sum;
    }
    // Continued fraction for E_1(ix), modified Lentz.
    using C = std::complex<double>;
    C b(1.0, x);
    C c(1e300, 0.0);
    C d = 1.0 / b;
    C h = d;
    for (int i = 2; i <= kMaxIter; ++i) {
        const double a = -static_cast<double>(i - 1) * (i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const C del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    h *= C(std::cos(x), -std::sin(x));
    return std::numbers::pi / 2.0 + h.imag();
}

std::complex<double> lambert_w0(std::complex<double> z) {
    using C = std::complex<double>;
    if (z == C(0.0, 0.0)) return z;
    const double e = std::numbers::e;
    C w;
    const C branch = C(e, 0.0) * z + 1.0;
    if (std::abs(branch) < 1e-6) {
        // Halley's step divides by w + 1, which vanishes here.
        const C p = std::sqrt(2.0 * branch);
        return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))));
    }
    if (std::abs(branch) < 0.3) {
        const C p = std::sqrt(2.0 * branch);
        w = -1.0 + p - p * p / 3.0;
    } else {
        // Winitzki's approximation (log z - log log z is singular at z = 1).
        const C l = std::log(1.0 + z);
        w = l * (1.0 - std::log(1.0 + l) / (2.0 + l));
    }
    for (int iter = 0; iter < 100; ++iter) {
        const C ew = std::exp(w);
        const C f = w * ew - z;
        const C wp1 = w + 1.0;
        const C denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const C step = f / denom;
        w -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
    }
    return w;
}

}  // namespace thzgeo
