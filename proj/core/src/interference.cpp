#include "thzgeo/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thzgeo/errors.hpp"
#include "thzgeo/specfun.hpp"

namespace thzgeo {

namespace {

constexpr Complex kJ{0.0, 1.0};

// Log-spaced grid for the rotated contours: y = e^v, v in [kVMin, kVMax].
constexpr double kVMin = -90.0;
constexpr double kVMax = 40.0;
constexpr double kVStep = 0.25;

Complex expm1c(Complex x) {
    if (std::abs(x) < 1e-3)
        return x * (1.0 + x / 2.0 * (1.0 + x / 3.0 * (1.0 + x / 4.0 * (1.0 + x / 5.0))));
    return std::exp(x) - 1.0;
}

// Distance ratio t with q(t) = p, continued analytically in p.
Complex t_of_p(Complex p, double kappa) {
    const Complex inv_sqrt = 1.0 / std::sqrt(p);
    const Complex a = 0.5 * kappa * std::exp(0.5 * kappa) * inv_sqrt;
    return std::exp(0.5 * kappa) * inv_sqrt * std::exp(-lambert_w0(a));
}

// t dt/dp up to sign: the density of the field in the p = q(t) variable.
Complex rho_of_p(Complex p, double kappa) {
    const Complex t = t_of_p(p, kappa);
    return t * t / (p * (2.0 + kappa * t));
}

}  // namespace

InterferenceShape::InterferenceShape(double kappa) : kappa_(kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("InterferenceShape: kappa = k_a r must be > 0");

    const double radius = kSeriesRadius;
    double power = 1.0;
    for (int l = 1; l <= 400; ++l) {
        const double coef = std::exp(std::log(exp_integral_en_scaled(2 * l - 1, l * kappa)) -
                                     std::lgamma(l + 1.0));
        coef_.push_back(coef);
        power *= radius;
        if (l > 8 && coef * power < 1e-18) break;
    }

    const int count = static_cast<int>(std::round((kVMax - kVMin) / kVStep)) + 1;
    grid_y_.resize(count);
    w_zero_.resize(count);
    w_one_.resize(count);
    for (int i = 0; i < count; ++i) {
        const double y = std::exp(kVMin + i * kVStep);
        grid_y_[i] = y;
        w_zero_[i] = kJ * rho_of_p(Complex(0.0, y), kappa) * (kVStep * y);
        w_one_[i] = kJ * rho_of_p(Complex(1.0, y), kappa) * (kVStep * y);
        at_one_ -= w_one_[i];
    }
}

double InterferenceShape::series_coefficient(int l) const {
    if (l < 1) throw DomainError("series_coefficient: l must be >= 1");
    if (l <= static_cast<int>(coef_.size())) return coef_[l - 1];
    return std::exp(std::log(exp_integral_en_scaled(2 * l - 1, l * kappa_)) -
                    std::lgamma(l + 1.0));
}

Complex InterferenceShape::lambda_series(Complex sigma, int terms) const {
    Complex sum{0.0, 0.0};
    Complex power{1.0, 0.0};
    for (int l = 1; l <= terms; ++l) {
        power *= -sigma;
        sum -= power * series_coefficient(l);
    }
    return sum;
}

Complex InterferenceShape::lambda_quadrature(Complex sigma, const QuadratureSpec& quad) const {
    if (sigma.real() < 0.0)
        throw DomainError("lambda_quadrature: requires Re(sigma) >= 0");
    const double kappa = kappa_;
    auto integrand = [sigma, kappa](double t) {
        const double q = std::exp(-kappa * (t - 1.0)) / (t * t);
        return -t * expm1c(-sigma * q);
    };
    const double mag = std::abs(sigma);
    double split = 1.0;
    if (mag > 1.0) split = t_of_p(Complex(1.0 / mag, 0.0), kappa).real();
    QuadratureSpec inner = quad;
    inner.abs_tol = std::min(quad.abs_tol, 1e-13);
    inner.max_subdivisions = std::max(quad.max_subdivisions, 4000);
    Complex total{0.0, 0.0};
    double err = 0.0;
    bool ok = true;
    if (split > 1.0) {
        auto head = integrate_adaptive<Complex>(integrand, 1.0, split, inner);
        total += head.value;
        err += head.abs_error;
        ok = ok && head.converged;
    }
    auto tail = integrate_to_infinity<Complex>(integrand, split, inner);
    total += tail.value;
    err += tail.abs_error;
    ok = ok && tail.converged;
    if (!ok)
        throw QuadratureError("lambda_quadrature: quadrature did not converge", std::abs(total),
                              err);
    return total;
}

RotatedParts InterferenceShape::rotated(double z) const {
    if (!(z > 0.0)) throw DomainError("rotated: z must be > 0");
    Complex along{0.0, 0.0}, osc{0.0, 0.0};
    const std::size_t count = grid_y_.size();
    for (std::size_t i = 0; i < count; ++i) {
        const double zy = z * grid_y_[i];
        if (zy > 745.0) {
            along += w_zero_[i];
            continue;
        }
        const double e = std::exp(-zy);
        along -= w_zero_[i] * std::expm1(-zy);
        osc += w_one_[i] * e;
    }
    return {along, at_one_, osc};
}

Complex InterferenceShape::lambda(Complex sigma) const {
    if (std::abs(sigma) <= kSeriesRadius)
        return lambda_series(sigma, static_cast<int>(coef_.size()));
    if (sigma.real() == 0.0) {
        const double z = -sigma.imag();
        const RotatedParts parts = rotated(std::abs(z));
        const Complex value =
            parts.along_zero + parts.at_one + std::polar(1.0, std::abs(z)) * parts.oscillating;
        return z > 0.0 ? value : std::conj(value);
    }
    return lambda_quadrature(sigma);
}

double InterferenceShape::mean_per_c() const { return exp_integral_en_scaled(1, kappa_); }

double InterferenceShape::variance_per_c() const {
    return exp_integral_en_scaled(3, 2.0 * kappa_);
}

void GilPelaezOptions::validate() const {
    if (!(omega_max > 0.0)) throw DomainError("GilPelaezOptions: omega_max must be > 0");
    if (!(cf_floor > 0.0)) throw DomainError("GilPelaezOptions: cf_floor must be > 0");
    if (panel_nodes < 4 || panel_nodes > 64)
        throw DomainError("GilPelaezOptions: panel_nodes must lie in [4, 64]");
    quadrature.validate();
    outer_quadrature.validate();
}

namespace {

// Rough Filon error: the size of the two highest Legendre coefficients.
double legendre_tail(std::span<const Complex> coeff, double half_width) {
    const std::size_t n = coeff.size();
    return 2.0 * half_width * (std::abs(coeff[n - 1]) + std::abs(coeff[n - 2]));
}

}  // namespace

InterferenceCdf interference_cdf(const InterferenceShape& shape, double c,
                                 std::span<const double> w_points,
                                 const GilPelaezOptions& opts) {
    opts.validate();
    if (!(c >= 0.0)) throw DomainError("interference_cdf: c must be >= 0");
    const std::size_t m = w_points.size();
    InterferenceCdf out;
    out.cdf.assign(m, 0.0);
    if (c == 0.0) {
        for (std::size_t i = 0; i < m; ++i) out.cdf[i] = w_points[i] > 0.0 ? 1.0 : 0.0;
        return out;
    }
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < m; ++i)
        if (w_points[i] > 0.0) active.push_back(i);
    if (active.empty()) return out;

    const int n = opts.panel_nodes;
    const auto& rule = gauss_legendre(n);
    std::vector<Complex> samples(n), coeff(n);
    std::vector<double> scratch(n);
    std::vector<Complex> acc(m, Complex{0.0, 0.0});
    std::vector<double> err(m, 0.0);

    const double two_c = 2.0 * c;
    const double mu = two_c * shape.mean_per_c();
    const double sd = std::sqrt(two_c * shape.variance_per_c());
    const double width = std::min(1.0, 4.0 / (mu + 5.0 * sd));

    // Upper bound on |CF(z')| for z' >= z from the contour parts.
    auto cf_bound = [&](const RotatedParts& parts) {
        return std::exp(-two_c * (parts.along_zero + parts.at_one).real() +
                        two_c * std::abs(parts.oscillating));
    };

    // Region 1: direct samples of (CF(z) - 1) / z on uniform panels.
    double z = 0.0;
    bool finished = false;
    while (true) {
        const double a = z, b = std::min(z + width, opts.omega_max);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int k = 0; k < n; ++k) {
            const double zk = mid + half * rule.nodes[k];
            const Complex log_cf = -two_c * shape.lambda(Complex(0.0, -zk));
            samples[k] = expm1c(log_cf) / zk;
        }
        legendre_coefficients(samples, coeff);
        const double tail = legendre_tail(coeff, half);
        for (std::size_t i : active) {
            acc[i] += filon_from_coefficients(coeff, a, b, w_points[i], scratch);
            err[i] += tail;
        }
        ++out.panels;
        z = b;
        if (z >= opts.omega_max) {
            out.truncated = true;
            finished = true;
            break;
        }
        const RotatedParts parts = shape.rotated(z);
        if (cf_bound(parts) < opts.cf_floor) {
            finished = true;
            break;
        }
        if (z >= 2.0 && two_c * std::abs(parts.oscillating) <= 1.5) break;
    }
    const double z_direct = z;
    for (std::size_t i : active) acc[i] -= Complex(0.0, sine_integral(z_direct * w_points[i]));

    // Region 2: CF = G0 * exp(beta e^{iz}) = sum_n G0 beta^n / n! e^{inz};
    // each term is smooth and is integrated at frequency w - n.
    std::vector<Complex> g0(n), beta(n);
    std::vector<double> zs(n);
    while (!finished) {
        const double a = z;
        double b = std::min(1.5 * z, opts.omega_max);
        while (true) {
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int k = 0; k < n; ++k) {
                zs[k] = mid + half * rule.nodes[k];
                const RotatedParts parts = shape.rotated(zs[k]);
                g0[k] = std::exp(-two_c * (parts.along_zero + parts.at_one));
                beta[k] = -two_c * parts.oscillating;
            }
            const double drop = std::abs(std::log(std::abs(g0[0]) + 1e-300) -
                                         std::log(std::abs(g0[n - 1]) + 1e-300));
            if (drop <= 12.0 || (b - a) < 1e-6 * a) break;
            b = a + 0.5 * (b - a);
        }
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double beta_max = 0.0, g0_max = 0.0;
        for (int k = 0; k < n; ++k) {
            beta_max = std::max(beta_max, std::abs(beta[k]));
            g0_max = std::max(g0_max, std::abs(g0[k]) / zs[k]);
        }
        std::vector<Complex> term(n);
        for (int k = 0; k < n; ++k) term[k] = g0[k] / zs[k];
        double bound = g0_max;
        for (int order = 0; order <= 80; ++order) {
            if (order > 0) {
                for (int k = 0; k < n; ++k) term[k] *= beta[k] / static_cast<double>(order);
                bound *= beta_max / order;
            }
            if (bound * (b - a) < 1e-17) break;
            legendre_coefficients(term, coeff);
            const double tail = legendre_tail(coeff, half);
            for (std::size_t i : active) {
                acc[i] += filon_from_coefficients(coeff, a, b, w_points[i] - order, scratch);
                err[i] += tail;
            }
        }
        (void)mid;
        ++out.panels;
        z = b;
        if (z >= opts.omega_max) {
            out.truncated = true;
            break;
        }
        if (cf_bound(shape.rotated(z)) < opts.cf_floor) break;
    }

    for (std::size_t i : active) {
        out.cdf[i] = 0.5 - acc[i].imag() / std::numbers::pi;
        out.error_estimate = std::max(out.error_estimate, err[i] / std::numbers::pi);
    }
    return out;
}

}  // namespace thzgeo
