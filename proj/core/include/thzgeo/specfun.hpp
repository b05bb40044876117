#pragma once

#include <complex>

#include "thzgeo/quadrature.hpp"

namespace thzgeo {

/// Generalized exponential integral E_n(x) = int_1^inf e^{-xt} t^{-n} dt.
/// Power series for x <= 1, modified Lentz continued fraction above.
/// Throws DomainError for n < 1 or x <= 0.
double exp_integral_en(int n, double x);

/// e^x * E_n(x). Finite for every x > 0, so it is the form to use when
/// E_n itself would underflow.
double exp_integral_en_scaled(int n, double x);

/// Upper incomplete gamma Gamma(2 - 2l, x) for integer l >= 1, through
/// Gamma(1 - n, x) = x^{1-n} E_n(x) with n = 2l - 1.
/// Throws DomainError for l < 1, x <= 0 or when the result overflows.
double upper_inc_gamma_2m2l(int l, double x);

/// Upper incomplete gamma Gamma(a, x) for a = 1 - n with integer n >= 0,
/// i.e. any non-positive integer first argument. Same route as above.
double upper_inc_gamma_nonpos(int a, double x);

/// Largest |z| accepted by parabolic_cylinder_dneg.
inline constexpr double kPcfMaxAbsArg = 40.0;

/// Parabolic cylinder function D_{-nu}(z), nu > 0, from
///   D_{-nu}(z) = e^{-z^2/4} / Gamma(nu) * int_0^inf t^{nu-1} e^{-t^2/2 - z t} dt
/// evaluated in log-scaled form by adaptive quadrature.
/// Throws DomainError for nu <= 0, |z| > kPcfMaxAbsArg or when the result
/// would overflow a double.
double parabolic_cylinder_dneg(double nu, double z, const QuadratureSpec& quad = {});

/// log D_{-nu}(z); never overflows. Same domain as parabolic_cylinder_dneg.
double log_parabolic_cylinder_dneg(double nu, double z, const QuadratureSpec& quad = {});

/// Closed form D_{-nu}(0) = sqrt(pi) / (2^{b/2 + 1/4} Gamma(3/4 + b/2)),
/// b = nu - 1/2.
double parabolic_cylinder_dneg_at_zero(double nu);

/// Z(tau, alpha) = (2 tau / (alpha - 2)) 2F1(1, 1 - 2/alpha; 2 - 2/alpha; -tau),
/// evaluated as tau^{2/alpha} int_{tau^{-2/alpha}}^inf du / (1 + u^{alpha/2}).
/// Throws DomainError for tau <= 0 or alpha <= 2.
double hypergeom_z(double tau, double alpha, const QuadratureSpec& quad = {});

/// Plain Gauss series for 2F1(a, b; c; z) with |z| < 1. Used as a check.
double hypergeom_2f1_series(double a, double b, double c, double z);

/// Sine integral Si(x) = int_0^x sin(t)/t dt.
double sine_integral(double x);

/// Euler gamma. Throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

/// Principal branch W0 of the Lambert W function for complex argument.
std::complex<double> lambert_w0(std::complex<double> z);

}  // namespace thzgeo
