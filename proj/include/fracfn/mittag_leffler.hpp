#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "fracfn/errors.hpp"
#include "fracfn/eval_result.hpp"
#include "fracfn/quadrature.hpp"
#include "fracfn/special.hpp"

namespace fracfn {

using cplx = std::complex<double>;

// Order and second parameter of E_{alpha,beta}.
class MLParams {
public:
    MLParams(double alpha, cplx beta = 1.0) : alpha_(alpha), beta_(beta)
    {
        require_finite(alpha, "MLParams: alpha");
        if (!(alpha > 0.0)) throw DomainError("MLParams: alpha must be positive, got " + std::to_string(alpha));
        if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) throw DomainError("MLParams: beta must be finite");
    }

    double alpha() const { return alpha_; }
    cplx beta() const { return beta_; }
    bool real_beta() const { return beta_.imag() == 0.0; }

private:
    double alpha_;
    cplx beta_;
};

inline constexpr int ml_series_max_terms = 6000;

// |z| up to which the plain power series is used for E_alpha with this order.
inline double ml_series_radius(double alpha) { return std::max(5.0, std::pow(13.0, alpha)); }

inline ComplexEvalResult ml_series(const MLParams& p, cplx z, double tol = default_tolerance())
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("ml_series: z must be finite");
    const double a = p.alpha();
    const cplx b = p.beta();
    if (z == 0.0) return {p.real_beta() ? cplx(reciprocal_gamma(b.real())) : reciprocal_gamma(b), 0.0, Method::series};

    const double logz = std::log(std::abs(z));
    const double argz = std::arg(z);
    const bool real_z = z.imag() == 0.0;

    cplx sum = 0.0, zn = 1.0;
    double abs_sum = 0.0, prev_mag = std::numeric_limits<double>::infinity();
    bool decreasing_run = false;
    for (int n = 0; n < ml_series_max_terms; ++n) {
        cplx term;
        const double gam_arg = a * n + b.real();
        if (!p.real_beta()) {
            term = zn * reciprocal_gamma(a * n + b);
        } else if (n * logz < 600.0 && gam_arg < 170.0) {
            term = zn * reciprocal_gamma(gam_arg);
        } else if (detail::is_nonpositive_integer(gam_arg)) {
            term = 0.0;
        } else {
            const auto lg = log_gamma_signed(gam_arg);
            const double mag = std::exp(n * logz - lg.log_abs);
            if (real_z)
                term = (z.real() < 0 && n % 2) ? -mag * lg.sign : mag * lg.sign;
            else
                term = std::polar(mag * lg.sign, n * argz);
        }
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
            throw SeriesDivergence("ml_series: terms overflow at n = " + std::to_string(n));
        sum += term;
        const double mag = std::abs(term);
        abs_sum += mag;
        if (n * logz < 600.0) zn *= z;

        // Once the term magnitudes have been shrinking for a while the ratio bounds the tail.
        if (n > 2 && mag <= prev_mag) {
            const double ratio = prev_mag > 0 ? mag / prev_mag : 0.0;
            if (decreasing_run && ratio < 0.9) {
                const double tail = mag * ratio / (1.0 - ratio);
                if (tail <= std::min(0.1 * tol, 1e-17 * std::max(1.0, std::abs(sum)))) {
                    const double rounding = 4 * std::numeric_limits<double>::epsilon() * abs_sum;
                    return {sum, tail + rounding, Method::series};
                }
            }
            decreasing_run = true;
        } else if (mag > prev_mag) {
            decreasing_run = false;
        }
        prev_mag = mag;
    }
    throw SeriesDivergence("ml_series: no convergence within " + std::to_string(ml_series_max_terms) + " terms");
}

inline double spectral_K(double alpha, double r)
{
    require_finite(alpha, "spectral_K: alpha");
    require_finite(r, "spectral_K: r");
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0)
        throw DomainError("spectral_K: alpha must lie in (0,2) without 1");
    if (!(r > 0.0)) throw DomainError("spectral_K: r must be positive");
    const double ra = std::pow(r, alpha);
    return std::pow(r, alpha - 1.0) * detail::sin_pi(alpha) / std::numbers::pi /
           (ra * ra + 2.0 * ra * detail::cos_pi(alpha) + 1.0);
}

namespace detail {

// Monotone spectral part of E_alpha(-x) (derivative = false) or of
// E_{alpha,alpha}(-x) (derivative = true), written after r^alpha = w / t^alpha
// so that the exponential factor becomes exp(-w^{1/alpha}).
inline QuadResult ml_spectral_part(double alpha, double x, bool derivative, double tol)
{
    const double ia = 1.0 / alpha;
    const double c = cos_pi(alpha);
    const double pref = sin_pi(alpha) / (alpha * std::numbers::pi);
    QuadResult q;
    const double qtol = tol / std::max(std::abs(pref), 1e-300);
    if (!derivative && x < 1.0) {
        // the mass sits at w ~ x; rescale w = x u so it is visible to the quadrature
        auto scaled = [=](double u) { return std::exp(-std::pow(x * u, ia)) / (u * u + 2.0 * u * c + 1.0); };
        q = integrate_semi_infinite(scaled, Decay::algebraic(2.0), qtol);
    } else {
        auto integrand = [=](double w) {
            const double e = std::exp(-std::pow(w, ia));
            const double denom = w * w + 2.0 * w * x * c + x * x;
            return derivative ? std::pow(w, ia) * e / denom : x * e / denom;
        };
        // For small |sin(alpha pi)| the kernel peaks near w = x; start the panels there.
        q = integrate_semi_infinite(integrand, Decay::exponential(std::clamp(x, 0.25, 4.0)), qtol);
    }
    q.value *= pref;
    q.abs_err *= std::abs(pref);
    return q;
}

// Oscillatory part for 1 < alpha < 2 at t = x^{1/alpha}.
inline double ml_oscillatory_part(double alpha, double x, bool derivative)
{
    const double t = std::pow(x, 1.0 / alpha);
    const double c = std::cos(std::numbers::pi / alpha), s = std::sin(std::numbers::pi / alpha);
    const double amp = 2.0 / alpha * std::exp(t * c);
    if (!derivative) return amp * std::cos(t * s);
    // t^{alpha-1} E_{alpha,alpha}(-t^alpha) = -(d/dt) E_alpha(-t^alpha); convert back by t^{1-alpha}
    return -amp * std::cos(t * s + std::numbers::pi / alpha) * std::pow(t, 1.0 - alpha);
}

inline EvalResult ml_neg_spectral_impl(double alpha, double x, bool derivative, double tol)
{
    auto q = ml_spectral_part(alpha, x, derivative, tol);
    double value = q.value;
    if (alpha > 1.0) value += ml_oscillatory_part(alpha, x, derivative);
    return {value, q.abs_err, Method::spectral_integral};
}

inline bool spectral_applies(double alpha, cplx beta, cplx z)
{
    if (z.imag() != 0.0 || !(z.real() < 0.0) || beta.imag() != 0.0) return false;
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) return false;
    return beta.real() == 1.0 || beta.real() == alpha;
}

inline ComplexEvalResult ml_asymptotic(double alpha, cplx beta, double z)
{
    cplx sum = 0.0;
    double zk = 1.0;
    for (int k = 1; k <= 3; ++k) {
        zk /= z;
        sum -= zk * reciprocal_gamma(beta - alpha * k);
    }
    const double next = std::abs(zk / z * reciprocal_gamma(beta - alpha * 4.0));
    return {sum, next + 4 * std::numeric_limits<double>::epsilon() * std::abs(sum), Method::asymptotic};
}

inline ComplexEvalResult ml_closed_form(double alpha, double beta, cplx z)
{
    if (alpha == 1.0) {
        if (beta == 1.0) return {std::exp(z), 4e-16 * std::abs(std::exp(z)), Method::closed_form};
        if (z == 0.0) return {1.0, 0.0, Method::closed_form};
        const cplx v = (std::abs(z) < 1e-5) ? 1.0 + z / 2.0 + z * z / 6.0 : (std::exp(z) - 1.0) / z;
        return {v, 4e-16 * std::max(1.0, std::abs(v)), Method::closed_form};
    }
    const cplx root = std::sqrt(z);
    if (beta == 1.0) {
        const cplx v = std::cosh(root);
        return {v, 4e-16 * std::max(1.0, std::abs(v)), Method::closed_form};
    }
    const cplx v = (std::abs(root) < 1e-5) ? 1.0 + z / 6.0 : std::sinh(root) / root;
    return {v, 4e-16 * std::max(1.0, std::abs(v)), Method::closed_form};
}

} // namespace detail

// E_alpha(-t^alpha) through the Laplace integral of the spectral kernel, 0 < alpha < 1.
inline EvalResult ml_neg_spectral(double alpha, double t, double tol = default_tolerance())
{
    require_finite(alpha, "ml_neg_spectral: alpha");
    require_finite(t, "ml_neg_spectral: t");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ml_neg_spectral: alpha must lie in (0,1)");
    if (!(t > 0.0)) throw DomainError("ml_neg_spectral: t must be positive");
    return detail::ml_neg_spectral_impl(alpha, std::pow(t, alpha), false, tol);
}

inline ComplexEvalResult ml_eval(const MLParams& p, cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("ml_eval: z must be finite");
    const double a = p.alpha();
    const cplx b = p.beta();
    const double tol = default_tolerance();

    if ((a == 1.0 || a == 2.0) && p.real_beta() && (b.real() == 1.0 || b.real() == 2.0))
        return detail::ml_closed_form(a, b.real(), z);

    const double radius = ml_series_radius(a);
    if (detail::spectral_applies(a, b, z)) {
        const double x = -z.real();
        const auto spec = detail::ml_neg_spectral_impl(a, x, b.real() != 1.0, 0.1 * tol);
        ComplexEvalResult out{spec.value, spec.abs_err, Method::spectral_integral};
        if (x <= radius) {
            try {
                const auto ser = ml_series(p, z, 0.1 * tol);
                if (ser.abs_err < 1e-9) out.abs_err = std::max(out.abs_err, std::abs(ser.value.real() - spec.value));
            } catch (const NumericalError&) {
            }
        }
        return out;
    }

    const bool nonneg_real = z.imag() == 0.0 && z.real() >= 0.0;
    if (std::abs(z) <= radius || nonneg_real) return ml_series(p, z, tol);
    if (z.imag() == 0.0 && z.real() < -50.0) return detail::ml_asymptotic(a, b, z.real());
    throw UnsupportedRegime("ml_eval: no evaluation regime for alpha = " + std::to_string(a) +
                            ", |z| = " + std::to_string(std::abs(z)));
}

inline EvalResult ml_eval(double alpha, double beta, double x)
{
    return real_part(ml_eval(MLParams(alpha, beta), cplx(x, 0.0)));
}

namespace detail {

inline void check_causal(double t, double lambda, const char* fn)
{
    require_finite(t, fn);
    require_finite(lambda, fn);
    if (t < 0.0) throw DomainError(std::string(fn) + ": t must be non-negative");
    if (!(lambda > 0.0)) throw DomainError(std::string(fn) + ": lambda must be positive");
}

} // namespace detail

// E_alpha(-lambda t^alpha)
inline EvalResult e_alpha(double t, double lambda, double alpha)
{
    detail::check_causal(t, lambda, "e_alpha");
    if (t == 0.0) return {1.0, 0.0, Method::closed_form};
    return ml_eval(alpha, 1.0, -lambda * std::pow(t, alpha));
}

// t^{beta-1} E_{alpha,beta}(-lambda t^alpha)
inline EvalResult e_alpha_beta(double t, double lambda, double alpha, double beta)
{
    detail::check_causal(t, lambda, "e_alpha_beta");
    if (t == 0.0) {
        if (beta == 1.0) return {reciprocal_gamma(beta), 0.0, Method::closed_form};
        if (beta > 1.0) return {0.0, 0.0, Method::closed_form};
        throw DomainError("e_alpha_beta: singular at t = 0 for beta < 1");
    }
    auto r = ml_eval(alpha, beta, -lambda * std::pow(t, alpha));
    const double scale = std::pow(t, beta - 1.0);
    return {r.value * scale, r.abs_err * scale, r.method};
}

// d/dt e_alpha = -lambda t^{alpha-1} E_{alpha,alpha}(-lambda t^alpha)
inline EvalResult e_alpha_prime(double t, double lambda, double alpha)
{
    detail::check_causal(t, lambda, "e_alpha_prime");
    if (t == 0.0) {
        if (alpha == 1.0) return {-lambda, 0.0, Method::closed_form};
        if (alpha > 1.0) return {0.0, 0.0, Method::closed_form};
        throw DomainError("e_alpha_prime: singular at t = 0 for alpha < 1");
    }
    auto r = ml_eval(alpha, alpha, -lambda * std::pow(t, alpha));
    const double scale = -lambda * std::pow(t, alpha - 1.0);
    return {r.value * scale, r.abs_err * std::abs(scale), r.method};
}

} // namespace fracfn
