#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "fracfn/errors.hpp"
#include "fracfn/eval_result.hpp"
#include "fracfn/mittag_leffler.hpp"
#include "fracfn/quadrature.hpp"
#include "fracfn/special.hpp"
#include "fracfn/wright.hpp"

namespace fracfn {

// Feller parameters: index alpha in (0, 2], skewness |theta| <= min(alpha, 2 - alpha).
class StableParams {
public:
    StableParams(double alpha, double theta) : alpha_(alpha), theta_(theta)
    {
        require_finite(alpha, "StableParams: alpha");
        require_finite(theta, "StableParams: theta");
        if (!(alpha > 0.0 && alpha <= 2.0))
            throw DomainError("StableParams: alpha must lie in (0, 2], got " + std::to_string(alpha));
        const double bound = std::min(alpha, 2.0 - alpha);
        if (std::abs(theta) > bound + diamond_slack)
            throw DiamondViolation("StableParams: |theta| = " + std::to_string(std::abs(theta)) + " exceeds min(alpha, 2 - alpha) = " +
                                   std::to_string(bound));
        // 2 - alpha rounds; values this close to an edge sit on it
        if (std::abs(std::abs(theta) - bound) <= diamond_slack) theta_ = std::copysign(bound, theta);
    }

    static constexpr double diamond_slack = 1e-12;

    double alpha() const { return alpha_; }
    double theta() const { return theta_; }
    StableParams mirrored() const { return {alpha_, -theta_}; }
    bool extremal() const { return alpha_ != 1.0 && alpha_ != 2.0 && std::abs(theta_) == std::min(alpha_, 2.0 - alpha_); }
    // alpha = 1, theta = +-1: the law is a point mass
    bool singular() const { return alpha_ == 1.0 && std::abs(theta_) == 1.0; }

private:
    double alpha_, theta_;
};

namespace detail {

struct FellerSum {
    double value, abs_err, abs_sum, max_term;
};

// sum_{n>=1} (-y)^n Gamma(1 + n a) / n! sin(pi n q), in precision T
template <class T>
FellerSum feller_sum(double a, double y, double q, double tol)
{
    using std::abs, std::exp, std::log;
    const T ta(a), ty(y), tq(q);
    const T logy = log(ty);
    const double eps = static_cast<double>(std::numeric_limits<T>::epsilon());
    T sum = 0;
    double abs_sum = 0.0, max_term = 0.0, prev_env = -1.0, rounding = 0.0;
    for (int n = 1; n < wright_max_terms; ++n) {
        const T lg_num = boost::math::lgamma(1 + n * ta), lg_den = boost::math::lgamma(T(n + 1));
        const T log_env = n * logy + lg_num - lg_den;
        const T env = exp(log_env);
        T term = env * boost::math::sin_pi(n * tq);
        if (n % 2) term = -term;
        sum += term;
        const double mag = static_cast<double>(abs(term));
        if (!std::isfinite(mag)) throw OutOfRange("stable_series: terms overflow");
        abs_sum += mag;
        max_term = std::max(max_term, mag);
        // exp of a large log carries the log's absolute rounding as relative error
        rounding += mag * (4.0 + static_cast<double>(abs(n * logy) + abs(lg_num) + abs(lg_den)));
        const double e = static_cast<double>(env);
        if (prev_env > 0.0 && n > 2) {
            const double ratio = e / prev_env;
            if (ratio < 0.99) {
                const double tail = e * ratio / (1.0 - ratio);
                const double s = static_cast<double>(abs(sum));
                if (tail <= std::min(1e-3 * tol, 0.1 * eps * s) || tail < 1e-300)
                    return {static_cast<double>(sum), tail + eps * rounding, abs_sum, max_term};
            }
        }
        prev_env = e;
    }
    throw NonConvergence("stable_series: term budget exhausted");
}

// The expansion that does not converge at x (powers of x^-alpha for alpha > 1,
// powers of x for alpha < 1) is asymptotic there; it is cut at its smallest term.
inline EvalResult feller_asymptotic(const StableParams& p, double x, double tol)
{
    const double a = p.alpha(), th = p.theta();
    const bool inverse_powers = a > 1.0;
    const double coef = inverse_powers ? a : 1.0 / a;
    const double logy = inverse_powers ? -a * std::log(x) : std::log(x);
    const double q = inverse_powers ? 0.5 * (th - a) : 0.5 * (th - a) / a;
    double sum = 0.0, prev_env = INFINITY, err = INFINITY;
    for (int n = 1; n < wright_max_terms; ++n) {
        const double env = std::exp(n * logy + std::lgamma(1.0 + n * coef) - std::lgamma(n + 1.0));
        if (env >= prev_env) break;
        if (env < 1e-17 * std::abs(sum)) {
            err = env;
            break;
        }
        sum += (n % 2 ? -env : env) * sin_pi(n * q);
        prev_env = env;
        err = env;
    }
    const double scale = 1.0 / (std::numbers::pi * x);
    const double v = scale * sum, e = scale * err + 8 * std::numeric_limits<double>::epsilon() * std::abs(v);
    if (!(e <= tol * std::abs(v)))
        throw OutOfRange("stable_pdf: x = " + std::to_string(x) + " lies between the reach of the series and of the asymptotic expansion");
    return {v, e, Method::asymptotic};
}

inline double stable_at_origin(const StableParams& p)
{
    const double a = p.alpha();
    return std::exp(std::lgamma(1.0 + 1.0 / a)) * std::cos(std::numbers::pi * p.theta() / (2.0 * a)) / std::numbers::pi;
}

} // namespace detail

// Feller's convergent expansions: powers of x^-alpha for alpha < 1, powers of x
// for alpha > 1. At alpha = 1 both are geometric, one inside |x| < 1 and the
// other outside.
inline EvalResult stable_series(const StableParams& p, double x, double tol = default_tolerance())
{
    require_finite(x, "stable_series: x");
    detail::check_tol(tol);
    if (p.singular()) throw SingularCase("stable_series: alpha = 1, |theta| = 1 is a point mass", -p.theta());
    if (x < 0.0) return stable_series(p.mirrored(), -x, tol);
    const double a = p.alpha(), th = p.theta();
    if (x == 0.0) return {detail::stable_at_origin(p), 0.0, Method::closed_form};

    bool inverse_powers = a < 1.0;
    if (a == 1.0) {
        if (x == 1.0) throw OutOfRange("stable_series: at alpha = 1 neither expansion converges at |x| = 1");
        inverse_powers = x > 1.0;
    }
    const double coef = inverse_powers ? a : 1.0 / a;
    const double y = inverse_powers ? std::pow(x, -a) : x;
    const double q = inverse_powers ? 0.5 * (th - a) : 0.5 * (th - a) / a;
    const double scale = 1.0 / (std::numbers::pi * x);

    const auto d = detail::feller_sum<double>(coef, y, q, tol);
    if (std::isfinite(d.value) && d.max_term <= cancellation_ratio * std::abs(d.value) && detail::accurate(scale * d.abs_err, scale * std::abs(d.value), tol))
        return {scale * d.value, scale * d.abs_err, Method::series};
    if (!(d.abs_sum <= detail::wide_abs_sum_limit))
        throw OutOfRange("stable_series: x = " + std::to_string(x) + " is beyond the reach of the series");
    const auto w = detail::feller_sum<detail::wide>(coef, y, q, tol);
    const double v = scale * w.value;
    const double err = scale * w.abs_err + std::numeric_limits<double>::epsilon() * std::abs(v);
    if (!std::isfinite(v) || !detail::accurate(err, std::abs(v), tol))
        throw OutOfRange("stable_series: x = " + std::to_string(x) + " is beyond the reach of the series");
    return {v, err, Method::series};
}

// Extremal densities through the M-Wright function: the unilateral branch
// L_alpha^{-alpha} for alpha < 1, the bilateral branch L_alpha^{alpha-2} for alpha > 1.
inline double extremal_from_mwright(double alpha, double x)
{
    require_finite(alpha, "extremal_from_mwright: alpha");
    require_finite(x, "extremal_from_mwright: x");
    if (alpha == 1.0) throw DomainError("extremal_from_mwright: alpha = 1 is the singular limit M_1(x) = delta(x - 1)");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("extremal_from_mwright: alpha must lie in (0, 2]");
    if (alpha < 1.0) {
        if (x <= 0.0) return 0.0;
        return alpha * std::pow(x, -alpha - 1.0) * m_eval(alpha, std::pow(x, -alpha)).value;
    }
    const double nu = 1.0 / alpha;
    if (x >= 0.0 || alpha == 2.0) return m_eval(nu, x).value / alpha;
    try {
        return m_nu(nu, x, 1e-12).value / alpha;
    } catch (const NumericalError&) {
        throw OutOfRange("extremal_from_mwright: heavy tail at x = " + std::to_string(x) + " is beyond the series");
    }
}

inline EvalResult stable_pdf(const StableParams& p, double x)
{
    require_finite(x, "stable_pdf: x");
    if (p.singular()) throw SingularCase("stable_pdf: alpha = 1, |theta| = 1 is a point mass", -p.theta());
    if (x < 0.0) return stable_pdf(p.mirrored(), -x);
    const double a = p.alpha(), th = p.theta(), pi = std::numbers::pi;
    const double eps = std::numeric_limits<double>::epsilon();
    if (a == 2.0) {
        const double v = std::exp(-0.25 * x * x) / (2.0 * std::sqrt(pi));
        return {v, 4 * eps * v, Method::closed_form};
    }
    if (a == 1.0) {
        const double c = detail::cos_pi(0.5 * th), s = detail::sin_pi(0.5 * th);
        const double v = c / (pi * ((x + s) * (x + s) + c * c));
        return {v, 8 * eps * v, Method::closed_form};
    }
    if (x == 0.0) return {detail::stable_at_origin(p), 0.0, Method::closed_form};
    if (p.extremal()) {
        EvalResult r{0.0, 0.0, Method::closed_form};
        if (a < 1.0) {
            if (th < 0.0) r = {extremal_from_mwright(a, x), 0.0, Method::series};
        } else {
            try {
                r = {extremal_from_mwright(a, th < 0.0 ? x : -x), 0.0, Method::series};
            } catch (const OutOfRange&) {
                return detail::feller_asymptotic(p, x, default_tolerance());
            }
        }
        r.abs_err = 1e-10 * std::max(1.0, std::abs(r.value));
        return r;
    }
    try {
        return detail::feller_asymptotic(p, x, default_tolerance());
    } catch (const OutOfRange&) {
        return stable_series(p, x);
    }
}

// Moment of order s of x^{mu-1} W_{-nu,mu}(-x) normalized to a pdf on x > 0.
inline double wright_pdf_moment(double nu, double mu, double s)
{
    require_finite(nu, "wright_pdf_moment: nu");
    require_finite(mu, "wright_pdf_moment: mu");
    require_finite(s, "wright_pdf_moment: s");
    if (!(nu > 0.0 && nu <= 1.0)) throw DomainError("wright_pdf_moment: nu must lie in (0, 1]");
    if (!(mu >= nu)) throw DomainError("wright_pdf_moment: mu must be at least nu");
    if (!(s > 0.0)) throw DomainError("wright_pdf_moment: s must be positive");
    return std::exp(std::lgamma(mu) + std::lgamma(s + 1.0) - std::lgamma(mu + nu * s));
}

inline double mwright_characteristic(double nu, double kappa)
{
    detail::check_nu(nu, "mwright_characteristic");
    require_finite(kappa, "mwright_characteristic: kappa");
    return ml_eval(2.0 * nu, 1.0, -kappa * kappa).value;
}

inline double mwright_sine_transform(double nu, double kappa)
{
    detail::check_nu(nu, "mwright_sine_transform");
    require_finite(kappa, "mwright_sine_transform: kappa");
    if (kappa == 0.0) return 0.0;
    return kappa * ml_eval(2.0 * nu, 1.0 + nu, -kappa * kappa).value;
}

// int_0^inf M_lambda(x; tau) M_mu(tau; t) dtau
inline QuadResult subordinate(double lambda, double mu, double x, double t, double tol = 1e-9)
{
    detail::check_nu(lambda, "subordinate");
    detail::check_nu(mu, "subordinate");
    require_finite(x, "subordinate: x");
    require_finite(t, "subordinate: t");
    if (!(x >= 0.0)) throw DomainError("subordinate: x must be non-negative");
    if (!(t > 0.0)) throw DomainError("subordinate: t must be positive");
    auto f = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        const double outer = m_self_similar(mu, tau, t);
        if (outer == 0.0) return 0.0;
        return m_self_similar(lambda, x, tau) * outer;
    };
    return integrate_semi_infinite(f, Decay::exponential(std::pow(t, mu)), tol);
}

enum class GreenVariant { diffusion, drift };

// Time-fractional diffusion (symmetric, diffusivity K) or drift (one-sided,
// unit speed) kernel of order beta.
class GreenFunction {
public:
    GreenFunction(double beta, double diffusivity = 1.0, GreenVariant variant = GreenVariant::diffusion)
        : beta_(beta), k_(diffusivity), variant_(variant)
    {
        require_finite(beta, "GreenFunction: beta");
        require_finite(diffusivity, "GreenFunction: diffusivity");
        if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("GreenFunction: beta must lie in (0, 1]");
        if (!(diffusivity > 0.0)) throw DomainError("GreenFunction: diffusivity must be positive");
    }

    double beta() const { return beta_; }
    double diffusivity() const { return k_; }
    GreenVariant variant() const { return variant_; }

    double operator()(double x, double t) const;

    double mean(double t) const
    {
        check_t(t);
        if (variant_ == GreenVariant::diffusion) return 0.0;
        return std::pow(t, beta_) / std::tgamma(1.0 + beta_);
    }

    double variance(double t) const
    {
        check_t(t);
        if (variant_ == GreenVariant::diffusion) return 2.0 * k_ * std::pow(t, beta_) / std::tgamma(1.0 + beta_);
        const double g1 = std::tgamma(1.0 + beta_);
        return std::pow(t, 2.0 * beta_) * (2.0 / std::tgamma(1.0 + 2.0 * beta_) - 1.0 / (g1 * g1));
    }

private:
    static void check_t(double t)
    {
        require_finite(t, "GreenFunction: t");
        if (!(t > 0.0)) throw DomainError("GreenFunction: t must be positive");
    }

    double beta_, k_;
    GreenVariant variant_;
};

inline double diffusion_green(const GreenFunction& g, double x, double t)
{
    if (g.variant() != GreenVariant::diffusion) throw DomainError("diffusion_green: needs the diffusion variant");
    require_finite(x, "diffusion_green: x");
    require_finite(t, "diffusion_green: t");
    if (!(t > 0.0)) throw DomainError("diffusion_green: t must be positive");
    const double c = std::sqrt(g.diffusivity()) * std::pow(t, 0.5 * g.beta());
    return m_eval(0.5 * g.beta(), std::abs(x) / c).value / (2.0 * c);
}

inline double drift_green(double beta, double x, double t)
{
    require_finite(beta, "drift_green: beta");
    require_finite(x, "drift_green: x");
    require_finite(t, "drift_green: t");
    if (!(t > 0.0)) throw DomainError("drift_green: t must be positive");
    if (beta == 1.0) throw SingularCase("drift_green: beta = 1 is the pulse delta(x - t)", t);
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("drift_green: beta must lie in (0, 1)");
    if (x < 0.0) return 0.0;
    return m_self_similar(beta, x, t);
}

inline double GreenFunction::operator()(double x, double t) const
{
    if (variant_ == GreenVariant::diffusion) return diffusion_green(*this, x, t);
    return drift_green(beta_, x, t);
}

} // namespace fracfn
