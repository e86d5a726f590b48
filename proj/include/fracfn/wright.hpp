#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fracfn/errors.hpp"
#include "fracfn/eval_result.hpp"
#include "fracfn/quadrature.hpp"
#include "fracfn/special.hpp"

namespace fracfn {

using cplx = std::complex<double>;

enum class WrightKind { first, second };

class WrightParams {
public:
    WrightParams(double lambda, double mu) : lambda_(lambda), mu_(mu)
    {
        require_finite(lambda, "WrightParams: lambda");
        require_finite(mu, "WrightParams: mu");
        if (!(lambda > -1.0)) throw DomainError("WrightParams: lambda must exceed -1, got " + std::to_string(lambda));
    }

    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    WrightKind kind() const { return lambda_ >= 0.0 ? WrightKind::first : WrightKind::second; }

private:
    double lambda_, mu_;
};

inline constexpr int wright_max_terms = 20000;
inline constexpr double cancellation_ratio = 1e15;
inline constexpr double m_warning_nu = 0.95;

namespace detail {

// log of a smooth bound on |1/Gamma(x)|
inline double log_rgamma_bound(double x)
{
    if (x >= 0.5) return -std::lgamma(x);
    return std::lgamma(1.0 - x) - std::log(std::numbers::pi);
}

inline void check_nu(double nu, const char* fn)
{
    require_finite(nu, fn);
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError(std::string(fn) + ": nu must lie in (0, 1), got " + std::to_string(nu));
}

} // namespace detail

namespace detail {

using wide = boost::multiprecision::cpp_bin_float_50;

// sum|terms| beyond which even the wide pass cannot recover a useful value
inline constexpr double wide_abs_sum_limit = 1e38;

struct SeriesSum {
    cplx value;
    double abs_err, abs_sum, max_term;
};

// Power series of W_{lam,mu}(z) summed in precision T.
template <class T>
SeriesSum wright_sum(double lam, double mu, cplx z, double tol)
{
    constexpr bool is_double = std::is_same_v<T, double>;
    const double logz = std::log(std::abs(z)), argz = std::arg(z);
    const T zr(z.real()), zi(z.imag());
    T pr = 1, pim = 0, sr = 0, si = 0;  // p = z^n / n!
    double abs_sum = 0.0, max_term = 0.0, prev_env = std::numeric_limits<double>::infinity(), worst_log = 0.0;
    for (int n = 0; n < wright_max_terms; ++n) {
        if (n > 0) {
            const T next = (pr * zr - pim * zi) / n;
            pim = (pr * zi + pim * zr) / n;
            pr = next;
        }
        const double x = lam * n + mu;
        T tr = 0, ti = 0;
        if (is_nonpositive_integer(x)) {
        } else if constexpr (is_double) {
            if (n < 150 && std::abs(x) < 150.0) {
                const double rg = reciprocal_gamma(x);
                tr = pr * rg, ti = pim * rg;
            } else {
                const auto lg = log_gamma_signed(x);
                const double log_mag = n * logz - std::lgamma(n + 1.0) - lg.log_abs;
                worst_log = std::max(worst_log, std::abs(log_mag));
                const double mag = lg.sign * std::exp(log_mag);
                tr = mag * std::cos(n * argz), ti = mag * std::sin(n * argz);
            }
        } else {
            const T rg = 1 / boost::math::tgamma(T(lam) * n + T(mu));
            tr = pr * rg, ti = pim * rg;
        }
        sr += tr;
        si += ti;
        const double mag = static_cast<double>(sqrt(tr * tr + ti * ti));
        if (!std::isfinite(mag)) throw CancellationError("wright_series: terms overflow at n = " + std::to_string(n));
        abs_sum += mag;
        max_term = std::max(max_term, mag);

        const double env = std::exp(n * logz - std::lgamma(n + 1.0) + log_rgamma_bound(x));
        const double ratio = env / prev_env;
        prev_env = env;
        const double sum_mag = static_cast<double>(sqrt(sr * sr + si * si));
        const double eps = static_cast<double>(std::numeric_limits<T>::epsilon());
        if (n > 2 && ratio < 0.9) {
            const double tail = env * ratio / (1.0 - ratio);
            if (tail <= std::min(1e-3 * tol, 0.1 * eps * sum_mag) || tail < 1e-300) {
                const double err = tail + eps * (8.0 + worst_log) * abs_sum;
                return {cplx(static_cast<double>(sr), static_cast<double>(si)), err, abs_sum, max_term};
            }
        }
    }
    throw NonConvergence("wright_series: term budget exhausted");
}

inline bool accurate(double abs_err, double value_mag, double tol) { return abs_err <= tol * std::max(1.0, value_mag); }

} // namespace detail

// Summed in double; a 50-digit pass takes over when cancellation eats the
// double result, and CancellationError is raised when that is not enough either.
inline ComplexEvalResult wright_series(const WrightParams& p, cplx z, double tol = default_tolerance())
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("wright_series: z must be finite");
    detail::check_tol(tol);
    const double lam = p.lambda(), mu = p.mu();
    if (z == 0.0) return {cplx(reciprocal_gamma(mu)), 0.0, Method::series};

    const auto d = detail::wright_sum<double>(lam, mu, z, tol);
    if (d.max_term <= cancellation_ratio * std::abs(d.value) && detail::accurate(d.abs_err, std::abs(d.value), tol))
        return {d.value, d.abs_err, Method::series};
    if (d.abs_sum > detail::wide_abs_sum_limit)
        throw CancellationError("wright_series: largest term exceeds the result by more than 1e15");
    const auto w = detail::wright_sum<detail::wide>(lam, mu, z, tol);
    const double err = w.abs_err + std::numeric_limits<double>::epsilon() * std::abs(w.value);
    if (!detail::accurate(w.abs_err, std::abs(w.value), tol))
        throw CancellationError("wright_series: cancellation too severe at |z| = " + std::to_string(std::abs(z)));
    return {w.value, err, Method::series};
}

inline EvalResult wright_series(const WrightParams& p, double z, double tol = default_tolerance())
{
    return real_part(wright_series(p, cplx(z), tol));
}

namespace detail {

struct AuxSum {
    double value, abs_err, abs_sum;
};

// Reflection-formula series of M_nu (f_kind = false) or F_nu (f_kind = true):
// Gamma only ever sees positive arguments. T sets the working precision.
template <class T>
AuxSum aux_series(double nu, double z, bool f_kind, double tol)
{
    using std::abs, std::exp, std::log;
    const T v(nu), pi = boost::math::constants::pi<T>();
    if (z == 0.0) {
        if (f_kind) return {0.0, 0.0, 0.0};
        const double v0 = static_cast<double>(boost::math::tgamma(v) * boost::math::sin_pi(v) / pi);
        return {v0, 0.0, v0};
    }
    const T logz = log(T(abs(z)));
    const T eps = std::numeric_limits<T>::epsilon();
    T sum = 0, abs_sum = 0, prev_env = -1, power = 1;  // power = |z|^k / k!
    double worst_log = 0.0;
    for (int n = 1; n < wright_max_terms; ++n) {
        // M: (-z)^{n-1}/(n-1)! Gamma(nu n) sin(pi nu n)/pi ; F: -(-z)^n/n! Gamma(nu n + 1) sin(pi nu n)/pi
        const int k = f_kind ? n : n - 1;
        if (k > 0) power *= T(abs(z)) / k;
        const T g_arg = v * n + (f_kind ? 1 : 0);
        T env;
        if (!std::is_same_v<T, double> || (k < 150 && g_arg < 150)) {
            env = power * boost::math::tgamma(g_arg) / pi;
        } else {
            const T log_env = k * logz + boost::math::lgamma(g_arg) - boost::math::lgamma(T(k + 1)) - log(pi);
            worst_log = std::max(worst_log, std::abs(static_cast<double>(log_env)));
            env = exp(log_env);
        }
        T term = env * boost::math::sin_pi(v * n);
        if (z > 0 && k % 2) term = -term;
        if (f_kind) term = -term;
        sum += term;
        abs_sum += abs(term);
        if (prev_env > 0 && n > 2) {
            const T ratio = env / prev_env;
            if (ratio < 0.9) {
                const T tail = env * ratio / (1 - ratio);
                if (tail <= std::min<T>(1e-3 * tol, 2e-17 * abs(sum)) || tail < 1e-300) {
                    const T err = tail + eps * (8 + worst_log) * abs_sum;
                    return {static_cast<double>(sum), static_cast<double>(err), static_cast<double>(abs_sum)};
                }
            }
        }
        prev_env = env;
    }
    throw NonConvergence("m_nu: term budget exhausted");
}

// Double first, then 50 digits when cancellation eats the double result.
inline EvalResult aux_eval(double nu, double z, bool f_kind, double tol, const char* fn)
{
    check_nu(nu, fn);
    require_finite(z, fn);
    detail::check_tol(tol);
    const bool warn = nu > m_warning_nu;
    const auto d = aux_series<double>(nu, z, f_kind, tol);
    if (std::isfinite(d.value) && accurate(d.abs_err, std::abs(d.value), tol)) return {d.value, d.abs_err, Method::series, warn};
    if (!(d.abs_sum <= wide_abs_sum_limit))
        throw CancellationError(std::string(fn) + ": series cancellation too severe at z = " + std::to_string(z));
    const auto w = aux_series<wide>(nu, z, f_kind, tol);
    const double err = w.abs_err + std::numeric_limits<double>::epsilon() * std::abs(w.value);
    if (!std::isfinite(w.value) || !accurate(w.abs_err, std::abs(w.value), tol))
        throw CancellationError(std::string(fn) + ": series cancellation too severe at z = " + std::to_string(z));
    return {w.value, err, Method::series, warn};
}

inline int closed_nu_index(double nu)
{
    if (nu == 0.5) return 2;
    if (std::abs(nu - 1.0 / 3.0) < 1e-12) return 3;
    if (std::abs(nu - 2.0 / 3.0) < 1e-12) return 23;
    return 0;
}

} // namespace detail

inline EvalResult m_nu(double nu, double z, double tol = default_tolerance())
{
    return detail::aux_eval(nu, z, false, tol, "m_nu");
}

inline EvalResult f_nu(double nu, double z, double tol = default_tolerance())
{
    return detail::aux_eval(nu, z, true, tol, "f_nu");
}

inline EvalResult m_nu_closed(double nu, double x)
{
    require_finite(x, "m_nu_closed: x");
    const double eps = std::numeric_limits<double>::epsilon();
    switch (detail::closed_nu_index(nu)) {
    case 2: {
        const double v = std::exp(-0.25 * x * x) / std::sqrt(std::numbers::pi);
        return {v, 4 * eps * v, Method::closed_form};
    }
    case 3: {
        const double v = std::pow(3.0, 2.0 / 3.0) * airy_ai(x / std::cbrt(3.0));
        return {v, 1e-10, Method::closed_form};
    }
    case 23: {
        const double s = x * x / std::pow(3.0, 4.0 / 3.0);
        const double v = std::pow(3.0, -2.0 / 3.0) * std::exp(-2.0 * x * x * x / 27.0) *
                         (std::cbrt(3.0) * x * airy_ai(s) - 3.0 * airy_ai_prime(s));
        return {v, 1e-10 * std::max(1.0, std::abs(x)) * std::exp(-2.0 * x * x * x / 27.0), Method::closed_form};
    }
    }
    throw UnsupportedNu("m_nu_closed: closed form exists only for nu = 1/2, 1/3, 2/3, got " + std::to_string(nu));
}

namespace detail {

// f over [0, end] in pieces of doubling length on both sides of peak
template <class F>
QuadResult bracketed_integral(F&& f, double peak, double width, double end, double tol)
{
    std::vector<std::pair<double, double>> pieces;
    for (double a = peak, w = width; a < end; a += w, w *= 2) pieces.emplace_back(a, std::min(end, a + w));
    for (double b = peak, w = width; b > 0.0; b -= w, w *= 2) pieces.emplace_back(std::max(0.0, b - w), b);
    QuadResult sum;
    for (const auto& [a, b] : pieces) {
        if (!(a < b)) continue;
        const auto q = integrate_finite(f, a, b, tol / static_cast<double>(pieces.size()));
        sum.value += q.value;
        sum.abs_err += q.abs_err;
        sum.evaluations += q.evaluations;
    }
    return sum;
}

} // namespace detail

inline EvalResult m_nu_integral(double nu, double x, double tol = default_tolerance())
{
    detail::check_nu(nu, "m_nu_integral");
    require_finite(x, "m_nu_integral: x");
    if (!(x > 0.0)) throw DomainError("m_nu_integral: x must be positive");
    detail::check_tol(tol);
    const double pi = std::numbers::pi, half = pi / 2;
    const double e = nu / (1.0 - nu);
    const double log_big_x = std::log(x) / (1.0 - nu);
    const double log_pre = e * std::log(x) - std::log(pi * (1.0 - nu));
    const bool warn = nu > m_warning_nu;

    // log C rises from log((1 - nu) nu^e) at phi = 0 to +inf at phi = pi;
    // the upper half is written in d = pi - phi to keep sin(phi) exact there
    auto log_c_low = [=](double phi) {
        if (phi == 0.0) return std::log(1.0 - nu) + e * std::log(nu);
        const double s = std::sin(phi);
        return std::log(std::sin((1.0 - nu) * phi) / s) + e * std::log(std::sin(nu * phi) / s);
    };
    auto log_c_high = [=](double d) {
        const double s = std::sin(d);
        return std::log(std::sin((1.0 - nu) * (pi - d)) / s) + e * std::log(std::sin((1.0 - nu) * pi + nu * d) / s);
    };
    auto weight = [=](double u) {
        const double cx = u + log_big_x;
        return cx > 700.0 ? 0.0 : std::exp(log_pre + u - std::exp(cx));
    };
    auto low = [&](double phi) { return weight(log_c_low(phi)); };
    auto high = [&](double d) { return weight(log_c_high(d)); };

    // C exp(-C X) peaks where C X = 1, or at phi = 0 when C(0) X >= 1
    auto excess_low = [&](double phi) { return log_c_low(phi) + log_big_x; };
    auto excess_high = [&](double d) { return log_c_high(d) + log_big_x; };
    auto slope_width = [](auto&& lc, double at, double lo, double hi) {
        const double h = 1e-6 * std::max(at, 1e-3);
        const double a = std::max(lo, at - h), b = std::min(hi, at + h);
        return std::min(hi, 0.5 / std::max(std::abs(lc(b) - lc(a)) / (b - a), 1e-300));
    };
    bool in_low = true;
    double peak = 0.0, width;
    if (excess_low(0.0) >= 0.0) {
        width = std::min(half, 0.1 / std::sqrt(std::exp(std::min(log_big_x, 700.0)) + 1.0));
    } else if (excess_low(half) >= 0.0) {
        peak = find_root(excess_low, 0.0, half, 1e-15);
        width = slope_width(log_c_low, peak, 0.0, half);
    } else {
        in_low = false;
        const double tiny = 1e-300;
        peak = excess_high(tiny) > 0.0 ? find_root(excess_high, tiny, half, 1e-300) : tiny;
        width = slope_width(log_c_high, peak, tiny, half);
    }
    const double top = in_low ? low(peak) : high(peak);
    if (!(top > 0.0)) return {0.0, std::numeric_limits<double>::min(), Method::quadrature, warn};
    // rounding in log C is amplified by e and by C X
    const double cx = std::exp(std::min(in_low ? excess_low(peak) : excess_high(peak), 700.0));
    const double rel = std::max(1e-11, 1e3 * std::numeric_limits<double>::epsilon() * (1.0 + e) * std::max(1.0, cx));
    const double qtol = std::max(std::min(tol, rel * top * width), 1e-300);
    const auto a = detail::bracketed_integral(low, in_low ? peak : half, in_low ? width : half, half, qtol / 2);
    const auto b = detail::bracketed_integral(high, in_low ? half : peak, in_low ? half : width, half, qtol / 2);
    return {a.value + b.value, a.abs_err + b.abs_err, Method::quadrature, warn};
}

inline constexpr double m_asymptotic_threshold = 5.0;

// Leading saddle-point term, in the caller's variable r (internally y = nu r).
inline EvalResult m_nu_asymptotic(double nu, double r)
{
    detail::check_nu(nu, "m_nu_asymptotic");
    require_finite(r, "m_nu_asymptotic: r");
    const double y = nu * r;
    const double s = y > 0 ? std::pow(y, 1.0 / (1.0 - nu)) : 0.0;
    if (!(s >= m_asymptotic_threshold))
        throw OutOfAsymptoticRange("m_nu_asymptotic: (nu r)^{1/(1-nu)} = " + std::to_string(s) + " is below " +
                                   std::to_string(m_asymptotic_threshold));
    const double a = 1.0 / std::sqrt(2.0 * std::numbers::pi * (1.0 - nu));
    const double b = (1.0 - nu) / nu;
    const double v = a * std::exp((nu - 0.5) / (1.0 - nu) * std::log(y) - b * s);
    return {v, v / s, Method::asymptotic, nu > m_warning_nu};
}

// Exponent of the decay of M_nu at x; the double series loses about this many
// e-folds to cancellation.
inline double m_decay_exponent(double nu, double x)
{
    return (1.0 - nu) / nu * std::pow(nu * std::abs(x), 1.0 / (1.0 - nu));
}

inline EvalResult m_eval(double nu, double x)
{
    detail::check_nu(nu, "m_eval");
    require_finite(x, "m_eval: x");
    const double ax = std::abs(x);
    const double decay = m_decay_exponent(nu, ax);
    EvalResult r;
    if (detail::closed_nu_index(nu) != 0) {
        r = m_nu_closed(nu, ax);
    } else if (decay > 700.0) {
        r = m_nu_asymptotic(nu, ax);
    } else if (decay > 12.0) {
        r = m_nu_integral(nu, ax, 1e-12);
    } else {
        std::optional<detail::AuxSum> d;
        try {
            d = detail::aux_series<double>(nu, ax, false, 1e-13);
        } catch (const NumericalError&) {
        }
        r = d && d->abs_err <= 1e-14 * std::abs(d->value) ? EvalResult{d->value, d->abs_err, Method::series} : m_nu_integral(nu, ax, 1e-12);
    }
    r.limit_warning = nu > m_warning_nu;
    return r;
}

inline double m_self_similar(double nu, double x, double t)
{
    require_finite(t, "m_self_similar: t");
    if (!(t > 0.0)) throw DomainError("m_self_similar: t must be positive");
    const double scale = std::pow(t, -nu);
    return scale * m_eval(nu, x * scale).value;
}

namespace detail {

// k-th derivative of M_nu by term-wise differentiation of its Wright series.
inline double m_derivative(double nu, int k, double z)
{
    double sum = 0.0, pw = 1.0;  // z^m / m!
    const double logz = z == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(z));
    for (int m = 0; m < 2000; ++m) {
        if (m > 0) pw *= z / m;
        const int n = m + k;
        const double term = ((n % 2) ? -1.0 : 1.0) * pw * reciprocal_gamma(1.0 - nu - nu * n);
        sum += term;
        const double bound = std::exp(m * logz - std::lgamma(m + 1.0) + std::lgamma(nu * n + nu) - std::log(std::numbers::pi));
        if (m >= std::abs(z) && bound < 1e-18 * (1.0 + std::abs(sum))) return sum;
    }
    throw NonConvergence("m_ode_residual: series did not converge");
}

} // namespace detail

inline double m_ode_residual(int q, double z)
{
    if (q != 2 && q != 3) throw DomainError("m_ode_residual: q must be 2 or 3");
    require_finite(z, "m_ode_residual: z");
    const double nu = 1.0 / q;
    const double sign = q % 2 ? -1.0 : 1.0;
    return detail::m_derivative(nu, q - 1, z) + sign / q * z * detail::m_derivative(nu, 0, z);
}

} // namespace fracfn
