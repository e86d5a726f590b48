#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>

#include "fracfn/errors.hpp"
#include "fracfn/eval_result.hpp"

namespace fracfn {

namespace detail {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
constexpr bool is_complex_v = is_complex<T>::value;

inline double re(double x) { return x; }
inline double re(const std::complex<double>& z) { return z.real(); }
inline double im(double) { return 0.0; }
inline double im(const std::complex<double>& z) { return z.imag(); }

// sin(pi x) and cos(pi x) with exact zeros at the integers / half-integers.
inline double sin_pi(double x)
{
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r == 0.5) return 1.0;
    if (r == 1.5) return -1.0;
    if (r > 1.0) return -std::sin(std::numbers::pi * (r - 1.0));
    return std::sin(std::numbers::pi * r);
}

inline double cos_pi(double x) { return sin_pi(x + 0.5); }

inline std::complex<double> sin_pi(const std::complex<double>& z)
{
    const double b = std::numbers::pi * z.imag();
    return {sin_pi(z.real()) * std::cosh(b), cos_pi(z.real()) * std::sinh(b)};
}

inline bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

// Lanczos approximation, g = 7, nine terms.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef{
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(x) for x >= 10 from the Stirling series in extended precision.
inline long double stirling_log_gamma(long double x)
{
    constexpr std::array<long double, 8> c{1.0L / 12,   -1.0L / 360, 1.0L / 1260,        -1.0L / 1680,
                                           1.0L / 1188, -691.0L / 360360, 1.0L / 156, -3617.0L / 122400};
    const long double x2 = 1.0L / (x * x);
    long double series = 0.0L, p = 1.0L / x;
    for (long double ck : c) {
        series += ck * p;
        p *= x2;
    }
    return (x - 0.5L) * std::log(x) - x + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>) + series;
}

// (n-1)! is exact in double up to n = 23.
inline bool small_factorial(double x, double& out)
{
    if (!(x >= 1.0 && x <= 23.0) || x != std::floor(x)) return false;
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    out = f;
    return true;
}

template <class T>
T lanczos_gamma(T z)
{
    if constexpr (std::is_same_v<T, double>) {
        if (double f; small_factorial(z, f)) return f;
        if (z >= 10.0) return static_cast<double>(std::exp(stirling_log_gamma(z)));
    }
    z -= 1.0;
    T sum = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i) sum += lanczos_coef[i] / (z + double(i));
    const T t = z + lanczos_g + 0.5;
    const T half = std::pow(t, (z + 0.5) * 0.5);
    return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * sum;
}

template <class T>
void check_finite_arg(const T& z, const char* fn)
{
    if (!std::isfinite(re(z)) || !std::isfinite(im(z)))
        throw DomainError(std::string(fn) + ": argument must be finite");
}

} // namespace detail

template <class T>
BasicEvalResult<T> gamma(T z)
{
    detail::check_finite_arg(z, "gamma");
    const double x = detail::re(z);
    if (detail::im(z) == 0.0 && x <= 0.5) {
        const double n = std::round(x);
        if (n <= 0.0 && std::abs(x - n) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, -n))
            throw PoleError("gamma: pole at " + std::to_string(n));
    }
    T value;
    if (x < 0.5)
        value = std::numbers::pi / (detail::sin_pi(z) * detail::lanczos_gamma(T(1.0) - z));
    else
        value = detail::lanczos_gamma(z);
    return {value, 4e-15 * std::abs(value), Method::closed_form};
}

template <class T>
T reciprocal_gamma(T z)
{
    detail::check_finite_arg(z, "reciprocal_gamma");
    const double x = detail::re(z);
    if (detail::im(z) == 0.0 && detail::is_nonpositive_integer(x)) return T(0.0);
    if (x >= 0.5) {
        if constexpr (!detail::is_complex_v<T>) {
            if (x > 171.0) return std::exp(-std::lgamma(x));
        }
        return T(1.0) / detail::lanczos_gamma(z);
    }
    if constexpr (!detail::is_complex_v<T>) {
        if (x < -170.0) {
            const double s = detail::sin_pi(x);
            const double mag = std::exp(std::lgamma(1.0 - x) + std::log(std::abs(s)) - std::log(std::numbers::pi));
            return s < 0 ? -mag : mag;
        }
    }
    return detail::sin_pi(z) * detail::lanczos_gamma(T(1.0) - z) / std::numbers::pi;
}

// log|Gamma(x)| and sign(Gamma(x)) for real x that is not a pole.
struct LogGamma {
    double log_abs;
    int sign;
};

inline LogGamma log_gamma_signed(double x)
{
    if (detail::is_nonpositive_integer(x)) throw PoleError("log_gamma_signed: pole");
    int sign = 1;
    if (x < 0.0 && static_cast<long long>(std::floor(x)) % 2 != 0) sign = -1;
    if (x > 0.0 && x < 171.0 && x >= 0.5) {
        const double g = detail::lanczos_gamma(x);
        return {std::log(g), 1};
    }
    return {std::lgamma(x), sign};
}

inline double erfc(double x)
{
    require_finite(x, "erfc: x");
    return std::erfc(x);
}

namespace detail {

inline constexpr long double airy_c1 = 0.355028053887817239260063186004183176L;
inline constexpr long double airy_c2 = 0.258819403792806798405183560189203963L;
inline constexpr double airy_series_limit = 8.0;

struct AiryPair {
    double ai;
    double aip;
};

inline AiryPair airy_maclaurin(double xd)
{
    const long double x = xd;
    const long double x2 = x * x, x3 = x2 * x;
    long double ca = 1.0L, cb = 1.0L, p = 1.0L;  // coefficients and x^{3(k-1)}
    long double f = 1.0L, g = x, fp = 0.0L, gp = 1.0L;
    for (int k = 1; k < 400; ++k) {
        ca /= (3.0L * k - 1.0L) * (3.0L * k);
        cb /= (3.0L * k) * (3.0L * k + 1.0L);
        const long double ta = ca * p * x3, tb = cb * p * x3 * x;
        f += ta;
        g += tb;
        fp += 3.0L * k * ca * p * x2;
        gp += (3.0L * k + 1.0L) * cb * p * x3;
        p *= x3;
        if (std::fabs(ta) + std::fabs(tb) < 1e-22L * (std::fabs(f) + std::fabs(g) + 1.0L) && k > 3) break;
    }
    return {static_cast<double>(airy_c1 * f - airy_c2 * g), static_cast<double>(airy_c1 * fp - airy_c2 * gp)};
}

inline AiryPair airy_asymptotic(double x)
{
    const double ax = std::abs(x);
    const double zeta = 2.0 / 3.0 * ax * std::sqrt(ax);
    // u_k and v_k coefficients, summed until the terms stop shrinking.
    std::array<double, 64> u{}, v{};
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < 64; ++k) {
        u[k] = u[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
        v[k] = -(6.0 * k + 1) / (6.0 * k - 1) * u[k];
    }
    const double sqpi = std::sqrt(std::numbers::pi);
    const double q = std::sqrt(std::sqrt(ax));
    if (x > 0) {
        double su = 0, sv = 0, zk = 1.0, last = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 64; ++k) {
            const double tu = u[k] * zk;
            if (std::abs(tu) > last) break;
            last = std::abs(tu);
            const double s = (k % 2) ? -1.0 : 1.0;
            su += s * tu;
            sv += s * v[k] * zk;
            zk /= zeta;
        }
        const double e = std::exp(-zeta);
        return {e / (2 * sqpi * q) * su, -q * e / (2 * sqpi) * sv};
    }
    double pu = 0, qu = 0, pv = 0, qv = 0, zk = 1.0, last = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < 64; k += 2) {
        const double t0 = u[k] * zk, t1 = u[k + 1] * zk / zeta;
        if (std::abs(t0) > last) break;
        last = std::abs(t1);
        const double s = ((k / 2) % 2) ? -1.0 : 1.0;
        pu += s * t0;
        qu += s * t1;
        pv += s * v[k] * zk;
        qv += s * v[k + 1] * zk / zeta;
        zk /= zeta * zeta;
    }
    const double ph = zeta + std::numbers::pi / 4;
    return {(std::sin(ph) * pu - std::cos(ph) * qu) / (sqpi * q),
            -q / sqpi * (std::cos(ph) * pv + std::sin(ph) * qv)};
}

inline AiryPair airy(double x)
{
    require_finite(x, "airy: x");
    return std::abs(x) <= airy_series_limit ? airy_maclaurin(x) : airy_asymptotic(x);
}

} // namespace detail

inline double airy_ai(double x) { return detail::airy(x).ai; }
inline double airy_ai_prime(double x) { return detail::airy(x).aip; }

} // namespace fracfn
