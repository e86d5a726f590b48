#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "fracfn/errors.hpp"
#include "fracfn/fracops.hpp"
#include "fracfn/quadrature.hpp"
#include "fracfn/special.hpp"

namespace fracfn {

// Which solution of D^alpha u = -u a spectral integral belongs to.
enum class SolutionKind { relaxation, first_integral, impulse };

namespace detail {

inline void check_osc_alpha(double alpha, const char* fn)
{
    require_finite(alpha, fn);
    if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError(std::string(fn) + ": alpha must lie in (1,2)");
}

inline double osc_rate(double alpha) { return std::cos(std::numbers::pi / alpha); }
inline double osc_frequency(double alpha) { return std::sin(std::numbers::pi / alpha); }

// (2/alpha) e^{t cos(pi/alpha)} cos(t sin(pi/alpha) - phase)
inline double damped_wave(double alpha, double t, double phase)
{
    return 2.0 / alpha * std::exp(t * osc_rate(alpha)) * std::cos(t * osc_frequency(alpha) - phase);
}

} // namespace detail

inline double g_alpha(double alpha, double t)
{
    detail::check_osc_alpha(alpha, "g_alpha");
    require_finite(t, "g_alpha: t");
    if (t < 0.0) throw DomainError("g_alpha: t must be non-negative");
    return detail::damped_wave(alpha, t, 0.0);
}

// Monotone part int_0^inf e^{-rt} K(r) r^{-k} (-1)^k dr, k = 0, 1; the impulse
// kind uses r K(r). Written in u = r^alpha, where K(r) dr becomes
// sin(alpha pi)/(alpha pi) du / (u^2 + 2u cos(alpha pi) + 1).
inline QuadResult spectral_part(double alpha, double t, SolutionKind kind, double tol = 1e-12)
{
    require_finite(alpha, "spectral_part: alpha");
    require_finite(t, "spectral_part: t");
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) throw DomainError("spectral_part: alpha must lie in (0,2) without 1");
    if (!(t > 0.0)) throw DomainError("spectral_part: t must be positive");
    if (kind == SolutionKind::first_integral && alpha < 1.0)
        throw DomainError("spectral_part: the first-integral kernel needs alpha > 1");

    const double ia = 1.0 / alpha;
    const double c = detail::cos_pi(alpha);
    const double pref = detail::sin_pi(alpha) / (alpha * std::numbers::pi);
    auto weight = [kind, ia](double u) {
        switch (kind) {
        case SolutionKind::relaxation: return 1.0;
        case SolutionKind::first_integral: return -std::pow(u, -ia);
        case SolutionKind::impulse: return std::pow(u, ia);
        }
        return 0.0;
    };
    const double qtol = tol / std::abs(pref);
    const double x = std::pow(t, alpha);
    // w = x u puts the exponential cutoff at w ~ 1
    auto in_w = [&](double w) { return std::exp(-std::pow(w, ia)) * weight(w / x) * x / (w * w + 2.0 * w * x * c + x * x); };
    QuadResult q;
    if (x < 1.0) {
        // u in [0, 1], then log u up to the cutoff 1/x, then the exponential tail
        auto in_u = [&](double u) { return std::exp(-t * std::pow(u, ia)) * weight(u) / (u * u + 2.0 * u * c + 1.0); };
        const auto head = integrate_finite(in_u, 0.0, 1.0, qtol / 3);
        const auto mid = integrate_finite([&](double y) { return in_u(std::exp(y)) * std::exp(y); }, 0.0, -std::log(x), qtol / 3);
        const auto tail = integrate_semi_infinite([&](double v) { return in_w(1.0 + v); }, Decay::exponential(1.0), qtol / 3);
        q = {head.value + mid.value + tail.value, head.abs_err + mid.abs_err + tail.abs_err,
             head.evaluations + mid.evaluations + tail.evaluations};
    } else {
        q = integrate_semi_infinite(in_w, Decay::exponential(std::clamp(x, 0.25, 4.0)), qtol);
    }
    q.value *= pref;
    q.abs_err *= std::abs(pref);
    return q;
}

inline QuadResult f_alpha(double alpha, double t, double tol = 1e-12)
{
    return spectral_part(alpha, t, SolutionKind::relaxation, tol);
}

// u0 = e_alpha, u1 = J e_alpha (alpha > 1 only), u_delta = -u0'.
struct FundamentalSolutions {
    double alpha;
    std::function<double(double)> u0;
    std::function<double(double)> u1;
    std::function<double(double)> u_delta;

    bool has_u1() const { return static_cast<bool>(u1); }
};

namespace detail {

inline std::function<double(double)> spectral_solution(double alpha, SolutionKind kind, double phase, double at_zero)
{
    return [=](double t) {
        require_finite(t, "fundamental solution: t");
        if (t < 0.0) throw DomainError("fundamental solution: t must be non-negative");
        if (t == 0.0) return at_zero;
        double v = spectral_part(alpha, t, kind).value;
        if (alpha > 1.0) {
            const double w = damped_wave(alpha, t, phase);
            v += kind == SolutionKind::impulse ? -w : w;
        }
        return v;
    };
}

} // namespace detail

inline FundamentalSolutions fundamental_solutions(double alpha)
{
    require_finite(alpha, "fundamental_solutions: alpha");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("fundamental_solutions: alpha must lie in (0,2]");
    auto nonneg = [](double t) {
        require_finite(t, "fundamental solution: t");
        if (t < 0.0) throw DomainError("fundamental solution: t must be non-negative");
        return t;
    };
    if (alpha == 1.0) {
        auto decay = [nonneg](double t) { return std::exp(-nonneg(t)); };
        return {alpha, decay, {}, decay};
    }
    if (alpha == 2.0) {
        return {alpha, [nonneg](double t) { return std::cos(nonneg(t)); }, [nonneg](double t) { return std::sin(nonneg(t)); },
                [nonneg](double t) { return std::sin(nonneg(t)); }};
    }
    const double pi_over_alpha = std::numbers::pi / alpha;
    FundamentalSolutions out{alpha, detail::spectral_solution(alpha, SolutionKind::relaxation, 0.0, 1.0), {},
                             detail::spectral_solution(alpha, SolutionKind::impulse, -pi_over_alpha,
                                                       alpha < 1.0 ? INFINITY : 0.0)};
    if (alpha > 1.0) out.u1 = detail::spectral_solution(alpha, SolutionKind::first_integral, pi_over_alpha, 0.0);
    return out;
}

// u = sum c_k u_k + int_0^t q(t - tau) u_delta(tau) dtau on the grid of q.
inline GridSeries solve_forced(double alpha, std::span<const double> initial, const GridSeries& q)
{
    require_finite(alpha, "solve_forced: alpha");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("solve_forced: alpha must lie in (0,2]");
    const std::size_t m = alpha > 1.0 ? 2 : 1;
    if (initial.size() != m)
        throw WrongInitialCount("solve_forced: expected " + std::to_string(m) + " initial values, got " + std::to_string(initial.size()));
    const double dt = q.dt();
    const auto sol = fundamental_solutions(alpha);
    const auto t = q.t();
    std::vector<double> u(q.size(), 0.0);
    for (std::size_t n = 0; n < q.size(); ++n) {
        u[n] = initial[0] * sol.u0(t[n]);
        if (m == 2 && initial[1] != 0.0) u[n] += initial[1] * sol.u1(t[n]);
    }
    if (q.size() > 1) {
        // u_delta = -e', integrated exactly against the piecewise-linear forcing
        const auto tab = detail::relaxation_table(alpha, 1.0, dt, q.size() - 1);
        const auto conv = detail::rate_convolution(q.values(), dt, tab);
        for (std::size_t n = 0; n < q.size(); ++n) u[n] -= conv[n];
    }
    return q.with_values(std::move(u));
}

struct ZeroReport {
    double alpha;
    std::vector<double> zeros;
    std::size_t count;
    double largest;
};

namespace detail {

// Beyond this time the damped wave stays below the leading algebraic tail
// t^-alpha / |Gamma(1 - alpha)| of the monotone part.
inline double tail_dominance_time(double alpha)
{
    const double c = osc_rate(alpha);
    const double lg = log_gamma_signed(1.0 - alpha).log_abs;
    auto log_ratio = [=](double t) { return std::log(2.0 / alpha) + lg + alpha * std::log(t) + c * t; };
    const double peak = -alpha / c;
    if (log_ratio(peak) <= 0.0) return peak;
    double hi = 2.0 * peak;
    while (log_ratio(hi) > 0.0) hi *= 2.0;
    return find_root(log_ratio, peak, hi, 1e-10);
}

} // namespace detail

inline constexpr double zero_horizon_cap = 1e5;

// All zeros of e_alpha for 1 < alpha < 2. The horizon grows to cover the
// tail-dominance time plus two periods unless extend is false.
inline ZeroReport find_zeros(double alpha, double horizon, bool extend = true)
{
    detail::check_osc_alpha(alpha, "find_zeros");
    require_finite(horizon, "find_zeros: horizon");
    if (!(horizon > 0.0)) throw DomainError("find_zeros: horizon must be positive");

    const double period = std::numbers::pi / detail::osc_frequency(alpha);
    const double needed = detail::tail_dominance_time(alpha) + 2.0 * period;
    if (needed > horizon) {
        if (!extend || needed > zero_horizon_cap)
            throw HorizonTooSmall("find_zeros: horizon " + std::to_string(horizon) + " is below the tail-dominance time " +
                                  std::to_string(needed));
        horizon = needed;
    }

    const auto sol = fundamental_solutions(alpha);
    auto u = [&](double t) { return sol.u0(t); };
    const double step = period / 10.0;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step));
    std::vector<double> ts(steps + 1), us(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        ts[i] = std::min(horizon, static_cast<double>(i) * step);
        us[i] = u(ts[i]);
    }

    std::vector<double> zeros;
    auto refine = [&](double a, double b) { zeros.push_back(find_root(u, a, b, 1e-12 * std::max(1.0, b))); };
    for (std::size_t i = 1; i <= steps; ++i) {
        if (us[i - 1] * us[i] < 0.0) {
            refine(ts[i - 1], ts[i]);
            continue;
        }
        // a close pair of zeros can hide between samples around a local minimum of |u|
        if (i + 1 <= steps && us[i] * us[i + 1] > 0.0 && us[i - 1] * us[i] > 0.0 && std::abs(us[i]) < std::abs(us[i - 1]) &&
            std::abs(us[i]) < std::abs(us[i + 1])) {
            const double sgn = us[i] > 0.0 ? 1.0 : -1.0;
            const auto [tmin, vmin] =
                boost::math::tools::brent_find_minima([&](double t) { return sgn * u(t); }, ts[i - 1], ts[i + 1], 40);
            if (vmin < 0.0) {
                refine(ts[i - 1], tmin);
                refine(tmin, ts[i + 1]);
            }
        }
    }
    std::sort(zeros.begin(), zeros.end());
    const double largest = zeros.empty() ? NAN : zeros.back();
    return {alpha, zeros, zeros.size(), largest};
}

// Leading-order position of the largest zero for alpha near 1 or near 2.
inline constexpr double zero_asymptotic_band = 0.1;

inline double largest_zero_asymptotic(double alpha)
{
    require_finite(alpha, "largest_zero_asymptotic: alpha");
    const double eps = alpha - 1.0, delta = 2.0 - alpha;
    if (eps > 0.0 && eps <= zero_asymptotic_band) return std::log(2.0 / eps);
    if (delta > 0.0 && delta <= zero_asymptotic_band) return 12.0 / (std::numbers::pi * delta) * std::log(1.0 / delta);
    throw OutOfRange("largest_zero_asymptotic: alpha must lie within 0.1 of 1 or 2 (inside (1,2))");
}

} // namespace fracfn
