#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "fracfn/errors.hpp"

namespace fracfn {

template <class F>
concept RealFunction = std::invocable<F&, double> && std::convertible_to<std::invoke_result_t<F&, double>, double>;

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    std::int64_t evaluations = 0;
};

namespace detail {

inline double env_tolerance()
{
    if (const char* s = std::getenv("FRACFN_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end != s && v > 0.0 && std::isfinite(v)) return v;
    }
    return 1e-10;
}

inline std::atomic<double>& default_tol_storage()
{
    static std::atomic<double> tol{env_tolerance()};
    return tol;
}

} // namespace detail

// Library-wide absolute tolerance; FRACFN_TOL seeds it, callers may override.
inline double default_tolerance() { return detail::default_tol_storage().load(); }

inline void set_default_tolerance(double tol)
{
    if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tolerance must be positive and finite");
    detail::default_tol_storage().store(tol);
}

inline constexpr std::int64_t default_eval_budget = 1'000'000;

namespace detail {

// 15-point Kronrod nodes (non-negative half) with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, err, l1;
    bool frozen;
};

struct BySmallerError {
    bool operator()(const Segment& x, const Segment& y) const { return x.err < y.err; }
};

template <class F>
Segment gk15(F& f, double a, double b, std::int64_t& evals)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * wgk[7], rg = fc * wg[3], rabs = std::abs(rk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        const double s = f1[j] + f2[j];
        rk += wgk[j] * s;
        rabs += wgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) rg += wg[j / 2] * s;
    }
    evals += 15;
    const double mean = rk * 0.5;
    double rasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) rasc += wgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    const double value = rk * h;
    rabs *= std::abs(h);
    rasc *= std::abs(h);
    double err = std::abs((rk - rg) * h);
    if (rasc != 0.0 && err != 0.0) err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (rabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(err, 50 * eps * rabs);
    if (!std::isfinite(value) || !std::isfinite(err))
        throw NonConvergence("integrand is not finite on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    const double width_floor = 64 * eps * std::max(std::abs(a), std::abs(b));
    // Segments that are too narrow or already at the rounding floor cannot be improved by bisection.
    const bool frozen = std::abs(b - a) <= width_floor || err <= 51 * eps * rabs;
    return {a, b, value, err, rabs, frozen};
}

struct FiniteIntegral {
    QuadResult result;
    double l1;
};

template <class F>
FiniteIntegral integrate_adaptive(F& f, double a, double b, double tol, std::int64_t budget)
{
    std::int64_t evals = 0;
    std::priority_queue<Segment, std::vector<Segment>, BySmallerError> active;
    std::vector<Segment> settled;
    Segment first = gk15(f, a, b, evals);
    double value = first.value, err = first.err, l1 = first.l1;
    double frozen_err = 0.0;
    if (first.frozen) {
        frozen_err = first.err;
        settled.push_back(first);
    } else {
        active.push(first);
    }

    while (err - frozen_err > std::max(tol - frozen_err, 0.5 * tol) && !active.empty()) {
        if (evals + 30 > budget)
            throw NonConvergence("quadrature budget of " + std::to_string(budget) + " evaluations exhausted (error estimate " +
                                 std::to_string(err) + ")");
        Segment worst = active.top();
        active.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gk15(f, worst.a, mid, evals);
        Segment right = gk15(f, mid, worst.b, evals);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        l1 += left.l1 + right.l1 - worst.l1;
        for (Segment* s : {&left, &right}) {
            if (s->frozen) {
                frozen_err += s->err;
                settled.push_back(*s);
            } else {
                active.push(*s);
            }
        }
    }
    return {{value, std::max(err, 0.0), evals}, l1};
}

inline void check_tol(double tol)
{
    if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("quadrature tolerance must be positive and finite");
}

} // namespace detail

template <RealFunction F>
QuadResult integrate_finite(F&& f, double a, double b, double tol = default_tolerance(),
                            std::int64_t budget = default_eval_budget)
{
    require_finite(a, "integrate_finite: a");
    require_finite(b, "integrate_finite: b");
    detail::check_tol(tol);
    if (!(a < b)) throw DomainError("integrate_finite: require a < b");
    auto g = [&](double x) { return static_cast<double>(f(x)); };
    return detail::integrate_adaptive(g, a, b, tol, budget).result;
}

struct Decay {
    enum class Kind { exponential, algebraic };
    Kind kind = Kind::exponential;
    double power = 0.0;  // algebraic: |f(r)| = O(r^-power)
    double scale = 1.0;  // exponential: length of the first panel

    static Decay exponential(double scale = 1.0) { return {Kind::exponential, 0.0, scale}; }
    static Decay algebraic(double power) { return {Kind::algebraic, power, 1.0}; }
};

template <RealFunction F>
QuadResult integrate_semi_infinite(F&& f, Decay decay, double tol = default_tolerance(),
                                   std::int64_t budget = default_eval_budget)
{
    detail::check_tol(tol);
    auto g = [&](double x) { return static_cast<double>(f(x)); };
    QuadResult total{};

    if (decay.kind == Decay::Kind::algebraic) {
        if (!(decay.power > 1.0)) throw DomainError("algebraic decay needs power > 1");
        // |f(r)| r^p must stay bounded; compare two far probes.
        const double near_probe = std::abs(g(1e6)) * std::pow(1e6, decay.power);
        const double far_probe = std::abs(g(1e8)) * std::pow(1e8, decay.power);
        if (far_probe > 10.0 * near_probe + tol)
            throw DecayMismatch("integrand decays slower than r^-" + std::to_string(decay.power));
        // [0, 1] directly, [1, inf) through r = 1/s so the tail lands near s = 0
        auto tail = [&](double s) { return g(1.0 / s) / (s * s); };
        const auto head = detail::integrate_adaptive(g, 0.0, 1.0, 0.5 * tol, budget).result;
        const auto rest = detail::integrate_adaptive(tail, 0.0, 1.0, 0.5 * tol, budget - head.evaluations).result;
        return {head.value + rest.value, head.abs_err + rest.abs_err, head.evaluations + rest.evaluations + 2};
    }

    if (!(decay.scale > 0.0)) throw DomainError("exponential decay needs a positive scale");
    // Doubling panels [0, s], [s, 2s], [2s, 4s], ... until a panel's L1 mass is negligible.
    constexpr int max_panels = 40;
    const double panel_tol = tol / 32.0;
    double lo = 0.0, hi = decay.scale;
    for (int k = 0; k < max_panels; ++k) {
        auto r = detail::integrate_adaptive(g, lo, hi, panel_tol, budget - total.evaluations);
        total.value += r.result.value;
        total.abs_err += r.result.abs_err;
        total.evaluations += r.result.evaluations;
        if (k > 0 && r.l1 < panel_tol) {
            total.abs_err += r.l1;
            return total;
        }
        lo = hi;
        hi *= 2.0;
    }
    throw DecayMismatch("integrand has not decayed by r = " + std::to_string(lo));
}

template <RealFunction F>
QuadResult laplace_numeric(F&& f, double s, double tol = default_tolerance())
{
    require_finite(s, "laplace_numeric: s");
    if (!(s > 0.0)) throw DomainError("laplace_numeric: s must be positive");
    return integrate_semi_infinite([&](double t) { return std::exp(-s * t) * static_cast<double>(f(t)); },
                                   Decay::exponential(1.0 / s), tol);
}

template <RealFunction F>
double find_root(F&& f, double a, double b, double tol = 1e-12)
{
    require_finite(a, "find_root: a");
    require_finite(b, "find_root: b");
    if (a > b) std::swap(a, b);
    const double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!(fa * fb < 0.0))
        throw NoSignChange("find_root: no sign change on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    std::uintmax_t iters = 200;
    auto done = [tol](double lo, double hi) {
        return std::abs(hi - lo) <= std::max(tol, 4 * std::numeric_limits<double>::epsilon() * std::abs(lo));
    };
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        [&](double x) { return static_cast<double>(f(x)); }, a, b, fa, fb, done, iters);
    return std::clamp(0.5 * (lo + hi), a, b);
}

} // namespace fracfn
