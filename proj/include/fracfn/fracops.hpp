#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fracfn/errors.hpp"
#include "fracfn/mittag_leffler.hpp"
#include "fracfn/quadrature.hpp"
#include "fracfn/special.hpp"

namespace fracfn {

// Samples of a function on a grid starting at t = 0.
class GridSeries {
public:
    GridSeries(std::vector<double> t, std::vector<double> values) : t_(std::move(t)), v_(std::move(values))
    {
        if (t_.empty()) throw DomainError("GridSeries: grid is empty");
        if (t_.size() != v_.size()) throw DomainError("GridSeries: grid and values differ in length");
        if (t_[0] != 0.0) throw DomainError("GridSeries: grid must start at t = 0");
        for (std::size_t k = 1; k < t_.size(); ++k)
            if (!(t_[k] > t_[k - 1]) || !std::isfinite(t_[k])) throw DomainError("GridSeries: grid must be strictly increasing");
    }

    template <class F>
    static GridSeries sample(F&& f, double dt, std::size_t points)
    {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("GridSeries: dt must be positive");
        if (points == 0) throw DomainError("GridSeries: need at least one point");
        std::vector<double> t(points), v(points);
        for (std::size_t k = 0; k < points; ++k) {
            t[k] = static_cast<double>(k) * dt;
            v[k] = f(t[k]);
        }
        return GridSeries(std::move(t), std::move(v));
    }

    std::span<const double> t() const { return t_; }
    std::span<const double> values() const { return v_; }
    std::size_t size() const { return t_.size(); }
    double operator[](std::size_t k) const { return v_[k]; }

    bool uniform() const
    {
        if (t_.size() < 3) return true;
        const double h = (t_.back() - t_[0]) / static_cast<double>(t_.size() - 1);
        for (std::size_t k = 1; k < t_.size(); ++k)
            if (std::abs(t_[k] - t_[k - 1] - h) > 1e-6 * h) return false;
        return true;
    }

    // Spacing of a uniform grid; 0 for a single sample.
    double dt() const
    {
        if (!uniform()) throw NonUniformGrid("GridSeries: grid spacing is not uniform");
        if (t_.size() < 2) return 0.0;
        return (t_.back() - t_[0]) / static_cast<double>(t_.size() - 1);
    }

    GridSeries with_values(std::vector<double> v) const { return GridSeries(t_, std::move(v)); }

private:
    std::vector<double> t_;
    std::vector<double> v_;
};

// J^mu t^gamma
inline double power_rl_integral(double gamma_exp, double mu, double t)
{
    require_finite(gamma_exp, "power_rl_integral: gamma");
    require_finite(mu, "power_rl_integral: mu");
    require_finite(t, "power_rl_integral: t");
    if (!(gamma_exp > -1.0)) throw DomainError("power_rl_integral: gamma must exceed -1");
    if (mu < 0.0) throw DomainError("power_rl_integral: mu must be non-negative");
    if (!(t > 0.0)) throw DomainError("power_rl_integral: t must be positive");
    return std::exp(log_gamma_signed(gamma_exp + 1.0).log_abs - log_gamma_signed(gamma_exp + 1.0 + mu).log_abs) * std::pow(t, gamma_exp + mu);
}

// Riemann-Liouville integral by product integration with piecewise-linear f.
inline GridSeries rl_integral(const GridSeries& f, double mu)
{
    require_finite(mu, "rl_integral: mu");
    if (!(mu > 0.0)) throw DomainError("rl_integral: mu must be positive");
    const double dt = f.dt();
    const std::size_t n_pts = f.size();
    std::vector<double> out(n_pts, 0.0);
    if (n_pts < 2) return f.with_values(std::move(out));

    const auto v = f.values();
    const double c = std::pow(dt, mu) * reciprocal_gamma(mu + 2.0);
    const double p = mu + 1.0;
    std::vector<double> pw(n_pts + 1);
    for (std::size_t k = 0; k <= n_pts; ++k) pw[k] = std::pow(static_cast<double>(k), p);
    // interior weight depends only on n - j
    std::vector<double> mid(n_pts, 0.0);
    for (std::size_t k = 1; k < n_pts; ++k) mid[k] = pw[k + 1] - 2.0 * pw[k] + pw[k - 1];

    for (std::size_t n = 1; n < n_pts; ++n) {
        const double nd = static_cast<double>(n);
        double s = (pw[n - 1] - (nd - 1.0 - mu) * std::pow(nd, mu)) * v[0];
        for (std::size_t j = 1; j < n; ++j) s += mid[n - j] * v[j];
        s += v[n];
        out[n] = c * s;
    }
    return f.with_values(std::move(out));
}

namespace detail {

// Fit f - f(0) ~ sum a_k t^{sigma_k} on the first samples.
inline std::vector<double> singular_fit(std::span<const double> v, double dt, std::span<const double> exps)
{
    const auto m = static_cast<Eigen::Index>(exps.size());
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) a(j, k) = std::pow(static_cast<double>(j + 1), exps[k]);
        rhs(j) = v[j + 1] - v[0];
    }
    const Eigen::VectorXd b = a.colPivHouseholderQr().solve(rhs);
    std::vector<double> coef(exps.size());
    for (std::size_t k = 0; k < exps.size(); ++k) coef[k] = b(static_cast<Eigen::Index>(k)) * std::pow(dt, -exps[k]);
    return coef;
}

} // namespace detail

// Caputo derivative of order mu in (0,1) by the L1 scheme. Known leading powers
// t^sigma of f - f(0) can be passed in; they are fitted, removed and
// differentiated exactly, which restores accuracy near t = 0.
inline GridSeries caputo_derivative(const GridSeries& f, double mu, std::span<const double> singular_exponents = {})
{
    require_finite(mu, "caputo_derivative: mu");
    if (!(mu > 0.0 && mu < 1.0)) throw DomainError("caputo_derivative: mu must lie in (0,1)");
    for (double s : singular_exponents)
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("caputo_derivative: singular exponents must be positive");
    const double dt = f.dt();
    const std::size_t n_pts = f.size();
    std::vector<double> out(n_pts, 0.0);
    if (n_pts < 2) return f.with_values(std::move(out));
    if (singular_exponents.size() >= n_pts) throw StrategyUnsupported("caputo_derivative: too few samples for the singular fit");

    const auto t = f.t();
    std::vector<double> rest(f.values().begin(), f.values().end());
    std::vector<double> coef;
    if (!singular_exponents.empty()) {
        coef = detail::singular_fit(f.values(), dt, singular_exponents);
        for (std::size_t n = 1; n < n_pts; ++n)
            for (std::size_t k = 0; k < coef.size(); ++k) rest[n] -= coef[k] * std::pow(t[n], singular_exponents[k]);
    }

    const double q = 1.0 - mu;
    std::vector<double> b(n_pts);
    for (std::size_t j = 0; j < n_pts; ++j)
        b[j] = std::pow(static_cast<double>(j + 1), q) - std::pow(static_cast<double>(j), q);
    const double c = std::pow(dt, -mu) * reciprocal_gamma(2.0 - mu);
    for (std::size_t n = 1; n < n_pts; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += b[j] * (rest[n - j] - rest[n - j - 1]);
        out[n] = c * s;
    }

    for (std::size_t k = 0; k < coef.size(); ++k) {
        const double sigma = singular_exponents[k];
        const double g = fracfn::gamma(1.0 + sigma).value * reciprocal_gamma(1.0 + sigma - mu);
        for (std::size_t n = 0; n < n_pts; ++n) {
            if (n == 0 && sigma != mu) {
                out[0] += sigma > mu ? 0.0 : coef[k] * INFINITY;
                continue;
            }
            out[n] += coef[k] * g * (n == 0 ? 1.0 : std::pow(t[n], sigma - mu));
        }
    }
    return f.with_values(std::move(out));
}

enum class AbelStrategy { resolvent, differentiated, derivative_of_f };

namespace detail {

// E_alpha(-lambda s^alpha) and its first two running integrals on s = k h.
struct RelaxationTable {
    std::vector<double> e, e1, e2;
};

inline double relaxation(double alpha, double lambda, double s)
{
    if (s == 0.0) return 1.0;
    return ml_eval(alpha, 1.0, -lambda * std::pow(s, alpha)).value;
}

inline RelaxationTable relaxation_table(double alpha, double lambda, double h, std::size_t cells)
{
    RelaxationTable tab;
    tab.e.resize(cells + 1);
    tab.e1.assign(cells + 1, 0.0);
    tab.e2.assign(cells + 1, 0.0);
    tab.e[0] = 1.0;
    auto e = [&](double s) { return relaxation(alpha, lambda, s); };
    if (cells == 0) return tab;

    // the first cell carries the cusp at s = 0
    tab.e1[1] = integrate_finite(e, 0.0, h, 1e-14).value;
    tab.e2[1] = integrate_finite([&](double s) { return (h - s) * e(s); }, 0.0, h, 1e-14).value;
    tab.e[1] = e(h);

    // 8-point Gauss-Legendre on the smooth cells
    static constexpr double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static constexpr double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    for (std::size_t k = 1; k < cells; ++k) {
        const double a = h * static_cast<double>(k), mid = a + 0.5 * h, half = 0.5 * h;
        double i0 = 0.0, i1 = 0.0;
        for (int g = 0; g < 4; ++g)
            for (double sgn : {-1.0, 1.0}) {
                const double s = mid + sgn * half * x[g];
                const double v = e(s);
                i0 += w[g] * v;
                i1 += w[g] * (a + h - s) * v;
            }
        i0 *= half;
        i1 *= half;
        tab.e1[k + 1] = tab.e1[k] + i0;
        tab.e2[k + 1] = tab.e2[k] + h * tab.e1[k] + i1;
        tab.e[k + 1] = e(a + h);
    }
    return tab;
}

// int_0^{t_n} e'(s) f(t_n - s) ds with f piecewise linear on the grid.
inline std::vector<double> rate_convolution(std::span<const double> v, double dt, const RelaxationTable& tab)
{
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t n = 1; n < v.size(); ++n) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double g0 = v[n - i], slope = (v[n - i - 1] - v[n - i]) / dt;
            const double moment = dt * tab.e[i + 1] - (tab.e1[i + 1] - tab.e1[i]);
            s += g0 * (tab.e[i + 1] - tab.e[i]) + slope * moment;
        }
        out[n] = s;
    }
    return out;
}

} // namespace detail

// u + lambda J^alpha u = f on a uniform grid. All strategies integrate the
// kernel exactly against piecewise-linear interpolants of f.
inline GridSeries abel_solve(const GridSeries& f, double alpha, double lambda, AbelStrategy strategy = AbelStrategy::resolvent)
{
    require_finite(alpha, "abel_solve: alpha");
    require_finite(lambda, "abel_solve: lambda");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("abel_solve: alpha must lie in (0,1]");
    const double dt = f.dt();
    const std::size_t n_pts = f.size();
    const auto v = f.values();
    if (strategy == AbelStrategy::derivative_of_f && n_pts < 2)
        throw StrategyUnsupported("abel_solve: derivative_of_f needs at least two samples");
    if (lambda == 0.0 || n_pts < 2) return f.with_values({v.begin(), v.end()});

    std::vector<double> u(n_pts);
    switch (strategy) {
    case AbelStrategy::resolvent: {
        const auto tab = detail::relaxation_table(alpha, lambda, dt, n_pts - 1);
        const auto conv = detail::rate_convolution(v, dt, tab);
        for (std::size_t n = 0; n < n_pts; ++n) u[n] = v[n] + conv[n];
        break;
    }
    case AbelStrategy::derivative_of_f: {
        const auto tab = detail::relaxation_table(alpha, lambda, dt, n_pts - 1);
        for (std::size_t n = 0; n < n_pts; ++n) {
            double s = v[0] * tab.e[n];
            for (std::size_t j = 0; j < n; ++j) s += (v[j + 1] - v[j]) / dt * (tab.e1[n - j] - tab.e1[n - j - 1]);
            u[n] = s;
        }
        break;
    }
    case AbelStrategy::differentiated: {
        // d/dT of int_0^T e(s) f(T - s) ds; the f(0) part is E1' = e, the rest is
        // differenced centrally on the half grid
        const double h = 0.5 * dt;
        const std::size_t last = 2 * n_pts - 1;
        const auto tab = detail::relaxation_table(alpha, lambda, h, last);
        auto shifted = [&](double tau) {
            const double pos = tau / dt;
            auto j = static_cast<std::size_t>(std::floor(pos));
            if (j >= n_pts - 1) j = n_pts - 2;
            const double w = pos - static_cast<double>(j);
            return v[j] + w * (v[j + 1] - v[j]) - v[0];
        };
        auto conv = [&](std::size_t m) {
            const double big_t = h * static_cast<double>(m);
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double ga = shifted(big_t - h * static_cast<double>(i));
                const double gb = shifted(big_t - h * static_cast<double>(i + 1));
                const double moment = h * tab.e1[i + 1] - (tab.e2[i + 1] - tab.e2[i]);
                s += ga * (tab.e1[i + 1] - tab.e1[i]) + (gb - ga) / h * moment;
            }
            return s;
        };
        u[0] = v[0];
        double lower = conv(1);
        for (std::size_t n = 1; n < n_pts; ++n) {
            const double upper = conv(2 * n + 1);
            u[n] = v[0] * tab.e[2 * n] + (upper - lower) / dt;
            lower = upper;
        }
        break;
    }
    }
    return f.with_values(std::move(u));
}

} // namespace fracfn
