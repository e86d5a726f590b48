#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fracfn/mittag_leffler.hpp"
#include "fracfn/probability.hpp"
#include "fracfn/relaxosc.hpp"
#include "fracfn/wright.hpp"
#include "output.hpp"
#include "parallel.hpp"

namespace fracfn::cli {

struct Curve {
    std::string name;
    std::function<double(double)> f;
};

inline std::string label(const std::string& key, double v) { return key + "=" + format_number(v, 6); }

inline std::vector<double> linear_grid(double a, double b, std::size_t n)
{
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = k + 1 == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    return x;
}

// points per decade, from 10^lo to 10^hi
inline std::vector<double> log_grid(int lo, int hi, int per_decade)
{
    std::vector<double> x;
    for (int k = lo * per_decade; k <= hi * per_decade; ++k) x.push_back(std::pow(10.0, static_cast<double>(k) / per_decade));
    return x;
}

inline Table tabulate(const std::string& axis, const std::vector<double>& x, const std::vector<Curve>& curves)
{
    Table t;
    t.columns.push_back(axis);
    for (const auto& c : curves) t.columns.push_back(c.name);
    t.rows = ordered_map<std::vector<double>>(x.size(), [&](std::size_t i) {
        std::vector<double> row{x[i]};
        for (const auto& c : curves) row.push_back(c.f(x[i]));
        return row;
    });
    return t;
}

inline double symmetric_m(double nu, double x)
{
    if (nu == 0.0) return std::exp(-std::abs(x));
    return m_eval(nu, x).value;
}

inline Table symmetric_m_figure(const std::vector<double>& nus, double half_width, std::size_t points)
{
    std::vector<Curve> curves;
    for (double nu : nus) curves.push_back({label("nu", nu), [nu](double x) { return symmetric_m(nu, x); }});
    return tabulate("x", linear_grid(-half_width, half_width, points), curves);
}

inline Table relaxation_figure(const std::vector<double>& alphas, double horizon)
{
    std::vector<Curve> curves;
    for (double a : alphas) {
        const auto s = fundamental_solutions(a);
        curves.push_back({label("alpha", a), s.u0});
    }
    return tabulate("t", linear_grid(0.0, horizon, 301), curves);
}

inline Table figure(const std::string& id)
{
    using std::numbers::pi;
    if (id == "fig1" || id == "fig2") {
        std::vector<Curve> curves;
        for (double a : {0.25, 0.5, 0.75, 1.0}) {
            if (id == "fig1")
                curves.push_back({label("alpha", a), [a](double t) { return e_alpha(t, 1.0, a).value; }});
            else
                curves.push_back({label("alpha", a), [a](double t) { return e_alpha_beta(t, 1.0, a, a).value; }});
        }
        // phi is infinite at t = 0
        return tabulate("t", id == "fig1" ? linear_grid(0.0, 15.0, 301) : linear_grid(0.05, 15.0, 300), curves);
    }
    if (id == "fig3" || id == "fig4") {
        const bool relax = id == "fig3";
        std::vector<Curve> curves;
        for (double a : relax ? std::vector{0.25, 0.5, 0.75, 0.9} : std::vector{1.25, 1.5, 1.75, 1.9}) {
            const double sign = relax ? 1.0 : -1.0;
            curves.push_back({label("alpha", a), [a, sign](double r) { return sign * spectral_K(a, r); }});
        }
        return tabulate("r", linear_grid(0.01, 3.0, 300), curves);
    }
    if (id == "fig5") return relaxation_figure({0.25, 0.5, 0.75, 1.0}, 15.0);
    if (id == "fig6") return relaxation_figure({1.25, 1.5, 1.75, 2.0}, 15.0);
    if (id == "fig7") {
        std::vector<Curve> curves;
        for (double a : {0.25, 0.5, 0.75}) {
            const double g1 = std::tgamma(1.0 + a), g0 = std::tgamma(1.0 - a);
            curves.push_back({label("e_alpha", a), [a](double t) { return e_alpha(t, 1.0, a).value; }});
            curves.push_back({label("stretched_alpha", a), [a, g1](double t) { return std::exp(-std::pow(t, a) / g1); }});
            curves.push_back({label("power_alpha", a), [a, g0](double t) { return std::pow(t, -a) / g0; }});
        }
        return tabulate("t", log_grid(-2, 4, 10), curves);
    }
    if (id == "fig8") {
        std::vector<Curve> curves;
        for (double a : {1.25, 1.5, 1.75}) {
            const auto s = fundamental_solutions(a);
            curves.push_back({label("e_alpha", a), s.u0});
            curves.push_back({label("g_alpha", a), [a](double t) { return g_alpha(a, t); }});
            curves.push_back({label("f_alpha", a), [a](double t) { return t == 0.0 ? 1.0 - 2.0 / a : f_alpha(a, t).value; }});
        }
        return tabulate("t", linear_grid(0.0, 50.0, 501), curves);
    }
    if (id == "fig9") return symmetric_m_figure({0.0, 0.1, 0.2, 0.3, 0.4, 0.5}, 3.0, 121);
    if (id == "fig10") return symmetric_m_figure({0.5, 0.6, 0.7, 0.8, 0.9}, 3.0, 121);
    if (id == "fig11") {
        std::vector<Curve> curves;
        for (double eps : {0.01, 0.001}) {
            const double nu = 1.0 - eps;
            curves.push_back({label("nu", nu), [nu](double r) { return m_eval(nu, r).value; }});
        }
        return tabulate("r", linear_grid(0.5, 1.5, 201), curves);
    }
    if (id == "fig12")
        return tabulate("x", linear_grid(0.0, 5.0, 201), {{"alpha=0.5", [](double x) { return extremal_from_mwright(0.5, x); }}});
    if (id == "fig13")
        return tabulate("x", linear_grid(-5.0, 5.0, 201), {{"alpha=1.5", [](double x) { return extremal_from_mwright(1.5, x); }}});
    if (id == "fig14") return symmetric_m_figure({0.0, 0.125, 0.25, 0.375, 0.5}, 5.0, 201);
    if (id == "fig15") return symmetric_m_figure({0.5, 0.625, 0.75, 0.875}, 5.0, 201);
    if (id == "fig16") return {{"alpha", "theta"}, {{0, 0}, {1, 1}, {2, 0}, {1, -1}, {0, 0}}};
    throw DomainError("unknown figure '" + id + "'; expected fig1 .. fig16");
}

} // namespace fracfn::cli
