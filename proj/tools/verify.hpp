#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracfn/mittag_leffler.hpp"
#include "fracfn/probability.hpp"
#include "fracfn/quadrature.hpp"
#include "fracfn/relaxosc.hpp"
#include "fracfn/wright.hpp"
#include "evaluators.hpp"
#include "output.hpp"
#include "parallel.hpp"

namespace fracfn::cli {

struct Check {
    std::string suite;
    std::string name;
    double tolerance;
    std::function<double()> error;
};

struct Outcome {
    double error = NAN;
    bool pass = false;
    std::string note;
};

struct ZeroRow {
    double alpha;
    std::size_t count;
    double largest;
};

// published counts and largest-zero locations
inline constexpr std::array<ZeroRow, 15> table1_reference{{
    {1.40, 1, 1.730},  {1.41, 3, 5.726},  {1.56, 3, 8.366},  {1.57, 5, 13.48},  {1.64, 5, 14.61},
    {1.65, 7, 20.00},  {1.69, 7, 20.80},  {1.70, 9, 26.33},  {1.72, 9, 27.03},  {1.73, 11, 32.83},
    {1.75, 11, 33.11}, {1.76, 13, 38.81}, {1.78, 13, 39.49}, {1.79, 15, 45.51}, {1.80, 17, 51.46},
}};

inline constexpr double table1_relative_tol = 5e-3;

inline std::vector<ZeroReport> table1_reports()
{
    return ordered_map<ZeroReport>(table1_reference.size(), [](std::size_t i) { return find_zeros(table1_reference[i].alpha, 10.0); });
}

namespace checks {

inline std::string tag(const std::string& key, double v) { return key + "=" + format_number(v, 6); }

inline double max_abs_diff(double a, double b, double step, const std::function<double(double)>& f, const std::function<double(double)>& g)
{
    double worst = 0.0;
    for (double x = a; x <= b + 1e-12; x += step) worst = std::max(worst, std::abs(f(x) - g(x)));
    return worst;
}

inline double m_pdf(double nu, double x) { return m_eval(nu, x).value; }

inline void identities(std::vector<Check>& out)
{
    const std::string s = "identities";
    for (double nu : {1.0 / 2, 1.0 / 3, 2.0 / 3})
        out.push_back({s, "m_nu_closed_form[" + tag("nu", nu) + "]", 1e-9, [nu] {
                           return max_abs_diff(0.0, 8.0, 0.05, [nu](double x) { return m_nu(nu, x).value; },
                                               [nu](double x) { return m_nu_closed(nu, x).value; });
                       }});
    for (double a : {0.25, 0.5, 0.75})
        out.push_back({s, "ml_series_vs_spectral[" + tag("alpha", a) + "]", 1e-9, [a] {
                           double worst = 0.0;
                           for (double t : {0.5, 1.0, 2.0, 3.0}) {
                               const double series = ml_series(MLParams(a), -std::pow(t, a)).value.real();
                               worst = std::max(worst, std::abs(series - ml_neg_spectral(a, t).value));
                           }
                           return worst;
                       }});
    out.push_back({s, "ml_half_erfc", 1e-10, [] { return std::abs(ml_eval(0.5, 1.0, -1.0).value - std::exp(1.0) * std::erfc(1.0)); }});
    out.push_back({s, "stable_series_gaussian", 1e-8, [] {
                       const StableParams p(2.0, 0.0);
                       return max_abs_diff(-2.0, 2.0, 0.05, [&](double x) { return stable_series(p, x).value; },
                                           [](double x) { return std::exp(-x * x / 4) / (2 * std::sqrt(std::numbers::pi)); });
                   }});
    // both Cauchy series diverge at |x| = 1, so the grid steps around it
    out.push_back({s, "stable_series_cauchy", 1e-8, [] {
                       const StableParams p(1.0, 0.0);
                       return max_abs_diff(-1.975, 1.975, 0.05, [&](double x) { return stable_series(p, x).value; },
                                           [](double x) { return 1.0 / (std::numbers::pi * (1 + x * x)); });
                   }});
    for (double a : {0.5, 0.8, 1.5, 1.8})
        out.push_back({s, "extremal_vs_series[" + tag("alpha", a) + "]", 1e-8, [a] {
                           const StableParams p(a, a < 1 ? -a : a - 2);
                           double worst = 0.0;
                           int compared = 0;
                           for (double x = a < 1 ? 0.1 : -5.0; x <= 5.0 + 1e-12; x += 0.1) {
                               double series;
                               try {
                                   series = stable_series(p, x).value;
                               } catch (const OutOfRange&) {
                                   continue;
                               }
                               worst = std::max(worst, std::abs(extremal_from_mwright(a, x) - series));
                               ++compared;
                           }
                           if (compared < 20) throw NonConvergence("extremal_vs_series: fewer than 20 overlap points");
                           return worst;
                       }});
    for (double nu : {0.25, 0.5, 0.75})
        for (double m : {1.0, 2.0, 3.0, 4.0})
            out.push_back({s, "wright_moment[" + tag("nu", nu) + "," + tag("s", m) + "]", 1e-7, [nu, m] {
                               const auto q = integrate_semi_infinite([&](double x) { return std::pow(x, m) * m_pdf(nu, x); },
                                                                      Decay::exponential(), 1e-12);
                               const double exact = wright_pdf_moment(nu, 1.0, m);
                               return std::abs(q.value - exact) / exact;
                           }});
    for (double nu : {0.25, 0.5, 0.75})
        for (double k : {0.5, 1.0, 2.0})
            out.push_back({s, "characteristic[" + tag("nu", nu) + "," + tag("kappa", k) + "]", 1e-6, [nu, k] {
                               const auto q = integrate_semi_infinite([&](double x) { return std::cos(k * x) * m_pdf(nu, x); },
                                                                      Decay::exponential(), 1e-12);
                               return std::abs(q.value - mwright_characteristic(nu, k));
                           }});
    const std::array<std::array<double, 4>, 6> tuples{{
        {0.5, 0.5, 1.0, 1.0}, {0.3, 0.6, 0.5, 2.0}, {0.7, 0.4, 1.5, 0.5}, {0.25, 0.8, 0.2, 1.0}, {0.6, 0.6, 2.0, 3.0}, {0.8, 0.9, 0.7, 1.0},
    }};
    for (const auto& [l, m, x, t] : tuples)
        out.push_back({s, "subordination[" + tag("lambda", l) + "," + tag("mu", m) + "," + tag("x", x) + "," + tag("t", t) + "]", 1e-5,
                       [l, m, x, t] { return std::abs(subordinate(l, m, x, t).value - m_self_similar(l * m, x, t)); }});
}

inline void laplace_pairs(std::vector<Check>& out)
{
    const std::string s = "laplace-pairs";
    for (double nu : {0.25, 0.5, 0.75})
        for (double p : {0.5, 1.0, 2.0}) {
            out.push_back({s, "m_nu_to_ml[" + tag("nu", nu) + "," + tag("s", p) + "]", 1e-6, [nu, p] {
                               const auto q = laplace_numeric([nu](double r) { return m_pdf(nu, r); }, p, 1e-10);
                               return std::abs(q.value - ml_eval(nu, 1.0, -p).value);
                           }});
            out.push_back({s, "stretched_exponential[" + tag("nu", nu) + "," + tag("s", p) + "]", 1e-6, [nu, p] {
                               auto f = [nu](double t) { return nu / std::pow(t, nu + 1) * m_pdf(nu, std::pow(t, -nu)); };
                               return std::abs(laplace_numeric(f, p, 1e-10).value - std::exp(-std::pow(p, nu)));
                           }});
        }
}

inline void normalizations(std::vector<Check>& out)
{
    const std::string s = "normalizations";
    for (double nu : {0.25, 0.5, 0.75, 0.9})
        out.push_back({s, "m_nu_mass[" + tag("nu", nu) + "]", 1e-8, [nu] {
                           return std::abs(integrate_semi_infinite([nu](double x) { return m_pdf(nu, x); }, Decay::exponential(), 1e-12).value - 1.0);
                       }});
    // r = u^{1/alpha} removes the endpoint singularity
    for (double a : {0.25, 0.5, 0.75, 1.25, 1.5, 1.75})
        out.push_back({s, "spectral_K_mass[" + tag("alpha", a) + "]", 1e-8, [a] {
                           auto f = [a](double u) { return spectral_K(a, std::pow(u, 1 / a)) * std::pow(u, 1 / a - 1) / a; };
                           const double expected = a < 1 ? 1.0 : 1.0 - 2.0 / a;
                           return std::abs(integrate_semi_infinite(f, Decay::algebraic(2.0), 1e-12).value - expected);
                       }});
    for (double beta : {0.5, 0.9}) {
        const double t = 1.5;
        out.push_back({s, "diffusion_green_mass[" + tag("beta", beta) + "]", 1e-6, [beta, t] {
                           const GreenFunction g(beta);
                           const double c = std::pow(t, beta / 2);
                           return std::abs(integrate_semi_infinite([&](double x) { return 2 * g(x, t); }, Decay::exponential(c), 1e-12).value - 1.0);
                       }});
        out.push_back({s, "diffusion_green_variance[" + tag("beta", beta) + "]", 1e-8, [beta, t] {
                           const GreenFunction g(beta);
                           const double c = std::pow(t, beta / 2);
                           const auto q = integrate_semi_infinite([&](double x) { return 2 * x * x * g(x, t); }, Decay::exponential(c), 1e-12);
                           return std::abs(q.value / g.variance(t) - 1.0);
                       }});
    }
    out.push_back({s, "drift_green_mean_near_pulse", 2e-2, [] {
                       const double t = 1.3;
                       const GreenFunction g(0.95, 1.0, GreenVariant::drift);
                       const auto q = integrate_semi_infinite([&](double x) { return x * g(x, t); }, Decay::exponential(), 1e-12);
                       return std::abs(q.value / t - 1.0);
                   }});
}

inline void asymptotics(std::vector<Check>& out)
{
    const std::string s = "asymptotics";
    out.push_back({s, "m_half_saddle_point", 1e-3, [] { return std::abs(m_nu_asymptotic(0.5, 10.0).value / m_nu_closed(0.5, 10.0).value - 1); }});
    const double t = 1e3;
    for (double a : {0.5, 0.75})
        out.push_back({s, "ml_power_tail[" + tag("alpha", a) + "]", 1e-2, [a, t] {
                           return std::abs(e_alpha(t, 1.0, a).value * std::tgamma(1 - a) * std::pow(t, a) - 1);
                       }});
    for (double a : {1.25, 1.5, 1.75}) {
        const auto sol = std::make_shared<FundamentalSolutions>(fundamental_solutions(a));
        out.push_back({s, "u0_tail[" + tag("alpha", a) + "]", 2e-2,
                       [a, t, sol] { return std::abs(sol->u0(t) * std::tgamma(1 - a) * std::pow(t, a) - 1); }});
        out.push_back({s, "u1_tail[" + tag("alpha", a) + "]", 2e-2,
                       [a, t, sol] { return std::abs(sol->u1(t) * std::tgamma(2 - a) * std::pow(t, a - 1) - 1); }});
        out.push_back({s, "udelta_tail[" + tag("alpha", a) + "]", 2e-2,
                       [a, t, sol] { return std::abs(-sol->u_delta(t) * std::tgamma(-a) * std::pow(t, a + 1) - 1); }});
    }
}

inline void table1(std::vector<Check>& out)
{
    const std::string s = "table1";
    // one shared scan; every check reads from it
    auto reports = std::make_shared<std::vector<ZeroReport>>();
    auto once = std::make_shared<std::once_flag>();
    auto get = [reports, once]() -> const std::vector<ZeroReport>& {
        std::call_once(*once, [&] { *reports = table1_reports(); });
        return *reports;
    };
    for (std::size_t i = 0; i < table1_reference.size(); ++i) {
        const auto ref = table1_reference[i];
        out.push_back({s, "count[" + tag("alpha", ref.alpha) + "]", 0.0, [get, i, ref] {
                           return std::abs(static_cast<double>(get()[i].count) - static_cast<double>(ref.count));
                       }});
        out.push_back({s, "largest_zero[" + tag("alpha", ref.alpha) + "]", table1_relative_tol,
                       [get, i, ref] { return std::abs(get()[i].largest / ref.largest - 1); }});
    }
}

} // namespace checks

inline const std::map<std::string, void (*)(std::vector<Check>&)>& suites()
{
    static const std::map<std::string, void (*)(std::vector<Check>&)> all{
        {"identities", checks::identities},   {"laplace-pairs", checks::laplace_pairs}, {"normalizations", checks::normalizations},
        {"table1", checks::table1},           {"asymptotics", checks::asymptotics},
    };
    return all;
}

inline std::vector<Check> battery(const std::string& suite)
{
    std::vector<Check> out;
    if (suite == "all") {
        for (const auto& name : {"identities", "laplace-pairs", "normalizations", "asymptotics", "table1"}) suites().at(name)(out);
        return out;
    }
    const auto it = suites().find(suite);
    if (it == suites().end())
        throw DomainError("unknown verify suite '" + suite + "'; expected identities, laplace-pairs, normalizations, table1, asymptotics or all");
    it->second(out);
    return out;
}

// name=value, where name is a full check name or a suite
inline void apply_override(std::vector<Check>& checks, const std::string& spec)
{
    const auto eq = spec.rfind('=');
    if (eq == std::string::npos) throw DomainError("tolerance override must read check=value, got '" + spec + "'");
    const std::string name = spec.substr(0, eq);
    const double tol = parse_number(spec.substr(eq + 1), "tolerance override " + name);
    if (!(tol >= 0.0)) throw DomainError("tolerance override " + name + " must be non-negative");
    bool hit = false;
    for (auto& c : checks)
        if (c.name == name || c.suite == name) {
            c.tolerance = tol;
            hit = true;
        }
    if (!hit) throw DomainError("tolerance override names no check in this run: " + name);
}

inline std::vector<Outcome> run_checks(const std::vector<Check>& checks)
{
    return ordered_map<Outcome>(checks.size(), [&](std::size_t i) {
        Outcome o;
        try {
            o.error = checks[i].error();
            o.pass = o.error <= checks[i].tolerance;
        } catch (const Error& e) {
            o.note = e.what();
        }
        return o;
    });
}

inline nlohmann::json report(const std::string& suite, const std::vector<Check>& checks, const std::vector<Outcome>& outcomes, int precision)
{
    nlohmann::json list = nlohmann::json::array(), failed = nlohmann::json::array();
    for (std::size_t i = 0; i < checks.size(); ++i) {
        nlohmann::json c{{"suite", checks[i].suite}, {"name", checks[i].name}, {"error", number(outcomes[i].error, precision)},
                         {"tolerance", checks[i].tolerance}, {"pass", outcomes[i].pass}};
        if (!outcomes[i].note.empty()) c["note"] = outcomes[i].note;
        list.push_back(std::move(c));
        if (!outcomes[i].pass) failed.push_back(checks[i].name);
    }
    return {{"suite", suite}, {"checks", std::move(list)}, {"passed", checks.size() - failed.size()}, {"failed", std::move(failed)}};
}

} // namespace fracfn::cli
