#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracfn/errors.hpp"
#include "fracfn/grid_io.hpp"
#include "fracfn/mittag_leffler.hpp"
#include "fracfn/probability.hpp"
#include "fracfn/relaxosc.hpp"
#include "fracfn/wright.hpp"

namespace fracfn::cli {

inline double parse_number(const std::string& s, const std::string& what)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw DomainError(what + ": not a number: '" + s + "'");
    if (!std::isfinite(v)) throw DomainError(what + ": must be finite");
    return v;
}

// start:stop:points, both ends included
struct Grid {
    double start, stop;
    std::size_t points;

    static Grid parse(const std::string& spec)
    {
        const auto a = spec.find(':');
        const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
        if (b == std::string::npos || spec.find(':', b + 1) != std::string::npos)
            throw DomainError("grid must read start:stop:points, got '" + spec + "'");
        const double start = parse_number(spec.substr(0, a), "grid start");
        const double stop = parse_number(spec.substr(a + 1, b - a - 1), "grid stop");
        const double n = parse_number(spec.substr(b + 1), "grid points");
        if (!(n >= 1.0) || n != std::floor(n) || n > 1e7) throw DomainError("grid points must be a positive integer");
        if (n == 1.0 && start != stop) throw DomainError("grid with one point needs start == stop");
        if (n > 1.0 && !(stop > start)) throw DomainError("grid stop must exceed start");
        return {start, stop, static_cast<std::size_t>(n)};
    }

    double operator[](std::size_t k) const
    {
        if (k + 1 == points) return stop;
        return start + (stop - start) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
};

struct Sample {
    double value;
    double abs_err;
};

class Params {
public:
    void set(const std::string& key, double v)
    {
        if (values_.count(key)) throw DomainError("parameter " + key + " given twice");
        values_[key] = v;
    }

    double need(const std::string& fn, const std::string& key)
    {
        const auto it = values_.find(key);
        if (it == values_.end()) throw DomainError(fn + " requires --" + key);
        used_.push_back(key);
        return it->second;
    }

    double get(const std::string& key, double fallback)
    {
        used_.push_back(key);
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    void reject_unused(const std::string& fn) const
    {
        for (const auto& [k, v] : values_)
            if (std::find(used_.begin(), used_.end(), k) == used_.end()) throw DomainError(fn + " does not take --" + k);
    }

private:
    std::map<std::string, double> values_;
    std::vector<std::string> used_;
};

// "alpha,theta"
inline StableParams parse_stable(const std::string& s)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw DomainError("stable parameters must read alpha,theta, got '" + s + "'");
    return StableParams(parse_number(s.substr(0, comma), "alpha"), parse_number(s.substr(comma + 1), "theta"));
}

struct Evaluator {
    std::string axis;
    bool has_error;
    std::function<Sample(double)> at;
};

inline Sample sample(const EvalResult& r) { return {r.value, r.abs_err}; }
inline Sample sample(const QuadResult& r) { return {r.value, r.abs_err}; }
inline Sample sample(double v) { return {v, NAN}; }

inline const std::vector<std::string>& function_names()
{
    static const std::vector<std::string> names{"ml",  "wright", "mnu", "fnu",    "ealpha", "galpha", "falpha",          "u0",
                                                "u1",  "udelta", "stable", "kspec", "green-diffusion", "green-drift"};
    return names;
}

// Builds the evaluator and validates its parameters before any grid point is touched.
inline Evaluator make_evaluator(const std::string& fn, Params& p, const std::optional<std::string>& stable_pair)
{
    Evaluator e;
    if (fn == "ml") {
        const double alpha = p.need(fn, "alpha"), beta = p.need(fn, "beta");
        MLParams check(alpha, beta);
        e = {"z", true, [=](double z) { return sample(ml_eval(alpha, beta, z)); }};
    } else if (fn == "wright") {
        const WrightParams w(p.need(fn, "lambda"), p.need(fn, "mu"));
        e = {"z", true, [=](double z) { return sample(wright_series(w, z)); }};
    } else if (fn == "mnu" || fn == "fnu") {
        const double nu = p.need(fn, "nu");
        if (!(nu > 0.0 && nu < 1.0)) throw DomainError(fn + ": nu must lie in (0, 1)");
        if (fn == "mnu")
            e = {"x", true, [=](double x) { return sample(x >= 0.0 ? m_eval(nu, x) : m_nu(nu, x)); }};
        else
            e = {"x", true, [=](double x) {
                     if (x <= 0.0) return sample(f_nu(nu, x));
                     // F = nu x M on the positive axis, where M has the robust evaluator
                     const auto m = m_eval(nu, x);
                     return Sample{nu * x * m.value, nu * x * m.abs_err};
                 }};
    } else if (fn == "ealpha") {
        const double alpha = p.need(fn, "alpha"), lambda = p.get("lambda", 1.0);
        e = {"t", true, [=](double t) { return sample(e_alpha(t, lambda, alpha)); }};
    } else if (fn == "galpha") {
        const double alpha = p.need(fn, "alpha");
        g_alpha(alpha, 0.0);
        e = {"t", false, [=](double t) { return sample(g_alpha(alpha, t)); }};
    } else if (fn == "falpha") {
        const double alpha = p.need(fn, "alpha");
        e = {"t", true, [=](double t) { return sample(f_alpha(alpha, t)); }};
    } else if (fn == "u0" || fn == "u1" || fn == "udelta") {
        const auto s = fundamental_solutions(p.need(fn, "alpha"));
        if (fn == "u1" && !s.has_u1()) throw DomainError("u1 exists only for 1 < alpha <= 2");
        const auto f = fn == "u0" ? s.u0 : fn == "u1" ? s.u1 : s.u_delta;
        e = {"t", false, [=](double t) { return sample(f(t)); }};
    } else if (fn == "stable") {
        std::optional<StableParams> sp;
        if (stable_pair) {
            sp = parse_stable(*stable_pair);
        } else {
            sp = StableParams(p.need(fn, "alpha"), p.need(fn, "theta"));
        }
        if (sp->singular()) throw SingularCase("stable: alpha = 1, |theta| = 1 is a point mass at x = " + format_number(-sp->theta(), 6),
                                               -sp->theta());
        const StableParams q = *sp;
        e = {"x", true, [=](double x) { return sample(stable_pdf(q, x)); }};
    } else if (fn == "kspec") {
        const double alpha = p.need(fn, "alpha");
        spectral_K(alpha, 1.0);
        e = {"r", false, [=](double r) { return sample(spectral_K(alpha, r)); }};
    } else if (fn == "green-diffusion" || fn == "green-drift") {
        const double beta = p.need(fn, "beta"), t = p.need(fn, "t");
        const bool drift = fn == "green-drift";
        const GreenFunction g(beta, drift ? 1.0 : p.get("k", 1.0), drift ? GreenVariant::drift : GreenVariant::diffusion);
        g(0.0, t);
        e = {"x", false, [=](double x) { return sample(g(x, t)); }};
    } else {
        std::string known;
        for (const auto& n : function_names()) known += (known.empty() ? "" : ", ") + n;
        throw DomainError("unknown function '" + fn + "'; known: " + known);
    }
    p.reject_unused(fn);
    if (stable_pair && fn != "stable") throw DomainError(fn + " does not take --alpha-theta");
    return e;
}

} // namespace fracfn::cli
