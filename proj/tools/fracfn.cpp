#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evaluators.hpp"
#include "figures.hpp"
#include "output.hpp"
#include "parallel.hpp"
#include "verify.hpp"

using namespace fracfn;
using namespace fracfn::cli;

namespace {

enum Exit { ok = 0, failed_checks = 1, invalid = 2, numerical = 3 };

struct EvalArgs {
    std::string function;
    std::vector<std::string> pairs; // key=value
    std::optional<double> alpha, beta, lambda, mu, nu, theta, k, t;
    std::optional<std::string> alpha_theta;
    std::string grid;
    bool with_error = false;
};

Params collect(const EvalArgs& a)
{
    Params p;
    const std::pair<const char*, const std::optional<double>*> named[] = {
        {"alpha", &a.alpha}, {"beta", &a.beta}, {"lambda", &a.lambda}, {"mu", &a.mu},
        {"nu", &a.nu},       {"theta", &a.theta}, {"k", &a.k},         {"t", &a.t},
    };
    for (const auto& [key, v] : named)
        if (v->has_value()) p.set(key, **v);
    for (const auto& kv : a.pairs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw DomainError("parameter must read key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        p.set(key, parse_number(kv.substr(eq + 1), key));
    }
    return p;
}

Table run_eval(const EvalArgs& a)
{
    auto params = collect(a);
    const auto e = make_evaluator(a.function, params, a.alpha_theta);
    if (a.with_error && !e.has_error) throw DomainError(a.function + " carries no error estimate; drop --with-error");
    const auto grid = Grid::parse(a.grid);
    Table t;
    t.columns = {e.axis, "value"};
    if (a.with_error) t.columns.push_back("abs_err");
    t.rows = ordered_map<std::vector<double>>(grid.points, [&](std::size_t i) {
        const double x = grid[i];
        const auto s = e.at(x);
        std::vector<double> row{x, s.value};
        if (a.with_error) row.push_back(s.abs_err);
        return row;
    });
    return t;
}

Table run_table1()
{
    const auto reports = table1_reports();
    Table t{{"alpha", "count", "largest"}, {}};
    for (const auto& r : reports) t.rows.push_back({r.alpha, static_cast<double>(r.count), r.largest});
    return t;
}

int run_verify(const std::string& suite, const std::vector<std::string>& overrides, const OutputSpec& out)
{
    auto checks = battery(suite);
    for (const auto& o : overrides) apply_override(checks, o);
    const auto outcomes = run_checks(checks);
    const auto doc = report(suite, checks, outcomes, out.precision);
    Sink sink(out.path);
    sink.stream() << doc.dump(2) << '\n';
    if (doc["failed"].empty()) return ok;
    std::cerr << "fracfn: failed checks:";
    for (const auto& name : doc["failed"]) std::cerr << ' ' << name.get<std::string>();
    std::cerr << '\n';
    return failed_checks;
}

int run(int argc, char** argv)
{
    CLI::App app{"Mittag-Leffler, Wright and related fractional-calculus functions"};
    app.require_subcommand(1);

    OutputSpec out;
    std::optional<double> tol;
    std::string format = "csv";
    app.add_option("--tol", tol, "default tolerance for adaptive evaluations")->check(CLI::PositiveNumber);
    app.add_option("--precision", out.precision, "significant digits")->check(CLI::Range(6, 17));
    app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out.path, "output file, stdout if absent");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "evaluate one function on a grid");
    eval->add_option("function", ea.function, "ml, wright, mnu, fnu, ealpha, galpha, falpha, u0, u1, udelta, stable, kspec, "
                                              "green-diffusion, green-drift")
        ->required();
    eval->add_option("params", ea.pairs, "extra parameters as key=value");
    for (auto [flag, target] : {std::pair{"--alpha", &ea.alpha}, {"--beta", &ea.beta}, {"--lambda", &ea.lambda}, {"--mu", &ea.mu},
                                {"--nu", &ea.nu}, {"--theta", &ea.theta}, {"--k", &ea.k}, {"--t", &ea.t}})
        eval->add_option(flag, *target);
    eval->add_option("--alpha-theta", ea.alpha_theta, "stable parameters as alpha,theta");
    eval->add_option("--grid", ea.grid, "start:stop:points, ends included")->required();
    eval->add_flag("--with-error", ea.with_error, "add an abs_err column");

    std::string figure_id;
    auto* fig = app.add_subcommand("figure", "data behind one figure, one column per curve");
    fig->add_option("id", figure_id, "fig1 .. fig16")->required();

    auto* table = app.add_subcommand("table1", "zero counts and largest zeros of e_alpha");

    std::string suite;
    std::vector<std::string> overrides;
    auto* verify = app.add_subcommand("verify", "run an invariant battery and write a JSON report");
    verify->add_option("suite", suite, "identities, laplace-pairs, normalizations, table1, asymptotics, all")->required();
    verify->add_option("--tol-override", overrides, "check=tolerance or suite=tolerance");

    for (auto* sub : {eval, fig, table, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return ok;
        }
        std::cerr << "fracfn: " << e.what() << '\n';
        return invalid;
    }

    out.format = format == "json" ? Format::json : Format::csv;
    if (tol) set_default_tolerance(*tol);
    const Provenance prov(argc, argv);

    if (*verify) return run_verify(suite, overrides, out);
    Table t = *eval ? run_eval(ea) : *fig ? figure(figure_id) : run_table1();
    emit(t, out, prov);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "fracfn: " << e.what() << '\n';
        return invalid;
    } catch (const NumericalError& e) {
        std::cerr << "fracfn: numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const std::exception& e) {
        std::cerr << "fracfn: " << e.what() << '\n';
        return numerical;
    } catch (...) {
        return numerical;
    }
}
