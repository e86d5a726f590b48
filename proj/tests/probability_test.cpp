#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <gtest/gtest.h>

#include "fracfn/fracops.hpp"
#include "fracfn/probability.hpp"
#include "oracles.hpp"

using namespace fracfn;

namespace {

constexpr double pi = std::numbers::pi;

double m_oracle(double nu, double x) { return oracle::wright(-nu, 1 - nu, -x); }

double whole_line(const std::function<double(double)>& f, double tail_power, double tol = 1e-11)
{
    const Decay d = Decay::algebraic(tail_power);
    return integrate_semi_infinite(f, d, tol).value + integrate_semi_infinite([&](double x) { return f(-x); }, d, tol).value;
}

} // namespace

TEST(StableParams, DiamondBoundary)
{
    EXPECT_THROW(StableParams(0.5, 0.6), DiamondViolation);
    EXPECT_NO_THROW(StableParams(0.5, 0.5));
    EXPECT_NO_THROW(StableParams(1.5, -0.5));
    EXPECT_THROW(StableParams(1.5, 0.51), DiamondViolation);
    EXPECT_NO_THROW(StableParams(1.0, 1.0));
    EXPECT_THROW(StableParams(2.0, 0.1), DiamondViolation);
    EXPECT_THROW(StableParams(0.0, 0.0), DomainError);
    EXPECT_THROW(StableParams(2.5, 0.0), DomainError);
    EXPECT_TRUE(StableParams(0.5, -0.5).extremal());
    EXPECT_TRUE(StableParams(1.5, 0.5).extremal());
    EXPECT_FALSE(StableParams(1.5, 0.2).extremal());
}

TEST(StablePdf, Examples)
{
    EXPECT_NEAR(stable_pdf({2.0, 0.0}, 0.0).value, 0.28209479177387814, 1e-16);
    EXPECT_NEAR(stable_pdf({1.0, 0.0}, 0.0).value, 0.3183098861837907, 1e-16);
    EXPECT_NEAR(stable_pdf({0.5, -0.5}, 1.0).value, 0.21969564473386122, 1e-14);
    EXPECT_EQ(stable_pdf({0.5, -0.5}, -1.0).value, 0.0);
    EXPECT_EQ(stable_pdf({0.5, 0.5}, 1.0).value, 0.0);
    try {
        stable_pdf({1.0, 1.0}, 0.3);
        ADD_FAILURE() << "point mass returned a number";
    } catch (const SingularCase& e) {
        EXPECT_EQ(e.location(), -1.0);
    }
    try {
        stable_pdf({1.0, -1.0}, 0.3);
        ADD_FAILURE() << "point mass returned a number";
    } catch (const SingularCase& e) {
        EXPECT_EQ(e.location(), 1.0);
    }
}

TEST(StablePdf, SymmetryIsExact)
{
    std::mt19937 gen(20240607);
    std::uniform_real_distribution<double> ua(0.05, 2.0), u(-1.0, 1.0), ux(-8.0, 8.0);
    int compared = 0;
    for (int k = 0; k < 100; ++k) {
        const double a = ua(gen), th = u(gen) * std::min(a, 2 - a), x = ux(gen);
        const StableParams p(a, th);
        if (p.singular()) continue;
        EXPECT_EQ(stable_pdf(p, -x).value, stable_pdf(p.mirrored(), x).value) << a << " " << th << " " << x;
        ++compared;
    }
    EXPECT_GE(compared, 99);
}

TEST(StableSeries, ReproducesGaussianAndCauchy)
{
    for (double x = -2.0; x <= 2.0; x += 0.05) {
        EXPECT_NEAR(stable_series({2.0, 0.0}, x).value, std::exp(-x * x / 4) / (2 * std::sqrt(pi)), 1e-8) << x;
        if (std::abs(std::abs(x) - 1.0) < 0.04) continue;
        EXPECT_NEAR(stable_series({1.0, 0.0}, x).value, 1 / (pi * (1 + x * x)), 1e-8) << x;
        for (double th : {-0.6, 0.4}) {
            EXPECT_NEAR(stable_series({1.0, th}, x).value, stable_pdf({1.0, th}, x).value, 1e-8) << th << " " << x;
        }
    }
    EXPECT_THROW(stable_series({1.0, 0.0}, 1.0), OutOfRange);
    EXPECT_THROW(stable_series({1.0, 1.0}, 0.5), SingularCase);
}

TEST(StablePdf, MatchesHighPrecisionSeries)
{
    const std::array<std::array<double, 2>, 6> params{{{0.3, 0.1}, {0.7, -0.4}, {0.9, 0.0}, {1.2, 0.3}, {1.5, 0.0}, {1.8, -0.2}}};
    for (const auto& [a, th] : params) {
        int compared = 0;
        for (double x = -9.0; x <= 9.0; x += 0.61) {
            const double ref = oracle::stable_density(a, th, x);
            if (std::isnan(ref)) continue;
            EXPECT_NEAR(stable_pdf({a, th}, x).value, ref, 1e-10 * std::max(1.0, ref)) << a << " " << th << " " << x;
            ++compared;
        }
        EXPECT_GE(compared, 10) << a;
    }
    EXPECT_TRUE(StableParams(1.8, -0.2).extremal());
}

TEST(StablePdf, FarTailsAndOrigin)
{
    // tails: pi x L ~ Gamma(1 + alpha) sin(pi (alpha - theta) / 2) x^-alpha - Gamma(1 + 2 alpha) sin(pi (alpha - theta)) x^-2alpha / 2
    for (const auto& [a, th] : std::array<std::array<double, 2>, 3>{{{0.6, 0.2}, {1.5, 0.0}, {1.5, 0.5}}}) {
        const double x = 1e5, y = std::pow(x, -a);
        const double two = (std::tgamma(1 + a) * std::sin(pi * (a - th) / 2) * y - std::tgamma(1 + 2 * a) * std::sin(pi * (a - th)) * y * y / 2) / (pi * x);
        EXPECT_NEAR(stable_pdf({a, th}, x).value / two, 1.0, 1e-6) << a << " " << th;
    }
    // near the origin the value tends to Gamma(1 + 1/alpha) cos(pi theta / (2 alpha)) / pi
    for (const auto& [a, th] : std::array<std::array<double, 2>, 3>{{{0.4, 0.1}, {0.8, -0.3}, {1.6, 0.3}}}) {
        const double at0 = std::tgamma(1 + 1 / a) * std::cos(pi * th / (2 * a)) / pi;
        EXPECT_NEAR(stable_pdf({a, th}, 0.0).value, at0, 1e-14);
        EXPECT_NEAR(stable_pdf({a, th}, 1e-7).value, at0, 1e-5 * at0) << a;
    }
}

TEST(StablePdf, SelfSimilarNormalization)
{
    for (double t : {0.5, 2.0}) {
        const double s = std::pow(t, -1 / 1.5);
        const double mass = whole_line([&](double x) { return s * stable_pdf({1.5, 0.0}, x * s).value; }, 2.5);
        EXPECT_NEAR(mass, 1.0, 1e-8) << t;
    }
    for (const auto& [a, th] : std::array<std::array<double, 2>, 3>{{{1.3, 0.5}, {1.7, -0.3}, {0.7, 0.3}}}) {
        const double mass = whole_line([&](double x) { return stable_pdf({a, th}, x).value; }, 1 + a);
        EXPECT_NEAR(mass, 1.0, 1e-7) << a << " " << th;
    }
}

TEST(Extremal, MatchesSeriesOnOverlap)
{
    for (double a : {0.3, 0.5, 0.8, 1.2, 1.5, 1.8}) {
        const StableParams p(a, a < 1 ? -a : a - 2);
        int compared = 0;
        for (double x = -6.0; x <= 6.0; x += 0.125) {
            double series;
            try {
                series = stable_series(p, x).value;
            } catch (const OutOfRange&) {
                continue;
            }
            EXPECT_NEAR(extremal_from_mwright(a, x), series, 1e-8 * std::max(1.0, std::abs(series))) << a << " " << x;
            EXPECT_NEAR(stable_pdf(p, x).value, series, 1e-8 * std::max(1.0, std::abs(series))) << a << " " << x;
            ++compared;
        }
        EXPECT_GE(compared, 40) << a;
    }
}

TEST(Extremal, UnilateralBranch)
{
    EXPECT_EQ(extremal_from_mwright(0.5, -2.0), 0.0);
    EXPECT_THROW(extremal_from_mwright(1.0, 1.0), DomainError);
    EXPECT_THROW(extremal_from_mwright(2.5, 1.0), DomainError);
    // Levy-Smirnov: x^{-3/2} exp(-1 / (4x)) / (2 sqrt(pi))
    for (double x : {0.05, 0.3, 1.0, 7.0, 40.0}) {
        EXPECT_NEAR(extremal_from_mwright(0.5, x), std::pow(x, -1.5) * std::exp(-0.25 / x) / (2 * std::sqrt(pi)), 1e-13);
    }
    double prev = INFINITY;
    for (double x = 1.0; x < 1e4; x *= 1.7) {
        const double v = extremal_from_mwright(0.5, x);
        EXPECT_LT(v, prev);
        prev = v;
    }
    const double mass = integrate_semi_infinite([](double x) { return extremal_from_mwright(0.5, x); }, Decay::algebraic(1.5), 1e-10).value;
    EXPECT_NEAR(mass, 1.0, 1e-6);
    // bilateral with alpha = 2 is the Gaussian
    EXPECT_NEAR(extremal_from_mwright(2.0, -1.3), std::exp(-1.3 * 1.3 / 4) / (2 * std::sqrt(pi)), 1e-15);
}

TEST(WrightPdf, MomentFormula)
{
    EXPECT_NEAR(wright_pdf_moment(0.5, 1.0, 2.0), 2.0, 1e-14);
    EXPECT_NEAR(wright_pdf_moment(0.3, 1.7, 1e-12), 1.0, 1e-10);
    EXPECT_NEAR(wright_pdf_moment(0.4, 1.0, 1.5), std::tgamma(2.5) / std::tgamma(1.6), 1e-14);
    EXPECT_THROW(wright_pdf_moment(0.5, 0.4, 1.0), DomainError);
    EXPECT_THROW(wright_pdf_moment(1.5, 2.0, 1.0), DomainError);
    EXPECT_THROW(wright_pdf_moment(0.5, 1.0, 0.0), DomainError);
}

TEST(WrightPdf, MomentsByQuadrature)
{
    for (double nu : {0.25, 0.5, 0.75}) {
        for (double s : {0.5, 1.0, 2.0, 3.0}) {
            const auto r = integrate_semi_infinite([&](double x) { return std::pow(x, s) * m_eval(nu, x).value; }, Decay::exponential(1.0), 1e-12);
            EXPECT_NEAR(r.value, wright_pdf_moment(nu, 1.0, s), 1e-7) << nu << " " << s;
        }
    }
    // mu != 1: the pdf is Gamma(mu) W_{-nu,mu-nu}(-x); oracle values on fixed Gauss nodes, shared by all moments
    using gauss = boost::math::quadrature::gauss<double, 20>;
    // upper limits keep the oracle's cancellation inside its 100 digits; the pdf is below 1e-20 there
    for (const auto& [nu, mu, upper] : std::array<std::array<double, 3>, 2>{{{0.5, 1.5, 20.0}, {0.3, 0.8, 30.0}}}) {
        std::vector<std::array<double, 3>> nodes;  // x, weight, pdf
        const double panel = 2.0;
        for (double a = 0.0; a < upper; a += panel) {
            for (std::size_t i = 0; i < gauss::abscissa().size(); ++i) {
                for (double sign : {-1.0, 1.0}) {
                    const double u = gauss::abscissa()[i];
                    if (u == 0.0 && sign < 0) continue;
                    const double x = a + panel / 2 * (1 + sign * u);
                    nodes.push_back({x, panel / 2 * gauss::weights()[i], std::tgamma(mu) * oracle::wright(-nu, mu - nu, -x)});
                }
            }
        }
        auto moment = [&](double s) {
            double sum = 0.0;
            for (const auto& [x, w, p] : nodes) sum += w * std::pow(x, s) * p;
            return sum;
        };
        EXPECT_NEAR(moment(0.0), 1.0, 1e-10) << nu << " " << mu;
        for (double s : {1.0, 2.5}) EXPECT_NEAR(moment(s), wright_pdf_moment(nu, mu, s), 1e-8) << nu << " " << mu << " " << s;
    }
}

TEST(MWright, CharacteristicFunction)
{
    EXPECT_NEAR(mwright_characteristic(0.3, 0.0), 1.0, 1e-15);
    for (double k : {0.5, 1.0, 2.0}) {
        EXPECT_NEAR(mwright_characteristic(0.5, k), std::exp(-k * k), 1e-13);
        for (double nu : {0.25, 0.5, 0.75}) {
            const auto q = integrate_semi_infinite([&](double x) { return std::cos(k * x) * m_eval(nu, x).value; }, Decay::exponential(1.0), 1e-12);
            EXPECT_NEAR(mwright_characteristic(nu, k), q.value, 1e-6) << nu << " " << k;
            EXPECT_NEAR(mwright_characteristic(nu, k), oracle::ml(2 * nu, 1.0, -k * k), 1e-12);
        }
    }
    EXPECT_THROW(mwright_characteristic(1.0, 1.0), DomainError);
}

TEST(MWright, SineTransform)
{
    EXPECT_EQ(mwright_sine_transform(0.4, 0.0), 0.0);
    EXPECT_NEAR(mwright_sine_transform(0.5, 1.0), oracle::ml(1.0, 1.5, -1.0), 1e-13);
    for (double nu : {0.25, 0.5, 0.75}) {
        EXPECT_GT(mwright_sine_transform(nu, 0.1), 0.0);
        for (double k : {0.5, 1.5}) {
            const auto q = integrate_semi_infinite([&](double x) { return std::sin(k * x) * m_eval(nu, x).value; }, Decay::exponential(1.0), 1e-12);
            EXPECT_NEAR(mwright_sine_transform(nu, k), q.value, 1e-8) << nu << " " << k;
        }
    }
}

TEST(MWright, SpectralRepresentationOfMittagLeffler)
{
    for (double nu : {0.25, 0.5}) {
        for (double x : {0.5, 1.0, 2.0}) {
            const auto q = integrate_semi_infinite([&](double r) { return std::exp(-r * x) * m_eval(nu, r).value; }, Decay::exponential(1.0), 1e-12);
            EXPECT_NEAR(q.value, ml_eval(nu, 1.0, -x).value, 1e-7) << nu << " " << x;
        }
    }
}

TEST(MWright, Normalization)
{
    for (double nu : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const auto q = integrate_semi_infinite([&](double x) { return m_eval(nu, x).value; }, Decay::exponential(1.0), 1e-12);
        EXPECT_NEAR(q.value, 1.0, 1e-8) << nu;
    }
}

TEST(Subordination, MatchesSelfSimilarM)
{
    const std::array<std::array<double, 4>, 7> cases{{
        {0.5, 0.5, 1.0, 1.0}, {0.5, 0.5, 0.0, 1.0}, {0.3, 0.6, 0.5, 2.0}, {0.7, 0.4, 1.5, 0.5},
        {0.25, 0.8, 0.2, 1.0}, {0.6, 0.6, 2.0, 3.0}, {0.8, 0.9, 0.7, 1.0},
    }};
    for (const auto& [l, m, x, t] : cases) {
        const double ref = std::pow(t, -l * m) * m_oracle(l * m, x * std::pow(t, -l * m));
        EXPECT_NEAR(subordinate(l, m, x, t).value, ref, 1e-5 * std::max(1.0, ref)) << l << " " << m << " " << x << " " << t;
    }
    const double nu = 0.25, t = 2.0;
    EXPECT_NEAR(subordinate(0.5, 0.5, 0.0, t).value, std::pow(t, -nu) / std::tgamma(1 - nu), 1e-8);
    EXPECT_NEAR(subordinate(0.5, 0.5, 0.8, t).value, std::pow(t, -nu) * subordinate(0.5, 0.5, 0.8 * std::pow(t, -nu), 1.0).value, 1e-8);
    EXPECT_THROW(subordinate(1.0, 0.5, 1.0, 1.0), DomainError);
    EXPECT_THROW(subordinate(0.5, 0.5, -1.0, 1.0), DomainError);
    EXPECT_THROW(subordinate(0.5, 0.5, 1.0, 0.0), DomainError);
}

TEST(Green, DiffusionExamples)
{
    const GreenFunction heat(1.0);
    for (double x : {0.0, 0.4, -1.7, 3.0}) {
        for (double t : {0.3, 2.0}) {
            EXPECT_NEAR(diffusion_green(heat, x, t), std::exp(-x * x / (4 * t)) / (2 * std::sqrt(pi * t)), 1e-15);
        }
    }
    EXPECT_NEAR(GreenFunction(0.5).variance(4.0), 4.51351666838205, 1e-13);
    EXPECT_EQ(GreenFunction(0.5).mean(4.0), 0.0);
    EXPECT_THROW(diffusion_green(heat, 1.0, 0.0), DomainError);
    EXPECT_THROW(GreenFunction(1.2), DomainError);
    EXPECT_THROW(GreenFunction(0.5, 0.0), DomainError);
    EXPECT_THROW(diffusion_green(GreenFunction(0.5, 1.0, GreenVariant::drift), 1.0, 1.0), DomainError);
    const GreenFunction g(0.6, 2.5);
    EXPECT_EQ(g(0.7, 1.1), diffusion_green(g, -0.7, 1.1));
}

TEST(Green, DiffusionNormalizationAndVariance)
{
    for (const auto& [beta, k, t] : std::array<std::array<double, 3>, 4>{{{0.6, 1.0, 2.0}, {0.5, 1.0, 1.0}, {0.9, 0.7, 3.0}, {0.5, 2.0, 0.4}}}) {
        const GreenFunction g(beta, k);
        const double c = std::sqrt(k) * std::pow(t, beta / 2);
        auto mass = integrate_semi_infinite([&](double x) { return 2 * g(x, t); }, Decay::exponential(c), 1e-12);
        auto second = integrate_semi_infinite([&](double x) { return 2 * x * x * g(x, t); }, Decay::exponential(c), 1e-12);
        EXPECT_NEAR(mass.value, 1.0, 1e-8) << beta;
        EXPECT_NEAR(second.value, g.variance(t), 1e-8 * g.variance(t)) << beta;
    }
}

TEST(Green, DriftExamples)
{
    EXPECT_EQ(drift_green(0.5, -0.1, 1.0), 0.0);
    EXPECT_NEAR(drift_green(0.5, 0.0, 4.0), 0.5 / std::sqrt(pi), 1e-15);
    EXPECT_THROW(drift_green(0.5, 1.0, 0.0), DomainError);
    EXPECT_THROW(drift_green(1.2, 1.0, 1.0), DomainError);
    try {
        GreenFunction(1.0, 1.0, GreenVariant::drift)(0.5, 2.0);
        ADD_FAILURE() << "pulse returned a number";
    } catch (const SingularCase& e) {
        EXPECT_EQ(e.location(), 2.0);
    }
    const double t = 1.3;
    for (double beta : {0.3, 0.7, 0.95}) {
        const GreenFunction g(beta, 1.0, GreenVariant::drift);
        auto mass = integrate_semi_infinite([&](double x) { return g(x, t); }, Decay::exponential(1.0), 1e-12);
        auto first = integrate_semi_infinite([&](double x) { return x * g(x, t); }, Decay::exponential(1.0), 1e-12);
        auto second = integrate_semi_infinite([&](double x) { return x * x * g(x, t); }, Decay::exponential(1.0), 1e-12);
        EXPECT_NEAR(mass.value, 1.0, 1e-6) << beta;
        EXPECT_NEAR(first.value, g.mean(t), 1e-8) << beta;
        EXPECT_NEAR(second.value - first.value * first.value, g.variance(t), 1e-7) << beta;
    }
    // close to the pulse the mean sits near t
    EXPECT_NEAR(GreenFunction(0.95, 1.0, GreenVariant::drift).mean(t) / t, 1.0, 0.02);
}

TEST(Green, DriftEqualsExtremalStableForm)
{
    for (double beta : {0.3, 0.5, 0.8}) {
        for (double t : {0.5, 1.0, 2.0}) {
            for (double x = 0.1; x <= 6.0; x += 0.3) {
                // (t / beta) x^{-1-1/beta} L_beta^{-beta}(t x^{-1/beta}), with L from the convergent series
                const double y = t * std::pow(x, -1 / beta);
                double l;
                try {
                    l = stable_series({beta, -beta}, y).value;
                } catch (const OutOfRange&) {
                    continue;
                }
                const double form = t / beta * std::pow(x, -1 - 1 / beta) * l;
                EXPECT_NEAR(drift_green(beta, x, t), form, 1e-7) << beta << " " << t << " " << x;
            }
        }
    }
}

TEST(Green, DiffusionSolvesIntegralForm)
{
    // away from the source: u(x, t) = K J^beta [u_xx](x, t)
    const double beta = 0.5, k = 1.3, h = 1e-3;
    const GreenFunction g(beta, k);
    auto residual = [&](double x, double dt) {
        const auto uxx = GridSeries::sample(
            [&](double t) { return t == 0.0 ? 0.0 : (g(x + h, t) - 2 * g(x, t) + g(x - h, t)) / (h * h); }, dt,
            static_cast<std::size_t>(std::lround(1.0 / dt)) + 1);
        const auto rhs = rl_integral(uxx, beta);
        double worst = 0.0;
        for (std::size_t n = 1; n < rhs.size(); ++n) worst = std::max(worst, std::abs(g(x, rhs.t()[n]) - k * rhs[n]));
        return worst;
    };
    for (double x : {1.5, 2.5}) EXPECT_LE(residual(x, 1e-3), 1e-3) << x;
    // closer in, u is still O(0.1) one step after the source and the first cell dominates
    const double coarse = residual(0.8, 1e-3), fine = residual(0.8, 5e-4);
    EXPECT_LT(fine, 0.5 * coarse);
}
