#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fracfn/quadrature.hpp"

using namespace fracfn;
using std::numbers::pi;

TEST(IntegrateFinite, Basics)
{
    EXPECT_NEAR(integrate_finite([](double x) { return x; }, 0.0, 1.0).value, 0.5, 1e-14);
    EXPECT_NEAR(integrate_finite([](double x) { return std::sin(x); }, 0.0, pi).value, 2.0, 1e-13);
    const auto r = integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
    EXPECT_NEAR(r.value, 2.0, 1e-9);
    EXPECT_GT(r.evaluations, 0);
    EXPECT_GE(r.abs_err, 0.0);
}

TEST(IntegrateFinite, RejectsBadInput)
{
    auto f = [](double x) { return x; };
    EXPECT_THROW(integrate_finite(f, 1.0, 0.0), DomainError);
    EXPECT_THROW(integrate_finite(f, 0.0, 1.0, -1.0), DomainError);
    EXPECT_THROW(integrate_finite([](double) { return NAN; }, 0.0, 1.0), NonConvergence);
}

TEST(IntegrateFinite, BudgetExhaustionThrows)
{
    auto rough = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
    EXPECT_THROW(integrate_finite(rough, 0.0, 1.0, 1e-14, 3000), NonConvergence);
}

struct Known {
    std::function<double(double)> f;
    double a, b, exact;
};

TEST(IntegrateFinite, ErrorEstimateBoundsTrueError)
{
    const std::vector<Known> battery{
        {[](double x) { return x * x; }, 0, 3, 9.0},
        {[](double x) { return std::exp(x); }, 0, 1, std::numbers::e - 1},
        {[](double x) { return std::cos(x); }, 0, pi / 2, 1.0},
        {[](double x) { return 1 / (1 + x * x); }, 0, 1, pi / 4},
        {[](double x) { return std::log(x); }, 0, 1, -1.0},
        {[](double x) { return std::sqrt(x); }, 0, 4, 16.0 / 3},
        {[](double x) { return std::pow(x, -0.25); }, 0, 1, 4.0 / 3},
        {[](double x) { return std::exp(-x * x); }, -3, 3, std::sqrt(pi) * std::erf(3.0)},
        {[](double x) { return std::sin(10 * x); }, 0, pi, 0.0},
        {[](double x) { return x * std::sin(x); }, 0, pi, pi},
        {[](double x) { return 1 / (x + 1); }, 0, 1, std::log(2.0)},
        {[](double x) { return std::abs(x - 0.3); }, 0, 1, 0.045 + 0.245},
        {[](double x) { return std::exp(-x) * std::cos(x); }, 0, 10, 0.5 * (1 + std::exp(-10.0) * (std::sin(10.0) - std::cos(10.0)))},
        {[](double x) { return 1 / std::sqrt(1 - x * x); }, -1, 1, pi},
        {[](double x) { return x * x * x * x * x; }, -1, 2, (64.0 - 1.0) / 6},
        {[](double x) { return std::tanh(x); }, 0, 2, std::log(std::cosh(2.0))},
        {[](double x) { return 1 / (1e-2 + (x - 0.5) * (x - 0.5)); }, 0, 1, 2 * 10 * std::atan(5.0)},
        {[](double x) { return std::cos(50 * x) * std::cos(50 * x); }, 0, pi, pi / 2},
        {[](double x) { return x < 0.5 ? 0.0 : 1.0; }, 0, 1, 0.5},
        {[](double x) { return std::log(x) * std::log(x); }, 0, 1, 2.0},
    };
    ASSERT_EQ(battery.size(), 20u);
    for (std::size_t i = 0; i < battery.size(); ++i) {
        const auto& k = battery[i];
        const auto r = integrate_finite(k.f, k.a, k.b, 1e-10);
        EXPECT_LE(std::abs(r.value - k.exact), std::max(1e-10, r.abs_err)) << "case " << i;
    }
}

TEST(IntegrateFinite, Linearity)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 20; ++i) {
        const double a = u(rng), b = u(rng), w1 = u(rng), w2 = u(rng);
        auto f = [w1](double x) { return std::sin(w1 * x) + x * x; };
        auto g = [w2](double x) { return std::exp(w2 * x); };
        const auto rf = integrate_finite(f, 0, 1, 1e-12);
        const auto rg = integrate_finite(g, 0, 1, 1e-12);
        const auto rc = integrate_finite([&](double x) { return a * f(x) + b * g(x); }, 0, 1, 1e-12);
        EXPECT_NEAR(rc.value, a * rf.value + b * rg.value,
                    1e-12 + std::abs(a) * rf.abs_err + std::abs(b) * rg.abs_err + rc.abs_err);
    }
}

TEST(IntegrateSemiInfinite, ExponentialAndAlgebraic)
{
    EXPECT_NEAR(integrate_semi_infinite([](double r) { return std::exp(-r); }, Decay::exponential()).value, 1.0, 1e-10);
    EXPECT_NEAR(integrate_semi_infinite([](double r) { return std::exp(-r * r); }, Decay::exponential()).value,
                0.8862269254527580, 1e-10);
    EXPECT_NEAR(integrate_semi_infinite([](double r) { return 1 / (1 + r * r); }, Decay::algebraic(2)).value, pi / 2, 1e-10);
    // spectral kernel at order 1/2: (1/pi) r^{-1/2} / (r + 1)
    auto k = [](double r) { return 1 / pi * std::pow(r, -0.5) / (r + 1); };
    EXPECT_NEAR(integrate_semi_infinite(k, Decay::algebraic(1.5)).value, 1.0, 1e-9);
}

TEST(IntegrateSemiInfinite, DecayMismatchDetected)
{
    EXPECT_THROW(integrate_semi_infinite([](double r) { return 1 / (1 + r); }, Decay::algebraic(2)), DecayMismatch);
    EXPECT_THROW(integrate_semi_infinite([](double) { return 1.0; }, Decay::exponential()), DecayMismatch);
}

TEST(LaplaceNumeric, ElementaryPairs)
{
    EXPECT_NEAR(laplace_numeric([](double) { return 1.0; }, 2.0).value, 0.5, 1e-10);
    EXPECT_NEAR(laplace_numeric([](double t) { return t; }, 1.0).value, 1.0, 1e-10);
    EXPECT_NEAR(laplace_numeric([](double t) { return std::sqrt(t); }, 1.0).value, 0.8862269254527580, 1e-9);
    EXPECT_THROW(laplace_numeric([](double) { return 1.0; }, 0.0), DomainError);
}

TEST(FindRoot, Examples)
{
    EXPECT_NEAR(find_root([](double x) { return x - 1; }, 0, 2), 1.0, 1e-12);
    EXPECT_NEAR(find_root([](double x) { return std::cos(x); }, 1, 2), 1.5707963267948966, 1e-12);
    EXPECT_NEAR(find_root([](double x) { return x * x - 2; }, 1, 2), 1.4142135623730951, 1e-12);
    EXPECT_THROW(find_root([](double x) { return x * x + 1; }, -1, 1), NoSignChange);
}

TEST(FindRoot, StaysInsideBracket)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 100; ++i) {
        const double c = u(rng);
        const double a = c - 1.0 - std::abs(u(rng)), b = c + 0.1 + std::abs(u(rng));
        const double x = find_root([c](double t) { return std::atan(t - c); }, a, b, 1e-10);
        EXPECT_GE(x, a);
        EXPECT_LE(x, b);
        EXPECT_NEAR(x, c, 1e-9);
    }
}
