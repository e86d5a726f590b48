#pragma once

// Reference implementations used only by the tests. They share no code with the
// library: everything is summed in 100-digit arithmetic with Boost's gamma.

#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_100;

inline big rgamma(const big& x)
{
    if (x <= 0 && x == floor(x)) return big(0);
    return 1 / boost::math::tgamma(x);
}

// Power series of E_{alpha,beta}(z) for real z.
inline double ml_series(double alpha, double beta, double z)
{
    const big a(alpha), b(beta), zz(z);
    big sum = 0, zn = 1;
    for (int n = 0; n < 20000; ++n) {
        const big term = zn * rgamma(a * n + b);
        sum += term;
        if (n > 10 && abs(term) < big("1e-40") * (1 + abs(sum)) && abs(zn) * rgamma(a * (n + 1) + b) * abs(zz) < big("1e-40") * (1 + abs(sum)))
            break;
        zn *= zz;
    }
    return static_cast<double>(sum);
}

// Optimally truncated asymptotic series of E_{alpha,beta}(-x) for large x, alpha < 2.
inline double ml_neg_asymptotic(double alpha, double beta, double x)
{
    const big a(alpha), b(beta), mz(-x);
    // Term magnitudes wobble near the poles of Gamma; truncate where the smooth
    // envelope x^-k Gamma(1 - b + a k) starts to grow.
    big sum = 0, zk = 1, envelope = 1e300;
    for (int k = 1; k < 4000; ++k) {
        zk /= mz;
        const big env = abs(zk) * boost::math::tgamma(1 - b + a * k);
        if (env > envelope) break;
        envelope = env;
        sum += -zk * rgamma(b - a * k);
        if (env < big("1e-45") * abs(sum)) break;
    }
    return static_cast<double>(sum);
}

// E_{alpha,beta}(z) for real z, picking whichever representation is exact in 100 digits.
inline double ml(double alpha, double beta, double z)
{
    if (z >= 0 || std::pow(-z, 1.0 / alpha) <= 150.0) return ml_series(alpha, beta, z);
    return ml_neg_asymptotic(alpha, beta, -z);
}

// Wright function W_{lambda,mu}(z) by its power series.
inline double wright(double lambda, double mu, double z)
{
    const big l(lambda), m(mu), zz(z);
    big sum = 0, zn = 1, fact = 1;
    int small = 0;  // poles of Gamma zero out isolated terms
    for (int n = 0; n < 5000; ++n) {
        if (n > 0) fact *= n;
        const big term = zn / fact * rgamma(l * n + m);
        sum += term;
        small = (abs(term) < big("1e-45") * (1 + abs(sum)) && abs(zz) < n) ? small + 1 : 0;
        if (small == 4) break;
        zn *= zz;
    }
    return static_cast<double>(sum);
}

// W_{lambda,mu}(z) together with sum|terms| / |sum|, which says how many of the
// 100 digits survived.
inline double wright_conditioned(double lambda, double mu, double z, double& condition)
{
    const big l(lambda), m(mu), zz(z);
    big sum = 0, abs_sum = 0, zn = 1, fact = 1;
    int small = 0;
    for (int n = 0; n < 5000; ++n) {
        if (n > 0) fact *= n;
        const big term = zn / fact * rgamma(l * n + m);
        sum += term;
        abs_sum += abs(term);
        small = (abs(term) < big("1e-45") * (1 + abs(sum)) && abs(zz) < n) ? small + 1 : 0;
        if (small == 4) break;
        zn *= zz;
    }
    condition = small == 4 ? static_cast<double>(abs_sum / abs(sum)) : INFINITY;
    return static_cast<double>(sum);
}

// Bessel J_nu(x) by its own power series, integer or real order nu >= 0.
inline double bessel_j(double nu, double x)
{
    const big v(nu), h = big(x) / 2;
    big sum = 0, p = 1, fact = 1;
    for (int k = 0; k < 400; ++k) {
        if (k > 0) fact *= k;
        sum += ((k % 2) ? -1 : 1) * p / (fact * boost::math::tgamma(v + k + 1));
        p *= h * h;
    }
    return static_cast<double>(sum * pow(h, v));
}

// Feller's convergent stable-density series: powers of x^-alpha for alpha < 1,
// powers of x for alpha > 1. x != 0. NaN when 100 digits cannot deliver.
inline double stable_density(double alpha, double theta, double x)
{
    if (x < 0) return stable_density(alpha, -theta, -x);
    const big a(alpha), th(theta), xx(x), pi = boost::math::constants::pi<big>();
    const bool inverse = alpha < 1;
    const big y = inverse ? pow(xx, -a) : xx, c = inverse ? a : 1 / a;
    const big phase = inverse ? pi * (th - a) / 2 : pi * (th - a) / (2 * a);
    big sum = 0, abs_sum = 0, yn = 1, fact = 1;
    int small = 0;
    for (int n = 1; n < 5000 && small < 4; ++n) {
        fact *= n;
        yn *= -y;
        const big env = abs(yn) / fact * boost::math::tgamma(1 + c * n);
        if (env > big("1e80")) return NAN;  // more cancellation than 100 digits hold
        sum += yn / fact * boost::math::tgamma(1 + c * n) * sin(n * phase);
        abs_sum += env;
        small = (env < big("1e-45") * (1 + abs(sum)) && n > 10) ? small + 1 : 0;
    }
    if (small < 4 || abs_sum > big("1e70") * abs(sum)) return NAN;
    return static_cast<double>(sum / (pi * xx));
}

} // namespace oracle
