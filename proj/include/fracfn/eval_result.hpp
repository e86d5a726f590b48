#pragma once

#include <cmath>
#include <complex>
#include <string_view>

namespace fracfn {

enum class Method { series, asymptotic, spectral_integral, closed_form, quadrature };

constexpr std::string_view to_string(Method m)
{
    switch (m) {
    case Method::series: return "series";
    case Method::asymptotic: return "asymptotic";
    case Method::spectral_integral: return "spectral_integral";
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    }
    return "unknown";
}

// Value of a special-function evaluation together with how it was obtained.
// `limit_warning` is raised when the evaluation sits close to a singular limit
// of its family and the error estimate should be read with suspicion.
template <class T>
struct BasicEvalResult {
    T value{};
    double abs_err = 0.0;
    Method method = Method::series;
    bool limit_warning = false;

    operator T() const { return value; }
};

using EvalResult = BasicEvalResult<double>;
using ComplexEvalResult = BasicEvalResult<std::complex<double>>;

inline EvalResult real_part(const ComplexEvalResult& r)
{
    return {r.value.real(), r.abs_err, r.method, r.limit_warning};
}

} // namespace fracfn
