#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>

namespace afc {

/// Flux function f(u) = beta(x, y, t) * u^(exponent + 1). exponent 0 gives
/// linear advection, exponent 1 the Burgers-type nonlinearity; the latter is
/// well posed here only when beta is divergence free.
struct FluxField {
    std::string name;
    int exponent = 0;
    bool divergence_free = false;
    bool time_dependent = false;
    std::function<std::array<double, 2>(double x, double y, double t)> beta;

    std::array<double, 2> operator()(double x, double y, double t) const { return beta(x, y, t); }
};

inline FluxField make_constant_flux(std::string name, double bx, double by, int exponent) {
    FluxField f;
    f.name = std::move(name);
    f.exponent = exponent;
    f.divergence_free = true;
    f.time_dependent = false;
    f.beta = [bx, by](double, double, double) { return std::array<double, 2>{bx, by}; };
    return f;
}

}  // namespace afc
