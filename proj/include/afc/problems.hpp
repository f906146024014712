#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "afc/flux.hpp"

namespace afc {

/// Initial data formula. enforce_bc marks formulas that are nonzero on the
/// boundary (or only zero up to round-off, like sin(pi*1)); nodal
/// interpolation pins those entries to honor the homogeneous Dirichlet
/// condition.
struct InitialCondition {
    std::string name;
    bool enforce_bc = true;
    std::function<double(double, double)> value;
};

/// A runnable setup: flux field plus initial data, optionally with a known
/// exact solution and the source term that makes it solve the PDE.
struct Problem {
    std::string name;
    FluxField flux;
    InitialCondition initial;
    std::function<double(double, double, double)> exact;   // null unless manufactured
    std::function<double(double, double, double)> source;  // null unless manufactured

    bool manufactured() const { return static_cast<bool>(exact); }
};

inline const std::vector<std::string>& flux_names() {
    static const std::vector<std::string> names = {
        "advect-13", "advect-x2-2y", "advect-rot-t", "advect-24",
        "burgers-half", "burgers-xy", "burgers-rot-t",
    };
    return names;
}

inline const std::vector<std::string>& initial_names() {
    static const std::vector<std::string> names = {"poly", "sine", "gauss", "gauss-shifted"};
    return names;
}

inline const std::vector<std::string>& problem_names() {
    static const std::vector<std::string> names = {
        "advect-13", "advect-x2-2y", "advect-rot-t", "advect-24",
        "burgers-half", "burgers-xy", "burgers-rot-t",
        "trig-advect", "poly-advect", "trig-burgers", "poly-burgers",
    };
    return names;
}

namespace detail {
inline std::string catalog_list(const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) {
        if (!s.empty()) s += ", ";
        s += n;
    }
    return s;
}
}  // namespace detail

inline FluxField builtin_flux(const std::string& name) {
    if (name == "advect-13") return make_constant_flux(name, 1.0, 3.0, 0);
    if (name == "advect-24") return make_constant_flux(name, 2.0, 4.0, 0);
    if (name == "advect-x2-2y") {
        FluxField f;
        f.name = name;
        f.exponent = 0;
        f.divergence_free = false;  // div = 2x + 2
        f.beta = [](double x, double y, double) { return std::array<double, 2>{x * x, 2.0 * y}; };
        return f;
    }
    if (name == "advect-rot-t") {
        FluxField f;
        f.name = name;
        f.exponent = 0;
        f.divergence_free = false;
        f.time_dependent = true;
        f.beta = [](double x, double y, double t) {
            const double e = std::exp(-t);
            return std::array<double, 2>{e * std::sin(M_PI * x), e * std::sin(M_PI * y)};
        };
        return f;
    }
    if (name == "burgers-half") {
        FluxField f = make_constant_flux(name, 0.5, 0.5, 1);
        return f;
    }
    if (name == "burgers-xy") {
        FluxField f;
        f.name = name;
        f.exponent = 1;
        f.divergence_free = true;  // div = 1 - 1
        f.beta = [](double x, double y, double) { return std::array<double, 2>{x, -y}; };
        return f;
    }
    if (name == "burgers-rot-t") {
        FluxField f;
        f.name = name;
        f.exponent = 1;
        f.divergence_free = true;  // each component independent of its own variable
        f.time_dependent = true;
        f.beta = [](double x, double y, double t) {
            const double e = std::exp(-t);
            return std::array<double, 2>{e * std::sin(M_PI * y), e * std::sin(M_PI * x)};
        };
        return f;
    }
    throw std::invalid_argument("unknown flux '" + name + "' (catalog: " +
                                detail::catalog_list(flux_names()) + ")");
}

inline InitialCondition builtin_initial(const std::string& name) {
    InitialCondition ic;
    ic.name = name;
    if (name == "poly") {
        ic.enforce_bc = false;  // vanishes exactly on the boundary
        ic.value = [](double x, double y) { return x * (1.0 - x) * y * (1.0 - y); };
        return ic;
    }
    if (name == "sine") {
        ic.enforce_bc = true;  // sin(pi*1) is only zero up to round-off
        ic.value = [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); };
        return ic;
    }
    if (name == "gauss") {
        ic.enforce_bc = true;
        ic.value = [](double x, double y) {
            return std::exp(-100.0 * ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)));
        };
        return ic;
    }
    if (name == "gauss-shifted") {
        ic.enforce_bc = true;
        ic.value = [](double x, double y) {
            return 10.0 * std::exp(-10.0 * ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5))) + 5.0;
        };
        return ic;
    }
    throw std::invalid_argument("unknown initial condition '" + name + "' (catalog: " +
                                detail::catalog_list(initial_names()) + ")");
}

namespace detail {

inline double exact_trig(double x, double y, double t) {
    return std::exp(-t) * std::sin(M_PI * x) * std::sin(M_PI * y);
}
inline double exact_poly(double x, double y, double t) {
    return std::exp(-t) * x * (1.0 - x) * y * (1.0 - y);
}

// Sources below are hand-differentiated: f = u_t + beta . grad(u) for the
// linear flux, and f = u_t + 2 u (beta . grad(u)) for the quadratic flux with
// divergence-free beta.
inline double source_trig_advect(double x, double y, double t) {
    const double e = std::exp(-t);
    const double sx = std::sin(M_PI * x), sy = std::sin(M_PI * y);
    const double cx = std::cos(M_PI * x), cy = std::cos(M_PI * y);
    return e * (-sx * sy + M_PI * (2.0 * cx * sy + 4.0 * sx * cy));
}
inline double source_poly_advect(double x, double y, double t) {
    const double e = std::exp(-t);
    const double px = (1.0 - 2.0 * x) * y * (1.0 - y);
    const double py = x * (1.0 - x) * (1.0 - 2.0 * y);
    return e * (-x * (1.0 - x) * y * (1.0 - y) + 2.0 * px + 4.0 * py);
}
inline double source_trig_burgers(double x, double y, double t) {
    const double e = std::exp(-t);
    const double sx = std::sin(M_PI * x), sy = std::sin(M_PI * y);
    const double cx = std::cos(M_PI * x), cy = std::cos(M_PI * y);
    const double u = e * sx * sy;
    const double grad_sum = e * M_PI * (cx * sy + sx * cy);  // u_x + u_y
    return -u + u * grad_sum;
}
inline double source_poly_burgers(double x, double y, double t) {
    const double e = std::exp(-t);
    const double u = e * x * (1.0 - x) * y * (1.0 - y);
    const double grad_sum = e * ((1.0 - 2.0 * x) * y * (1.0 - y) + x * (1.0 - x) * (1.0 - 2.0 * y));
    return -u + u * grad_sum;
}

}  // namespace detail

/// Manufactured setups with closed-form exact solution and source.
inline Problem manufactured_case(const std::string& name) {
    Problem p;
    p.name = name;
    if (name == "trig-advect") {
        p.flux = builtin_flux("advect-24");
        p.initial = builtin_initial("sine");
        p.exact = detail::exact_trig;
        p.source = detail::source_trig_advect;
        return p;
    }
    if (name == "poly-advect") {
        p.flux = builtin_flux("advect-24");
        p.initial = builtin_initial("poly");
        p.exact = detail::exact_poly;
        p.source = detail::source_poly_advect;
        return p;
    }
    if (name == "trig-burgers") {
        p.flux = builtin_flux("burgers-half");
        p.initial = builtin_initial("sine");
        p.exact = detail::exact_trig;
        p.source = detail::source_trig_burgers;
        return p;
    }
    if (name == "poly-burgers") {
        p.flux = builtin_flux("burgers-half");
        p.initial = builtin_initial("poly");
        p.exact = detail::exact_poly;
        p.source = detail::source_poly_burgers;
        return p;
    }
    throw std::invalid_argument("unknown manufactured case '" + name +
                                "' (catalog: trig-advect, poly-advect, trig-burgers, poly-burgers)");
}

/// Looks up a problem by catalog name. Bare flux names get their default
/// initial data; "<flux>+<initial>" selects an explicit pairing, e.g.
/// "advect-rot-t+gauss-shifted".
inline Problem builtin_problem(const std::string& name) {
    if (name == "trig-advect" || name == "poly-advect" || name == "trig-burgers" ||
        name == "poly-burgers")
        return manufactured_case(name);

    const auto plus = name.find('+');
    const std::string flux_name = name.substr(0, plus);
    std::string initial_name;
    if (plus != std::string::npos) {
        initial_name = name.substr(plus + 1);
    } else if (flux_name == "advect-13" || flux_name == "advect-24") {
        initial_name = "poly";
    } else if (flux_name == "advect-x2-2y" || flux_name == "advect-rot-t" ||
               flux_name == "burgers-half" || flux_name == "burgers-xy") {
        initial_name = "sine";
    } else if (flux_name == "burgers-rot-t") {
        initial_name = "gauss-shifted";
    }

    Problem p;
    try {
        p.flux = builtin_flux(flux_name);
        p.initial = builtin_initial(initial_name);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("unknown problem '" + name + "' (catalog: " +
                                    detail::catalog_list(problem_names()) +
                                    "; pairings as <flux>+<initial> with initials " +
                                    detail::catalog_list(initial_names()) + ")");
    }
    p.name = name;
    return p;
}

}  // namespace afc
