#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "afc/fem.hpp"
#include "afc/flux.hpp"
#include "afc/limiter.hpp"
#include "afc/mesh.hpp"
#include "afc/sparse.hpp"

namespace afc {

enum class Variant { standard, low_order, afc };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::standard: return "standard";
        case Variant::low_order: return "low_order";
        case Variant::afc: return "afc";
    }
    return "?";
}

inline Variant parse_variant(const std::string& s) {
    if (s == "standard") return Variant::standard;
    if (s == "low_order" || s == "low-order") return Variant::low_order;
    if (s == "afc") return Variant::afc;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected standard, low_order, or afc)");
}

/// Uniform time-step rule: either an explicit step count (k = t_final / n0),
/// or a mesh-driven step k = cfl * h0^power rounded to a whole number of
/// steps from below.
struct StepRule {
    int n0 = 0;          // > 0 selects the explicit count
    double cfl = 0.1;
    double power = 1.0;

    std::pair<double, int> resolve(double t_final, double h0) const {
        if (n0 > 0) return {t_final / n0, n0};
        const double target = cfl * std::pow(h0, power);
        const int n = std::max(1, static_cast<int>(std::ceil(t_final / target - 1e-9)));
        return {t_final / n, n};
    }
};

struct SchemeConfig {
    Variant variant = Variant::afc;
    FluxField flux;
    std::function<double(double, double, double)> source;  // optional f(x,y,t)
    double t_final = 0.1;
    StepRule step;
    double cg_tol = 1e-12;
    int cg_max_iter = 1000;
};

/// Extrema bookkeeping for the discrete maximum principle: the admissible
/// interval G is set by the initial coefficients and every stage of every
/// step is checked against it.
struct StepReport {
    double g_min = 0.0, g_max = 0.0;
    double observed_min = 0.0, observed_max = 0.0;
    int n_steps = 0;
    std::vector<double> step_min, step_max;  // per accepted step

    double max_violation() const {
        return std::max({g_min - observed_min, observed_max - g_max, 0.0});
    }
    bool within_bounds(double slack = 1e-12) const { return max_violation() <= slack; }
};

struct DivergenceError : std::runtime_error {
    int step;
    explicit DivergenceError(int s)
        : std::runtime_error("integration diverged (non-finite state) at step " + std::to_string(s)),
          step(s) {}
};

/// Explicit SSP-RK2 integrator for the three semi-discrete variants.
///
///   standard:  M alpha' = T(alpha) alpha + b
///   low_order: M_L alpha' = (T + D) alpha + b
///   afc:       M_L alpha' = (T + D) alpha + rbar(alpha) + b
///
/// Each Runge-Kutta stage rebuilds T, D, and the limited correction from that
/// stage's own state. For a linear flux with time-independent beta the
/// transport matrix and its diffusion are assembled once and reused.
class TimeIntegrator {
public:
    TimeIntegrator(const Mesh& mesh, SchemeConfig cfg)
        : mesh_(mesh), cfg_(std::move(cfg)), pat_(make_pattern(mesh)),
          mass_(assemble_mass(mesh, pat_)), lumped_(lump_mass(mass_)) {
        if (cfg_.flux.exponent == 1 && !cfg_.flux.divergence_free)
            std::fprintf(stderr,
                         "warning: flux '%s' has exponent 1 but is not divergence free; "
                         "bound preservation is not guaranteed\n",
                         cfg_.flux.name.c_str());
        cache_transport_ = (cfg_.flux.exponent == 0 && !cfg_.flux.time_dependent);
        if (cache_transport_) {
            cached_transport_ = assemble_convection(mesh_, pat_, cfg_.flux, {}, 0.0);
            cached_diffusion_ = artificial_diffusion(cached_transport_);
        }
    }

    const Mesh& mesh() const { return mesh_; }
    const SparseMatrix& mass() const { return mass_; }
    const std::vector<double>& lumped_mass() const { return lumped_; }
    std::shared_ptr<const SparsePattern> pattern() const { return pat_; }

    /// Full right-hand side before mass scaling; boundary rows are zeroed.
    std::vector<double> spatial_operator(std::span<const double> alpha, double t) const {
        const SparseMatrix& transport = transport_at(alpha, t);
        std::vector<double> rhs(alpha.size());

        if (cfg_.variant == Variant::standard) {
            transport.matvec(alpha, rhs);
        } else {
            const DiffusionOperator& diff = diffusion_at(transport);
            std::vector<double> tmp(alpha.size());
            transport.matvec(alpha, rhs);
            diff.matrix.matvec(alpha, tmp);
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += tmp[i];
            if (cfg_.variant == Variant::afc) {
                const FluxSet fluxes = antidiffusive_fluxes(diff, alpha);
                const LimiterFactors factors = correction_factors(mesh_, diff, fluxes, alpha);
                const std::vector<double> rbar = afc_correction(factors, fluxes);
                for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += rbar[i];
            }
        }

        if (cfg_.source) add_load(rhs, t);
        for (int i : mesh_.boundary_ids) rhs[static_cast<std::size_t>(i)] = 0.0;
        return rhs;
    }

    /// One forward-Euler stage of length k starting from (alpha, t).
    NodalField forward_euler_stage(const NodalField& alpha, double t, double k) const {
        const std::vector<double> rhs = spatial_operator(alpha.values, t);
        NodalField next;
        next.time = t + k;
        next.values = alpha.values;
        if (cfg_.variant == Variant::standard) {
            const std::vector<double> delta =
                cg_solve(mass_, rhs, mesh_.boundary, cfg_.cg_tol, cfg_.cg_max_iter);
            for (std::size_t i = 0; i < next.values.size(); ++i) next.values[i] += k * delta[i];
        } else {
            for (std::size_t i = 0; i < next.values.size(); ++i)
                next.values[i] += k * rhs[i] / lumped_[i];
        }
        for (int i : mesh_.boundary_ids) next.values[static_cast<std::size_t>(i)] = 0.0;
        return next;
    }

    /// One SSP-RK2 (Heun) step: average of the starting state and a
    /// forward-Euler stage taken from the first stage at time t + k. The
    /// intermediate stage is written to stage_out when requested (used by
    /// the bound monitoring in integrate()).
    NodalField ssp_rk2_step(const NodalField& alpha, double t, double k,
                            NodalField* stage_out = nullptr) const {
        NodalField stage1 = forward_euler_stage(alpha, t, k);
        NodalField second = forward_euler_stage(stage1, t + k, k);
        if (stage_out) *stage_out = std::move(stage1);
        NodalField next;
        next.time = t + k;
        next.values.resize(alpha.values.size());
        for (std::size_t i = 0; i < next.values.size(); ++i)
            next.values[i] = 0.5 * (alpha.values[i] + second.values[i]);
        for (int i : mesh_.boundary_ids) next.values[static_cast<std::size_t>(i)] = 0.0;
        return next;
    }

    /// Runs the uniform partition determined by the step rule and t_final.
    /// The optional callback sees every accepted step (1-based index).
    std::pair<NodalField, StepReport> integrate(
        const NodalField& u0,
        const std::function<void(int, const NodalField&)>& on_step = {}) const {
        const auto [k, n_steps] = cfg_.step.resolve(cfg_.t_final, mesh_.h0);

        StepReport report;
        report.n_steps = n_steps;
        bounds(u0.values, report.g_min, report.g_max);
        report.observed_min = report.g_min;
        report.observed_max = report.g_max;
        report.step_min.reserve(static_cast<std::size_t>(n_steps));
        report.step_max.reserve(static_cast<std::size_t>(n_steps));

        NodalField state = u0;
        state.time = 0.0;
        for (int n = 1; n <= n_steps; ++n) {
            const double t = (n - 1) * k;
            NodalField stage;
            NodalField next = ssp_rk2_step(state, t, k, &stage);
            double lo, hi;
            bounds(stage.values, lo, hi);
            report.observed_min = std::min(report.observed_min, lo);
            report.observed_max = std::max(report.observed_max, hi);
            bounds(next.values, lo, hi);
            if (!std::isfinite(lo) || !std::isfinite(hi)) throw DivergenceError(n);
            report.observed_min = std::min(report.observed_min, lo);
            report.observed_max = std::max(report.observed_max, hi);
            report.step_min.push_back(lo);
            report.step_max.push_back(hi);
            state = std::move(next);
            if (on_step) on_step(n, state);
        }
        return {std::move(state), std::move(report)};
    }

private:
    const SparseMatrix& transport_at(std::span<const double> alpha, double t) const {
        if (cache_transport_) return cached_transport_;
        scratch_transport_ = assemble_convection(mesh_, pat_, cfg_.flux, alpha, t);
        scratch_diffusion_valid_ = false;
        return scratch_transport_;
    }
    const DiffusionOperator& diffusion_at(const SparseMatrix& transport) const {
        if (cache_transport_) return cached_diffusion_;
        if (!scratch_diffusion_valid_) {
            scratch_diffusion_ = artificial_diffusion(transport);
            scratch_diffusion_valid_ = true;
        }
        return scratch_diffusion_;
    }

    void add_load(std::vector<double>& rhs, double t) const {
        std::vector<double> f_nodal(rhs.size());
        for (int i = 0; i < mesh_.n_nodes(); ++i) {
            const auto& z = mesh_.nodes[static_cast<std::size_t>(i)];
            f_nodal[static_cast<std::size_t>(i)] = cfg_.source(z[0], z[1], t);
        }
        if (cfg_.variant == Variant::standard) {
            std::vector<double> load(rhs.size());
            mass_.matvec(f_nodal, load);
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += load[i];
        } else {
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += lumped_[i] * f_nodal[i];
        }
    }

    static void bounds(std::span<const double> v, double& lo, double& hi) {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }

    const Mesh& mesh_;
    SchemeConfig cfg_;
    std::shared_ptr<const SparsePattern> pat_;
    SparseMatrix mass_;
    std::vector<double> lumped_;

    bool cache_transport_ = false;
    SparseMatrix cached_transport_;
    DiffusionOperator cached_diffusion_;
    mutable SparseMatrix scratch_transport_;
    mutable DiffusionOperator scratch_diffusion_;
    mutable bool scratch_diffusion_valid_ = false;
};

}  // namespace afc
