#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "afc/fem.hpp"
#include "afc/mesh.hpp"
#include "afc/problems.hpp"
#include "afc/time_integration.hpp"

namespace afc {

// ---------------------------------------------------------------------------
// Worker pool. Serial unless AFC_THREADS asks for more; results are written
// to preallocated slots so the output order never depends on scheduling.
// ---------------------------------------------------------------------------

inline int worker_count(std::size_t n_jobs) {
    int n = 1;
    if (const char* env = std::getenv("AFC_THREADS")) n = std::max(1, std::atoi(env));
    return static_cast<int>(std::min(static_cast<std::size_t>(n), n_jobs));
}

inline void run_jobs(const std::vector<std::function<void()>>& jobs) {
    const int workers = worker_count(jobs.size());
    if (workers <= 1) {
        for (const auto& job : jobs) job();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++) {
                try {
                    jobs[i]();
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Study configuration and result tables
// ---------------------------------------------------------------------------

struct StudyConfig {
    std::string problem = "advect-13";
    std::vector<Variant> variants = {Variant::standard, Variant::afc};
    int m = 50;                 // mesh for temporal studies and dmp
    std::vector<int> n0_list;   // temporal resolutions
    int ref_n0 = 0;             // temporal reference resolution
    std::vector<int> m_list;    // spatial resolutions
    double t_final = 0.1;
    double cfl = 0.1;           // spatial studies: k = cfl * h0^cfl_power
    double cfl_power = 1.0;
    unsigned seed = 0;          // reserved; all built-in runs are deterministic
};

struct ConvergenceRow {
    double resolution = 0.0;  // N0 for temporal studies, h0 for spatial ones
    double error = 0.0;
    double order = 0.0;
    bool has_order = false;
    bool diverged = false;
};

struct StudyTable {
    std::string problem;
    Variant variant = Variant::afc;
    std::string resolution_label;  // "N0" or "h0"
    std::vector<ConvergenceRow> rows;
};

/// order_k = log(e_{k-1}/e_k) / log(ratio); NaN marks undefined entries
/// (first row or nonpositive errors).
inline std::vector<double> compute_orders(const std::vector<double>& errors, double ratio) {
    std::vector<double> orders(errors.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 1; k < errors.size(); ++k) {
        if (errors[k - 1] > 0.0 && errors[k] > 0.0)
            orders[k] = std::log(errors[k - 1] / errors[k]) / std::log(ratio);
    }
    return orders;
}

namespace detail {

inline void fill_orders(StudyTable& table, bool resolution_refines_downward) {
    std::vector<double> errors;
    for (const auto& row : table.rows) errors.push_back(row.error);
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        if (table.rows[k].diverged || table.rows[k - 1].diverged) continue;
        const double ratio = resolution_refines_downward
                                 ? table.rows[k - 1].resolution / table.rows[k].resolution
                                 : table.rows[k].resolution / table.rows[k - 1].resolution;
        if (errors[k - 1] > 0.0 && errors[k] > 0.0 && ratio > 1.0) {
            table.rows[k].order = std::log(errors[k - 1] / errors[k]) / std::log(ratio);
            table.rows[k].has_order = true;
        }
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Temporal convergence: fixed mesh, shrinking time step, per-variant
// reference solution at ref_n0 compared through the consistent-mass norm.
// ---------------------------------------------------------------------------

inline std::vector<StudyTable> temporal_convergence(const StudyConfig& cfg) {
    if (cfg.n0_list.empty()) throw std::invalid_argument("temporal study needs a nonempty N0 list");
    if (cfg.ref_n0 <= 0) throw std::invalid_argument("temporal study needs a reference N0");
    for (int n0 : cfg.n0_list)
        if (n0 >= cfg.ref_n0)
            throw std::invalid_argument("reference N0 must exceed every study N0");

    const Problem problem = builtin_problem(cfg.problem);
    const Mesh mesh = build_uniform_mesh(cfg.m);
    const auto pat = make_pattern(mesh);
    const SparseMatrix mass = assemble_mass(mesh, pat);
    const NodalField u0 = interpolate(mesh, problem.initial.value, problem.initial.enforce_bc);

    const auto run_once = [&](Variant variant, int n0) {
        SchemeConfig scheme;
        scheme.variant = variant;
        scheme.flux = problem.flux;
        scheme.source = problem.source;
        scheme.t_final = cfg.t_final;
        scheme.step.n0 = n0;
        TimeIntegrator integrator(mesh, scheme);
        return integrator.integrate(u0).first;
    };

    // Phase 1: one reference trajectory per variant.
    std::vector<NodalField> references(cfg.variants.size());
    std::vector<bool> reference_ok(cfg.variants.size(), true);
    {
        std::vector<std::function<void()>> jobs;
        for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
            jobs.push_back([&, v] {
                try {
                    references[v] = run_once(cfg.variants[v], cfg.ref_n0);
                } catch (const DivergenceError&) {
                    reference_ok[v] = false;
                }
            });
        }
        run_jobs(jobs);
    }

    // Phase 2: every (variant, N0) study run.
    std::vector<StudyTable> tables(cfg.variants.size());
    {
        std::vector<std::function<void()>> jobs;
        for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
            tables[v].problem = cfg.problem;
            tables[v].variant = cfg.variants[v];
            tables[v].resolution_label = "N0";
            tables[v].rows.resize(cfg.n0_list.size());
            if (!reference_ok[v]) {
                tables[v].rows.resize(1);
                tables[v].rows[0] = {static_cast<double>(cfg.ref_n0), 0.0, 0.0, false, true};
                continue;
            }
            for (std::size_t r = 0; r < cfg.n0_list.size(); ++r) {
                jobs.push_back([&, v, r] {
                    ConvergenceRow row;
                    row.resolution = cfg.n0_list[r];
                    try {
                        const NodalField final_state = run_once(cfg.variants[v], cfg.n0_list[r]);
                        std::vector<double> e(final_state.values.size());
                        for (std::size_t i = 0; i < e.size(); ++i)
                            e[i] = final_state.values[i] - references[v].values[i];
                        row.error = l2_norm_discrete(mass, e);
                    } catch (const DivergenceError&) {
                        row.diverged = true;
                    }
                    tables[v].rows[r] = row;
                });
            }
        }
        run_jobs(jobs);
    }

    for (auto& table : tables) {
        // A diverged resolution ends that variant's table with the marker row.
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (table.rows[r].diverged) {
                table.rows.resize(r + 1);
                break;
            }
        }
        detail::fill_orders(table, /*resolution_refines_downward=*/false);
    }
    return tables;
}

// ---------------------------------------------------------------------------
// Spatial convergence: manufactured solution, k tied to h0, error against
// the exact solution at t_final.
// ---------------------------------------------------------------------------

inline std::vector<StudyTable> spatial_convergence(const StudyConfig& cfg) {
    if (cfg.m_list.empty()) throw std::invalid_argument("spatial study needs a nonempty mesh list");
    const Problem problem = builtin_problem(cfg.problem);
    if (!problem.manufactured())
        throw std::invalid_argument("spatial study needs a manufactured problem with an exact solution (" +
                                    std::string("trig-advect, poly-advect, trig-burgers, poly-burgers)"));

    std::vector<StudyTable> tables(cfg.variants.size());
    std::vector<std::function<void()>> jobs;
    for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
        tables[v].problem = cfg.problem;
        tables[v].variant = cfg.variants[v];
        tables[v].resolution_label = "h0";
        tables[v].rows.resize(cfg.m_list.size());
        for (std::size_t r = 0; r < cfg.m_list.size(); ++r) {
            jobs.push_back([&cfg, &tables, &problem, v, r] {
                const Mesh mesh = build_uniform_mesh(cfg.m_list[r]);
                ConvergenceRow row;
                row.resolution = mesh.h0;
                try {
                    SchemeConfig scheme;
                    scheme.variant = cfg.variants[v];
                    scheme.flux = problem.flux;
                    scheme.source = problem.source;
                    scheme.t_final = cfg.t_final;
                    scheme.step.n0 = 0;
                    scheme.step.cfl = cfg.cfl;
                    scheme.step.power = cfg.cfl_power;
                    TimeIntegrator integrator(mesh, scheme);
                    const NodalField u0 =
                        interpolate(mesh, problem.initial.value, problem.initial.enforce_bc);
                    const NodalField final_state = integrator.integrate(u0).first;
                    row.error = l2_error(mesh, final_state.values, problem.exact, final_state.time);
                } catch (const DivergenceError&) {
                    row.diverged = true;
                }
                tables[v].rows[r] = row;
            });
        }
    }
    run_jobs(jobs);

    for (auto& table : tables) {
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (table.rows[r].diverged) {
                table.rows.resize(r + 1);
                break;
            }
        }
        detail::fill_orders(table, /*resolution_refines_downward=*/true);
    }
    return tables;
}

// ---------------------------------------------------------------------------
// DMP table: Gaussian bump, 10 steps with k = h^1.01 / 10, sampled along
// the y = 0.1 grid line for the standard and AFC variants.
// ---------------------------------------------------------------------------

struct DmpTable {
    std::vector<double> x;
    std::vector<double> standard_values;
    std::vector<double> afc_values;
    StepReport standard_report;
    StepReport afc_report;
    double k = 0.0;
    int n_steps = 0;
};

inline DmpTable dmp_table(const std::string& flux_problem = "advect-13", int m = 10, int n_steps = 10) {
    const Problem base = builtin_problem(flux_problem);
    const Mesh mesh = build_uniform_mesh(m);
    const InitialCondition initial = builtin_initial("gauss");
    const NodalField u0 = interpolate(mesh, initial.value, initial.enforce_bc);

    DmpTable table;
    table.k = std::pow(mesh.h, 1.01) / 10.0;
    table.n_steps = n_steps;

    const auto run_variant = [&](Variant variant, std::vector<double>& out, StepReport& report) {
        SchemeConfig scheme;
        scheme.variant = variant;
        scheme.flux = base.flux;
        scheme.t_final = n_steps * table.k;
        scheme.step.n0 = n_steps;
        TimeIntegrator integrator(mesh, scheme);
        auto [final_state, run_report] = integrator.integrate(u0);
        report = std::move(run_report);

        // Sample the node nearest to each (i/10, 0.1); exact grid hits when
        // m is a multiple of 10.
        for (int i = 0; i <= 10; ++i) {
            const double x = i / 10.0;
            int best = 0;
            double best_dist = std::numeric_limits<double>::max();
            for (int node = 0; node < mesh.n_nodes(); ++node) {
                const auto& z = mesh.nodes[static_cast<std::size_t>(node)];
                const double d = std::abs(z[0] - x) + std::abs(z[1] - 0.1);
                if (d < best_dist) {
                    best_dist = d;
                    best = node;
                }
            }
            if (variant == Variant::standard) table.x.push_back(x);
            out.push_back(final_state.values[static_cast<std::size_t>(best)]);
        }
    };

    run_variant(Variant::standard, table.standard_values, table.standard_report);
    run_variant(Variant::afc, table.afc_values, table.afc_report);
    return table;
}

// ---------------------------------------------------------------------------
// Emission: aligned text mirrors the 5-significant-digit table style, CSV
// keeps full precision. Both go through the same row formatting routine.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_double(double v, bool full_precision) {
    char buf[40];
    std::snprintf(buf, sizeof buf, full_precision ? "%.17g" : "%.4e", v);
    return buf;
}
inline std::string fmt_order(double v, bool has, bool full_precision) {
    if (!has) return full_precision ? "" : "-";
    char buf[40];
    std::snprintf(buf, sizeof buf, full_precision ? "%.17g" : "%.4f", v);
    return buf;
}
inline std::string fmt_resolution(const StudyTable& table, double resolution,
                                  bool full_precision) {
    char buf[40];
    if (table.resolution_label == "N0")
        std::snprintf(buf, sizeof buf, "%d", static_cast<int>(resolution));
    else
        std::snprintf(buf, sizeof buf, full_precision ? "%.17g" : "%g", resolution);
    return buf;
}

}  // namespace detail

inline void write_study_text(std::ostream& os, const std::vector<StudyTable>& tables) {
    for (const auto& table : tables) {
        os << "problem " << table.problem << ", variant " << variant_name(table.variant) << "\n";
        char buf[128];
        std::snprintf(buf, sizeof buf, "  %10s  %12s  %8s\n", table.resolution_label.c_str(),
                      "L2 error", "order");
        os << buf;
        for (const auto& row : table.rows) {
            if (row.diverged) {
                std::snprintf(buf, sizeof buf, "  %10s  %12s  %8s\n",
                              detail::fmt_resolution(table, row.resolution, false).c_str(),
                              "diverged", "-");
            } else {
                std::snprintf(buf, sizeof buf, "  %10s  %12s  %8s\n",
                              detail::fmt_resolution(table, row.resolution, false).c_str(),
                              detail::fmt_double(row.error, false).c_str(),
                              detail::fmt_order(row.order, row.has_order, false).c_str());
            }
            os << buf;
        }
        os << "\n";
    }
}

inline void write_study_csv(std::ostream& os, const std::vector<StudyTable>& tables) {
    os << "resolution,error,order,variant,problem\n";
    for (const auto& table : tables) {
        for (const auto& row : table.rows) {
            os << detail::fmt_resolution(table, row.resolution, true) << ','
               << (row.diverged ? "diverged" : detail::fmt_double(row.error, true)) << ','
               << detail::fmt_order(row.order, row.has_order, true) << ','
               << variant_name(table.variant) << ',' << table.problem << '\n';
        }
    }
}

inline void write_dmp_text(std::ostream& os, const DmpTable& table) {
    os << "coefficients along y = 0.1 after " << table.n_steps << " steps, k = "
       << detail::fmt_double(table.k, false) << "\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %4s  %12s  %12s\n", "x", "standard", "afc");
    os << buf;
    for (std::size_t i = 0; i < table.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "  %4.1f  %12s  %12s\n", table.x[i],
                      detail::fmt_double(table.standard_values[i], false).c_str(),
                      detail::fmt_double(table.afc_values[i], false).c_str());
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "standard: min %s (bound violation %s)\n",
                  detail::fmt_double(table.standard_report.observed_min, false).c_str(),
                  detail::fmt_double(table.standard_report.max_violation(), false).c_str());
    os << buf;
    std::snprintf(buf, sizeof buf, "afc:      min %s (bound violation %s)\n",
                  detail::fmt_double(table.afc_report.observed_min, false).c_str(),
                  detail::fmt_double(table.afc_report.max_violation(), false).c_str());
    os << buf;
}

inline void write_dmp_csv(std::ostream& os, const DmpTable& table) {
    os << "x,standard,afc\n";
    for (std::size_t i = 0; i < table.x.size(); ++i) {
        os << detail::fmt_double(table.x[i], true) << ','
           << detail::fmt_double(table.standard_values[i], true) << ','
           << detail::fmt_double(table.afc_values[i], true) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Config files: flat key=value lines, '#' starts a comment, blank lines
// ignored. Keys mirror the CLI flag names; explicit flags take precedence.
// ---------------------------------------------------------------------------

inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::map<std::string, std::string> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected key=value, got '" + line + "'");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": empty key");
        entries[key] = value;
    }
    return entries;
}

/// Parses "100,200,400" style lists (used by --n0 and --m-list style flags).
inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const int v = std::stoi(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad integer list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list '" + s + "'");
    return out;
}

}  // namespace afc
