// Command-line front end: mesh queries, single runs, the DMP table, and the
// temporal/spatial convergence studies.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afc/afc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

std::vector<afc::Variant> parse_scheme_list(const std::string& s) {
    std::vector<afc::Variant> variants;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) variants.push_back(afc::parse_variant(item));
    }
    if (variants.empty()) throw std::invalid_argument("empty scheme list '" + s + "'");
    return variants;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    return out;
}

// Config keys are the long option names without the dashes. Entries feed the
// matching option's normal conversion and validation, but only when the flag
// was not given on the command line, so explicit flags win. CLI11 only reads
// config files registered on the top-level app, not on subcommands, hence the
// manual application here.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    for (const auto& [key, value] : afc::parse_config_file(path)) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw std::invalid_argument("unknown config key '" + key + "' in " + path);
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

int cmd_mesh_info(int m, const std::string& out_path) {
    const afc::Mesh mesh = afc::build_uniform_mesh(m);
    const afc::MeshQuality quality = afc::mesh_quality(mesh);
    std::printf("%d nodes, %d triangles, h0=%g\n", mesh.n_nodes(), mesh.n_triangles(), mesh.h0);
    std::printf("h=%.17g, interior nodes %zu, boundary nodes %zu\n", mesh.h,
                mesh.interior_ids.size(), mesh.boundary_ids.size());
    std::printf("shape regularity gamma=%.17g, quasi-uniformity rho=%.17g\n", quality.gamma,
                quality.rho);
    if (!out_path.empty()) {
        auto out = open_output(out_path);
        afc::write_mesh(mesh, out);
        std::printf("mesh written to %s\n", out_path.c_str());
    }
    return kExitOk;
}

int cmd_run(const std::string& problem_name, const std::string& scheme, int m, double t_final,
            int n0, double cfl, const std::string& out_path, bool dump_limiter) {
    const afc::Problem problem = afc::builtin_problem(problem_name);
    const afc::Mesh mesh = afc::build_uniform_mesh(m);

    afc::SchemeConfig cfg;
    cfg.variant = afc::parse_variant(scheme);
    cfg.flux = problem.flux;
    cfg.source = problem.source;
    cfg.t_final = t_final;
    cfg.step.n0 = n0;
    cfg.step.cfl = cfl;

    const afc::TimeIntegrator integrator(mesh, cfg);
    const afc::NodalField u0 =
        afc::interpolate(mesh, problem.initial.value, problem.initial.enforce_bc);
    const auto [k, steps] = cfg.step.resolve(t_final, mesh.h0);
    const auto [final_state, report] = integrator.integrate(u0);

    std::printf("problem %s, scheme %s, M=%d\n", problem_name.c_str(), scheme.c_str(), m);
    std::printf("steps %d, k=%.6e, t_final=%.6e\n", steps, k, t_final);
    std::printf("state range [%.6e, %.6e], initial range [%.6e, %.6e], bound violation %.3e\n",
                report.observed_min, report.observed_max, report.g_min, report.g_max,
                report.max_violation());

    double error = std::numeric_limits<double>::quiet_NaN();
    if (problem.manufactured()) {
        error = afc::l2_error(mesh, final_state.values, problem.exact, final_state.time);
        std::printf("L2 error vs exact solution: %.6e\n", error);
    }

    if (!out_path.empty()) {
        afc::StudyTable table;
        table.problem = problem_name;
        table.variant = cfg.variant;
        table.resolution_label = "N0";
        afc::ConvergenceRow row;
        row.resolution = steps;
        row.error = error;
        table.rows.push_back(row);
        auto out = open_output(out_path);
        afc::write_study_csv(out, {table});
    }

    if (dump_limiter) {
        const std::string dump_path = out_path.empty() ? "limiter.csv" : out_path + ".limiter.csv";
        const afc::SparseMatrix transport = afc::assemble_convection(
            mesh, integrator.pattern(), cfg.flux, final_state.values, final_state.time);
        const afc::DiffusionOperator diffusion = afc::artificial_diffusion(transport);
        const afc::FluxSet fluxes = afc::antidiffusive_fluxes(diffusion, final_state.values);
        const afc::LimiterFactors factors =
            afc::correction_factors(mesh, diffusion, fluxes, final_state.values);
        auto out = open_output(dump_path);
        afc::write_limiter_csv(out, mesh, factors, fluxes);
        std::printf("limiter diagnostics written to %s\n", dump_path.c_str());
    }
    return kExitOk;
}

int cmd_dmp(const std::string& problem_name, int m, int steps, const std::string& out_path) {
    const afc::DmpTable table = afc::dmp_table(problem_name, m, steps);
    afc::write_dmp_text(std::cout, table);
    if (!out_path.empty()) {
        auto out = open_output(out_path);
        afc::write_dmp_csv(out, table);
    }
    return kExitOk;
}

int cmd_temporal(const std::string& problem_name, const std::string& schemes, int m,
                 const std::string& n0_csv, int ref_n0, double t_final,
                 const std::string& out_path) {
    afc::StudyConfig cfg;
    cfg.problem = problem_name;
    cfg.variants = parse_scheme_list(schemes);
    cfg.m = m;
    cfg.n0_list = afc::parse_int_list(n0_csv);
    cfg.ref_n0 = ref_n0;
    cfg.t_final = t_final;

    const auto tables = afc::temporal_convergence(cfg);
    afc::write_study_text(std::cout, tables);
    if (!out_path.empty()) {
        auto out = open_output(out_path);
        afc::write_study_csv(out, tables);
    }
    for (const auto& table : tables)
        for (const auto& row : table.rows)
            if (row.diverged) return kExitDiverged;
    return kExitOk;
}

int cmd_spatial(const std::string& problem_name, const std::string& schemes,
                const std::string& m_csv, double t_final, double cfl,
                const std::string& out_path) {
    afc::StudyConfig cfg;
    cfg.problem = problem_name;
    cfg.variants = parse_scheme_list(schemes);
    cfg.m_list = afc::parse_int_list(m_csv);
    cfg.t_final = t_final;
    cfg.cfl = cfl;

    const auto tables = afc::spatial_convergence(cfg);
    afc::write_study_text(std::cout, tables);
    if (!out_path.empty()) {
        auto out = open_output(out_path);
        afc::write_study_csv(out, tables);
    }
    for (const auto& table : tables)
        for (const auto& row : table.rows)
            if (row.diverged) return kExitDiverged;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D scalar conservation law solver: P1 finite elements with "
                 "algebraic flux correction and SSP-RK2 time stepping"};
    app.require_subcommand(1);

    std::function<int()> action;

    // mesh-info
    {
        auto* cmd = app.add_subcommand("mesh-info", "print mesh statistics, optionally dump the mesh");
        auto m = std::make_shared<int>(10);
        auto out = std::make_shared<std::string>();
        auto config = std::make_shared<std::string>();
        cmd->add_option("--m", *m, "subdivisions per side")->check(CLI::PositiveNumber);
        cmd->add_option("--out", *out, "write the mesh as plain text to this path");
        cmd->add_option("--config", *config, "key=value config file (flags win)");
        cmd->callback([=, &action] {
            action = [=] {
                apply_config_file(cmd, *config);
                return cmd_mesh_info(*m, *out);
            };
        });
    }

    // run
    {
        auto* cmd = app.add_subcommand("run", "integrate one problem and report the final state");
        auto problem = std::make_shared<std::string>("advect-13");
        auto scheme = std::make_shared<std::string>("afc");
        auto m = std::make_shared<int>(50);
        auto t_final = std::make_shared<double>(0.1);
        auto n0 = std::make_shared<int>(0);
        auto cfl = std::make_shared<double>(0.1);
        auto out = std::make_shared<std::string>();
        auto dump = std::make_shared<bool>(false);
        auto config = std::make_shared<std::string>();
        cmd->add_option("--problem", *problem, "catalog problem name");
        cmd->add_option("--scheme", *scheme, "standard, low_order, or afc");
        cmd->add_option("--m", *m, "subdivisions per side")->check(CLI::PositiveNumber);
        cmd->add_option("--t-final", *t_final, "final time")->check(CLI::PositiveNumber);
        cmd->add_option("--n0", *n0, "number of time steps (0: use the cfl rule k = cfl*h0)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--cfl", *cfl, "step factor when --n0 is 0")->check(CLI::PositiveNumber);
        cmd->add_option("--out", *out, "write a one-row study CSV to this path");
        cmd->add_flag("--dump-limiter", *dump, "write limiter diagnostics CSV for the final state");
        cmd->add_option("--config", *config, "key=value config file (flags win)");
        cmd->callback([=, &action] {
            action = [=] {
                apply_config_file(cmd, *config);
                return cmd_run(*problem, *scheme, *m, *t_final, *n0, *cfl, *out, *dump);
            };
        });
    }

    // dmp
    {
        auto* cmd = app.add_subcommand("dmp", "bound-preservation table along the y = 0.1 line");
        auto problem = std::make_shared<std::string>("advect-13");
        auto m = std::make_shared<int>(10);
        auto steps = std::make_shared<int>(10);
        auto out = std::make_shared<std::string>();
        auto config = std::make_shared<std::string>();
        cmd->add_option("--problem", *problem,
                        "flux taken from this problem; initial data is the Gaussian bump");
        cmd->add_option("--m", *m, "subdivisions per side")->check(CLI::PositiveNumber);
        cmd->add_option("--steps", *steps, "number of SSP-RK2 steps of size h^1.01/10")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", *out, "write the table as CSV to this path");
        cmd->add_option("--config", *config, "key=value config file (flags win)");
        cmd->callback([=, &action] {
            action = [=] {
                apply_config_file(cmd, *config);
                return cmd_dmp(*problem, *m, *steps, *out);
            };
        });
    }

    // temporal
    {
        auto* cmd = app.add_subcommand("temporal", "temporal convergence study against a fine reference");
        auto problem = std::make_shared<std::string>("advect-13");
        auto scheme = std::make_shared<std::string>("standard,afc");
        auto m = std::make_shared<int>(50);
        auto n0 = std::make_shared<std::string>("100,200,400,800,1600,3200");
        auto ref_n0 = std::make_shared<int>(10000);
        auto t_final = std::make_shared<double>(0.1);
        auto out = std::make_shared<std::string>();
        auto config = std::make_shared<std::string>();
        cmd->add_option("--problem", *problem, "catalog problem name");
        cmd->add_option("--scheme", *scheme, "comma list of variants to compare");
        cmd->add_option("--m", *m, "subdivisions per side")->check(CLI::PositiveNumber);
        cmd->add_option("--n0", *n0, "comma list of step counts");
        cmd->add_option("--ref-n0", *ref_n0, "step count of the reference solution")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--t-final", *t_final, "final time")->check(CLI::PositiveNumber);
        cmd->add_option("--out", *out, "write the study CSV to this path");
        cmd->add_option("--config", *config, "key=value config file (flags win)");
        cmd->callback([=, &action] {
            action = [=] {
                apply_config_file(cmd, *config);
                return cmd_temporal(*problem, *scheme, *m, *n0, *ref_n0, *t_final, *out);
            };
        });
    }

    // spatial
    {
        auto* cmd = app.add_subcommand("spatial", "spatial convergence study on a manufactured solution");
        auto problem = std::make_shared<std::string>("trig-advect");
        auto scheme = std::make_shared<std::string>("standard,afc");
        auto m = std::make_shared<std::string>("10,20,40,80");
        auto t_final = std::make_shared<double>(0.01);
        auto cfl = std::make_shared<double>(0.1);
        auto out = std::make_shared<std::string>();
        auto config = std::make_shared<std::string>();
        cmd->add_option("--problem", *problem, "manufactured problem name");
        cmd->add_option("--scheme", *scheme, "comma list of variants to compare");
        cmd->add_option("--m", *m, "comma list of mesh subdivisions");
        cmd->add_option("--t-final", *t_final, "final time")->check(CLI::PositiveNumber);
        cmd->add_option("--cfl", *cfl, "time step factor in k = cfl*h0")->check(CLI::PositiveNumber);
        cmd->add_option("--out", *out, "write the study CSV to this path");
        cmd->add_option("--config", *config, "key=value config file (flags win)");
        cmd->callback([=, &action] {
            action = [=] {
                apply_config_file(cmd, *config);
                return cmd_spatial(*problem, *scheme, *m, *t_final, *cfl, *out);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        return action ? action() : kExitConfig;
    } catch (const CLI::ParseError& e) {
        // Config file values reuse the option conversion and validation
        // machinery, so bad values surface here rather than during parse.
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const afc::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    }
}
