// mtfsolve: driver for the multi-term time-fractional nonlocal diffusion
// solver.  Subcommands: solve, converge, kernel-check, truncation,
// gronwall-check.  Every subcommand accepts --config FILE with one
// key=value per line (keys match the long flag names); command-line flags
// override file values.  Exit codes: 0 success, 1 configuration error,
// 2 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtf/errors.hpp"
#include "mtf/gronwall.hpp"
#include "mtf/study.hpp"

namespace {

struct CommonOpts {
    int example = 0;
    std::vector<double> alphas;
    std::vector<double> mus;
    double r = 0.0;  // <= 0: use 2/alpha1
    double T = 1.0;
    std::string init = "interpolate";
    std::string out;
};

void add_order_flags(CLI::App* cmd, CommonOpts& opts, std::string& config_file) {
    cmd->add_option("--alphas", opts.alphas,
                    "fractional orders, strictly decreasing, in (0,1)")
        ->delimiter(',');
    cmd->add_option("--mus", opts.mus, "term weights (default: all 1)")->delimiter(',');
    cmd->add_option("--r", opts.r, "mesh grading exponent (default 2/alpha1)");
    cmd->add_option("--T", opts.T, "final time")->check(CLI::PositiveNumber);
    cmd->add_option("--config", config_file,
                    "config file, one key=value per line (flags take precedence)");
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Splice config-file entries into the argument list as --key=value tokens,
// skipping keys the command line already sets.  Appending keeps them inside
// the current subcommand's scope.
std::vector<std::string> splice_config(const std::vector<std::string>& args) {
    std::string file;
    std::set<std::string> present;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& arg = args[i];
        if (arg.rfind("--", 0) != 0) continue;
        const auto eq = arg.find('=');
        const std::string name = arg.substr(2, eq == std::string::npos ? eq : eq - 2);
        present.insert(name);
        if (name == "config")
            file = eq == std::string::npos
                       ? (i + 1 < args.size() ? args[i + 1] : std::string{})
                       : arg.substr(eq + 1);
    }
    if (file.empty()) return args;
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot read config file: " + file);
    std::vector<std::string> out = args;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trimmed(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(file + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(file + ":" + std::to_string(lineno) +
                                        ": empty key");
        if (!present.count(key)) out.push_back("--" + key + "=" + value);
    }
    return out;
}

mtf::FractionalOrders make_orders(const CommonOpts& opts, int example) {
    if (opts.alphas.empty()) {
        if (example != 1 && example != 2)
            throw std::invalid_argument("--alphas required when no --example is given");
        return mtf::default_orders(example, example == 1 ? 0.4 : 0.5);
    }
    std::vector<double> mus = opts.mus;
    if (mus.empty()) mus.assign(opts.alphas.size(), 1.0);
    if (mus.size() != opts.alphas.size())
        throw std::invalid_argument("--mus and --alphas must have the same length");
    std::vector<mtf::FractionalTerm> terms;
    for (std::size_t i = 0; i < opts.alphas.size(); ++i)
        terms.push_back({mus[i], opts.alphas[i]});
    return mtf::FractionalOrders(std::move(terms));
}

mtf::InitMode parse_init(const std::string& s) {
    if (s == "interpolate") return mtf::InitMode::interpolate;
    if (s == "ritz") return mtf::InitMode::ritz;
    throw std::invalid_argument("--init must be 'interpolate' or 'ritz'");
}

mtf::NormKind parse_norm(const std::string& s) {
    if (s == "linf-l2") return mtf::NormKind::linf_l2;
    if (s == "l2") return mtf::NormKind::l2;
    if (s == "h1") return mtf::NormKind::h1;
    throw std::invalid_argument("--norm must be 'linf-l2', 'l2' or 'h1'");
}

double effective_r(double r, const mtf::FractionalOrders& orders) {
    return r > 0.0 ? r : 2.0 / orders.alpha1();
}

int cmd_solve(const CommonOpts& opts, std::size_t N, std::size_t Ms) {
    const auto orders = make_orders(opts, opts.example);
    const auto problem = mtf::manufactured_problem(opts.example, orders);
    const double r = effective_r(opts.r, orders);

    mtf::SolverOptions solver_opts;
    solver_opts.init = parse_init(opts.init);
    const auto history = mtf::run(problem, N, Ms, r, solver_opts, opts.T);

    std::printf("example %d, %zu fractional terms, alpha1 = %g\n", opts.example,
                orders.size(), orders.alpha1());
    std::printf("N = %zu, Ms = %zu, r = %g, T = %g, unknowns = %zu\n", N, Ms, r, opts.T,
                history.smesh.num_interior());
    std::printf("step-size criterion (Lambda=1): tau_max = %.3e vs bound %.3e -> %s\n",
                history.stepsize.tau_max, history.stepsize.bound,
                history.stepsize.satisfied ? "satisfied" : "NOT satisfied (advisory)");

    std::printf("\n%6s %12s %12s %12s %6s %9s\n", "n", "t_n", "l-value", "a(l)", "cg",
                "resid");
    const std::size_t total = history.steps.size();
    for (std::size_t i = 0; i < total; ++i) {
        if (total > 20 && i == 10) {
            std::printf("   ...\n");
            i = total - 10;
        }
        const auto& d = history.steps[i];
        std::printf("%6zu %12.5e %12.5e %12.5e %6zu %9.2e", i + 1,
                    history.tmesh.t(i + 1), d.l_value, d.a_value, d.linear.iterations,
                    d.linear.rel_residual);
        if (i == 0) std::printf("  (%zu fixed-point corrections)", d.fixed_point_iterations);
        std::printf("\n");
    }

    if (problem.exact_u) {
        const double e_linf =
            mtf::study_error(history, problem, mtf::NormKind::linf_l2, false);
        const double e_l2 = mtf::study_error(history, problem, mtf::NormKind::l2, true);
        const double e_h1 = mtf::study_error(history, problem, mtf::NormKind::h1, false);
        std::printf("\nerrors vs exact solution:\n");
        std::printf("  max-over-levels L2: %.5E\n", e_linf);
        std::printf("  final-time L2:      %.5E\n", e_l2);
        std::printf("  max-over-levels H1: %.5E\n", e_h1);
    }
    if (problem.exact_l) {
        const auto hats = mtf::hat_integrals(history.smesh);
        const double l_num = mtf::nonlocal_l(hats, history.U.back());
        std::printf("  nonlocal l at T:    %.10e (exact %.10e)\n", l_num,
                    problem.exact_l(opts.T));
    }

    if (!opts.out.empty()) {
        std::ofstream file(opts.out);
        if (!file) throw std::runtime_error("cannot open output file: " + opts.out);
        const auto& mesh = history.smesh;
        const auto& U = history.U.back();
        if (mesh.dim() == 1) {
            file << "x,u\n";
            file << "0,0\n";
            for (std::size_t i = 1; i < mesh.Ms(); ++i)
                file << mesh.node_coords(i)[0] << "," << U[mesh.interior_index(i)] << "\n";
            file << mesh.lx() << ",0\n";
        } else {
            file << "x,y,u\n";
            for (std::size_t j = 0; j <= mesh.Ms(); ++j)
                for (std::size_t i = 0; i <= mesh.Ms(); ++i) {
                    const auto c = mesh.node_coords(i, j);
                    const double v =
                        mesh.is_interior(i, j) ? U[mesh.interior_index(i, j)] : 0.0;
                    file << c[0] << "," << c[1] << "," << v << "\n";
                }
        }
        std::printf("\nfinal-time solution written to %s\n", opts.out.c_str());
    }
    return 0;
}

int cmd_converge(const CommonOpts& opts, const std::vector<std::size_t>& Ns,
                 const std::vector<std::size_t>& Mss, const std::string& axis,
                 const std::string& norm, bool at_final, std::size_t threads) {
    mtf::StudyConfig config;
    config.example = opts.example;
    const auto orders = make_orders(opts, opts.example);
    config.alphas = orders.terms();
    config.r = effective_r(opts.r, orders);
    config.T = opts.T;
    config.axis = axis == "space" ? mtf::StudyAxis::space : mtf::StudyAxis::time;
    config.init = parse_init(opts.init);
    config.norm = parse_norm(norm);
    config.norm_at_final = at_final;
    config.threads = threads;
    config.out = opts.out;

    if (!Ns.empty() && !Mss.empty() && Ns != Mss)
        throw std::invalid_argument(
            "give either --N or --Ms (they are coupled, Ms = N per row)");
    config.resolutions = Ns.empty() ? Mss : Ns;
    if (config.resolutions.empty())
        throw std::invalid_argument("converge: need --N (or --Ms) resolution list");

    const auto rows = mtf::run_convergence(config);
    std::printf("%10s %14s %10s\n", "resolution", "error", "eoc");
    bool failed = false;
    for (const auto& row : rows) {
        if (row.has_eoc)
            std::printf("%10zu %14.5E %10.6f\n", row.resolution, row.error, row.eoc);
        else
            std::printf("%10zu %14.5E %10s\n", row.resolution, row.error, "");
        if (!row.failure.empty()) {
            std::printf("  ^ failed: %s\n", row.failure.c_str());
            failed = true;
        }
    }
    if (!opts.out.empty()) std::printf("written to %s\n", opts.out.c_str());
    return failed ? 2 : 0;
}

int cmd_kernel_check(const CommonOpts& opts, std::size_t N) {
    const auto orders = make_orders(opts, opts.example);
    const mtf::GradedTimeMesh mesh(opts.T, N, effective_r(opts.r, orders));
    const mtf::KernelTable table(orders, mesh);
    const auto report = mtf::check_kernel_properties(table);

    std::printf("kernel table: N = %zu, r = %g, %zu terms, alpha1 = %g\n", N, mesh.r(),
                orders.size(), orders.alpha1());
    std::printf("  positivity:              %s\n", report.positive ? "PASS" : "FAIL");
    std::printf("  row monotonicity:        %s", report.monotone ? "PASS" : "FAIL");
    if (!report.monotone)
        std::printf("  (first violation at n=%zu, j=%zu)", report.mono_n, report.mono_j);
    std::printf("\n");
    std::printf("  sigma residuals:         %s\n",
                report.sigma_residuals_ok ? "PASS" : "FAIL");
    std::printf("  pointwise lower bound:   %s  margin %.6f at (n=%zu, j=%zu)\n",
                report.pointwise_bound ? "PASS" : "FAIL", report.pointwise_margin,
                report.pointwise_n, report.pointwise_j);
    std::printf("  diagonal lower bound:    %s  margin %.6f\n",
                report.diagonal_bound ? "PASS" : "FAIL", report.diagonal_margin);
    std::printf("  integral-form bound:     %s  margin %.6f\n",
                report.integral_bound ? "PASS" : "FAIL", report.integral_margin);

    // positivity/monotonicity/sigma are hard guarantees; the lower-bound
    // margins are diagnostics (the pointwise form is known to dip below 1 on
    // strongly graded meshes).
    return (report.positive && report.monotone && report.sigma_residuals_ok) ? 0 : 2;
}

int cmd_truncation(const CommonOpts& opts, const std::vector<std::size_t>& Ns) {
    const auto orders = make_orders(opts, opts.example);
    if (Ns.empty()) throw std::invalid_argument("truncation: need --N list");
    const double r = effective_r(opts.r, orders);
    const auto rows = mtf::truncation_experiment(orders, opts.T, Ns, r);
    std::printf("scalar truncation of v = t^3 + t^alpha1, r = %g\n", r);
    std::printf("%10s %14s %10s\n", "N", "error", "rate");
    for (const auto& row : rows) {
        if (std::isnan(row.rate))
            std::printf("%10zu %14.5E %10s\n", row.N, row.max_weighted_error, "");
        else
            std::printf("%10zu %14.5E %10.6f\n", row.N, row.max_weighted_error, row.rate);
    }
    if (!opts.out.empty()) {
        std::ofstream file(opts.out);
        if (!file) throw std::runtime_error("cannot open output file: " + opts.out);
        file << "resolution,error,eoc\n";
        char buf[64];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            // rate column shifted to match the CSV schema (row k pairs N_k, N_{k+1})
            file << rows[i].N << ",";
            std::snprintf(buf, sizeof buf, "%.5E", rows[i].max_weighted_error);
            file << buf << ",";
            if (i + 1 < rows.size() && !std::isnan(rows[i + 1].rate)) {
                std::snprintf(buf, sizeof buf, "%.6f", rows[i + 1].rate);
                file << buf;
            }
            file << "\n";
        }
    }
    return 0;
}

int cmd_gronwall_check(const CommonOpts& opts, std::size_t N, double K) {
    const auto orders = make_orders(opts, opts.example);
    const mtf::GradedTimeMesh mesh(opts.T, N, effective_r(opts.r, orders));
    const mtf::KernelTable table(orders, mesh);

    bool ok = true;
    std::printf("complementary coefficients: N = %zu, r = %g\n", N, mesh.r());
    for (std::size_t n : {std::size_t{1}, N / 2, N}) {
        if (n == 0) continue;
        const mtf::GronwallTable p(table, n);
        const double resid = p.max_identity_residual();
        bool range_ok = true;
        for (std::size_t i = 1; i <= n; ++i) {
            const double cap = 1.0 / table.g(i, i);
            if (!(p.p(i) > 0.0 && p.p(i) <= cap * (1.0 + 1e-12))) range_ok = false;
        }
        std::printf("  n = %4zu: identity residual %.3e %s, 0 < p <= 1/g_ii %s\n", n,
                    resid, resid <= 1e-11 ? "PASS" : "FAIL", range_ok ? "PASS" : "FAIL");
        ok = ok && resid <= 1e-11 && range_ok;
    }

    std::vector<double> gammas;
    for (const auto& term : orders.terms()) gammas.push_back(term.alpha);
    const auto ws = mtf::check_weighted_sum_lemma(table, gammas, N);
    std::printf("  weighted-sum bound (gamma_s = alpha_s): lhs %.6e <= rhs %.6e %s\n",
                ws.lhs, ws.rhs, ws.pass ? "PASS" : "FAIL");
    ok = ok && ws.pass;

    const auto ml = mtf::check_ml_sum_lemma(table, K, N);
    std::printf("  ML-sum bound at K = %g: sum %.6e vs bound %.6e\n", K, ml.sum, ml.bound);
    std::printf("    as stated (S <= B):    %s\n", ml.statement_holds ? "PASS" : "FAIL");
    std::printf("    proof form (K*S <= B): %s\n", ml.proof_form_holds ? "PASS" : "FAIL");
    ok = ok && ml.statement_holds;

    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-term time-fractional nonlocal diffusion solver"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string config_file;

    auto* solve = app.add_subcommand("solve", "run one discretization and report");
    std::size_t solve_N = 32, solve_Ms = 32;
    solve->add_option("--example", opts.example, "manufactured problem id (1 or 2)")
        ->required();
    solve->add_option("--N", solve_N, "number of time steps");
    solve->add_option("--Ms", solve_Ms, "spatial subdivisions per direction");
    solve->add_option("--init", opts.init, "initializer: interpolate | ritz");
    solve->add_option("--out", opts.out, "write final-time nodal solution (CSV)");
    add_order_flags(solve, opts, config_file);

    auto* converge = app.add_subcommand("converge", "convergence study (Ms = N rows)");
    std::vector<std::size_t> conv_N, conv_Ms;
    std::string conv_axis = "time", conv_norm = "linf-l2";
    bool conv_at_final = false;
    std::size_t conv_threads = 1;
    converge->add_option("--example", opts.example, "manufactured problem id (1 or 2)")
        ->required();
    converge->add_option("--N", conv_N, "resolution list, increasing")->delimiter(',');
    converge->add_option("--Ms", conv_Ms, "alias resolution list (coupled to N)")
        ->delimiter(',');
    converge->add_option("--axis", conv_axis, "study label: time | space");
    converge->add_option("--norm", conv_norm, "error norm: linf-l2 | l2 | h1");
    converge->add_flag("--norm-at-final", conv_at_final,
                       "reduce over the final level only instead of max over levels");
    converge->add_option("--threads", conv_threads, "parallel rows (default 1)");
    converge->add_option("--init", opts.init, "initializer: interpolate | ritz");
    converge->add_option("--out", opts.out, "CSV output path");
    add_order_flags(converge, opts, config_file);

    auto* kcheck = app.add_subcommand("kernel-check", "discrete-kernel property report");
    std::size_t kcheck_N = 64;
    kcheck->add_option("--example", opts.example, "borrow an example's order set");
    kcheck->add_option("--N", kcheck_N, "number of time steps");
    add_order_flags(kcheck, opts, config_file);

    auto* trunc = app.add_subcommand("truncation", "scalar truncation-rate experiment");
    std::vector<std::size_t> trunc_N;
    trunc->add_option("--example", opts.example, "borrow an example's order set");
    trunc->add_option("--N", trunc_N, "resolution list, increasing")->delimiter(',');
    trunc->add_option("--out", opts.out, "CSV output path");
    add_order_flags(trunc, opts, config_file);

    auto* gcheck = app.add_subcommand("gronwall-check",
                                      "complementary-coefficient identity and bounds");
    std::size_t gcheck_N = 64;
    double gcheck_K = 1.0;
    gcheck->add_option("--example", opts.example, "borrow an example's order set");
    gcheck->add_option("--N", gcheck_N, "number of time steps");
    gcheck->add_option("--K", gcheck_K, "Mittag-Leffler argument scale");
    add_order_flags(gcheck, opts, config_file);

    try {
        auto args = splice_config({argv + 1, argv + argc});
        std::reverse(args.begin(), args.end());  // CLI11 consumes back-to-front
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (solve->parsed()) return cmd_solve(opts, solve_N, solve_Ms);
        if (converge->parsed())
            return cmd_converge(opts, conv_N, conv_Ms, conv_axis, conv_norm,
                                conv_at_final, conv_threads);
        if (kcheck->parsed()) return cmd_kernel_check(opts, kcheck_N);
        if (trunc->parsed()) return cmd_truncation(opts, trunc_N);
        if (gcheck->parsed()) return cmd_gronwall_check(opts, gcheck_N, gcheck_K);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const mtf::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
