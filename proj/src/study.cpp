#include "mtf/study.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mtf {

namespace {

// time factor shared by both manufactured solutions
double g_of(double t, double alpha1) { return t * t * t + std::pow(t, alpha1); }

const char* norm_label(NormKind norm) {
    switch (norm) {
        case NormKind::linf_l2: return "linf-l2";
        case NormKind::l2: return "l2";
        case NormKind::h1: return "h1";
    }
    return "?";
}

}  // namespace

FractionalOrders default_orders(int example, double alpha1) {
    auto close = [&](double v) { return std::abs(alpha1 - v) < 1e-12; };
    std::vector<double> alphas;
    if (example == 1 && close(0.4))
        alphas = {0.4, 0.37, 0.35, 0.33};
    else if (example == 1 && close(0.7))
        alphas = {0.7, 0.68, 0.66, 0.64, 0.62};
    else if (example == 2 && close(0.5))
        alphas = {0.5, 0.47, 0.45, 0.43};
    else if (example == 2 && close(0.9))
        alphas = {0.9, 0.88, 0.86, 0.84, 0.82};
    else
        alphas = {alpha1};
    std::vector<FractionalTerm> terms;
    terms.reserve(alphas.size());
    for (double a : alphas) terms.push_back({1.0, a});
    return FractionalOrders(std::move(terms));
}

ProblemSpec manufactured_problem(int example, const FractionalOrders& orders) {
    const double alpha1 = orders.alpha1();
    auto g = [alpha1](double t) { return g_of(t, alpha1); };
    // multi-term Caputo derivative of g, exact
    auto dg = [orders, alpha1](double t) {
        return exact_multiterm_caputo(orders, {{1.0, 3.0}, {1.0, alpha1}}, t);
    };
    auto a_fn = [](double w) { return 3.0 + std::sin(w); };

    if (example == 1) {
        ProblemSpec p(orders);
        p.dim = 1;
        p.lx = std::numbers::pi;
        p.a = a_fn;
        p.m1 = 2.0;
        p.m2 = 4.0;
        p.lipschitz = 1.0;
        // u = g(t) sin x; l(u) = 2 g; -Laplace u = g sin x
        p.f = [g, dg](double x, double, double t) {
            return (dg(t) + (3.0 + std::sin(2.0 * g(t))) * g(t)) * std::sin(x);
        };
        p.u0 = [](double, double) { return 0.0; };
        p.u0_dx = [](double, double) { return 0.0; };
        p.exact_u = [g](double x, double, double t) { return g(t) * std::sin(x); };
        p.exact_dx = [g](double x, double, double t) { return g(t) * std::cos(x); };
        p.exact_l = [g](double t) { return 2.0 * g(t); };
        return p;
    }
    if (example == 2) {
        ProblemSpec p(orders);
        p.dim = 2;
        p.lx = 1.0;
        p.ly = 1.0;
        p.a = a_fn;
        p.m1 = 2.0;
        p.m2 = 4.0;
        p.lipschitz = 1.0;
        // u = g(t)(x-x^2)(y-y^2); l(u) = g/36; -Laplace u = 2g[(x-x^2)+(y-y^2)]
        p.f = [g, dg](double x, double y, double t) {
            const double px = x - x * x, py = y - y * y;
            return dg(t) * px * py +
                   (3.0 + std::sin(g(t) / 36.0)) * 2.0 * g(t) * (px + py);
        };
        p.u0 = [](double, double) { return 0.0; };
        p.u0_dx = [](double, double) { return 0.0; };
        p.u0_dy = [](double, double) { return 0.0; };
        p.exact_u = [g](double x, double y, double t) {
            return g(t) * (x - x * x) * (y - y * y);
        };
        p.exact_dx = [g](double x, double y, double t) {
            return g(t) * (1.0 - 2.0 * x) * (y - y * y);
        };
        p.exact_dy = [g](double x, double y, double t) {
            return g(t) * (x - x * x) * (1.0 - 2.0 * y);
        };
        p.exact_l = [g](double t) { return g(t) / 36.0; };
        return p;
    }
    throw std::invalid_argument("manufactured_problem: unknown example id");
}

std::vector<double> compute_eoc(const std::vector<double>& errors) {
    if (errors.size() < 2)
        throw std::invalid_argument("compute_eoc: need at least two errors");
    std::vector<double> eoc;
    eoc.reserve(errors.size() - 1);
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (!(errors[k] > 0.0) || !(errors[k + 1] > 0.0))
            throw std::invalid_argument("compute_eoc: errors must be positive");
        eoc.push_back(std::log2(errors[k] / errors[k + 1]));
    }
    return eoc;
}

double study_error(const SolutionHistory& history, const ProblemSpec& problem,
                   NormKind norm, bool at_final) {
    const auto& tmesh = history.tmesh;
    const std::size_t N = tmesh.N();
    const std::size_t first = (at_final || norm == NormKind::l2) ? N : 1;

    auto level_error = [&](std::size_t n) {
        const double t = tmesh.t(n);
        if (norm == NormKind::h1) {
            if (!problem.exact_dx || (problem.dim == 2 && !problem.exact_dy))
                throw std::invalid_argument("study_error: exact gradient missing");
            ScalarField dx = [&, t](double x, double y) { return problem.exact_dx(x, y, t); };
            ScalarField dy;
            if (problem.exact_dy)
                dy = [&, t](double x, double y) { return problem.exact_dy(x, y, t); };
            return h1_error(history.smesh, history.U[n], dx, dy);
        }
        if (!problem.exact_u)
            throw std::invalid_argument("study_error: exact solution missing");
        return l2_error(history.smesh, history.U[n],
                        [&, t](double x, double y) { return problem.exact_u(x, y, t); });
    };

    double worst = 0.0;
    for (std::size_t n = first; n <= N; ++n) worst = std::max(worst, level_error(n));
    return worst;
}

namespace {

ConvergenceRow run_row(const StudyConfig& config, const ProblemSpec& problem,
                       double r, std::size_t resolution) {
    ConvergenceRow row;
    row.resolution = resolution;
    try {
        SolverOptions options;
        options.init = config.init;
        const auto history =
            run(problem, resolution, resolution, r, options, config.T);
        row.error = study_error(history, problem, config.norm, config.norm_at_final);
    } catch (const std::exception& e) {
        row.error = std::numeric_limits<double>::quiet_NaN();
        row.failure = e.what();
    }
    return row;
}

}  // namespace

std::vector<ConvergenceRow> run_convergence(const StudyConfig& config,
                                            const ProblemSpec& problem) {
    if (config.resolutions.empty())
        throw std::invalid_argument("convergence study: resolution list empty");
    for (std::size_t k = 0; k + 1 < config.resolutions.size(); ++k)
        if (config.resolutions[k] >= config.resolutions[k + 1])
            throw std::invalid_argument(
                "convergence study: resolutions must be strictly increasing");

    const double r = config.r > 0.0 ? config.r : 2.0 / problem.orders.alpha1();
    const std::size_t count = config.resolutions.size();
    std::vector<ConvergenceRow> rows(count);

    if (config.threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            rows[i] = run_row(config, problem, r, config.resolutions[i]);
    } else {
        for (std::size_t start = 0; start < count; start += config.threads) {
            const std::size_t stop = std::min(count, start + config.threads);
            std::vector<std::future<ConvergenceRow>> batch;
            for (std::size_t i = start; i < stop; ++i)
                batch.push_back(std::async(std::launch::async, run_row,
                                           std::cref(config), std::cref(problem), r,
                                           config.resolutions[i]));
            for (std::size_t i = start; i < stop; ++i)
                rows[i] = batch[i - start].get();
        }
    }

    for (std::size_t k = 0; k + 1 < count; ++k) {
        if (std::isfinite(rows[k].error) && rows[k].error > 0.0 &&
            std::isfinite(rows[k + 1].error) && rows[k + 1].error > 0.0) {
            rows[k].eoc = std::log2(rows[k].error / rows[k + 1].error);
            rows[k].has_eoc = true;
        }
    }

    if (!config.out.empty()) {
        StudyConfig effective = config;
        effective.alphas = problem.orders.terms();
        effective.r = r;
        write_csv(config.out, effective, rows);
    }
    return rows;
}

std::vector<ConvergenceRow> run_convergence(const StudyConfig& config) {
    const FractionalOrders orders =
        config.alphas.empty()
            ? default_orders(config.example, config.example == 1 ? 0.4 : 0.5)
            : FractionalOrders(config.alphas);
    return run_convergence(config, manufactured_problem(config.example, orders));
}

std::string csv_text(const StudyConfig& config, const std::vector<ConvergenceRow>& rows) {
    std::ostringstream out;
    char date[16] = "unknown";
    if (std::time_t now = std::time(nullptr); now != static_cast<std::time_t>(-1)) {
        std::tm tm{};
        if (gmtime_r(&now, &tm) != nullptr)
            std::strftime(date, sizeof date, "%Y-%m-%d", &tm);
    }
    out << "# mtfsolve " << kVersion << "\n";
    out << "# date: " << date << "\n";
    out << "# example: " << config.example << "\n";
    out << "# alphas:";
    for (std::size_t i = 0; i < config.alphas.size(); ++i)
        out << (i ? "," : " ") << config.alphas[i].alpha;
    out << "\n# mus:";
    for (std::size_t i = 0; i < config.alphas.size(); ++i)
        out << (i ? "," : " ") << config.alphas[i].mu;
    out << "\n# r: " << config.r << "\n";
    out << "# T: " << config.T << "\n";
    out << "# axis: " << (config.axis == StudyAxis::time ? "time" : "space")
        << " (rows couple Ms = N)\n";
    out << "# norm: " << norm_label(config.norm)
        << (config.norm == NormKind::l2 || config.norm_at_final
                ? " (at final time)"
                : " (max over levels)")
        << "\n";
    out << "# init: " << (config.init == InitMode::ritz ? "ritz" : "interpolate") << "\n";
    out << "resolution,error,eoc\n";
    char buf[64];
    for (const auto& row : rows) {
        out << row.resolution << ",";
        std::snprintf(buf, sizeof buf, "%.5E", row.error);
        out << buf << ",";
        if (row.has_eoc) {
            std::snprintf(buf, sizeof buf, "%.6f", row.eoc);
            out << buf;
        }
        out << "\n";
        if (!row.failure.empty()) out << "# failure: " << row.failure << "\n";
    }
    return out.str();
}

void write_csv(const std::string& path, const StudyConfig& config,
               const std::vector<ConvergenceRow>& rows) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    file << csv_text(config, rows);
    if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace mtf
