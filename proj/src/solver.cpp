#include "mtf/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mtf/errors.hpp"

namespace mtf {

namespace {

void require_finite(std::span<const double> v, std::size_t n) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            std::ostringstream msg;
            msg << "non-finite solution component at step " << n;
            throw NumericalError(msg.str());
        }
    }
}

}  // namespace

std::vector<double> initialize(const ProblemSpec& problem, const SpatialMesh& mesh,
                               InitMode mode) {
    if (!problem.u0) throw std::invalid_argument("problem: initial datum u0 missing");
    if (mode == InitMode::interpolate) return interpolate(mesh, problem.u0);
    if (!problem.u0_dx || (mesh.dim() == 2 && !problem.u0_dy))
        throw std::invalid_argument("ritz initialization needs the gradient of u0");
    return ritz_projection(mesh, problem.u0_dx, problem.u0_dy);
}

TimeStepper::TimeStepper(const ProblemSpec& problem, GradedTimeMesh tmesh,
                         SpatialMesh smesh, SolverOptions options)
    : problem_(&problem),
      tmesh_(std::move(tmesh)),
      smesh_(std::move(smesh)),
      options_(options),
      kernel_(problem.orders, tmesh_),
      M_(assemble_mass(smesh_)),
      S_(assemble_stiffness(smesh_)),
      hats_(hat_integrals(smesh_)) {
    if (problem.dim != smesh_.dim())
        throw std::invalid_argument("problem/mesh dimension mismatch");
    U_.push_back(initialize(problem, smesh_, options_.init));
}

// g_{n,1} U^0 + sum_{j=2}^n (g_{n,j} - g_{n,j-1}) U^{j-1}, then one mass
// multiply: the explicit part of D_N applied to the stored history.
std::vector<double> TimeStepper::rhs_history(std::size_t n) const {
    const std::size_t m = smesh_.num_interior();
    std::vector<double> acc(m, 0.0);
    axpy(kernel_.g(n, 1), U_[0], acc);
    for (std::size_t j = 2; j <= n; ++j)
        axpy(kernel_.g(n, j) - kernel_.g(n, j - 1), U_[j - 1], acc);
    return M_.multiply(acc);
}

StepDiagnostics TimeStepper::solve_step(std::size_t n, double a_hat) {
    const double g_nn = kernel_.g(n, n);
    const double sigma_star = kernel_.sigma_star(n);
    const double sigma = kernel_.sigma(n);
    const double t_star = kernel_.t_offset(n);

    const auto A = linear_combination(M_, g_nn, S_, sigma_star * a_hat);

    auto rhs = rhs_history(n);
    const auto Su = S_.multiply(U_[n - 1]);
    axpy(-sigma * a_hat, Su, rhs);
    const auto F = load_vector(smesh_, [&](double x, double y) {
        return problem_->f(x, y, t_star);
    });
    axpy(1.0, F, rhs);

    std::span<const double> guess;
    if (options_.warm_start) guess = U_[n - 1];
    auto [x, report] = solve_spd(A, rhs, options_.cg_tol, options_.cg_maxiter, guess);
    if (report.flag != SolveReport::Flag::converged) {
        std::ostringstream msg;
        msg << "linear solve failed to converge at step " << n << " (relative residual "
            << report.rel_residual << " after " << report.iterations << " iterations)";
        throw NumericalError(msg.str());
    }
    require_finite(x, n);

    StepDiagnostics diag;
    diag.a_value = a_hat;
    diag.linear = report;
    if (U_.size() == n)
        U_.push_back(std::move(x));
    else
        U_[n] = std::move(x);
    return diag;
}

StepDiagnostics TimeStepper::step(std::size_t n) {
    if (n == 0 || n != U_.size())
        throw std::logic_error("steps must be taken in order n = 1, 2, ...");

    const double sigma_star = kernel_.sigma_star(n);
    StepDiagnostics diag;

    if (n == 1) {
        // Nonlinear first step: fixed-point iteration on the scalar nonlocal
        // value the coefficient sees, w = a(l(sigma* U^1 + (1-sigma*) U^0)).
        const double l0 = nonlocal_l(hats_, U_[0]);
        double l_prev = l0;  // iterate 0 is U^1 = U^0
        std::size_t corrections = 0;
        bool converged = false;
        for (std::size_t k = 0; k < options_.fp_maxiter; ++k) {
            const double a_hat = problem_->eval_a(l_prev);
            diag = solve_step(1, a_hat);
            diag.l_value = l_prev;
            const double l_new =
                sigma_star * nonlocal_l(hats_, U_[1]) + (1.0 - sigma_star) * l0;
            if (std::abs(l_new - l_prev) <= options_.fp_tol * (1.0 + std::abs(l_new))) {
                converged = true;
                break;
            }
            l_prev = l_new;
            ++corrections;
        }
        if (!converged) {
            std::ostringstream msg;
            msg << "first-step fixed point did not converge within "
                << options_.fp_maxiter << " iterations (last l = " << l_prev << ")";
            throw NumericalError(msg.str());
        }
        diag.fixed_point_iterations = corrections;
    } else {
        // Linearized step: coefficient frozen at the extrapolant
        // c1 U^{n-1} - c2 U^{n-2} of the off-grid evaluation point.
        const double tau_prev = tmesh_.tau(n - 1);
        const double c1 = (tau_prev + sigma_star * tmesh_.tau(n)) / tau_prev;
        const double c2 = sigma_star * tmesh_.tau(n) / tau_prev;
        const double l_hat =
            c1 * nonlocal_l(hats_, U_[n - 1]) - c2 * nonlocal_l(hats_, U_[n - 2]);
        const double a_hat = problem_->eval_a(l_hat);
        diag = solve_step(n, a_hat);
        diag.l_value = l_hat;
    }
    diagnostics_.push_back(diag);
    return diag;
}

SolutionHistory TimeStepper::run() {
    for (std::size_t n = 1; n <= tmesh_.N(); ++n) step(n);
    SolutionHistory history{tmesh_,
                            smesh_,
                            kernel_,
                            U_,
                            diagnostics_,
                            check_stepsize_criterion(tmesh_, problem_->orders, 1.0)};
    return history;
}

SolutionHistory run(const ProblemSpec& problem, std::size_t N, std::size_t Ms, double r,
                    const SolverOptions& options, double T) {
    TimeStepper stepper(problem, GradedTimeMesh(T, N, r), problem.make_mesh(Ms),
                        options);
    return stepper.run();
}

}  // namespace mtf
