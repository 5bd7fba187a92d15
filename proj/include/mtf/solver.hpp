#pragma once

#include <cstddef>
#include <vector>

#include "mtf/cg.hpp"
#include "mtf/gronwall.hpp"
#include "mtf/kernel.hpp"
#include "mtf/problem.hpp"
#include "mtf/time_mesh.hpp"

namespace mtf {

enum class InitMode { interpolate, ritz };

struct SolverOptions {
    InitMode init = InitMode::interpolate;
    double cg_tol = 1e-12;
    std::size_t cg_maxiter = 0;  // 0 = 10 * dimension
    double fp_tol = 1e-12;       // first-step fixed point, |l change| <= fp_tol*(1+|l|)
    std::size_t fp_maxiter = 100;
    bool warm_start = true;  // seed CG with the previous time level
};

struct StepDiagnostics {
    double l_value = 0.0;      // nonlocal value the coefficient was evaluated at
    double a_value = 0.0;      // a(l)
    std::size_t fixed_point_iterations = 0;  // first step only
    SolveReport linear;
};

// Full record of one run: meshes, kernel, every time level, diagnostics.
struct SolutionHistory {
    GradedTimeMesh tmesh;
    SpatialMesh smesh;
    KernelTable kernel;
    std::vector<std::vector<double>> U;  // N+1 levels, interior coefficients
    std::vector<StepDiagnostics> steps;  // per step n = 1..N
    StepSizeReport stepsize;             // advisory, Lambda = 1

    const std::vector<double>& level(std::size_t n) const { return U.at(n); }
};

// U^0 by nodal interpolation or Ritz projection of u0.
std::vector<double> initialize(const ProblemSpec& problem, const SpatialMesh& mesh,
                               InitMode mode);

// Step-by-step driver; run() advances all N steps.
class TimeStepper {
public:
    TimeStepper(const ProblemSpec& problem, GradedTimeMesh tmesh, SpatialMesh smesh,
                SolverOptions options = {});

    // Performs step n (1-based); levels 0..n-1 must exist.
    StepDiagnostics step(std::size_t n);

    std::size_t current_level() const noexcept { return U_.size() - 1; }
    const std::vector<std::vector<double>>& levels() const noexcept { return U_; }
    const KernelTable& kernel() const noexcept { return kernel_; }
    const SparseSymmetricMatrix& mass() const noexcept { return M_; }
    const SparseSymmetricMatrix& stiffness() const noexcept { return S_; }

    SolutionHistory run();

private:
    std::vector<double> rhs_history(std::size_t n) const;
    StepDiagnostics solve_step(std::size_t n, double a_hat);

    const ProblemSpec* problem_;
    GradedTimeMesh tmesh_;
    SpatialMesh smesh_;
    SolverOptions options_;
    KernelTable kernel_;
    SparseSymmetricMatrix M_, S_;
    std::vector<double> hats_;
    std::vector<std::vector<double>> U_;
    std::vector<StepDiagnostics> diagnostics_;
};

// Convenience wrapper used by studies and the CLI.
SolutionHistory run(const ProblemSpec& problem, std::size_t N, std::size_t Ms, double r,
                    const SolverOptions& options = {}, double T = 1.0);

}  // namespace mtf
