#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mtf/problem.hpp"
#include "mtf/solver.hpp"

namespace mtf {

inline constexpr const char* kVersion = "1.0.0";

enum class StudyAxis { time, space };

// Error norm reported per run.  linf_l2 is the max over discrete levels
// n = 1..N of the quadrature L2 error at t_n; l2 is the final-time L2 error;
// h1 is the H1-seminorm error, reduced over time like linf_l2 unless
// at_final is set.
enum class NormKind { linf_l2, l2, h1 };

struct StudyConfig {
    int example = 1;  // 1 (1D) or 2 (2D); ignored when a problem is passed in
    std::vector<FractionalTerm> alphas;  // defaults to the example's order set
    double r = 0.0;                      // <= 0 means 2/alpha1
    double T = 1.0;
    StudyAxis axis = StudyAxis::time;    // label only: rows couple Ms = N
    std::vector<std::size_t> resolutions;
    InitMode init = InitMode::interpolate;
    NormKind norm = NormKind::linf_l2;
    bool norm_at_final = false;
    std::size_t threads = 1;
    std::string out;  // CSV path, empty = don't write
};

struct ConvergenceRow {
    std::size_t resolution = 0;
    double error = 0.0;
    double eoc = 0.0;      // log2(e_n / e_{n+1}); valid on all but the last row
    bool has_eoc = false;
    std::string failure;   // nonempty if the run failed; error is NaN then
};

// The two manufactured instances used throughout: both have exact solution
// time factor g(t) = t^3 + t^{alpha1} and coefficient a(w) = 3 + sin(w).
//   example 1: u = g(t) sin(x) on (0, pi);        l(u) = 2 g(t)
//   example 2: u = g(t)(x-x^2)(y-y^2) on (0,1)^2; l(u) = g(t)/36
// f is the closed form obtained by substituting u into the equation.
ProblemSpec manufactured_problem(int example, const FractionalOrders& orders);

// Default order sets of the two examples, selectable by leading order.
FractionalOrders default_orders(int example, double alpha1);

// eoc_k = log2(e_k / e_{k+1}); requires >= 2 entries, all positive.
std::vector<double> compute_eoc(const std::vector<double>& errors);

// Error of a finished run in the configured norm.
double study_error(const SolutionHistory& history, const ProblemSpec& problem,
                   NormKind norm, bool at_final);

// Solve at every resolution (Ms = N), fill the EOC column, optionally write
// the CSV.  Failures are recorded per row and the study continues.
std::vector<ConvergenceRow> run_convergence(const StudyConfig& config);
std::vector<ConvergenceRow> run_convergence(const StudyConfig& config,
                                            const ProblemSpec& problem);

// CSV emission: '#'-prefixed metadata, then resolution,error,eoc with errors
// in scientific notation (6 significant digits) and eoc to 6 decimals.
std::string csv_text(const StudyConfig& config, const std::vector<ConvergenceRow>& rows);
void write_csv(const std::string& path, const StudyConfig& config,
               const std::vector<ConvergenceRow>& rows);

}  // namespace mtf
