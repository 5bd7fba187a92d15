#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mtf/sparse.hpp"

namespace mtf {

struct SolveReport {
    enum class Flag { converged, maxiter };
    std::size_t iterations = 0;
    double rel_residual = 0.0;  // true residual of the returned vector / |b|
    Flag flag = Flag::converged;
};

// Conjugate gradients with Jacobi (diagonal) preconditioning for SPD
// systems.  Stops when |A x - b| <= tol |b|; maxiter = 0 means 10*dimension.
// On maxiter the best iterate is returned with the flag set; the caller
// decides whether that is fatal.  The reported residual is recomputed from
// the returned vector, not the recurrence estimate.
std::pair<std::vector<double>, SolveReport> solve_spd(
    const SparseSymmetricMatrix& A, std::span<const double> b,
    double tol = 1e-12, std::size_t maxiter = 0,
    std::span<const double> x0 = {});

}  // namespace mtf
