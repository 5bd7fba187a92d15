#include "mtf/cg.hpp"

#include <cmath>
#include <stdexcept>

namespace mtf {

std::pair<std::vector<double>, SolveReport> solve_spd(
    const SparseSymmetricMatrix& A, std::span<const double> b, double tol,
    std::size_t maxiter, std::span<const double> x0) {
    const std::size_t n = A.n;
    if (b.size() != n) throw std::invalid_argument("solve_spd: size mismatch");
    if (maxiter == 0) maxiter = 10 * n;

    const double bnorm = norm2(b);
    if (bnorm == 0.0) return {std::vector<double>(n, 0.0), SolveReport{}};

    std::vector<double> x(n, 0.0);
    if (!x0.empty()) {
        if (x0.size() != n) throw std::invalid_argument("solve_spd: x0 size mismatch");
        x.assign(x0.begin(), x0.end());
    }

    std::vector<double> inv_diag = A.diagonal();
    for (double& d : inv_diag) d = 1.0 / d;

    std::vector<double> r(n), z(n), p(n), Ap(n);
    A.multiply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);

    SolveReport rep;
    rep.flag = SolveReport::Flag::maxiter;
    for (std::size_t it = 0; it < maxiter; ++it) {
        if (norm2(r) <= tol * bnorm) {
            rep.flag = SolveReport::Flag::converged;
            rep.iterations = it;
            break;
        }
        A.multiply(p, Ap);
        const double alpha = rz / dot(p, Ap);
        axpy(alpha, p, x);
        axpy(-alpha, Ap, r);
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rep.iterations = it + 1;
    }
    // true residual of what we return
    A.multiply(x, Ap);
    for (std::size_t i = 0; i < n; ++i) Ap[i] -= b[i];
    rep.rel_residual = norm2(Ap) / bnorm;
    if (rep.flag == SolveReport::Flag::maxiter && rep.rel_residual <= tol)
        rep.flag = SolveReport::Flag::converged;
    return {std::move(x), rep};
}

}  // namespace mtf
