#pragma once

#include <functional>
#include <utility>

#include "mtf/fem.hpp"
#include "mtf/fractional.hpp"

namespace mtf {

// Space-time scalar field (x, y, t); y ignored on 1D domains.
using SpaceTimeField = std::function<double(double, double, double)>;

// One instance of the model problem
//   sum_s mu_s D^{alpha_s} u - a(l(u)) Laplace(u) = f   on Omega x (0,T],
//   u = 0 on the boundary,  u(.,0) = u0,  l(u) = integral of u over Omega,
// with declared coefficient bounds 0 < m1 <= a(w) <= m2 (checked at every
// evaluation) and Lipschitz constant for a.
struct ProblemSpec {
    explicit ProblemSpec(FractionalOrders o) : orders(std::move(o)) {}

    int dim = 1;
    double lx = 1.0;
    double ly = 1.0;  // 2D only

    FractionalOrders orders;

    std::function<double(double)> a;
    double m1 = 0.0;
    double m2 = 0.0;
    double lipschitz = 0.0;

    SpaceTimeField f;
    ScalarField u0;
    ScalarField u0_dx, u0_dy;  // optional; needed only for Ritz initialization

    // Optional manufactured truth, for error norms and diagnostics.
    SpaceTimeField exact_u;
    SpaceTimeField exact_dx, exact_dy;
    std::function<double(double)> exact_l;

    SpatialMesh make_mesh(std::size_t Ms) const {
        return dim == 1 ? SpatialMesh::interval(lx, Ms)
                        : SpatialMesh::rectangle(lx, ly, Ms);
    }

    // a(w) with the H1 bound check; throws NumericalError on violation.
    double eval_a(double w) const;
};

}  // namespace mtf
