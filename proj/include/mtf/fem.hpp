#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mtf/sparse.hpp"
#include "mtf/spatial_mesh.hpp"

namespace mtf {

// Space-only scalar field; the y argument is ignored on 1D meshes.
using ScalarField = std::function<double(double, double)>;

// P1 mass/stiffness over interior unknowns (homogeneous Dirichlet).
SparseSymmetricMatrix assemble_mass(const SpatialMesh& mesh);
SparseSymmetricMatrix assemble_stiffness(const SpatialMesh& mesh);

// Same matrices assembled over all nodes, boundary included.  Used by the
// partition-of-unity / row-sum sanity checks, not by the time stepper.
SparseSymmetricMatrix assemble_mass_full(const SpatialMesh& mesh);
SparseSymmetricMatrix assemble_stiffness_full(const SpatialMesh& mesh);

// (f, phi_i) per interior node.  Quadrature is quadratic-exact: 3-point
// Gauss per interval in 1D, the three edge midpoints per triangle in 2D.
std::vector<double> load_vector(const SpatialMesh& mesh, const ScalarField& f);

// integral of the hat function of each interior (resp. every) node.
std::vector<double> hat_integrals(const SpatialMesh& mesh);
std::vector<double> hat_integrals_full(const SpatialMesh& mesh);

// l(u_h) = integral of the P1 function with interior coefficients U.
double nonlocal_l(const SpatialMesh& mesh, std::span<const double> U);
double nonlocal_l(std::span<const double> hats, std::span<const double> U);

// Nodal values of g at the interior nodes.
std::vector<double> interpolate(const SpatialMesh& mesh, const ScalarField& g);

// Elliptic projection: solve S R = b, b_i = (grad w, grad phi_i), with the
// gradient of w supplied componentwise (gy ignored in 1D).
std::vector<double> ritz_projection(const SpatialMesh& mesh, const ScalarField& gx,
                                    const ScalarField& gy = {});

// Quadrature norms of the difference between the P1 field with interior
// coefficients U (zero on the boundary) and a given exact field.
double l2_error(const SpatialMesh& mesh, std::span<const double> U, const ScalarField& exact);
double h1_error(const SpatialMesh& mesh, std::span<const double> U, const ScalarField& exact_dx,
                const ScalarField& exact_dy = {});

}  // namespace mtf
