#include "mtf/fem.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "mtf/cg.hpp"
#include "mtf/errors.hpp"

namespace mtf {

namespace {

constexpr std::size_t kExcluded = std::numeric_limits<std::size_t>::max();

// Node -> unknown index, either interior-only (Dirichlet rows folded out)
// or over all nodes for the full-assembly sanity variants.
struct IndexMap {
    const SpatialMesh& mesh;
    bool interior_only;

    std::size_t size() const {
        return interior_only ? mesh.num_interior() : mesh.num_nodes();
    }
    std::size_t operator()(std::size_t i, std::size_t j = 0) const {
        if (!interior_only) return mesh.node_index(i, j);
        return mesh.is_interior(i, j) ? mesh.interior_index(i, j) : kExcluded;
    }
};

struct Triplets {
    std::vector<std::size_t> rows, cols;
    std::vector<double> vals;

    void add(std::size_t i, std::size_t j, double v) {
        if (i == kExcluded || j == kExcluded) return;
        rows.push_back(i);
        cols.push_back(j);
        vals.push_back(v);
    }
};

struct TriangleGeometry {
    std::array<std::array<double, 2>, 3> p;  // vertex coordinates, CCW
    std::array<std::array<double, 2>, 3> grad;  // barycentric gradients
    double area;
};

TriangleGeometry triangle_geometry(const SpatialMesh& mesh, std::size_t k) {
    TriangleGeometry g;
    const auto verts = mesh.triangle(k);
    for (int v = 0; v < 3; ++v) g.p[v] = mesh.node_coords(verts[v][0], verts[v][1]);
    const double twice_area =
        (g.p[1][0] - g.p[0][0]) * (g.p[2][1] - g.p[0][1]) -
        (g.p[2][0] - g.p[0][0]) * (g.p[1][1] - g.p[0][1]);
    g.area = 0.5 * twice_area;
    for (int v = 0; v < 3; ++v) {
        const auto& a = g.p[(v + 1) % 3];
        const auto& b = g.p[(v + 2) % 3];
        g.grad[v] = {(a[1] - b[1]) / twice_area, (b[0] - a[0]) / twice_area};
    }
    return g;
}

enum class Kind { mass, stiffness };

// Both kinds insert the identical set of index pairs per element, so the
// compressed patterns of M and S coincide and linear_combination applies.
SparseSymmetricMatrix assemble(const SpatialMesh& mesh, Kind kind, bool interior_only) {
    const IndexMap map{mesh, interior_only};
    Triplets trip;
    if (mesh.dim() == 1) {
        const double h = mesh.hx();
        const double m[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
        const double s[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
        for (std::size_t e = 0; e < mesh.Ms(); ++e) {
            const std::size_t idx[2] = {map(e), map(e + 1)};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    trip.add(idx[a], idx[b], kind == Kind::mass ? m[a][b] : s[a][b]);
        }
    } else {
        for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
            const auto verts = mesh.triangle(k);
            const auto geo = triangle_geometry(mesh, k);
            std::size_t idx[3];
            for (int v = 0; v < 3; ++v) idx[v] = map(verts[v][0], verts[v][1]);
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    double v;
                    if (kind == Kind::mass) {
                        v = geo.area / 12.0 * (a == b ? 2.0 : 1.0);
                    } else {
                        v = geo.area * (geo.grad[a][0] * geo.grad[b][0] +
                                        geo.grad[a][1] * geo.grad[b][1]);
                    }
                    trip.add(idx[a], idx[b], v);
                }
            }
        }
    }
    return build_csr(map.size(), trip.rows, trip.cols, trip.vals);
}

// Quadratic-exact quadrature, dispatched per element over a callback
// receiving (x, y, weight, element id, barycentric/affine coordinates of the
// point within the element).
struct QuadPoint {
    double x, y, w;
    // P1 basis values at the point for the element's local nodes
    std::array<double, 3> phi;
};

template <typename Visit>
void for_each_quad_point_1d(const SpatialMesh& mesh, std::size_t e, Visit&& visit) {
    const double h = mesh.hx();
    const double x0 = static_cast<double>(e) * h;
    const double c = 0.5 * std::sqrt(3.0 / 5.0);
    const double xi[3] = {0.5 - c, 0.5, 0.5 + c};
    const double w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    for (int q = 0; q < 3; ++q) {
        QuadPoint p;
        p.x = x0 + xi[q] * h;
        p.y = 0.0;
        p.w = w[q] * h;
        p.phi = {1.0 - xi[q], xi[q], 0.0};
        visit(p);
    }
}

template <typename Visit>
void for_each_quad_point_2d(const TriangleGeometry& geo, Visit&& visit) {
    // edge midpoints: barycentric (1/2,1/2,0) and cyclic shifts
    for (int q = 0; q < 3; ++q) {
        const int a = q, b = (q + 1) % 3;
        QuadPoint p;
        p.x = 0.5 * (geo.p[a][0] + geo.p[b][0]);
        p.y = 0.5 * (geo.p[a][1] + geo.p[b][1]);
        p.w = geo.area / 3.0;
        p.phi = {0.0, 0.0, 0.0};
        p.phi[a] = 0.5;
        p.phi[b] = 0.5;
        visit(p);
    }
}

}  // namespace

SparseSymmetricMatrix assemble_mass(const SpatialMesh& mesh) {
    return assemble(mesh, Kind::mass, true);
}
SparseSymmetricMatrix assemble_stiffness(const SpatialMesh& mesh) {
    return assemble(mesh, Kind::stiffness, true);
}
SparseSymmetricMatrix assemble_mass_full(const SpatialMesh& mesh) {
    return assemble(mesh, Kind::mass, false);
}
SparseSymmetricMatrix assemble_stiffness_full(const SpatialMesh& mesh) {
    return assemble(mesh, Kind::stiffness, false);
}

std::vector<double> load_vector(const SpatialMesh& mesh, const ScalarField& f) {
    const IndexMap map{mesh, true};
    std::vector<double> out(map.size(), 0.0);
    if (mesh.dim() == 1) {
        for (std::size_t e = 0; e < mesh.Ms(); ++e) {
            const std::size_t idx[2] = {map(e), map(e + 1)};
            for_each_quad_point_1d(mesh, e, [&](const QuadPoint& p) {
                const double fv = f(p.x, p.y);
                for (int a = 0; a < 2; ++a)
                    if (idx[a] != kExcluded) out[idx[a]] += p.w * fv * p.phi[a];
            });
        }
    } else {
        for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
            const auto verts = mesh.triangle(k);
            const auto geo = triangle_geometry(mesh, k);
            std::size_t idx[3];
            for (int v = 0; v < 3; ++v) idx[v] = map(verts[v][0], verts[v][1]);
            for_each_quad_point_2d(geo, [&](const QuadPoint& p) {
                const double fv = f(p.x, p.y);
                for (int a = 0; a < 3; ++a)
                    if (idx[a] != kExcluded) out[idx[a]] += p.w * fv * p.phi[a];
            });
        }
    }
    return out;
}

namespace {

std::vector<double> hat_integrals_impl(const SpatialMesh& mesh, bool interior_only) {
    const IndexMap map{mesh, interior_only};
    std::vector<double> out(map.size(), 0.0);
    if (mesh.dim() == 1) {
        const double half = 0.5 * mesh.hx();
        for (std::size_t e = 0; e < mesh.Ms(); ++e) {
            for (std::size_t v : {e, e + 1}) {
                const std::size_t idx = map(v);
                if (idx != kExcluded) out[idx] += half;
            }
        }
    } else {
        for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
            const auto verts = mesh.triangle(k);
            const double third = triangle_geometry(mesh, k).area / 3.0;
            for (int v = 0; v < 3; ++v) {
                const std::size_t idx = map(verts[v][0], verts[v][1]);
                if (idx != kExcluded) out[idx] += third;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<double> hat_integrals(const SpatialMesh& mesh) {
    return hat_integrals_impl(mesh, true);
}
std::vector<double> hat_integrals_full(const SpatialMesh& mesh) {
    return hat_integrals_impl(mesh, false);
}

double nonlocal_l(const SpatialMesh& mesh, std::span<const double> U) {
    return nonlocal_l(hat_integrals(mesh), U);
}

double nonlocal_l(std::span<const double> hats, std::span<const double> U) {
    if (hats.size() != U.size())
        throw std::invalid_argument("nonlocal_l: size mismatch");
    return dot(hats, U);
}

std::vector<double> interpolate(const SpatialMesh& mesh, const ScalarField& g) {
    std::vector<double> out(mesh.num_interior());
    if (mesh.dim() == 1) {
        for (std::size_t i = 1; i < mesh.Ms(); ++i) {
            const auto c = mesh.node_coords(i);
            out[mesh.interior_index(i)] = g(c[0], c[1]);
        }
    } else {
        for (std::size_t j = 1; j < mesh.Ms(); ++j)
            for (std::size_t i = 1; i < mesh.Ms(); ++i) {
                const auto c = mesh.node_coords(i, j);
                out[mesh.interior_index(i, j)] = g(c[0], c[1]);
            }
    }
    return out;
}

std::vector<double> ritz_projection(const SpatialMesh& mesh, const ScalarField& gx,
                                    const ScalarField& gy) {
    if (mesh.dim() == 2 && !gy)
        throw std::invalid_argument("ritz_projection: 2D needs both gradient components");
    const IndexMap map{mesh, true};
    std::vector<double> b(map.size(), 0.0);
    if (mesh.dim() == 1) {
        const double h = mesh.hx();
        for (std::size_t e = 0; e < mesh.Ms(); ++e) {
            const std::size_t idx[2] = {map(e), map(e + 1)};
            const double dphi[2] = {-1.0 / h, 1.0 / h};
            for_each_quad_point_1d(mesh, e, [&](const QuadPoint& p) {
                const double gv = gx(p.x, p.y);
                for (int a = 0; a < 2; ++a)
                    if (idx[a] != kExcluded) b[idx[a]] += p.w * gv * dphi[a];
            });
        }
    } else {
        for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
            const auto verts = mesh.triangle(k);
            const auto geo = triangle_geometry(mesh, k);
            std::size_t idx[3];
            for (int v = 0; v < 3; ++v) idx[v] = map(verts[v][0], verts[v][1]);
            for_each_quad_point_2d(geo, [&](const QuadPoint& p) {
                const double gvx = gx(p.x, p.y);
                const double gvy = gy(p.x, p.y);
                for (int a = 0; a < 3; ++a)
                    if (idx[a] != kExcluded)
                        b[idx[a]] += p.w * (gvx * geo.grad[a][0] + gvy * geo.grad[a][1]);
            });
        }
    }
    const auto S = assemble_stiffness(mesh);
    auto [x, report] = solve_spd(S, b, 1e-13);
    if (report.flag != SolveReport::Flag::converged)
        throw NumericalError("ritz_projection: linear solver did not converge");
    return x;
}

namespace {

// Expand interior coefficients to a full nodal array with zero boundary.
std::vector<double> expand_to_nodes(const SpatialMesh& mesh, std::span<const double> U) {
    if (U.size() != mesh.num_interior())
        throw std::invalid_argument("coefficient vector does not match mesh interior size");
    std::vector<double> full(mesh.num_nodes(), 0.0);
    if (mesh.dim() == 1) {
        for (std::size_t i = 1; i < mesh.Ms(); ++i) full[i] = U[mesh.interior_index(i)];
    } else {
        for (std::size_t j = 1; j < mesh.Ms(); ++j)
            for (std::size_t i = 1; i < mesh.Ms(); ++i)
                full[mesh.node_index(i, j)] = U[mesh.interior_index(i, j)];
    }
    return full;
}

}  // namespace

double l2_error(const SpatialMesh& mesh, std::span<const double> U, const ScalarField& exact) {
    if (!exact) throw std::invalid_argument("l2_error: exact field missing");
    const auto full = expand_to_nodes(mesh, U);
    double acc = 0.0;
    if (mesh.dim() == 1) {
        for (std::size_t e = 0; e < mesh.Ms(); ++e) {
            const double u0 = full[e], u1 = full[e + 1];
            for_each_quad_point_1d(mesh, e, [&](const QuadPoint& p) {
                const double uh = u0 * p.phi[0] + u1 * p.phi[1];
                const double d = uh - exact(p.x, p.y);
                acc += p.w * d * d;
            });
        }
    } else {
        for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
            const auto verts = mesh.triangle(k);
            const auto geo = triangle_geometry(mesh, k);
            double uv[3];
            for (int v = 0; v < 3; ++v) uv[v] = full[mesh.node_index(verts[v][0], verts[v][1])];
            for_each_quad_point_2d(geo, [&](const QuadPoint& p) {
                const double uh = uv[0] * p.phi[0] + uv[1] * p.phi[1] + uv[2] * p.phi[2];
                const double d = uh - exact(p.x, p.y);
                acc += p.w * d * d;
            });
        }
    }
    return std::sqrt(acc);
}

double h1_error(const SpatialMesh& mesh, std::span<const double> U, const ScalarField& exact_dx,
                const ScalarField& exact_dy) {
    if (!exact_dx || (mesh.dim() == 2 && !exact_dy))
        throw std::invalid_argument("h1_error: exact gradient missing");
    const auto full = expand_to_nodes(mesh, U);
    double acc = 0.0;
    if (mesh.dim() == 1) {
        const double h = mesh.hx();
        for (std::size_t e = 0; e < mesh.Ms(); ++e) {
            const double duh = (full[e + 1] - full[e]) / h;
            for_each_quad_point_1d(mesh, e, [&](const QuadPoint& p) {
                const double d = duh - exact_dx(p.x, p.y);
                acc += p.w * d * d;
            });
        }
    } else {
        for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
            const auto verts = mesh.triangle(k);
            const auto geo = triangle_geometry(mesh, k);
            double gx = 0.0, gy = 0.0;
            for (int v = 0; v < 3; ++v) {
                const double uv = full[mesh.node_index(verts[v][0], verts[v][1])];
                gx += uv * geo.grad[v][0];
                gy += uv * geo.grad[v][1];
            }
            for_each_quad_point_2d(geo, [&](const QuadPoint& p) {
                const double dx = gx - exact_dx(p.x, p.y);
                const double dy = gy - exact_dy(p.x, p.y);
                acc += p.w * (dx * dx + dy * dy);
            });
        }
    }
    return std::sqrt(acc);
}

}  // namespace mtf
