#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mtf {

// Structured P1 mesh: an interval [0, lx] split into Ms equal elements, or
// an axis-aligned rectangle [0,lx] x [0,ly] with an (Ms x Ms) grid of cells,
// each cut along the same diagonal (lower-left to upper-right) into two
// triangles.  Unknowns are interior nodes only (homogeneous Dirichlet).
class SpatialMesh {
public:
    static SpatialMesh interval(double lx, std::size_t Ms);
    static SpatialMesh rectangle(double lx, double ly, std::size_t Ms);

    int dim() const noexcept { return dim_; }
    double lx() const noexcept { return lx_; }
    double ly() const noexcept { return ly_; }
    std::size_t Ms() const noexcept { return ms_; }
    double hx() const noexcept { return hx_; }
    double hy() const noexcept { return hy_; }
    double h() const noexcept { return h_; }  // max element diameter

    std::size_t num_nodes() const noexcept {
        return dim_ == 1 ? ms_ + 1 : (ms_ + 1) * (ms_ + 1);
    }
    std::size_t num_interior() const noexcept {
        return dim_ == 1 ? ms_ - 1 : (ms_ - 1) * (ms_ - 1);
    }

    // Structured node numbering: 1D index i in 0..Ms; 2D index i + j*(Ms+1).
    std::size_t node_index(std::size_t i, std::size_t j = 0) const {
        return dim_ == 1 ? i : i + j * (ms_ + 1);
    }
    std::array<double, 2> node_coords(std::size_t i, std::size_t j = 0) const {
        return {i * hx_, dim_ == 1 ? 0.0 : j * hy_};
    }
    bool is_interior(std::size_t i, std::size_t j = 0) const {
        if (dim_ == 1) return i >= 1 && i <= ms_ - 1;
        return i >= 1 && i <= ms_ - 1 && j >= 1 && j <= ms_ - 1;
    }
    // Index into the interior unknown vector; only valid for interior nodes.
    std::size_t interior_index(std::size_t i, std::size_t j = 0) const {
        return dim_ == 1 ? i - 1 : (i - 1) + (j - 1) * (ms_ - 1);
    }

    // 2D element access: triangle k in 0..2*Ms*Ms-1 as three (i,j) vertices,
    // counter-clockwise.  Even k is the lower-right triangle of its cell,
    // odd k the upper-left.
    std::array<std::array<std::size_t, 2>, 3> triangle(std::size_t k) const;
    std::size_t num_triangles() const noexcept { return 2 * ms_ * ms_; }

private:
    SpatialMesh(int dim, double lx, double ly, std::size_t Ms);

    int dim_;
    double lx_, ly_;
    std::size_t ms_;
    double hx_, hy_, h_;
};

}  // namespace mtf
