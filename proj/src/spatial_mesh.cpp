#include "mtf/spatial_mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace mtf {

SpatialMesh::SpatialMesh(int dim, double lx, double ly, std::size_t Ms)
    : dim_(dim), lx_(lx), ly_(ly), ms_(Ms) {
    if (lx <= 0.0 || (dim == 2 && ly <= 0.0))
        throw std::invalid_argument("spatial mesh: domain lengths must be positive");
    if (Ms < 2)
        throw std::invalid_argument("spatial mesh: need at least 2 elements per direction");
    hx_ = lx / static_cast<double>(Ms);
    hy_ = dim == 2 ? ly / static_cast<double>(Ms) : 0.0;
    h_ = dim == 1 ? hx_ : std::hypot(hx_, hy_);
}

SpatialMesh SpatialMesh::interval(double lx, std::size_t Ms) {
    return SpatialMesh(1, lx, 0.0, Ms);
}

SpatialMesh SpatialMesh::rectangle(double lx, double ly, std::size_t Ms) {
    return SpatialMesh(2, lx, ly, Ms);
}

std::array<std::array<std::size_t, 2>, 3> SpatialMesh::triangle(std::size_t k) const {
    if (dim_ != 2) throw std::logic_error("triangle(): 2D meshes only");
    if (k >= num_triangles()) throw std::out_of_range("triangle(): index out of range");
    const std::size_t cell = k / 2;
    const std::size_t ci = cell % ms_;
    const std::size_t cj = cell / ms_;
    if (k % 2 == 0) {
        // lower-right triangle: (ci,cj) -> (ci+1,cj) -> (ci+1,cj+1)
        return {{{ci, cj}, {ci + 1, cj}, {ci + 1, cj + 1}}};
    }
    // upper-left triangle: (ci,cj) -> (ci+1,cj+1) -> (ci,cj+1)
    return {{{ci, cj}, {ci + 1, cj + 1}, {ci, cj + 1}}};
}

}  // namespace mtf
