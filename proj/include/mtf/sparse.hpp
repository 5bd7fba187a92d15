#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mtf {

// Compressed-sparse-row storage of a symmetric matrix (both triangles kept
// so row operations stay simple).  Symmetry is by construction: assembly
// inserts (i,j) and (j,i) from symmetric element matrices.
struct SparseSymmetricMatrix {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;  // size n+1
    std::vector<std::size_t> col;
    std::vector<double> val;

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    std::vector<double> diagonal() const;
};

// Build CSR from unordered (i, j, v) triplets; duplicates accumulate.
SparseSymmetricMatrix build_csr(std::size_t n,
                                std::span<const std::size_t> rows,
                                std::span<const std::size_t> cols,
                                std::span<const double> vals);

// ca*A + cb*B for matrices with identical sparsity patterns (as produced by
// one assembly pass over the same mesh); the per-step system matrices
// g_{n,n} M + c S are formed this way without re-assembly.
SparseSymmetricMatrix linear_combination(const SparseSymmetricMatrix& A, double ca,
                                         const SparseSymmetricMatrix& B, double cb);

// x^T A x (the discrete L2 norm squared when A is the mass matrix).
double quadratic_form(const SparseSymmetricMatrix& A, std::span<const double> x);

// Small dense-free vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);  // y += alpha x

}  // namespace mtf
