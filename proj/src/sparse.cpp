#include "mtf/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mtf {

void SparseSymmetricMatrix::multiply(std::span<const double> x,
                                     std::span<double> y) const {
    if (x.size() != n || y.size() != n)
        throw std::invalid_argument("SparseSymmetricMatrix: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            acc += val[k] * x[col[k]];
        y[i] = acc;
    }
}

std::vector<double> SparseSymmetricMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n);
    multiply(x, y);
    return y;
}

std::vector<double> SparseSymmetricMatrix::diagonal() const {
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            if (col[k] == i) d[i] += val[k];
    return d;
}

SparseSymmetricMatrix build_csr(std::size_t n,
                                std::span<const std::size_t> rows,
                                std::span<const std::size_t> cols,
                                std::span<const double> vals) {
    if (rows.size() != cols.size() || rows.size() != vals.size())
        throw std::invalid_argument("build_csr: triplet arrays must match");
    const std::size_t nnz_in = rows.size();
    std::vector<std::size_t> order(nnz_in);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
    });

    SparseSymmetricMatrix A;
    A.n = n;
    A.row_ptr.assign(n + 1, 0);
    std::size_t prev_i = n, prev_j = n;  // sentinel: no entry yet
    for (std::size_t idx : order) {
        const std::size_t i = rows[idx], j = cols[idx];
        if (i >= n || j >= n) throw std::invalid_argument("build_csr: index out of range");
        if (i == prev_i && j == prev_j) {
            A.val.back() += vals[idx];  // accumulate duplicates
        } else {
            A.col.push_back(j);
            A.val.push_back(vals[idx]);
            ++A.row_ptr[i + 1];
            prev_i = i;
            prev_j = j;
        }
    }
    for (std::size_t i = 0; i < n; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
    return A;
}

SparseSymmetricMatrix linear_combination(const SparseSymmetricMatrix& A, double ca,
                                         const SparseSymmetricMatrix& B, double cb) {
    if (A.n != B.n || A.row_ptr != B.row_ptr || A.col != B.col)
        throw std::invalid_argument("linear_combination: patterns differ");
    SparseSymmetricMatrix C = A;
    for (std::size_t k = 0; k < C.val.size(); ++k)
        C.val[k] = ca * A.val[k] + cb * B.val[k];
    return C;
}

double quadratic_form(const SparseSymmetricMatrix& A, std::span<const double> x) {
    return dot(x, A.multiply(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace mtf
