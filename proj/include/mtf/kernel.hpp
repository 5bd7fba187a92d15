#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mtf/fractional.hpp"
#include "mtf/time_mesh.hpp"

namespace mtf {

// Root of G_n(sigma) = sum_s mu_s/Gamma(3-alpha_s) * sigma^(1-alpha_s)
//                      * (sigma - (1-alpha_s/2)) * tau_n^(2-alpha_s)
// in [b1, b2].  sigma_star weights the implicit side of the scheme; the
// evaluation point of step n is t_{n-1} + sigma_star * tau_n.
struct SigmaResult {
    double sigma_star;     // root in [b1, b2]
    double sigma;          // 1 - sigma_star
    int iterations;        // Newton iterations spent
    double residual;       // |G(sigma_star)|
    double residual_scale; // |G(b2)|, the natural residual scale
};

// Safeguarded Newton from b2 (bracket [b1,b2], bisection fallback when an
// iterate escapes), |delta| <= 1e-15 stopping.  Single-term collapse:
// sigma_star = 1 - alpha/2 independent of tau.
SigmaResult solve_sigma(const FractionalOrders& orders, double tau_n);

// The two coefficient families of the discretization at evaluation point
// t_star = t_{n-1} + sigma_star*tau_n, per fractional order alpha:
//
//   a_{n,j} = 1/Gamma(1-alpha) * int_{t_{j-1}}^{t_j} (t_star - eta)^(-alpha)
//   b_{n,j} = 2/(Gamma(1-alpha)(t_{j+1}-t_{j-1}))
//             * int_{t_{j-1}}^{t_j} (t_star - eta)^(-alpha) (eta - t_{j-1/2})
//
// Both are evaluated in closed form.  coeff_a needs 1 <= j <= n; coeff_b
// needs 1 <= j <= n-1 (the assembly never uses b on the diagonal).
double coeff_a(double alpha, double t_star, const GradedTimeMesh& mesh,
               std::size_t n, std::size_t j);
double coeff_b(double alpha, double t_star, const GradedTimeMesh& mesh,
               std::size_t n, std::size_t j);

// Aggregated weights g_{n,j} = sum_s mu_s g^{(alpha_s)}_{n,j} for the
// discrete fractional operator
//   D_N v = sum_{j=1}^n g_{n,j} (v^j - v^{j-1}).
// Rows are built independently; sigma solves are cached per distinct tau so
// uniform meshes pay for one Newton solve only.
class KernelTable {
public:
    KernelTable(const FractionalOrders& orders, const GradedTimeMesh& mesh,
                bool keep_per_term = false);

    std::size_t N() const noexcept { return mesh_.N(); }
    const FractionalOrders& orders() const noexcept { return orders_; }
    const GradedTimeMesh& mesh() const noexcept { return mesh_; }

    // 1-based indices: 1 <= j <= n <= N.
    double g(std::size_t n, std::size_t j) const { return g_[offset(n) + j - 1]; }
    std::span<const double> row(std::size_t n) const {
        return {g_.data() + offset(n), n};
    }
    // per-term component (debug storage; throws unless keep_per_term was set)
    double g_term(std::size_t s, std::size_t n, std::size_t j) const;

    double sigma_star(std::size_t n) const { return sigma_.at(n - 1).sigma_star; }
    double sigma(std::size_t n) const { return sigma_.at(n - 1).sigma; }
    double t_offset(std::size_t n) const { return t_offset_.at(n - 1); }
    const SigmaResult& sigma_result(std::size_t n) const { return sigma_.at(n - 1); }

    int sigma_solves() const noexcept { return sigma_solves_; }  // cache telemetry

private:
    static std::size_t offset(std::size_t n) { return n * (n - 1) / 2; }

    FractionalOrders orders_;
    GradedTimeMesh mesh_;
    std::vector<SigmaResult> sigma_;
    std::vector<double> t_offset_;
    std::vector<double> g_;                        // ragged, row n at offset(n)
    std::vector<std::vector<double>> g_per_term_;  // optional, same layout per s
    int sigma_solves_ = 0;
};

// D_N applied to a scalar history v^0..v^n (difference form).  The history
// span must hold at least n+1 levels; entries past v^n are ignored.
double apply_DN(const KernelTable& table, std::span<const double> history,
                std::size_t n);
// Same via the telescoped expansion g_{n,n}v^n - g_{n,1}v^0
// - sum_{j=2}^n (g_{n,j}-g_{n,j-1}) v^{j-1}; agrees with the difference form
// to roundoff.
double apply_DN_telescoped(const KernelTable& table, std::span<const double> history,
                           std::size_t n);
// Vector-valued history (one coefficient vector per level).
std::vector<double> apply_DN(const KernelTable& table,
                             std::span<const std::vector<double>> history,
                             std::size_t n);

// Property report for a built table: positivity/monotonicity of rows and the
// advertised lower bounds on g_{n,j}*tau_j^{alpha1}.  The pointwise bound
// 4*mu/11 is checked verbatim over all (n,j); the report also carries the two
// weaker variants that hold on every ratio-bounded mesh (the bound restricted
// to the diagonal j = n, and the bound against the per-row kernel integral).
struct KernelPropertyReport {
    bool positive = true;
    bool monotone = true;
    std::size_t mono_n = 0, mono_j = 0;  // first violation, if any

    // min over (n,j) of g_{n,j} * tau_j^alpha1 / (4*mu/11); >= 1 means pass
    double pointwise_margin = 0.0;
    std::size_t pointwise_n = 0, pointwise_j = 0;
    bool pointwise_bound = false;

    // same, restricted to j = n
    double diagonal_margin = 0.0;
    bool diagonal_bound = false;

    // min over (n,j) of g_{n,j} / [ (4/11) * (1/tau_j) * sum_s mu_s
    //   int_{t_{j-1}}^{t_j} (t_n-eta)^{-alpha_s}/Gamma(1-alpha_s) ]
    double integral_margin = 0.0;
    bool integral_bound = false;

    bool sigma_residuals_ok = true;  // |G(sigma*)| <= 1e-14 |G(b2)| each step
};

KernelPropertyReport check_kernel_properties(const KernelTable& table);

// Scalar truncation experiment: apply D_N to v(t) = t^3 + t^alpha1 (or a
// caller-supplied power sum) and compare with the exact multi-term Caputo
// derivative at each evaluation point.  Reported error per N is
//   max_n |e_n| / sum_s mu_s t_{n-sigma_n}^{-alpha_s},
// the weighting under which the consistency analysis predicts order
// min(3-alpha1, r*alpha1).
struct TruncationRow {
    std::size_t N;
    double max_weighted_error;
    double rate;  // log2(E_N / E_{2N}) vs previous row; NaN on the first row
};

std::vector<TruncationRow> truncation_experiment(const FractionalOrders& orders,
                                                 double T,
                                                 const std::vector<std::size_t>& N_list,
                                                 double r);
std::vector<TruncationRow> truncation_experiment(const FractionalOrders& orders,
                                                 double T,
                                                 const std::vector<std::size_t>& N_list,
                                                 double r,
                                                 const std::vector<PowerTerm>& v);

}  // namespace mtf
