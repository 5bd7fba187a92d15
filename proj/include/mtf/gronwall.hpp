#pragma once

#include <cstddef>
#include <vector>

#include "mtf/kernel.hpp"

namespace mtf {

// Complementary discrete-kernel coefficients for a fixed final index n:
//   p_{n,n} = 1/g_{n,n},
//   p_{n,i} = (1/g_{i,i}) sum_{k=i+1}^{n} (g_{k,i+1} - g_{k,i}) p_{n,k},
// the discrete inverse of the kernel in the sense
//   sum_{k=j}^{n} p_{n,k} g_{k,j} = 1  for every j <= n.
// Built on demand per n (O(n^2)); row monotonicity of g makes every p
// nonnegative.
class GronwallTable {
public:
    GronwallTable(const KernelTable& table, std::size_t n);

    std::size_t n() const noexcept { return n_; }
    double p(std::size_t i) const { return p_.at(i - 1); }  // i = 1..n
    const std::vector<double>& coefficients() const noexcept { return p_; }
    const KernelTable& kernel() const noexcept { return *table_; }

    // max over j of |sum_{k=j}^n p_{n,k} g_{k,j} - 1|
    double max_identity_residual() const;

private:
    const KernelTable* table_;  // not owned; must outlive this object
    std::size_t n_;
    std::vector<double> p_;
};

// Inequality checks report their two sides and a pass flag with a fixed
// absolute slack of 1e-10; "marginal" marks a pass that needed the slack.
struct WeightedSumReport {
    double lhs, rhs;
    bool pass, marginal;
};

// sum_{i=1}^n (sum_s mu_s Gamma(1+gamma_s)/Gamma(1+gamma_s-alpha_s)
//              t_i^{gamma_s-alpha_s}) p_{n,i}  <=  (11/4) sum_s t_n^{gamma_s},
// for exponents gamma_s in (0,1), one per fractional term.
WeightedSumReport check_weighted_sum_lemma(const KernelTable& table,
                                           const std::vector<double>& gammas,
                                           std::size_t n);

// S = sum_{j=1}^{n-1} p_{n,j} E_{alpha1}(K t_j^{alpha1}) against the bound
// B = 11/(4 mu_1 K) (E_{alpha1}(K t_n^{alpha1}) - 1).  Two published
// variants differ in whether the left-hand side carries an extra factor K;
// both comparisons are reported (statement: S <= B; proof form: K*S <= B).
struct MlSumReport {
    double sum;
    double bound;
    bool statement_holds, statement_marginal;
    bool proof_form_holds, proof_form_marginal;
};

MlSumReport check_ml_sum_lemma(const KernelTable& table, double K, std::size_t n);

// Data of the discrete Gronwall bound: v^n <= gronwall_rhs(...) whenever
//   D_N (v^2)^{n-sigma_n} <= sum lambda-weighted v^2 terms + xi^n v + (zeta^n)^2
// and the step-size criterion holds.  Only Lambda (>= sum of the lambda
// weights) enters the evaluated right-hand side.
struct GronwallBoundParams {
    std::vector<double> lambda;  // nonnegative weights; informational
    double Lambda = 0.0;         // >= sum(lambda)
    std::vector<double> xi;      // xi^1..xi^n, nonnegative (empty = zero)
    std::vector<double> zeta;    // zeta^1..zeta^n, nonnegative (empty = zero)
    double v0 = 0.0;
};

// 2 E_{alpha1}((11/(2 mu_1)) Lambda t_n^{alpha1})
//   * [ v0 + max_{1<=k<=n} sum_{j<=k} p_{k,j}(xi^j + zeta^j) + max_j zeta^j ]
double gronwall_rhs(const GronwallBoundParams& params, const KernelTable& table,
                    std::size_t n);

}  // namespace mtf
