#include "mtf/gronwall.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtf {

namespace {
constexpr double kSlack = 1e-10;
}

GronwallTable::GronwallTable(const KernelTable& table, std::size_t n)
    : table_(&table), n_(n) {
    if (n < 1 || n > table.N())
        throw std::invalid_argument("GronwallTable: n out of range");
    p_.assign(n, 0.0);
    p_[n - 1] = 1.0 / table.g(n, n);
    for (std::size_t i = n - 1; i >= 1; --i) {
        double acc = 0.0;
        for (std::size_t k = i + 1; k <= n; ++k)
            acc += (table.g(k, i + 1) - table.g(k, i)) * p_[k - 1];
        p_[i - 1] = acc / table.g(i, i);
    }
}

double GronwallTable::max_identity_residual() const {
    double worst = 0.0;
    for (std::size_t j = 1; j <= n_; ++j) {
        double acc = 0.0;
        for (std::size_t k = j; k <= n_; ++k)
            acc += p_[k - 1] * table_->g(k, j);
        worst = std::max(worst, std::abs(acc - 1.0));
    }
    return worst;
}

WeightedSumReport check_weighted_sum_lemma(const KernelTable& table,
                                           const std::vector<double>& gammas,
                                           std::size_t n) {
    const auto& orders = table.orders();
    if (gammas.size() != orders.size())
        throw std::invalid_argument("check_weighted_sum_lemma: one gamma per term");
    for (double g : gammas)
        if (!(g > 0.0 && g < 1.0))
            throw std::invalid_argument("check_weighted_sum_lemma: gamma in (0,1)");

    GronwallTable p(table, n);
    const auto& mesh = table.mesh();
    double lhs = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        double w = 0.0;
        for (std::size_t s = 0; s < orders.size(); ++s) {
            const auto [mu, alpha] = orders.terms()[s];
            w += mu * gamma_fn(1.0 + gammas[s]) /
                 gamma_fn(1.0 + gammas[s] - alpha) *
                 std::pow(mesh.t(i), gammas[s] - alpha);
        }
        lhs += w * p.p(i);
    }
    double rhs = 0.0;
    for (double g : gammas) rhs += std::pow(mesh.t(n), g);
    rhs *= 11.0 / 4.0;
    const bool pass = lhs <= rhs + kSlack;
    return {lhs, rhs, pass, pass && lhs > rhs};
}

MlSumReport check_ml_sum_lemma(const KernelTable& table, double K, std::size_t n) {
    if (!(K > 0.0))
        throw std::invalid_argument("check_ml_sum_lemma: K must be positive");
    const auto& mesh = table.mesh();
    const double alpha1 = table.orders().alpha1();
    const double mu1 = table.orders().terms().front().mu;

    GronwallTable p(table, n);
    double sum = 0.0;
    for (std::size_t j = 1; j + 1 <= n; ++j)
        sum += p.p(j) * mittag_leffler(alpha1, K * std::pow(mesh.t(j), alpha1));
    const double bound = 11.0 / (4.0 * mu1 * K) *
                         (mittag_leffler(alpha1, K * std::pow(mesh.t(n), alpha1)) - 1.0);

    MlSumReport rep;
    rep.sum = sum;
    rep.bound = bound;
    rep.statement_holds = sum <= bound + kSlack;
    rep.statement_marginal = rep.statement_holds && sum > bound;
    rep.proof_form_holds = K * sum <= bound + kSlack;
    rep.proof_form_marginal = rep.proof_form_holds && K * sum > bound;
    return rep;
}

double gronwall_rhs(const GronwallBoundParams& params, const KernelTable& table,
                    std::size_t n) {
    if (params.Lambda < 0.0 || params.v0 < 0.0)
        throw std::invalid_argument("gronwall_rhs: nonnegative data required");
    double lambda_sum = 0.0;
    for (double l : params.lambda) {
        if (l < 0.0) throw std::invalid_argument("gronwall_rhs: lambda >= 0");
        lambda_sum += l;
    }
    if (lambda_sum > params.Lambda * (1.0 + 1e-12))
        throw std::invalid_argument("gronwall_rhs: Lambda must dominate sum(lambda)");

    const auto& mesh = table.mesh();
    const double alpha1 = table.orders().alpha1();
    const double mu1 = table.orders().terms().front().mu;

    auto at = [](const std::vector<double>& v, std::size_t j) {
        return j <= v.size() ? v[j - 1] : 0.0;
    };
    const bool has_sources =
        std::any_of(params.xi.begin(), params.xi.end(), [](double x) { return x != 0.0; }) ||
        std::any_of(params.zeta.begin(), params.zeta.end(), [](double z) { return z != 0.0; });

    double inner_max = 0.0, zeta_max = 0.0;
    for (std::size_t j = 1; j <= n; ++j) zeta_max = std::max(zeta_max, at(params.zeta, j));
    if (has_sources) {
        for (std::size_t k = 1; k <= n; ++k) {
            GronwallTable p(table, k);
            double acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j)
                acc += p.p(j) * (at(params.xi, j) + at(params.zeta, j));
            inner_max = std::max(inner_max, acc);
        }
    }
    const double envelope = mittag_leffler(
        alpha1, 11.0 / (2.0 * mu1) * params.Lambda * std::pow(mesh.t(n), alpha1));
    return 2.0 * envelope * (params.v0 + inner_max + zeta_max);
}

}  // namespace mtf
