#include "mtf/kernel.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "mtf/errors.hpp"

namespace mtf {

namespace {

double eval_G(const FractionalOrders& orders, double tau, double s) {
    double v = 0.0;
    for (const auto& [mu, alpha] : orders.terms())
        v += mu / gamma_fn(3.0 - alpha) * std::pow(s, 1.0 - alpha) *
             (s - (1.0 - 0.5 * alpha)) * std::pow(tau, 2.0 - alpha);
    return v;
}

double eval_dG(const FractionalOrders& orders, double tau, double s) {
    double v = 0.0;
    for (const auto& [mu, alpha] : orders.terms())
        v += mu / gamma_fn(3.0 - alpha) * std::pow(tau, 2.0 - alpha) *
             std::pow(s, -alpha) *
             ((1.0 - alpha) * (s - (1.0 - 0.5 * alpha)) + s);
    return v;
}

// w1^p - w0^p for 0 < w0 < w1 without cancellation: on strongly graded
// meshes w1 - w0 can be ~1e-14 of w0 and the naive difference is pure noise.
double power_diff(double w0, double w1, double p) {
    return std::pow(w0, p) * std::expm1(p * std::log1p((w1 - w0) / w0));
}

}  // namespace

SigmaResult solve_sigma(const FractionalOrders& orders, double tau_n) {
    if (!(tau_n > 0.0) || !std::isfinite(tau_n))
        throw std::invalid_argument("solve_sigma: tau must be positive");

    const double b1 = orders.b1(), b2 = orders.b2();
    const double scale = std::abs(eval_G(orders, tau_n, b2));
    double lo = b1, hi = b2;  // G(b1) <= 0 <= G(b2)
    double s = b2;
    for (int it = 0; it < 200; ++it) {
        const double f = eval_G(orders, tau_n, s);
        if (f == 0.0) return {s, 1.0 - s, it, 0.0, scale};
        if (f > 0.0) hi = s; else lo = s;
        double s_new = s - f / eval_dG(orders, tau_n, s);
        if (!(s_new >= lo && s_new <= hi)) s_new = 0.5 * (lo + hi);
        if (std::abs(s_new - s) <= 1e-15) {
            s = s_new;
            return {s, 1.0 - s, it + 1, std::abs(eval_G(orders, tau_n, s)), scale};
        }
        s = s_new;
    }
    throw NumericalError("solve_sigma: no convergence; G(b1)=" +
                         std::to_string(eval_G(orders, tau_n, b1)) + " G(b2)=" +
                         std::to_string(eval_G(orders, tau_n, b2)));
}

double coeff_a(double alpha, double t_star, const GradedTimeMesh& mesh,
               std::size_t n, std::size_t j) {
    if (j < 1 || j > n || n > mesh.N())
        throw std::invalid_argument("coeff_a: index out of range");
    if (j == n)
        return std::pow(t_star - mesh.t(n - 1), 1.0 - alpha) / gamma_fn(2.0 - alpha);
    const double w0 = t_star - mesh.t(j);
    const double w1 = t_star - mesh.t(j - 1);
    return power_diff(w0, w1, 1.0 - alpha) / gamma_fn(2.0 - alpha);
}

double coeff_b(double alpha, double t_star, const GradedTimeMesh& mesh,
               std::size_t n, std::size_t j) {
    if (j < 1 || j + 1 > n || n > mesh.N())
        throw std::invalid_argument("coeff_b: needs 1 <= j <= n-1");
    // I = int_{t_{j-1}}^{t_j} (t_star - eta)^{-alpha} (eta - c) d eta with
    // c the interval midpoint.  Substituting eta = c + u and expanding
    // (1 - u/M)^{-alpha} about the midpoint distance M = t_star - c gives
    //   I = 2 M^{2-alpha} sum_{k>=0} [(alpha)_{2k+1} / (2k+1)!]
    //                               * rho^{2k+3} / (2k+3),   rho = h/M,
    // with (alpha)_i the rising factorial and h the half-width.  All terms
    // are positive, so the sum is cancellation-free; the direct two-power
    // antiderivative loses all significance once h << M.  rho <= 7/11 on any
    // ratio-bounded mesh, giving geometric convergence.
    const double c = 0.5 * (mesh.t(j - 1) + mesh.t(j));
    const double h = 0.5 * (mesh.t(j) - mesh.t(j - 1));
    const double M = t_star - c;
    const double rho = h / M;
    const double rho2 = rho * rho;
    double sum = 0.0;
    double coef = alpha;        // (alpha)_{2k+1} / (2k+1)!
    double rp = rho * rho2;     // rho^{2k+3}
    bool settled = false;
    for (int k = 0; k < 200; ++k) {
        const double term = coef * rp / (2 * k + 3);
        sum += term;
        if (term <= 1e-18 * sum) { settled = true; break; }
        coef *= (alpha + 2 * k + 1) * (alpha + 2 * k + 2) /
                ((2 * k + 2.0) * (2 * k + 3.0));
        rp *= rho2;
    }
    if (!settled)
        throw NumericalError("coeff_b: series failed to settle (rho = " +
                             std::to_string(rho) + ")");
    const double I = 2.0 * std::pow(M, 2.0 - alpha) * sum;
    return 2.0 * I /
           (gamma_fn(1.0 - alpha) * (mesh.t(j + 1) - mesh.t(j - 1)));
}

KernelTable::KernelTable(const FractionalOrders& orders, const GradedTimeMesh& mesh,
                         bool keep_per_term)
    : orders_(orders), mesh_(mesh) {
    const std::size_t N = mesh_.N();
    const std::size_t m = orders_.size();
    sigma_.reserve(N);
    t_offset_.reserve(N);
    g_.assign(N * (N + 1) / 2, 0.0);
    if (keep_per_term) g_per_term_.assign(m, std::vector<double>(g_.size(), 0.0));

    // sigma depends on n only through tau_n: cache per distinct step size
    std::unordered_map<std::uint64_t, SigmaResult> cache;
    for (std::size_t n = 1; n <= N; ++n) {
        const double tau = mesh_.tau(n);
        std::uint64_t key;
        std::memcpy(&key, &tau, sizeof key);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, solve_sigma(orders_, tau)).first;
            ++sigma_solves_;
        }
        sigma_.push_back(it->second);
        t_offset_.push_back(mesh_.t(n - 1) + it->second.sigma_star * tau);
    }

    for (std::size_t n = 1; n <= N; ++n) {
        const double ts = t_offset_[n - 1];
        double* row = g_.data() + offset(n);
        for (std::size_t s = 0; s < m; ++s) {
            const auto [mu, alpha] = orders_.terms()[s];
            for (std::size_t j = 1; j <= n; ++j) {
                double gsj;
                if (n == 1) {
                    gsj = coeff_a(alpha, ts, mesh_, 1, 1);
                } else if (j == 1) {
                    gsj = coeff_a(alpha, ts, mesh_, n, 1) -
                          coeff_b(alpha, ts, mesh_, n, 1);
                } else if (j < n) {
                    gsj = coeff_a(alpha, ts, mesh_, n, j) +
                          coeff_b(alpha, ts, mesh_, n, j - 1) -
                          coeff_b(alpha, ts, mesh_, n, j);
                } else {
                    gsj = coeff_a(alpha, ts, mesh_, n, n) +
                          coeff_b(alpha, ts, mesh_, n, n - 1);
                }
                gsj /= mesh_.tau(j);
                row[j - 1] += mu * gsj;
                if (keep_per_term) g_per_term_[s][offset(n) + j - 1] = gsj;
            }
        }
    }
}

double KernelTable::g_term(std::size_t s, std::size_t n, std::size_t j) const {
    if (g_per_term_.empty())
        throw std::logic_error("KernelTable: per-term storage not enabled");
    return g_per_term_.at(s).at(offset(n) + j - 1);
}

double apply_DN(const KernelTable& table, std::span<const double> history,
                std::size_t n) {
    if (history.size() < n + 1)
        throw std::invalid_argument("apply_DN: history must hold v^0..v^n");
    const auto row = table.row(n);
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
        acc += row[j - 1] * (history[j] - history[j - 1]);
    return acc;
}

double apply_DN_telescoped(const KernelTable& table, std::span<const double> history,
                           std::size_t n) {
    if (history.size() < n + 1)
        throw std::invalid_argument("apply_DN: history must hold v^0..v^n");
    const auto row = table.row(n);
    double acc = row[n - 1] * history[n] - row[0] * history[0];
    for (std::size_t j = 2; j <= n; ++j)
        acc -= (row[j - 1] - row[j - 2]) * history[j - 1];
    return acc;
}

std::vector<double> apply_DN(const KernelTable& table,
                             std::span<const std::vector<double>> history,
                             std::size_t n) {
    if (history.size() < n + 1)
        throw std::invalid_argument("apply_DN: history must hold v^0..v^n");
    const auto row = table.row(n);
    std::vector<double> acc(history[0].size(), 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        const auto& cur = history[j];
        const auto& prev = history[j - 1];
        if (cur.size() != acc.size() || prev.size() != acc.size())
            throw std::invalid_argument("apply_DN: inconsistent vector sizes");
        const double w = row[j - 1];
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += w * (cur[i] - prev[i]);
    }
    return acc;
}

KernelPropertyReport check_kernel_properties(const KernelTable& table) {
    const auto& mesh = table.mesh();
    const auto& orders = table.orders();
    const std::size_t N = table.N();
    const double alpha1 = orders.alpha1();
    const double floor_const = 4.0 * orders.mu_floor() / 11.0;

    KernelPropertyReport rep;
    rep.pointwise_margin = std::numeric_limits<double>::infinity();
    rep.diagonal_margin = std::numeric_limits<double>::infinity();
    rep.integral_margin = std::numeric_limits<double>::infinity();

    for (std::size_t n = 1; n <= N; ++n) {
        const auto row = table.row(n);
        const auto& sr = table.sigma_result(n);
        if (sr.residual > 1e-14 * sr.residual_scale) rep.sigma_residuals_ok = false;
        if (!(row[0] > 0.0)) rep.positive = false;
        for (std::size_t j = 1; j <= n; ++j) {
            if (j >= 2 && row[j - 1] < row[j - 2] && rep.monotone) {
                rep.monotone = false;
                rep.mono_n = n;
                rep.mono_j = j;
            }
            const double tau_j = mesh.tau(j);
            const double margin =
                row[j - 1] * std::pow(tau_j, alpha1) / floor_const;
            if (margin < rep.pointwise_margin) {
                rep.pointwise_margin = margin;
                rep.pointwise_n = n;
                rep.pointwise_j = j;
            }
            if (j == n) rep.diagonal_margin = std::min(rep.diagonal_margin, margin);

            // per-row kernel integral (1/tau_j) int_{t_{j-1}}^{t_j}
            //   sum_s mu_s (t_n - eta)^{-alpha_s} / Gamma(1-alpha_s)
            double integral = 0.0;
            for (const auto& [mu, alpha] : orders.terms()) {
                double piece;
                if (j == n)
                    piece = std::pow(tau_j, 1.0 - alpha) / gamma_fn(2.0 - alpha);
                else
                    piece = std::pow(mesh.t(n) - mesh.t(j), 1.0 - alpha) *
                                std::expm1((1.0 - alpha) *
                                           std::log1p(tau_j / (mesh.t(n) - mesh.t(j)))) /
                            gamma_fn(2.0 - alpha);
                integral += mu * piece;
            }
            rep.integral_margin = std::min(
                rep.integral_margin, row[j - 1] / ((4.0 / 11.0) * integral / tau_j));
        }
    }
    const double slack = 1e-10;
    rep.pointwise_bound = rep.pointwise_margin >= 1.0 - slack;
    rep.diagonal_bound = rep.diagonal_margin >= 1.0 - slack;
    rep.integral_bound = rep.integral_margin >= 1.0 - slack;
    return rep;
}

std::vector<TruncationRow> truncation_experiment(
    const FractionalOrders& orders, double T,
    const std::vector<std::size_t>& N_list, double r) {
    return truncation_experiment(orders, T, N_list, r,
                                 {{1.0, 3.0}, {1.0, orders.alpha1()}});
}

std::vector<TruncationRow> truncation_experiment(
    const FractionalOrders& orders, double T,
    const std::vector<std::size_t>& N_list, double r,
    const std::vector<PowerTerm>& v) {
    std::vector<TruncationRow> rows;
    rows.reserve(N_list.size());
    for (const std::size_t N : N_list) {
        GradedTimeMesh mesh(T, N, r);
        KernelTable table(orders, mesh);
        std::vector<double> history(N + 1);
        for (std::size_t n = 0; n <= N; ++n) {
            double val = 0.0;
            for (const auto& [coeff, exponent] : v)
                val += coeff * std::pow(mesh.t(n), exponent);
            history[n] = val;
        }
        double worst = 0.0;
        for (std::size_t n = 1; n <= N; ++n) {
            const double ts = table.t_offset(n);
            const double dn =
                apply_DN(table, std::span<const double>(history).first(n + 1), n);
            const double exact = exact_multiterm_caputo(orders, v, ts);
            double weight = 0.0;
            for (const auto& [mu, alpha] : orders.terms())
                weight += mu * std::pow(ts, -alpha);
            worst = std::max(worst, std::abs(dn - exact) / weight);
        }
        double rate = std::numeric_limits<double>::quiet_NaN();
        if (!rows.empty())
            rate = std::log2(rows.back().max_weighted_error / worst);
        rows.push_back({N, worst, rate});
    }
    return rows;
}

}  // namespace mtf
