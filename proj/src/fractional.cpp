#include "mtf/fractional.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mtf/errors.hpp"

namespace mtf {

FractionalOrders::FractionalOrders(std::vector<FractionalTerm> terms)
    : terms_(std::move(terms)) {
    if (terms_.empty())
        throw std::invalid_argument("FractionalOrders: needs at least one term");
    double prev = 1.0;
    for (const auto& [mu, alpha] : terms_) {
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw std::invalid_argument("FractionalOrders: weights must be positive");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("FractionalOrders: orders must lie in (0,1)");
        if (!(alpha < prev))
            throw std::invalid_argument("FractionalOrders: orders must decrease strictly");
        prev = alpha;
    }
    mu_floor_ = std::numeric_limits<double>::infinity();
    for (const auto& [mu, alpha] : terms_)
        mu_floor_ = std::min(mu_floor_, mu / gamma_fn(2.0 - alpha));
}

double gamma_fn(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_fn: requires x > 0, got " + std::to_string(x));
    // Lanczos, g = 7, n = 9 (Godfrey coefficients).
    static constexpr double g = 7.0;
    static constexpr double c[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection keeps the rational part well conditioned near 0
        return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double a = c[0];
    for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
    const double t = z + g + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double mittag_leffler(double alpha, double z) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("mittag_leffler: alpha must lie in (0,1]");
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::domain_error("mittag_leffler: z must be finite and >= 0");
    if (z == 0.0) return 1.0;

    const double lz = std::log(z);
    double sum = 1.0;  // k = 0
    double comp = 0.0; // Kahan compensation
    constexpr int cap = 10000;
    for (int k = 1; k <= cap; ++k) {
        const double term = std::exp(k * lz - std::lgamma(1.0 + k * alpha));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (!std::isfinite(sum))
            throw NumericalError("mittag_leffler: series overflowed at term " +
                                 std::to_string(k));
        if (term < 1e-18 * sum) return sum;
    }
    throw NumericalError("mittag_leffler: no convergence within 10000 terms");
}

double caputo_power(double alpha, double gamma_exp, double t) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("caputo_power: alpha must lie in (0,1)");
    if (!(gamma_exp > 0.0))
        throw std::domain_error("caputo_power: exponent must be positive");
    if (!(t > 0.0))
        throw std::domain_error("caputo_power: t must be positive");
    return gamma_fn(1.0 + gamma_exp) / gamma_fn(1.0 + gamma_exp - alpha) *
           std::pow(t, gamma_exp - alpha);
}

double exact_multiterm_caputo(const FractionalOrders& orders,
                              const std::vector<PowerTerm>& powers, double t) {
    double total = 0.0;
    for (const auto& [mu, alpha] : orders.terms()) {
        for (const auto& [coeff, exponent] : powers) {
            if (exponent < 0.0)
                throw std::domain_error("exact_multiterm_caputo: negative exponent");
            if (exponent == 0.0) continue;  // constants vanish
            total += mu * coeff * caputo_power(alpha, exponent, t);
        }
    }
    return total;
}

}  // namespace mtf
