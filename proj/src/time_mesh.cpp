#include "mtf/time_mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mtf {

GradedTimeMesh::GradedTimeMesh(double T, std::size_t N, double r)
    : T_(T), N_(N), r_(r) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("GradedTimeMesh: T must be positive");
    if (N < 1) throw std::invalid_argument("GradedTimeMesh: N must be >= 1");
    if (!(r >= 1.0) || !std::isfinite(r))
        throw std::invalid_argument("GradedTimeMesh: grading r must be >= 1");

    t_.resize(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        t_[n] = T * std::pow(static_cast<double>(n) / static_cast<double>(N), r);
    t_[0] = 0.0;  // pow(0, r) is 0, but be explicit

    tau_.resize(N);
    max_tau_ = 0.0;
    max_ratio_ = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        tau_[n - 1] = t_[n] - t_[n - 1];
        if (!(tau_[n - 1] > 0.0))
            throw std::invalid_argument("GradedTimeMesh: degenerate step at n = " +
                                        std::to_string(n));
        max_tau_ = std::max(max_tau_, tau_[n - 1]);
        if (n >= 2)
            max_ratio_ = std::max(max_ratio_, tau_[n - 2] / tau_[n - 1]);
    }
    if (max_ratio_ > 1.75)
        throw std::invalid_argument("GradedTimeMesh: step ratio exceeds 7/4");
}

StepSizeReport check_stepsize_criterion(const GradedTimeMesh& mesh,
                                        const FractionalOrders& orders,
                                        double Lambda) {
    if (!(Lambda > 0.0))
        throw std::invalid_argument("check_stepsize_criterion: Lambda must be > 0");
    const double bound =
        std::pow(5.5 * orders.mu_floor() * Lambda, -1.0 / orders.alpha1());
    return {mesh.max_tau(), bound, mesh.max_tau() <= bound};
}

}  // namespace mtf
