#pragma once

#include <cstddef>
#include <vector>

#include "mtf/fractional.hpp"

namespace mtf {

// Graded temporal mesh t_n = T*(n/N)^r, n = 0..N.  r = 1 is uniform; r > 1
// clusters points near t = 0 where fractional solutions are weakly singular.
//
// Grid points come straight from the power formula (no accumulation drift);
// steps tau_n = t_n - t_{n-1} are differenced from them.  Construction
// verifies tau_n > 0 and the step-ratio hypothesis tau_{n-1}/tau_n <= 7/4
// that the kernel estimates downstream rely on.  (For r >= 1 the exact
// ratios are <= 1; the check leaves room for ulp-level rounding wobble.)
class GradedTimeMesh {
public:
    GradedTimeMesh(double T, std::size_t N, double r);

    double T() const noexcept { return T_; }
    std::size_t N() const noexcept { return N_; }
    double r() const noexcept { return r_; }

    double t(std::size_t n) const { return t_.at(n); }        // n = 0..N
    double tau(std::size_t n) const { return tau_.at(n - 1); } // n = 1..N

    const std::vector<double>& times() const noexcept { return t_; }
    const std::vector<double>& steps() const noexcept { return tau_; }

    double max_tau() const noexcept { return max_tau_; }
    double max_ratio() const noexcept { return max_ratio_; }  // max tau_{n-1}/tau_n

private:
    double T_;
    std::size_t N_;
    double r_;
    std::vector<double> t_, tau_;
    double max_tau_, max_ratio_;
};

// max_n tau_n <= (11/2 * mu * Lambda)^(-1/alpha1), the step restriction under
// which the discrete Gronwall bound applies.  Advisory: callers warn and
// proceed when it fails.
struct StepSizeReport {
    double tau_max;
    double bound;
    bool satisfied;  // tau_max <= bound, inclusive
};

StepSizeReport check_stepsize_criterion(const GradedTimeMesh& mesh,
                                        const FractionalOrders& orders,
                                        double Lambda);

}  // namespace mtf
