#include "mtf/problem.hpp"

#include <sstream>
#include <stdexcept>

#include "mtf/errors.hpp"

namespace mtf {

double ProblemSpec::eval_a(double w) const {
    if (!a) throw std::invalid_argument("problem: diffusion coefficient a missing");
    const double v = a(w);
    if (!(v >= m1 && v <= m2)) {
        std::ostringstream msg;
        msg << "diffusion coefficient out of declared bounds: a(" << w << ") = " << v
            << " outside [" << m1 << ", " << m2 << "]";
        throw NumericalError(msg.str());
    }
    return v;
}

}  // namespace mtf
