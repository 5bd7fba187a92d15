#pragma once

#include <stdexcept>
#include <string>

namespace mtf {

// Runtime numerical failure (solver divergence, series overflow, NaN in a
// step, ...).  Distinct from std::invalid_argument, which is reserved for
// configuration / contract violations.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mtf
