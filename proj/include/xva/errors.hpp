#pragma once

#include <stdexcept>
#include <string>

namespace xva {

// Parameters outside the model's admissible region.
struct InvalidModel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A closed form whose denominator vanishes for the given rates.
struct DegenerateRates : std::domain_error {
    using std::domain_error::domain_error;
};

// Non-convergence or non-finite values inside a solver.
struct NumericalError : std::runtime_error {
    NumericalError(const std::string& what, double residual, int time_index, int node)
        : std::runtime_error(what), residual(residual), time_index(time_index), node(node) {}
    double residual;
    int time_index;
    int node;
};

}  // namespace xva
