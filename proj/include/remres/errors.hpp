#ifndef REMRES_ERRORS_HPP
#define REMRES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace remres {

// Bad input data or configuration. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Failure during a simulation or analysis run. CLI exit code 3.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace remres

#endif
