#pragma once
#include <stdexcept>
#include <string>

namespace wldp {

// Numerical failures (CLI exit code 4).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergent : NumericError {
    using NumericError::NumericError;
};
struct DivergentIntegrand : NumericError {
    using NumericError::NumericError;
};
struct InvalidBracket : NumericError {
    using NumericError::NumericError;
};
struct NonStableTail : NumericError {
    using NumericError::NumericError;
};
struct BracketGrowthFailed : NumericError {
    using NumericError::NumericError;
};
struct NoConvergence : NumericError {
    using NumericError::NumericError;
};
struct DegenerateWeights : NumericError {
    using NumericError::NumericError;
};

// Contract violations (CLI exit code 2).
struct InvalidParameters : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OutOfDomain : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TiltOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Regime/validity failures (CLI exit code 3).
struct WrongRegime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wldp
