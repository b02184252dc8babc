#pragma once

#include <stdexcept>

namespace mlqe {

/// Input data that cannot be used (unparsable, non-positive, degenerate).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An optimization that produced no usable estimate.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad command-line usage or configuration.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mlqe
