#pragma once

#include <stdexcept>
#include <string>

namespace nahmforge {

// Domain errors carry enough text to locate the offending input; callers
// that need to branch on the kind catch the specific type.

struct EmptySeriesError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NonInvertibleError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DivergentProductError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nahmforge
