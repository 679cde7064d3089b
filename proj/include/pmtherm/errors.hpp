#pragma once

#include <stdexcept>
#include <string>

namespace pmtherm {

/// Root of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dimension would exceed numeric_policy::max_dim.
class capacity_error : public error {
 public:
  using error::error;
};

/// Malformed input: wrong dimensions, unknown labels, bad flags.
class argument_error : public error {
 public:
  using error::error;
};

/// A value that should be real (or otherwise consistent) is not.
class numerical_error : public error {
 public:
  using error::error;
};

/// The caller skipped a required earlier step.
class precondition_error : public error {
 public:
  using error::error;
};

/// Argument outside the mathematical domain of the function.
class domain_error : public error {
 public:
  using error::error;
};

/// Pointer shift does not land on an integer number of grid steps.
class commensurability_error : public error {
 public:
  using error::error;
};

/// No outcome carries probability above numeric_policy::probability_floor.
class degenerate_distribution_error : public error {
 public:
  using error::error;
};

/// The configured scheme violates one of its structural requirements.
class scheme_constraint_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

}  // namespace pmtherm
