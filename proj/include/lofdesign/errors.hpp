#pragma once

#include <stdexcept>
#include <string>

namespace lofd {

/// Base class for numeric failures raised by the library. `name()` is a
/// stable identifier the CLI reports alongside the message.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept { return "error"; }
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_tolerance)
      : Error(what), achieved_tolerance_(achieved_tolerance) {}
  const char* name() const noexcept override { return "quadrature-nonconvergence"; }
  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

class SingularInformationError : public Error {
 public:
  SingularInformationError(const std::string& what, double rcond)
      : Error(what), rcond_(rcond) {}
  const char* name() const noexcept override { return "singular-information"; }
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class InfeasibleEfficiencyError : public Error {
 public:
  InfeasibleEfficiencyError(const std::string& what, double alpha0)
      : Error(what), alpha0_(alpha0) {}
  const char* name() const noexcept override { return "infeasible-r"; }
  double alpha0() const noexcept { return alpha0_; }

 private:
  double alpha0_;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "degenerate"; }
};

class ConditioningError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "conditioning"; }
};

class RankDeficiencyError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "rank-deficiency"; }
};

class InternalConsistencyError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "internal-consistency"; }
};

}  // namespace lofd
