#pragma once

#include <stdexcept>
#include <string>

namespace bohm {

// Failure categories. Each maps to a distinct CLI exit code.
enum class ErrorKind {
  InvalidParameter,
  NodeProximity,
  AxisProximity,
  OffSheet,
  StepUnderflow,
  Config,
  Parse,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by the integrator; carries the last accepted state so callers can
/// report where the run stopped.
class IntegrationError : public Error {
 public:
  IntegrationError(ErrorKind kind, const std::string& what, double tau,
                   double xi, double theta, double phi)
      : Error(kind, what), tau_(tau), xi_(xi), theta_(theta), phi_(phi) {}

  double tau() const noexcept { return tau_; }
  double xi() const noexcept { return xi_; }
  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

 private:
  double tau_, xi_, theta_, phi_;
};

}  // namespace bohm
