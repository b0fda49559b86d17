#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace salvo {

class SalvoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the interceptor and target positions coincide.
class InterceptionReached : public SalvoError {
 public:
  explicit InterceptionReached(double final_range)
      : SalvoError("interception reached"), final_range_(final_range) {}
  double final_range() const { return final_range_; }

 private:
  double final_range_;
};

class SpeedRatioViolation : public SalvoError {
 public:
  using SalvoError::SalvoError;
};

class DeviationSingularity : public SalvoError {
 public:
  using SalvoError::SalvoError;
};

class DegenerateEstimate : public SalvoError {
 public:
  using SalvoError::SalvoError;
};

class ConfigError : public SalvoError {
 public:
  using SalvoError::SalvoError;
};

class CertificateNotFound : public SalvoError {
 public:
  using SalvoError::SalvoError;
};

/// A structural result contradicted the graph theory it relies on, e.g. a
/// follower Laplacian with a non-positive eigenvalue despite a spanning tree.
class TheoryViolation : public SalvoError {
 public:
  using SalvoError::SalvoError;
};

/// Scenario document errors. Every issue carries the JSON path it refers to.
class ParseError : public SalvoError {
 public:
  struct Issue {
    std::string path;
    std::string message;
  };

  explicit ParseError(std::vector<Issue> issues)
      : SalvoError(format(issues)), issues_(std::move(issues)) {}

  const std::vector<Issue>& issues() const { return issues_; }

 private:
  static std::string format(const std::vector<Issue>& issues) {
    std::string out = "scenario invalid:";
    for (const auto& issue : issues) {
      out += "\n  " + (issue.path.empty() ? std::string("/") : issue.path) +
             ": " + issue.message;
    }
    return out;
  }

  std::vector<Issue> issues_;
};

}  // namespace salvo
