#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace batsnum {

// Out-of-domain numeric argument (loss rate outside [0,1), t > m_max, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration; `path` names the offending field, e.g.
// "flows[1].links".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A rate vector or solution that violates the scheduling/capacity
// constraints. `certificate` carries per-link evidence: for rate vectors, a
// link weighting y with y.target > max over schedules of y.rate; for
// solutions, the per-link excess load.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<double> certificate)
      : std::runtime_error(what), certificate_(std::move(certificate)) {}
  const std::vector<double>& certificate() const { return certificate_; }

 private:
  std::vector<double> certificate_;
};

// Problem too large for exhaustive methods.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace batsnum
