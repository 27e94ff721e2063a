#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gravprobe {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown keys, type mismatches, bad grids, missing fields.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// One or more violated parameter invariants; `issues()` lists each with its field path.
class ValidationError : public ConfigError {
public:
  explicit ValidationError(std::vector<std::string> issues)
      : ConfigError(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

/// The drift has an eigenvalue with non-negative real part, so no steady state exists.
class InstabilityError : public Error {
public:
  InstabilityError(const std::string& what, double max_real_part)
      : Error(what), max_real_part_(max_real_part) {}

  double max_real_part() const noexcept { return max_real_part_; }

private:
  double max_real_part_;
};

class NumericError : public Error {
public:
  using Error::Error;
};

/// Covariance violates the uncertainty principle beyond tolerance.
class UnphysicalStateError : public NumericError {
public:
  UnphysicalStateError(const std::string& what, double min_symplectic_eigenvalue)
      : NumericError(what), min_symplectic_eigenvalue_(min_symplectic_eigenvalue) {}

  double min_symplectic_eigenvalue() const noexcept { return min_symplectic_eigenvalue_; }

private:
  double min_symplectic_eigenvalue_;
};

/// Output could not be written.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace gravprobe
