#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ifsgap {

/// Input outside an operation's mathematical domain (nonpositive ratio, empty cloud, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured size budget (interval count, enumeration size, search nodes) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The instance is valid but outside what the exact pipeline handles.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A verifier's hypothesis could not be confirmed at the requested depth.
class VerdictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance failed validation; carries every finding.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> findings)
      : std::runtime_error(join(findings)), findings_(std::move(findings)) {}

  const std::vector<std::string>& findings() const noexcept { return findings_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid instance";
    for (const auto& item : items) out += "; " + item;
    return out;
  }

  std::vector<std::string> findings_;
};

}  // namespace ifsgap
