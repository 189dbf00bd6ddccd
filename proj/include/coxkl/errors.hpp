#pragma once

#include <stdexcept>
#include <string>

namespace coxkl {

/// Raised when an operation would need to enumerate an infinite set.
class InfiniteGroupError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for elements of the hat group that do not lie in the double-coset union.
class NotInOmegaError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an R-table fails the consistency needed by the KL solver.
class KLConsistencyError : public std::runtime_error {
 public:
  KLConsistencyError(std::size_t lower, std::size_t upper, const std::string& what)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}
  std::size_t lower() const { return lower_; }
  std::size_t upper() const { return upper_; }

 private:
  std::size_t lower_;
  std::size_t upper_;
};

}  // namespace coxkl
