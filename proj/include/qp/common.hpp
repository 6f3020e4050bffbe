#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qp {

// Raised when an operation is called outside its mathematical domain
// (non-primitive rule, evanescent lead, broken block repetition, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// n equally spaced points from lo to hi inclusive (n == 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace qp
