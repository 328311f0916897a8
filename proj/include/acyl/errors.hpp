#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acyl {

/// a + phi''/2 (or the 2x2 Hermitian form) stopped being positive.
class PositivityError : public std::domain_error {
 public:
  PositivityError(const std::string& what, std::size_t node, double t)
      : std::domain_error(what), node_(node), t_(t) {}
  std::size_t node() const { return node_; }
  double t() const { return t_; }

 private:
  std::size_t node_;
  double t_;
};

/// A linear system that elimination cannot solve.
class SingularSystem : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace acyl
