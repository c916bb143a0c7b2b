#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "aplab/common.hpp"

namespace aplab::expr {

/// Small complex expression language used by scenario files: arithmetic
/// (+ - * / ^), parentheses, the constants i and pi, and the functions
/// conj, re, im, abs, exp, log, sqrt, sin, cos, pow. Variables are resolved
/// at parse time against a declared name list; evaluation takes the values
/// in the same order. Integer powers are evaluated by repeated
/// multiplication.
class Expression {
public:
  static Expression parse(const std::string& text,
                          const std::vector<std::string>& variables);

  cplx eval(std::span<const cplx> values) const;
  const std::string& text() const { return text_; }

  Expression() = default;

  struct Node;  // exposed for the parser implementation

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  std::size_t num_vars_ = 0;
};

}  // namespace aplab::expr
