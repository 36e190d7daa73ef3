#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace wsnow {

// Base class for everything thrown by the library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when user-supplied data violates a precondition or an axiom.
// `code` names the violated condition (e.g. "TriangleViolation") and
// `index` holds up to three offending indices (-1 when unused).
class validation_error : public error {
 public:
  validation_error(std::string code, const std::string& what, int i = -1,
                   int j = -1, int k = -1)
      : error(what), code(std::move(code)), index{i, j, k} {}

  std::string code;
  std::array<int, 3> index;
};

// Raised when an internal check fails; indicates a bug, not bad input.
class internal_error : public error {
 public:
  using error::error;
};

}  // namespace wsnow
