#pragma once

#include <stdexcept>
#include <string>

namespace pinnls {

// Point or parameter vector whose length does not match the model.
class InputShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Derivative order above what the closed forms support (|alpha| > 2).
class UnsupportedOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation point outside the domain, or off the boundary.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Unknown catalog identifier; the message lists the valid names.
class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite loss or gradient encountered during optimization.
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pinnls
