#pragma once

#include <stdexcept>
#include <string>

namespace cckp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (negative
// utilization, epsilon outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Instance data that violates the model assumptions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// References to unknown items, malformed subsets or permutations, bad files.
class InputError : public Error {
 public:
  using Error::Error;
};

// A configured computational budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace cckp
