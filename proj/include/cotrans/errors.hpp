#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cotrans {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GimbalLock : public Error {
 public:
  GimbalLock() : Error("rotation is at gimbal lock (|R(2,0)| ~ 1)") {}
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  explicit NonFiniteState(std::size_t last_good_row = 0)
      : Error("state became non-finite after row " + std::to_string(last_good_row)),
        last_good_row_(last_good_row) {}
  std::size_t last_good_row() const { return last_good_row_; }

 private:
  std::size_t last_good_row_;
};

class ZeroAcceleration : public Error {
 public:
  ZeroAcceleration() : Error("desired acceleration is (near) zero; thrust direction undefined") {}
};

class SingularGeometry : public Error {
 public:
  using Error::Error;
};

class NoSolution : public Error {
 public:
  using Error::Error;
};

class DegenerateBound : public Error {
 public:
  using Error::Error;
};

class UnstableGains : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cotrans
