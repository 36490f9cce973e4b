#pragma once

#include <stdexcept>

namespace qcl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class ZeroProbability : public Error {
 public:
  using Error::Error;
};

// A restricted to the ball is itself unitary, so the requested object is undefined.
class SubsystemUnitary : public Error {
 public:
  using Error::Error;
};

class OutsideRange : public Error {
 public:
  using Error::Error;
};

class DegenerateRange : public Error {
 public:
  using Error::Error;
};

class OmegaMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

}  // namespace qcl
