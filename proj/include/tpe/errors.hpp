#pragma once

#include <stdexcept>
#include <string>

namespace tpe {

// Base class for every error raised by the library. Callers that only care
// about "something was wrong with the request" can catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSize : public Error {
 public:
  using Error::Error;
};

class InvalidDegree : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A requested operator or dense matrix would exceed a configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidGroup : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace tpe
