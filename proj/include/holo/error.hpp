#pragma once

#include <stdexcept>
#include <string>

namespace holo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// A hologram or file was produced for a different pupil than the one supplied.
class GeometryMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfField : public Error {
 public:
  using Error::Error;
};

class InvalidPupil : public Error {
 public:
  using Error::Error;
};

// Uniformity of an all-zero intensity vector is 0/0.
class UndefinedUniformity : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace holo
