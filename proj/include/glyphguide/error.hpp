#pragma once

#include <stdexcept>
#include <string>

namespace glyphguide {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid shapes disagree (channel count, height, width).
class ShapeError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

// Bad user-supplied data: unsupported characters, empty strings, malformed files.
class InputError : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class ConditionError : public Error {
 public:
  using Error::Error;
};

class LayoutError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace glyphguide
