#pragma once

#include <stdexcept>
#include <string>

namespace pswl {

// Base for every error raised by the simulator library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct DeviceWornOut : Error {
  using Error::Error;
};

struct CapacityExceeded : Error {
  using Error::Error;
};

struct UnsupportedRaidLevel : Error {
  using Error::Error;
};

struct EmptyGroup : Error {
  using Error::Error;
};

struct DivisionByZero : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

}  // namespace pswl
