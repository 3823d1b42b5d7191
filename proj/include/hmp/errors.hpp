#pragma once

#include <stdexcept>
#include <string>

namespace hmp {

/// Base class for every error raised by the library. `category()` is a stable
/// machine-readable tag that the CLI prints and maps to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* category() const noexcept = 0;
  virtual int exit_code() const noexcept = 0;
};

#define HMP_DEFINE_ERROR(Name, tag, code)                                  \
  class Name : public Error {                                              \
   public:                                                                 \
    using Error::Error;                                                    \
    const char* category() const noexcept override { return tag; }         \
    int exit_code() const noexcept override { return code; }               \
  };

HMP_DEFINE_ERROR(ValidationError, "validation", 2)
HMP_DEFINE_ERROR(DimensionError, "dimension", 3)
HMP_DEFINE_ERROR(ArgumentError, "argument", 4)
HMP_DEFINE_ERROR(StreamError, "stream-discontinuity", 5)
HMP_DEFINE_ERROR(NumericalError, "numerical-degradation", 6)
HMP_DEFINE_ERROR(ConfigError, "configuration", 7)
HMP_DEFINE_ERROR(IoError, "io", 8)

#undef HMP_DEFINE_ERROR

}  // namespace hmp
