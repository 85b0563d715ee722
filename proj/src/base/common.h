// base/common.h

// Copyright 2026  UVC Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef UVC_BASE_COMMON_H_
#define UVC_BASE_COMMON_H_

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace uvc {

// All errors surfaced by the library derive from this; the CLI maps them
// onto its exit-code taxonomy.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Bad input data or configuration (maps to CLI exit code 2).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &msg) : Error(msg) {}
};

namespace internal {
class ErrorStream {
 public:
  ErrorStream(const char *file, int line, bool validation)
      : validation_(validation) {
    os_ << file << ":" << line << ": ";
  }
  template <typename T>
  ErrorStream &operator<<(const T &v) {
    os_ << v;
    return *this;
  }
  [[noreturn]] ~ErrorStream() noexcept(false) {
    if (validation_) throw ValidationError(os_.str());
    throw Error(os_.str());
  }

 private:
  std::ostringstream os_;
  bool validation_;
};
}  // namespace internal

#define UVC_ERR ::uvc::internal::ErrorStream(__FILE__, __LINE__, false)
#define UVC_INVALID ::uvc::internal::ErrorStream(__FILE__, __LINE__, true)

#define UVC_CHECK(cond)                                   \
  if (!(cond)) UVC_ERR << "check failed: " #cond << "  "

#define UVC_CHECK_INPUT(cond)                                 \
  if (!(cond)) UVC_INVALID << "invalid input: " #cond << "  "

}  // namespace uvc

#endif  // UVC_BASE_COMMON_H_
