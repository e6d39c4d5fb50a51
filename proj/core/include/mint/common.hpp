#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mint {

// Library-wide error type. Everything user-facing (bad files, bad configs,
// numeric domain violations) throws this; logic bugs use assert.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void check(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

}  // namespace mint
