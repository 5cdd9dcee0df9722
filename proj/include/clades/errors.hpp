#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace clades {

// Growth process hit the node cap before the stopping clock chimed.
// Signals the polynomial tail of |T^lambda|; callers may retry or flag.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(std::int64_t cap, std::int64_t replicate = -1)
      : std::runtime_error("tree growth reached cap of " + std::to_string(cap) + " nodes" +
                           (replicate >= 0 ? " (replicate " + std::to_string(replicate) + ")" : "")),
        cap(cap),
        replicate(replicate) {}
  std::int64_t cap;
  std::int64_t replicate;
};

class TableTooShortError : public std::runtime_error {
 public:
  TableTooShortError(std::int64_t have, std::int64_t need)
      : std::runtime_error("exact table covers n <= " + std::to_string(have) + ", need " +
                           std::to_string(need)),
        have(have),
        need(need) {}
  std::int64_t have;
  std::int64_t need;
};

class CapTooLargeError : public std::runtime_error {
 public:
  CapTooLargeError(std::int64_t cap, std::int64_t limit)
      : std::runtime_error("requested cap " + std::to_string(cap) + " exceeds limit " +
                           std::to_string(limit)) {}
};

class ConfigMismatchError : public std::runtime_error {
 public:
  explicit ConfigMismatchError(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateSampleError : public std::runtime_error {
 public:
  explicit DegenerateSampleError(const std::string& what) : std::runtime_error(what) {}
};

class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace clades
