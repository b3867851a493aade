#pragma once

#include <stdexcept>
#include <string>

namespace crplab {

// Bad user/caller input: malformed files, domain violations, precondition
// failures. CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A search exceeded its configured cap (assignment count, grid size,
// enumeration nodes). CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// An empirically certified lemma failed on a concrete input. Thrown only
// from code paths where the lemma guarantees existence (e.g. the gadget
// rounding candidate set); must never fire on correct inputs.
class LemmaViolation : public std::runtime_error {
 public:
  explicit LemmaViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crplab
