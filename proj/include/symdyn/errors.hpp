// Copyright 2026 The symdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

/// Broad failure classes. Each maps to a fixed CLI exit code.
enum class ErrorKind {
  input,         // malformed files, unknown ids, bad arguments (exit 2)
  precondition,  // a documented precondition does not hold (exit 3)
  corruption,    // encoded data is inconsistent (exit 4)
  internal,      // a layout invariant was violated (exit 5)
};

/// All library failures. `tag()` is a short machine-readable identifier such
/// as "entropy-gap" or "no-connector"; `stage()` is set when the error passed
/// through a pipeline stage.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string tag, const std::string& message, std::string stage = {})
      : std::runtime_error(stage.empty() ? tag + ": " + message : stage + ": " + tag + ": " + message),
        kind_(kind),
        tag_(std::move(tag)),
        stage_(std::move(stage)),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& tag() const noexcept { return tag_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& message() const noexcept { return message_; }

  Error with_stage(std::string stage) const { return Error(kind_, tag_, message_, std::move(stage)); }

 private:
  ErrorKind kind_;
  std::string tag_;
  std::string stage_;
  std::string message_;
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return 2;
    case ErrorKind::precondition: return 3;
    case ErrorKind::corruption: return 4;
    case ErrorKind::internal: return 5;
  }
  return 5;
}

[[noreturn]] inline void fail(ErrorKind kind, std::string tag, const std::string& message) {
  throw Error(kind, std::move(tag), message);
}

}  // namespace symdyn
