#pragma once

#include <optional>
#include <string>
#include <utility>

namespace manip {

enum class Status {
  Ok = 0,
  InvalidArgument,
  Io,
  Parse,
  Unreachable,
  NoConsensus,
  TooFewCorrespondences,
  InvalidDepth,
  DegenerateBasis,
  PointAtInfinity,
  ImageTooSmall,
  EmptyInput,
  Internal,
};

// Stable machine-greppable code string, e.g. "E_UNREACHABLE".
const char* status_name(Status s);

template <typename T>
struct Result {
  Status status{Status::Ok};
  std::string message;
  std::optional<T> value;  // engaged iff status == Ok

  static Result success(T v) {
    Result r;
    r.value = std::move(v);
    return r;
  }
  static Result failure(Status s, std::string msg = {}) {
    Result r;
    r.status = s;
    r.message = std::move(msg);
    return r;
  }

  bool ok() const { return status == Status::Ok; }
  explicit operator bool() const { return ok(); }
  const T& operator*() const { return *value; }
  T& operator*() { return *value; }
  const T* operator->() const { return &*value; }
  T* operator->() { return &*value; }
};

}  // namespace manip
