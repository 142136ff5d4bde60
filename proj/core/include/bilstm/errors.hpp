#pragma once

#include <stdexcept>
#include <string>

namespace bilstm {

// Failure categories surfaced by the library. The CLI maps these onto
// process exit codes, so keep the set small and stable.
enum class ErrorKind {
  contract,               // precondition violated (shape mismatch, bad dims)
  not_positive_definite,  // Cholesky hit a non-positive or non-finite pivot
  parse,                  // malformed file or token stream
  data,                   // digest mismatch, truncation, missing sections
  divergence,             // non-finite loss during training
  infeasible,             // parity search has no solution
  oracle,                 // a reference oracle produced a non-finite value
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // Extra context for specific kinds; -1 when not applicable.
  int pivot_index = -1;  // not_positive_definite
  long position = -1;    // parse: token index or line number

  static Error contract(std::string msg) {
    return Error(ErrorKind::contract, std::move(msg));
  }
  static Error not_positive_definite(int pivot, std::string msg) {
    Error e(ErrorKind::not_positive_definite, std::move(msg));
    e.pivot_index = pivot;
    return e;
  }
  static Error parse(long position, std::string msg) {
    Error e(ErrorKind::parse, std::move(msg));
    e.position = position;
    return e;
  }
  static Error data(std::string msg) { return Error(ErrorKind::data, std::move(msg)); }
  static Error divergence(std::string msg) {
    return Error(ErrorKind::divergence, std::move(msg));
  }
  static Error infeasible(std::string msg) {
    return Error(ErrorKind::infeasible, std::move(msg));
  }
  static Error oracle(std::string msg) { return Error(ErrorKind::oracle, std::move(msg)); }

 private:
  ErrorKind kind_;
};

}  // namespace bilstm
