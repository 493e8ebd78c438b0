#pragma once

#include <stdexcept>
#include <string>

namespace seal {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
  config = 2,    // bad parameters, invalid configuration, precondition violations
  io = 3,        // missing/unreadable/unwritable files, codec failures
  solver = 4,    // eigensolver failure
  data = 5,      // mismatched/malformed data (parse errors, duplicate keys, shape mismatch)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

struct SolverError : Error {
  explicit SolverError(const std::string& what) : Error(ErrorKind::solver, what) {}
};

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

}  // namespace seal
