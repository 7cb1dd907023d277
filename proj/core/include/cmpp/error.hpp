#pragma once

#include <stdexcept>
#include <string>

namespace cmpp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Consecutive path vertices not joined by an edge, or an unknown vertex on a path.
class InvalidPathError : public Error {
 public:
  InvalidPathError(int agent, std::size_t position, const std::string& what)
      : Error(what), agent_(agent), position_(position) {}
  int agent() const { return agent_; }
  std::size_t position() const { return position_; }

 private:
  int agent_;
  std::size_t position_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// A flow counter would drop below zero.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

// Congestion arithmetic exceeded the 128-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cmpp
