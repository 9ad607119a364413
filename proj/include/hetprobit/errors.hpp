#pragma once

#include <stdexcept>
#include <string>

namespace hetprobit {

// Thrown when a matrix factorization or other floating-point procedure fails
// beyond recovery (e.g. the jitter ladder is exhausted). The message carries
// the diagnostic context (condition estimate, iteration index, group id, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed input files; carries a 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace hetprobit
