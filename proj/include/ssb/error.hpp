#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BackendMismatch : public Error {
 public:
  BackendMismatch() : Error("backend mismatch") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t a, std::size_t b)
      : Error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

// Thrown by the sequence backend when a point has no preimage under a map.
class OutsideImage : public Error {
 public:
  OutsideImage() : Error("preimage outside space: point not in image pattern") {}
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t requested, std::uint64_t budget)
      : Error("address budget exceeded: " + std::to_string(requested) + " > " +
              std::to_string(budget) + " (lower the depth or raise --budget)"),
        requested_(requested),
        budget_(budget) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t requested_;
  std::uint64_t budget_;
};

class NotATile : public Error {
 public:
  explicit NotATile(const std::string& why) : Error("not a self-similar tile candidate: " + why) {}
};

// Operation not available for a backend (raster, render).
class Unsupported : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace ssb
