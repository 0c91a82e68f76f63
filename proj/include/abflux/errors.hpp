#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abflux {

// Invalid argument or violated type invariant.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Density integrates to zero over the requested window.
class DegenerateDistributionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(what + ": " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Input file provenance disagrees with the active configuration.
class ProvenanceMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abflux
