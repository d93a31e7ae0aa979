#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wavepalette {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the CLI and service map subclasses to exit codes
// and HTTP statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A well-formed input that violates a table or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Tristimulus sum too small for chromaticity to be meaningful.
class DegenerateStimulusError : public Error {
 public:
  using Error::Error;
};

// Ray from the white point exits through the purple line.
class NoDominantWavelengthError : public Error {
 public:
  using Error::Error;
};

// Colour coincides with the white point.
class UndefinedDirectionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedLevelError : public Error {
 public:
  using Error::Error;
};

class LadderExhaustedError : public Error {
 public:
  using Error::Error;
};

}  // namespace wavepalette
