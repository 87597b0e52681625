#pragma once

#include <stdexcept>
#include <string>

namespace mipd {

/// Base class for numeric failures (non-convergence, ill-defined paths,
/// overflow). The CLI maps these to exit status 2.
class NumericError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class OverflowError : public NumericError {
   public:
    using NumericError::NumericError;
};

class TooLargeError : public NumericError {
   public:
    using NumericError::NumericError;
};

class IllDefinedPathError : public NumericError {
   public:
    using NumericError::NumericError;
};

class OutOfDomainError : public NumericError {
   public:
    using NumericError::NumericError;
};

class UndefinedError : public NumericError {
   public:
    using NumericError::NumericError;
};

class DegenerateProbabilityError : public NumericError {
   public:
    using NumericError::NumericError;
};

class SymmetryViolationError : public NumericError {
   public:
    using NumericError::NumericError;
};

/// Invalid user-facing parameters. Exit status 1.
class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// File system failures, always carrying the offending path. Exit status 3.
class IoError : public std::runtime_error {
   public:
    IoError(const std::string &path, const std::string &what)
        : std::runtime_error(what + ": " + path), path_(path) {}
    const std::string &path() const { return path_; }

   private:
    std::string path_;
};

}  // namespace mipd
