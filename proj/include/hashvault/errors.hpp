#pragma once

#include <stdexcept>
#include <string>

namespace hashvault {

// Base class for every error raised by the library. The CLI maps all of
// these to a domain-error exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A rainbow table or attack was pointed at records it cannot serve.
class SchemeMismatch : public Error {
 public:
  using Error::Error;
};

class DuplicateUser : public Error {
 public:
  using Error::Error;
};

class UnknownUser : public Error {
 public:
  using Error::Error;
};

class VerificationFailed : public Error {
 public:
  using Error::Error;
};

// Refused to allocate past a configured memory budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class ExportRefused : public Error {
 public:
  using Error::Error;
};

}  // namespace hashvault
