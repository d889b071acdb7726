#pragma once

#include <stdexcept>
#include <string>

namespace artout {

// Base for every error the library raises. Messages are meant for end users
// of the CLI, so they name the offending value where one exists.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

}  // namespace artout
