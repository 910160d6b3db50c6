#pragma once

#include <stdexcept>
#include <string>

namespace bbopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or configuration supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed model or dataset file.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Raised by the ledger when a query would exceed the budget. Attacks catch
// this and turn it into a failed AttackResult.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted() : Error("query budget exhausted") {}
};

// Transport or protocol failure talking to a remote oracle.
class OracleUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace bbopt
