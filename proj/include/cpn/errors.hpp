#pragma once

#include <stdexcept>
#include <string>

namespace cpn {

// Base class for all toolkit errors.
class CpnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown place or transition identifier.
class IdentifierError : public CpnError {
 public:
  using CpnError::CpnError;
};

// Firing amount exceeds the enabling degree.
class FiringAmountError : public CpnError {
 public:
  using CpnError::CpnError;
};

// Applying a Parikh vector would drive some place negative.
class InfeasibleVectorError : public CpnError {
 public:
  using CpnError::CpnError;
};

// Mismatched vector or matrix dimensions.
class DimensionError : public CpnError {
 public:
  using CpnError::CpnError;
};

// Malformed user-provided input (files, CLI arguments, configs).
class InputError : public CpnError {
 public:
  using CpnError::CpnError;
};

// Text parse failure; the message carries position information.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace cpn
