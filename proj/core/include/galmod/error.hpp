#pragma once

#include <stdexcept>
#include <string>

namespace galmod {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters or mismatched operands.
class ParamError : public Error {
public:
  using Error::Error;
};

/// An enumeration would exceed its configured size guard.
class GuardError : public Error {
public:
  using Error::Error;
};

/// An operation was evaluated outside its domain (e.g. the index functional
/// at an element of full length).
class DomainError : public Error {
public:
  using Error::Error;
};

/// The caller-supplied hypotheses of a construction do not hold.
class HypothesisError : public Error {
public:
  using Error::Error;
};

/// A model passed validation piecewise but produced an impossible count
/// (non-divisible tally, non-integral closed form, ...).
class ModelInconsistency : public Error {
public:
  using Error::Error;
};

} // namespace galmod
