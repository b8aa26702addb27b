#ifndef SDES_ERRORS_HPP
#define SDES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sdes {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different variable frames or carry different caps.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the region where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A linearization that must be invertible is numerically singular.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// Input data (a hypersurface, a family, a file) fails validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// No family curve passes through the two requested points inside the chart.
class NoJoinError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Two family curves do not meet inside the chart.
class EmptyIntersectionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Slope pinning failed; the family is not transverse at the requested jet.
class TransversalityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The configuration sampler exhausted its attempts.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// A statement that holds mathematically failed numerically; signals a bug.
class InternalAssertion : public Error {
 public:
  using Error::Error;
};

/// The homological operator lost injectivity or the decomposition failed.
class LemmaViolation : public InternalAssertion {
 public:
  using InternalAssertion::InternalAssertion;
};

/// A symmetry map failed one of its structural checks.
class ConstructionViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace sdes

#endif  // SDES_ERRORS_HPP
