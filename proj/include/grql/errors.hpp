#pragma once

#include <stdexcept>
#include <string>

#include "grql/syntax.hpp"

namespace grql {

/// Error with a short machine code, a message and a source span.
class CodedError : public std::runtime_error {
 public:
  CodedError(std::string code, const std::string& message, Span span = {})
      : std::runtime_error(message), code_(std::move(code)), span_(span) {}

  const std::string& code() const { return code_; }
  Span span() const { return span_; }

 private:
  std::string code_;
  Span span_;
};

/// UnknownFunction, ArityMismatch, UntypedEmptySet, DuplicateLabel, BadShape.
class DesugarError : public CodedError {
  using CodedError::CodedError;
};

/// UnboundVar, UnknownName, NoSuchLabel, NotAnObject, CardinalityExceeded,
/// NoSignature, StoreTypeMismatch, BranchTypeMismatch, KeyNotOptionalSingle,
/// BadUpdateSubject.
class TypeError : public CodedError {
  using CodedError::CodedError;
};

/// UnboundVar, MissingLabel, NotARef, BuiltinDomain, Stuck, IncomparableKeys,
/// MissingLinkProp.
class EvalFault : public CodedError {
  using CodedError::CodedError;
};

/// Thrown by the serializer when values do not fit the requested mode.
class SerializeMismatch : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace grql
