#pragma once

#include <stdexcept>
#include <string>

namespace padicheights {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad files, bad literals, violated model invariants.
class InputError : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public InputError {
public:
    using InputError::InputError;
};

class SchemaError : public InputError {
public:
    using InputError::InputError;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

class ZeroArgument : public Error {
public:
    using Error::Error;
};

class Inconsistent : public Error {
public:
    using Error::Error;
};

class WindowExceeded : public Error {
public:
    using Error::Error;
};

class NonRationalPole : public Error {
public:
    using Error::Error;
};

class ExpansionCollision : public Error {
public:
    using Error::Error;
};

class NotConstantOnAnnulus : public Error {
public:
    using Error::Error;
};

class DegenerateModel : public Error {
public:
    using Error::Error;
};

class DegeneratePairing : public Error {
public:
    using Error::Error;
};

class AnsatzTooSmall : public Error {
public:
    using Error::Error;
};

class NotComplementary : public Error {
public:
    using Error::Error;
};

class SupportsNotDisjoint : public Error {
public:
    using Error::Error;
};

class IndivisibleEdge : public Error {
public:
    using Error::Error;
};

}  // namespace padicheights
