#pragma once

#include <stdexcept>
#include <string>

namespace gape {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied arguments that violate a precondition (shape, range, graph kind).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed: singular system, non-convergence, divergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (graph JSON, encoding CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace gape
