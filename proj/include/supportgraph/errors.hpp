#ifndef SUPPORTGRAPH_ERRORS_HPP
#define SUPPORTGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace supportgraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Loading and validation.
class SchemaError : public Error { using Error::Error; };
class SpanError : public Error { using Error::Error; };
class FrameError : public Error { using Error::Error; };
class MissingViewError : public Error { using Error::Error; };

// Embedding / config files.
class DimensionError : public Error { using Error::Error; };
class ParseError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

// Solver.
class UnknownVariable : public Error { using Error::Error; };
class ResourceLimit : public Error { using Error::Error; };
class TooLarge : public Error { using Error::Error; };

/// A postcondition that should hold by construction did not.
class InternalError : public Error { using Error::Error; };

} // namespace supportgraph

#endif
