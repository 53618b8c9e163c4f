#pragma once

#include <stdexcept>
#include <string>

namespace clsel {

// Base for every error raised by the library. Callers that only need a
// diagnostic can catch this; the subclasses exist for tests and the CLI.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDataset : public Error {
public:
    using Error::Error;
};

// The response row of [X, y]^T is numerically zero.
class DegenerateResponse : public Error {
public:
    using Error::Error;
};

class RankZero : public Error {
public:
    using Error::Error;
};

// A dense or combinatorial object would exceed a configured cap.
class SizeLimit : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace clsel
