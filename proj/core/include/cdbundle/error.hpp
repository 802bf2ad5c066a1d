#pragma once

#include <stdexcept>
#include <string>

namespace cdbundle {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rank or order mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

// Point outside the open unit disc, or a parameter outside its admissible range.
class DomainError : public Error {
public:
    using Error::Error;
};

// Metric not positive definite, or a division by a vanishing quantity.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

// Input lies outside the matrix shapes the structured deciders handle.
class UnsupportedShape : public Error {
public:
    using Error::Error;
};

class SpecParseError : public Error {
public:
    using Error::Error;
};

}  // namespace cdbundle
