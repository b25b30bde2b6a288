#pragma once

#include <stdexcept>
#include <string>

namespace nhqc {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

// dt/2 re-run disagreed with the dt run beyond the population tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class GridError : public Error {
public:
    using Error::Error;
};

// A sin(...) denominator in a pulse formula fell below the singularity guard.
class SingularityError : public Error {
public:
    using Error::Error;
};

// A supplied phase (alpha, beta) violates its evolution equation.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class HermiticityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace nhqc
