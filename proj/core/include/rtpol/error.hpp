#pragma once

#include <stdexcept>
#include <string>

namespace rtpol {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Input records do not match the configured schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class StatsError : public Error {
public:
    using Error::Error;
};

class PartitionError : public Error {
public:
    using Error::Error;
};

/// The Adaptive E-I score has a zero denominator.
class UndefinedScoreError : public Error {
public:
    using Error::Error;
};

class FeatureError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

class PredictionError : public Error {
public:
    using Error::Error;
};

/// Internal invariant violated. Always on, independent of NDEBUG.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace rtpol

#define RTPOL_CHECK(cond, msg)                                                                     \
    do {                                                                                           \
        if (!(cond)) {                                                                             \
            throw ::rtpol::InvariantError(std::string("invariant failed: ") + (msg) + " [" #cond   \
                                          "] at " __FILE__ ":" + std::to_string(__LINE__));        \
        }                                                                                          \
    } while (0)
