#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hetsched {

// Scenario or model parameters violate an invariant; raised before any work runs.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A throughput measurement with non-positive elapsed time.
class InvalidMeasurement : public std::runtime_error {
public:
    explicit InvalidMeasurement(const std::string& what) : std::runtime_error(what) {}
};

// A trace that cannot be reduced to a report (empty, zero duration, bad timestamps).
class InvalidTrace : public std::runtime_error {
public:
    explicit InvalidTrace(const std::string& what) : std::runtime_error(what) {}
};

// Chunk-size training stopped by a probe failure; carries the best result so far.
class TrainingAborted : public std::runtime_error {
public:
    TrainingAborted(const std::string& what, std::int64_t best_size, double best_lambda)
        : std::runtime_error(what), best_size(best_size), best_lambda(best_lambda) {}
    std::int64_t best_size;
    double best_lambda;
};

// Real-thread backend could not complete (e.g. thread spawn failure).
class RunAborted : public std::runtime_error {
public:
    explicit RunAborted(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hetsched
