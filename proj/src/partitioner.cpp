#include "hetsched/partitioner.hpp"

#include <algorithm>
#include <cmath>

#include "hetsched/errors.hpp"

namespace hetsched {

double throughput(iter_t chunk_size, double elapsed_ms) {
    if (elapsed_ms <= 0.0) {
        throw InvalidMeasurement("non-positive elapsed time in throughput sample: " +
                                 std::to_string(elapsed_ms));
    }
    return static_cast<double>(chunk_size) / elapsed_ms;
}

ThroughputSample make_sample(DeviceId device, iter_t chunk_size, double elapsed_ms) {
    return ThroughputSample{device, chunk_size, elapsed_ms, throughput(chunk_size, elapsed_ms)};
}

namespace {

iter_t clamp_cpu_chunk(double raw, const PartitionerState& state) {
    const iter_t remaining = state.remaining.size();
    const iter_t lo = std::min(state.min_cpu_chunk, remaining);
    const iter_t rounded = static_cast<iter_t>(std::llround(raw));
    return std::clamp(rounded, lo, remaining);
}

}  // namespace

iter_t next_cpu_chunk(const PartitionerState& state, int agent) {
    const auto it = state.last_lambda_cpu.find(agent);
    const bool have_cpu = it != state.last_lambda_cpu.end();
    if (!have_cpu || !state.last_lambda_gpu) {
        return clamp_cpu_chunk(state.bootstrap_fraction * static_cast<double>(state.gpu_chunk),
                               state);
    }
    const double raw =
        static_cast<double>(state.gpu_chunk) * (it->second / *state.last_lambda_gpu);
    return clamp_cpu_chunk(raw, state);
}

iter_t next_gpu_chunk(const PartitionerState& state) {
    return std::min(state.gpu_chunk, state.remaining.size());
}

iter_t initial_gpu_chunk(const TrainingConfig& cfg) {
    return static_cast<iter_t>(cfg.num_compute_units) * cfg.preferred_multiple;
}

TrainingResult train_gpu_chunk(const std::function<double(iter_t)>& probe,
                               const TrainingConfig& cfg) {
    const iter_t g0 = initial_gpu_chunk(cfg);
    TrainingResult result;
    iter_t best_size = 0;
    double best_lambda = 0.0;
    int stable = 0;
    for (int k = 1; k <= cfg.max_probes; ++k) {
        const iter_t size = g0 * k;
        double lambda = 0.0;
        try {
            lambda = probe(size);
        } catch (const std::exception& e) {
            throw TrainingAborted(std::string("probe failed at chunk size ") +
                                      std::to_string(size) + ": " + e.what(),
                                  best_size, best_lambda);
        }
        result.probes.emplace_back(size, lambda);
        if (k == 1) {
            best_size = size;
            best_lambda = lambda;
            continue;
        }
        if (lambda > best_lambda * (1.0 + cfg.epsilon)) {
            stable = 0;
        } else {
            ++stable;
        }
        if (lambda > best_lambda) {  // strict: first probe wins ties
            best_lambda = lambda;
            best_size = size;
        }
        if (stable >= cfg.patience) {
            break;
        }
    }
    result.chosen = best_size;
    return result;
}

std::pair<IterationSpace, IterationSpace> bulk_oracle_split(IterationSpace space,
                                                            int gpu_percent) {
    if (gpu_percent < 0 || gpu_percent > 100) {
        throw ConfigError("gpu_percent must be in [0, 100], got " + std::to_string(gpu_percent));
    }
    const iter_t gpu_count = static_cast<iter_t>(
        std::llround(static_cast<double>(space.size()) * gpu_percent / 100.0));
    return split_front(space, gpu_count);
}

}  // namespace hetsched
