#pragma once

#include <cstdint>
#include <utility>

namespace hetsched {

// Iteration indices are 64-bit; all times are double-precision milliseconds.
using iter_t = std::int64_t;

/// Half-open loop range [begin, end). Empty ranges are legal values.
struct IterationSpace {
    iter_t begin = 0;
    iter_t end = 0;

    iter_t size() const { return end - begin; }
    bool empty() const { return size() <= 0; }

    friend bool operator==(const IterationSpace&, const IterationSpace&) = default;
};

enum class DeviceClass { Gpu, BigCore, LittleCore };

/// Identifies one compute device: the GPU or a CPU core of a given class.
struct DeviceId {
    DeviceClass cls = DeviceClass::Gpu;
    int index = 0;

    bool is_gpu() const { return cls == DeviceClass::Gpu; }
    bool is_cpu() const { return !is_gpu(); }

    friend bool operator==(const DeviceId&, const DeviceId&) = default;
};

const char* device_class_name(DeviceClass cls);

/// A contiguous block of iterations assigned to one device during one
/// scheduling interval. interval_index counts intervals per device.
struct Chunk {
    IterationSpace range;
    DeviceId device;
    std::int64_t interval_index = 0;
};

enum class TokenKind { GToken, CToken };

struct Token {
    TokenKind kind = TokenKind::GToken;
    Chunk chunk;
};

/// Splits off the first min(n, size) iterations. Never fails: n larger than
/// the remainder clamps, n == 0 yields an empty front.
std::pair<IterationSpace, IterationSpace> split_front(IterationSpace space, iter_t n);

}  // namespace hetsched
