#include "hetsched/core.hpp"

#include <algorithm>

namespace hetsched {

const char* device_class_name(DeviceClass cls) {
    switch (cls) {
        case DeviceClass::Gpu: return "gpu";
        case DeviceClass::BigCore: return "big";
        case DeviceClass::LittleCore: return "little";
    }
    return "?";
}

std::pair<IterationSpace, IterationSpace> split_front(IterationSpace space, iter_t n) {
    const iter_t take = std::clamp<iter_t>(n, 0, space.size());
    IterationSpace front{space.begin, space.begin + take};
    IterationSpace rest{space.begin + take, space.end};
    return {front, rest};
}

}  // namespace hetsched
