#include <random>

#include "doctest.h"

#include "hetsched/core.hpp"

using namespace hetsched;

TEST_CASE("split_front takes a prefix") {
    auto [front, rest] = split_front({0, 1000}, 320);
    CHECK(front == IterationSpace{0, 320});
    CHECK(rest == IterationSpace{320, 1000});
}

TEST_CASE("split_front with zero leaves the range untouched") {
    auto [front, rest] = split_front({0, 100}, 0);
    CHECK(front.empty());
    CHECK(rest == IterationSpace{0, 100});
}

TEST_CASE("split_front clamps to the remainder") {
    auto [front, rest] = split_front({0, 100}, 500);
    CHECK(front == IterationSpace{0, 100});
    CHECK(rest.empty());
}

TEST_CASE("split_front is total and reconstructs its input") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
        const iter_t begin = static_cast<iter_t>(rng() % 1000);
        const iter_t size = static_cast<iter_t>(rng() % 5000);
        const iter_t n = static_cast<iter_t>(rng() % 8000);
        const IterationSpace space{begin, begin + size};
        auto [front, rest] = split_front(space, n);
        CHECK(front.begin == space.begin);
        CHECK(front.end == rest.begin);
        CHECK(rest.end == space.end);
        CHECK(front.size() + rest.size() == space.size());
        CHECK(front.size() == std::min(n, space.size()));
    }
}

TEST_CASE("repeated splits conserve the iteration space") {
    std::mt19937_64 rng(99);
    IterationSpace space{0, 100000};
    iter_t consumed = 0;
    IterationSpace rest = space;
    while (!rest.empty()) {
        auto [front, next] = split_front(rest, static_cast<iter_t>(rng() % 700 + 1));
        CHECK(front.begin == rest.begin);  // contiguity: no index is skipped or repeated
        consumed += front.size();
        rest = next;
    }
    CHECK(consumed == space.size());
}
