#pragma once

#include <cstdint>
#include <random>

#include "blockavg/averaging_operator.hpp"

namespace blockavg {

/// Deterministic standard-normal source (Box-Muller over raw mt19937_64
/// words, so the stream does not depend on library distribution internals).
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next();
    Complex next_complex(); // standard complex normal (re, im ~ N(0, 1/2))

private:
    double uniform01();

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

TruncatedSequence random_complex_sequence(std::size_t length, GaussianSource& source);

} // namespace blockavg
