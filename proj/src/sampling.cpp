#include "blockavg/sampling.hpp"

#include <cmath>
#include <numbers>

namespace blockavg {

double GaussianSource::uniform01() {
    // top 53 bits -> [0, 1); retry the exact zero so log() stays finite
    for (;;) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1p-53;
        if (u > 0.0) {
            return u;
        }
    }
}

double GaussianSource::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Complex GaussianSource::next_complex() {
    // standard complex normal: unit total variance, split across re and im
    const double re = next();
    const double im = next();
    return Complex(re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0);
}

TruncatedSequence random_complex_sequence(std::size_t length, GaussianSource& source) {
    std::vector<Complex> values(length);
    for (auto& v : values) {
        v = source.next_complex();
    }
    return TruncatedSequence(std::move(values));
}

} // namespace blockavg
