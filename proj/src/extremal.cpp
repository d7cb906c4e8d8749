#include "blockavg/extremal.hpp"

#include <cmath>

namespace blockavg {

namespace {

bool rate_in_range(std::int64_t base, double rate) {
    const double b = static_cast<double>(base);
    return rate > std::sqrt(b) && rate < b && std::isfinite(rate);
}

} // namespace

ExtremalParams::ExtremalParams(std::int64_t base_, double rate_) : base(base_), rate(rate_) {
    if (base < 2) {
        throw error(errc::invalid_params, "extremal family requires integer base >= 2");
    }
    if (!rate_in_range(base, rate)) {
        throw error(errc::invalid_params, "extremal rate must satisfy sqrt(base) < rate < base");
    }
}

TruncatedSequence extremal_sequence(const ExtremalParams& params, std::int64_t blocks) {
    if (blocks < 1) {
        throw error(errc::invalid_params, "extremal sequence requires blocks >= 1");
    }
    double length = 1.0;
    for (std::int64_t k = 0; k < blocks; ++k) {
        length *= static_cast<double>(params.base);
    }
    if (length > 1e8) {
        throw error(errc::block_out_of_range, "extremal sequence too long to materialize");
    }
    std::vector<Complex> values(static_cast<std::size_t>(length));
    std::size_t j = 0;
    std::int64_t boundary = 1;
    double value = 1.0;
    for (std::int64_t k = 1; k <= blocks; ++k) {
        boundary *= params.base;
        value /= params.rate;
        for (; j < static_cast<std::size_t>(boundary); ++j) {
            values[j] = value;
        }
    }
    return TruncatedSequence(std::move(values));
}

double extremal_l2_norm_sq(const ExtremalParams& params) {
    const double b = static_cast<double>(params.base);
    const double r = params.rate;
    return b * (r * r - 1.0) / (r * r * (r * r - b));
}

double extremal_lhs_sum(const ExtremalParams& params) {
    const double b = static_cast<double>(params.base);
    const double r = params.rate;
    const double prefactor = b * b / (r * r * (r - b) * (r - b));
    const double bracket = (r - 1.0) * (r - 1.0) / (b - 1.0) - 2.0 * r * (b - 1.0) / b +
                           r * r * (b - 1.0) * (b - 1.0) / (b * (r * r - b));
    return prefactor * bracket;
}

SweepResult sharpness_sweep(std::int64_t base, std::span<const double> grid) {
    if (base < 2) {
        throw error(errc::invalid_base, "sharpness sweep requires integer base >= 2");
    }
    const double sharp = geometric_sharp_constant(base);
    SweepResult result;
    for (double r : grid) {
        if (!rate_in_range(base, r)) {
            result.skipped.push_back(r);
            continue;
        }
        const ExtremalParams params(base, r);
        const double ratio = std::sqrt(extremal_lhs_sum(params) / extremal_l2_norm_sq(params));
        result.rows.push_back(SweepRow{r, ratio, sharp, sharp - ratio});
    }
    return result;
}

} // namespace blockavg
