#include "blockavg/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockavg {

namespace {

constexpr double kConjugacyTol = 1e-12;

}

ExponentPair::ExponentPair(double p_, double q_) : p(p_), q(q_) {
    if (!(p > 1.0) || !(q > 1.0)) {
        throw error(errc::invalid_exponent, "exponents must satisfy p > 1 and q > 1");
    }
    if (std::abs(1.0 / p + 1.0 / q - 1.0) > kConjugacyTol) {
        throw error(errc::invalid_exponent, "exponents are not conjugate: 1/p + 1/q != 1");
    }
}

ExponentPair ExponentPair::from_p(double p) { return ExponentPair(p, conjugate_exponent(p)); }

double conjugate_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw error(errc::invalid_exponent, "conjugate exponent requires p > 1");
    }
    return p / (p - 1.0);
}

Partition::Partition(std::vector<std::int64_t> block_lengths, ExtensionRule extension)
    : lengths_(std::move(block_lengths)), extension_(extension) {
    if (lengths_.empty()) {
        throw error(errc::invalid_partition, "partition needs at least one block");
    }
    boundaries_.reserve(lengths_.size());
    std::int64_t total = 0;
    for (std::int64_t len : lengths_) {
        if (len < 1) {
            throw error(errc::invalid_partition, "block lengths must be >= 1");
        }
        if (total > std::numeric_limits<std::int64_t>::max() - len) {
            throw error(errc::invalid_partition, "partition boundaries overflow 64-bit range");
        }
        total += len;
        boundaries_.push_back(total);
    }
    if (extension_.kind == ExtensionKind::geometric && extension_.base < 2) {
        throw error(errc::invalid_base, "geometric extension requires base >= 2");
    }
}

std::int64_t Partition::block_length(std::int64_t k) const {
    if (k < 1 || k > stored_blocks()) {
        throw error(errc::block_out_of_range, "block index outside stored range");
    }
    return lengths_[static_cast<std::size_t>(k - 1)];
}

std::int64_t Partition::boundary(std::int64_t k) const {
    if (k < 1 || k > stored_blocks()) {
        throw error(errc::block_out_of_range, "block index outside stored range");
    }
    return boundaries_[static_cast<std::size_t>(k - 1)];
}

std::int64_t Partition::block_of(std::int64_t j) const {
    if (j < 1 || j > boundaries_.back()) {
        throw error(errc::block_out_of_range, "element index outside stored range");
    }
    auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), j);
    return static_cast<std::int64_t>(it - boundaries_.begin()) + 1;
}

Partition geometric_partition(std::int64_t base, std::int64_t blocks) {
    if (base < 2) {
        throw error(errc::invalid_base, "geometric partition requires base >= 2");
    }
    if (blocks < 1) {
        throw error(errc::invalid_partition, "geometric partition requires blocks >= 1");
    }
    std::vector<std::int64_t> lengths;
    lengths.reserve(static_cast<std::size_t>(blocks));
    std::int64_t boundary = 0;
    std::int64_t power = 1;
    for (std::int64_t k = 1; k <= blocks; ++k) {
        if (power > std::numeric_limits<std::int64_t>::max() / base) {
            throw error(errc::invalid_partition, "geometric boundaries overflow 64-bit range");
        }
        power *= base;
        lengths.push_back(power - boundary);
        boundary = power;
    }
    return Partition(std::move(lengths), ExtensionRule{ExtensionKind::geometric, base});
}

Partition singleton_partition(std::int64_t blocks) {
    if (blocks < 1) {
        throw error(errc::invalid_partition, "singleton partition requires blocks >= 1");
    }
    return Partition(std::vector<std::int64_t>(static_cast<std::size_t>(blocks), 1),
                     ExtensionRule{ExtensionKind::singleton, 0});
}

std::pair<Partition, double> lacunary_partition(const std::vector<std::int64_t>& boundaries,
                                                ExtensionRule extension) {
    if (boundaries.size() < 2) {
        throw error(errc::invalid_partition, "lacunary partition requires at least two boundaries");
    }
    std::vector<std::int64_t> lengths;
    lengths.reserve(boundaries.size());
    std::int64_t prev = 0;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        std::int64_t b = boundaries[i];
        if (b <= prev) {
            throw error(errc::invalid_partition, "boundaries must be strictly increasing positive integers");
        }
        lengths.push_back(b - prev);
        if (i > 0) {
            ratio = std::min(ratio, static_cast<double>(b) / static_cast<double>(prev));
        }
        prev = b;
    }
    return {Partition(std::move(lengths), extension), ratio};
}

double certified_ratio(const Partition& partition) {
    const auto& bounds = partition.boundaries();
    if (bounds.size() < 2) {
        throw error(errc::invalid_partition, "certified ratio needs at least two boundaries");
    }
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < bounds.size(); ++i) {
        ratio = std::min(ratio, static_cast<double>(bounds[i]) / static_cast<double>(bounds[i - 1]));
    }
    return ratio;
}

WeightScheme WeightScheme::constant_one() { return WeightScheme(Kind::constant_one, {}, 1.0, 1.0); }

WeightScheme WeightScheme::explicit_list(std::vector<double> values) {
    if (values.empty()) {
        throw error(errc::invalid_weights, "explicit weight list must be nonempty");
    }
    for (double m : values) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw error(errc::invalid_weights, "weights must be strictly positive and finite");
        }
    }
    return WeightScheme(Kind::explicit_list, std::move(values), 1.0, 1.0);
}

WeightScheme WeightScheme::geometric(double scale, double ratio) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !(ratio > 0.0) || !std::isfinite(ratio)) {
        throw error(errc::invalid_weights, "geometric weights require positive finite scale and ratio");
    }
    return WeightScheme(Kind::geometric, {}, scale, ratio);
}

double WeightScheme::value(std::int64_t j) const {
    if (j < 1) {
        throw error(errc::block_out_of_range, "weight index must be >= 1");
    }
    switch (kind_) {
    case Kind::constant_one:
        return 1.0;
    case Kind::geometric:
        return scale_ * std::pow(ratio_, static_cast<double>(j - 1));
    case Kind::explicit_list:
        if (j > static_cast<std::int64_t>(values_.size())) {
            throw error(errc::block_out_of_range, "weight index past the explicit list");
        }
        return values_[static_cast<std::size_t>(j - 1)];
    }
    return 1.0;
}

double WeightScheme::block_q_norm(double lo, double hi, double q) const {
    const double len = hi - lo + 1.0;
    switch (kind_) {
    case Kind::constant_one:
        return std::pow(len, 1.0 / q);
    case Kind::geometric: {
        if (ratio_ == 1.0) {
            return scale_ * std::pow(len, 1.0 / q);
        }
        // sum_{j=lo..hi} (scale * ratio^(j-1))^q, anchored at the larger end
        // when ratio > 1 so intermediate powers stay in range.
        if (ratio_ > 1.0) {
            const double rq = std::pow(ratio_, -q);
            const double series = (1.0 - std::pow(rq, len)) / (1.0 - rq);
            return scale_ * std::pow(ratio_, hi - 1.0) * std::pow(series, 1.0 / q);
        }
        const double rq = std::pow(ratio_, q);
        const double series = (1.0 - std::pow(rq, len)) / (1.0 - rq);
        return scale_ * std::pow(ratio_, lo - 1.0) * std::pow(series, 1.0 / q);
    }
    case Kind::explicit_list: {
        if (hi > static_cast<double>(values_.size())) {
            throw error(errc::block_out_of_range, "block extends past the explicit weight list");
        }
        double sum = 0.0;
        for (std::int64_t j = static_cast<std::int64_t>(lo); j <= static_cast<std::int64_t>(hi); ++j) {
            sum += std::pow(values_[static_cast<std::size_t>(j - 1)], q);
        }
        return std::pow(sum, 1.0 / q);
    }
    }
    return 0.0;
}

NormingScheme NormingScheme::derived() { return NormingScheme(Kind::derived, 0.0); }

NormingScheme NormingScheme::power(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw error(errc::invalid_norming, "power norming requires alpha > 0");
    }
    return NormingScheme(Kind::power, alpha);
}

NormingScheme NormingScheme::root_of_boundary() {
    return NormingScheme(Kind::root_of_boundary, 0.0);
}

AveragingConfig::AveragingConfig(Partition partition_, WeightScheme weights_,
                                 ExponentPair exponents_, NormingScheme norming_)
    : partition(std::move(partition_)), weights(std::move(weights_)), exponents(exponents_),
      norming(norming_) {
    if (weights.kind() == WeightScheme::Kind::explicit_list &&
        static_cast<std::int64_t>(weights.values().size()) < partition.boundaries().back()) {
        throw error(errc::invalid_weights, "explicit weight list shorter than the stored partition");
    }
}

} // namespace blockavg
