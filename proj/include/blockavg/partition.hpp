#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "blockavg/errors.hpp"

namespace blockavg {

/// Conjugate exponents p, q > 1 with 1/p + 1/q = 1.
struct ExponentPair {
    double p = 2.0;
    double q = 2.0;

    ExponentPair() = default;
    ExponentPair(double p_, double q_);

    /// Builds the pair (p, p/(p-1)).
    static ExponentPair from_p(double p);
};

/// Returns q = p/(p-1); throws errc::invalid_exponent for p <= 1.
double conjugate_exponent(double p);

/// How the partition continues past the stored blocks. Needed whenever an
/// infinite tail has to be summed (bound constants).
enum class ExtensionKind { none, geometric, singleton };

struct ExtensionRule {
    ExtensionKind kind = ExtensionKind::none;
    std::int64_t base = 0; // boundary multiplier for the geometric kind
};

/// Partition of the positive integers into consecutive blocks N_1, N_2, ...
/// stored as the finite list of block lengths |N_1|, ..., |N_K|. Block and
/// element indices are 1-based throughout.
class Partition {
public:
    explicit Partition(std::vector<std::int64_t> block_lengths, ExtensionRule extension = {});

    std::int64_t stored_blocks() const { return static_cast<std::int64_t>(lengths_.size()); }
    const ExtensionRule& extension() const { return extension_; }

    /// Length of block k (1 <= k <= stored_blocks()).
    std::int64_t block_length(std::int64_t k) const;

    /// Boundary n_k = |N_1| + ... + |N_k|.
    std::int64_t boundary(std::int64_t k) const;

    const std::vector<std::int64_t>& block_lengths() const { return lengths_; }
    const std::vector<std::int64_t>& boundaries() const { return boundaries_; }

    /// Block covering element index j (1-based), restricted to stored blocks.
    std::int64_t block_of(std::int64_t j) const;

private:
    std::vector<std::int64_t> lengths_;
    std::vector<std::int64_t> boundaries_;
    ExtensionRule extension_;
};

/// Blocks N_1 = {1..b}, N_k = {b^(k-1)+1 .. b^k}; boundaries n_k = b^k.
/// The extension rule continues the pattern.
Partition geometric_partition(std::int64_t base, std::int64_t blocks);

/// K singleton blocks N_k = {k}; extension continues with singletons.
Partition singleton_partition(std::int64_t blocks);

/// Partition cut at the given strictly increasing boundaries, together with
/// the certified Hadamard ratio r = min_k n_{k+1}/n_k (> 1 for strictly
/// increasing integers).
std::pair<Partition, double> lacunary_partition(const std::vector<std::int64_t>& boundaries,
                                                ExtensionRule extension = {});

/// Smallest consecutive boundary ratio of the stored blocks.
double certified_ratio(const Partition& partition);

/// Weight sequence (m_j), strictly positive.
class WeightScheme {
public:
    enum class Kind { constant_one, explicit_list, geometric };

    static WeightScheme constant_one();
    static WeightScheme explicit_list(std::vector<double> values);
    /// m_j = scale * ratio^(j-1)
    static WeightScheme geometric(double scale, double ratio);

    Kind kind() const { return kind_; }
    bool extendable() const { return kind_ != Kind::explicit_list; }

    /// m_j for 1-based j; throws errc::block_out_of_range past an explicit list.
    double value(std::int64_t j) const;

    /// (sum_{j=lo..hi} m_j^q)^(1/q) in closed form where the scheme allows it.
    /// Boundaries are doubles so extended blocks past 2^53 still evaluate.
    double block_q_norm(double lo, double hi, double q) const;

    double scale() const { return scale_; }
    double ratio() const { return ratio_; }
    const std::vector<double>& values() const { return values_; }

private:
    WeightScheme(Kind kind, std::vector<double> values, double scale, double ratio)
        : kind_(kind), values_(std::move(values)), scale_(scale), ratio_(ratio) {}

    Kind kind_;
    std::vector<double> values_;
    double scale_ = 1.0;
    double ratio_ = 1.0;
};

/// Norming sequence (M_n): either derived (M_n = w_1 + ... + w_n), an explicit
/// power rule M_n = n^alpha, or the boundary root M_k = n_k^(1/q).
class NormingScheme {
public:
    enum class Kind { derived, power, root_of_boundary };

    static NormingScheme derived();
    static NormingScheme power(double alpha);
    static NormingScheme root_of_boundary();

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }

private:
    NormingScheme(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

    Kind kind_;
    double alpha_ = 1.0;
};

/// Everything that determines the averaging operator and its constants.
struct AveragingConfig {
    Partition partition;
    WeightScheme weights;
    ExponentPair exponents;
    NormingScheme norming;

    AveragingConfig(Partition partition_, WeightScheme weights_, ExponentPair exponents_,
                    NormingScheme norming_);
};

} // namespace blockavg
