#pragma once

#include <cstdint>

#include "blockavg/partition.hpp"

namespace blockavg {

/// A computed bound constant together with the truncation it was obtained at
/// and a certified bound on what the truncation neglected. `tail_bound` lives
/// in the supremand (p-th power) domain; `constant` has the 1/p root applied
/// and already includes the tail padding, so it upper-bounds the scanned
/// range. converged = true implies tail_bound <= the requested tolerance.
struct BoundReport {
    double constant = 0.0;
    std::int64_t truncation_level = 0;
    double tail_bound = 0.0;
    bool converged = false;
};

/// w_n = (sum_{j in N_n} m_j^q)^(1/q). Blocks past the stored range are
/// generated by the extension rule; without one this throws
/// errc::block_out_of_range.
double block_weight(const AveragingConfig& config, std::int64_t n);

/// The norming value M_n: cumulative w-sum for the derived kind, otherwise
/// the scheme's rule evaluated at block n.
double norming_value(const AveragingConfig& config, std::int64_t n);

/// Bound constant sup_n (w_n sum_{j>=n} 1/M_j)^(1/p) for derived norming.
/// Throws errc::invalid_norming for other norming kinds and
/// errc::tail_not_boundable when the partition/weights cannot be extended.
/// Reports converged=false (constant and tail_bound infinite) when the inner
/// series cannot be certified to converge.
BoundReport averaging_bound(const AveragingConfig& config, double tol);

/// Bound constant sup_n (w_n sum_{k>=n} (w_1+...+w_k)^(p-1) / M_k^p)^(1/p),
/// valid for any norming kind. Coincides with averaging_bound when the
/// norming is derived.
BoundReport general_averaging_bound(const AveragingConfig& config, double tol);

/// r^(1/q) / (r^(1/q) - 1): bound for lacunary boundaries of ratio r with
/// norming n_k^(1/q). Throws errc::invalid_ratio for r <= 1.
double lacunary_bound(double r, double q);

/// (sqrt(b)+1)/sqrt(b-1): the sharp constant for boundaries b^k at p = 2.
double geometric_sharp_constant(std::int64_t b);

} // namespace blockavg
