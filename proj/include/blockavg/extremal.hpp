#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blockavg/averaging_operator.hpp"

namespace blockavg {

/// The block-constant family a_j = rate^(-k) on N_k for boundaries base^k.
/// Valid for sqrt(base) < rate < base; the lower end is where the family
/// approaches the sharp constant, the upper end keeps the closed forms away
/// from their removable singularity at rate = base.
struct ExtremalParams {
    std::int64_t base;
    double rate;

    ExtremalParams(std::int64_t base_, double rate_);
};

/// First base^blocks entries of the family.
TruncatedSequence extremal_sequence(const ExtremalParams& params, std::int64_t blocks);

/// sum_n |a_n|^2 = b(r^2-1) / (r^2 (r^2-b)) in closed form.
double extremal_l2_norm_sq(const ExtremalParams& params);

/// sum_k |n_k^(-1/2) sum_{j<=n_k} a_j|^2 in closed form.
double extremal_lhs_sum(const ExtremalParams& params);

/// One grid point of a sharpness sweep.
struct SweepRow {
    double rate = 0.0;
    double ratio = 0.0;           // sqrt(lhs_sum / l2_norm_sq)
    double sharp_constant = 0.0;
    double gap = 0.0;             // sharp_constant - ratio, always > 0
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<double> skipped; // grid points violating the rate bounds
};

/// Evaluates the ratio along the grid; invalid grid points are skipped and
/// reported. Rows keep grid order.
SweepResult sharpness_sweep(std::int64_t base, std::span<const double> grid);

} // namespace blockavg
