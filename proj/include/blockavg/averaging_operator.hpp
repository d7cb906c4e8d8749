#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "blockavg/constants.hpp"
#include "blockavg/partition.hpp"

namespace blockavg {

using Complex = std::complex<double>;

/// Finite prefix (a_1, ..., a_N) of a sequence; all entries finite.
class TruncatedSequence {
public:
    TruncatedSequence() = default;
    explicit TruncatedSequence(std::vector<Complex> values);

    std::span<const Complex> values() const& { return values_; }
    std::span<const Complex> values() const&& = delete; // span must not outlive the sequence
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    const Complex& operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<Complex> values_;
};

/// b_k = (1/M_k) sum_{j<=n_k} m_j a_j for every block fully covered by `a`,
/// via one weighted prefix-sum pass. Returns the empty sequence when `a` does
/// not cover the first block.
TruncatedSequence apply_averaging(const TruncatedSequence& a, const AveragingConfig& config);

/// Adjoint of the truncated operator with `blocks` rows: given y of that
/// length, returns z_j = m_j * sum_{k >= block(j)} y_k / M_k for j <= n_K.
std::vector<Complex> apply_averaging_adjoint(std::span<const Complex> y,
                                             const AveragingConfig& config, std::int64_t blocks);

/// (sum |a_j|^p)^(1/p) with max-scaling so large p and large entries do not
/// overflow. Requires p >= 1.
double lp_norm(const TruncatedSequence& a, double p);

/// One checked instance of the main inequality.
struct VerificationReport {
    double lhs = 0.0;
    double rhs_norm = 0.0;
    double bound_constant = 0.0;
    double slack = 0.0;
    bool holds = false;
};

/// lhs = ||T a||_p, rhs_norm = ||a||_p, slack = constant*rhs - lhs; holds
/// under a 1e-12 relative tolerance. Throws errc::diverged_constant when the
/// bound did not converge.
VerificationReport verify_inequality(const TruncatedSequence& a, const AveragingConfig& config,
                                     const BoundReport& bound);

struct NormEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct PowerIterationOptions {
    double tol = 1e-13;
    int max_iters = 50000;
    std::uint64_t seed = 42;
};

/// Largest singular value of the truncated operator (rows k <= blocks,
/// columns j <= n_K), estimated matrix-free: forward sweep = weighted prefix
/// sums, adjoint sweep = weighted suffix sums. Requires p = 2.
NormEstimate truncated_operator_norm(const AveragingConfig& config, std::int64_t blocks,
                                     const PowerIterationOptions& options = {});

} // namespace blockavg
