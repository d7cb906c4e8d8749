#include "blockavg/averaging_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace blockavg {

namespace {

/// Stored blocks plus exact integer geometric/singleton continuation while it
/// fits; returns the boundaries n_k <= limit.
std::vector<std::int64_t> covered_boundaries(const Partition& part, std::int64_t limit) {
    std::vector<std::int64_t> bounds;
    for (std::int64_t b : part.boundaries()) {
        if (b > limit) {
            return bounds;
        }
        bounds.push_back(b);
    }
    std::int64_t hi = part.boundaries().back();
    for (;;) {
        std::int64_t next;
        switch (part.extension().kind) {
        case ExtensionKind::geometric:
            if (hi > std::numeric_limits<std::int64_t>::max() / part.extension().base) {
                return bounds;
            }
            next = hi * part.extension().base;
            break;
        case ExtensionKind::singleton:
            next = hi + 1;
            break;
        case ExtensionKind::none:
        default:
            return bounds;
        }
        if (next > limit) {
            return bounds;
        }
        bounds.push_back(next);
        hi = next;
    }
}

/// m_1..m_n as a dense vector.
std::vector<double> element_weights(const WeightScheme& weights, std::int64_t n) {
    std::vector<double> m(static_cast<std::size_t>(n));
    switch (weights.kind()) {
    case WeightScheme::Kind::constant_one:
        std::fill(m.begin(), m.end(), 1.0);
        break;
    case WeightScheme::Kind::geometric: {
        double v = weights.scale();
        for (auto& mj : m) {
            mj = v;
            v *= weights.ratio();
        }
        break;
    }
    case WeightScheme::Kind::explicit_list:
        for (std::int64_t j = 1; j <= n; ++j) {
            m[static_cast<std::size_t>(j - 1)] = weights.value(j);
        }
        break;
    }
    return m;
}

std::vector<double> norming_values(const AveragingConfig& config, std::int64_t blocks) {
    std::vector<double> M(static_cast<std::size_t>(blocks));
    for (std::int64_t k = 1; k <= blocks; ++k) {
        M[static_cast<std::size_t>(k - 1)] = norming_value(config, k);
    }
    return M;
}

} // namespace

TruncatedSequence::TruncatedSequence(std::vector<Complex> values) : values_(std::move(values)) {
    for (const Complex& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw error(errc::invalid_sequence, "sequence entries must be finite");
        }
    }
}

TruncatedSequence apply_averaging(const TruncatedSequence& a, const AveragingConfig& config) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    const std::vector<std::int64_t> bounds = covered_boundaries(config.partition, n);
    if (bounds.empty()) {
        return TruncatedSequence{};
    }
    const std::vector<double> m = element_weights(config.weights, bounds.back());
    std::vector<Complex> out;
    out.reserve(bounds.size());
    Complex prefix = 0.0;
    std::int64_t j = 1;
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        for (; j <= bounds[k]; ++j) {
            prefix += m[static_cast<std::size_t>(j - 1)] * a[static_cast<std::size_t>(j - 1)];
        }
        out.push_back(prefix / norming_value(config, static_cast<std::int64_t>(k) + 1));
    }
    return TruncatedSequence(std::move(out));
}

std::vector<Complex> apply_averaging_adjoint(std::span<const Complex> y,
                                             const AveragingConfig& config, std::int64_t blocks) {
    if (blocks < 1 || blocks > config.partition.stored_blocks()) {
        throw error(errc::block_out_of_range, "adjoint needs 1 <= blocks <= stored blocks");
    }
    if (static_cast<std::int64_t>(y.size()) != blocks) {
        throw error(errc::invalid_sequence, "adjoint input length must equal the block count");
    }
    const std::int64_t n = config.partition.boundary(blocks);
    const std::vector<double> m = element_weights(config.weights, n);
    const std::vector<double> M = norming_values(config, blocks);

    // suffix[k] = sum_{t >= k} y_t / M_t
    std::vector<Complex> suffix(static_cast<std::size_t>(blocks) + 1, 0.0);
    for (std::int64_t k = blocks; k >= 1; --k) {
        suffix[static_cast<std::size_t>(k - 1)] =
            suffix[static_cast<std::size_t>(k)] +
            y[static_cast<std::size_t>(k - 1)] / M[static_cast<std::size_t>(k - 1)];
    }

    std::vector<Complex> z(static_cast<std::size_t>(n));
    std::int64_t k = 1;
    for (std::int64_t j = 1; j <= n; ++j) {
        if (j > config.partition.boundary(k)) {
            ++k;
        }
        z[static_cast<std::size_t>(j - 1)] =
            m[static_cast<std::size_t>(j - 1)] * suffix[static_cast<std::size_t>(k - 1)];
    }
    return z;
}

double lp_norm(const TruncatedSequence& a, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw error(errc::invalid_exponent, "lp norm requires p >= 1");
    }
    double peak = 0.0;
    for (const Complex& v : a.values()) {
        peak = std::max(peak, std::abs(v));
    }
    if (peak == 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (const Complex& v : a.values()) {
        sum += std::pow(std::abs(v) / peak, p);
    }
    return peak * std::pow(sum, 1.0 / p);
}

VerificationReport verify_inequality(const TruncatedSequence& a, const AveragingConfig& config,
                                     const BoundReport& bound) {
    if (!bound.converged) {
        throw error(errc::diverged_constant, "cannot verify against a diverged bound constant");
    }
    VerificationReport report;
    report.bound_constant = bound.constant;
    report.lhs = lp_norm(apply_averaging(a, config), config.exponents.p);
    report.rhs_norm = lp_norm(a, config.exponents.p);
    report.slack = bound.constant * report.rhs_norm - report.lhs;
    report.holds = report.slack >= -1e-12 * bound.constant * report.rhs_norm;
    return report;
}

NormEstimate truncated_operator_norm(const AveragingConfig& config, std::int64_t blocks,
                                     const PowerIterationOptions& options) {
    if (std::abs(config.exponents.p - 2.0) > 1e-12) {
        throw error(errc::unsupported_exponent, "operator norm estimation requires p = 2");
    }
    if (blocks < 1 || blocks > config.partition.stored_blocks()) {
        throw error(errc::block_out_of_range, "blocks must be within the stored partition");
    }
    const std::int64_t n = config.partition.boundary(blocks);
    const std::vector<double> m = element_weights(config.weights, n);
    const std::vector<double> M = norming_values(config, blocks);
    const auto& bounds = config.partition.boundaries();

    // forward: y_k = (sum_{j<=n_k} m_j x_j) / M_k
    std::vector<double> y(static_cast<std::size_t>(blocks));
    auto forward = [&](const std::vector<double>& x) {
        double prefix = 0.0;
        std::int64_t j = 1;
        for (std::int64_t k = 1; k <= blocks; ++k) {
            for (; j <= bounds[static_cast<std::size_t>(k - 1)]; ++j) {
                prefix += m[static_cast<std::size_t>(j - 1)] * x[static_cast<std::size_t>(j - 1)];
            }
            y[static_cast<std::size_t>(k - 1)] = prefix / M[static_cast<std::size_t>(k - 1)];
        }
    };

    // adjoint: z_j = m_j * sum_{k >= block(j)} y_k / M_k
    std::vector<double> z(static_cast<std::size_t>(n));
    auto adjoint = [&]() {
        double suffix = 0.0;
        std::int64_t j = n;
        for (std::int64_t k = blocks; k >= 1; --k) {
            suffix += y[static_cast<std::size_t>(k - 1)] / M[static_cast<std::size_t>(k - 1)];
            const std::int64_t lo = (k == 1) ? 1 : bounds[static_cast<std::size_t>(k - 2)] + 1;
            for (; j >= lo; --j) {
                z[static_cast<std::size_t>(j - 1)] = m[static_cast<std::size_t>(j - 1)] * suffix;
            }
        }
    };

    std::mt19937_64 engine(options.seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& vi : v) {
        // uniform in [-1, 1) from the top 53 bits
        vi = 2.0 * (static_cast<double>(engine() >> 11) * 0x1p-53) - 1.0;
    }
    double norm_v = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm_v == 0.0) {
        return NormEstimate{0.0, true, 0};
    }
    for (auto& vi : v) {
        vi /= norm_v;
    }

    double lambda = 0.0;
    for (int iter = 1; iter <= options.max_iters; ++iter) {
        forward(v);
        adjoint();
        // v is unit, so <v, T*Tv> = ||Tv||^2 is the Rayleigh quotient.
        const double lambda_next = std::inner_product(v.begin(), v.end(), z.begin(), 0.0);
        const double norm_z = std::sqrt(std::inner_product(z.begin(), z.end(), z.begin(), 0.0));
        if (norm_z == 0.0) {
            return NormEstimate{0.0, true, iter};
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = z[i] / norm_z;
        }
        if (std::abs(lambda_next - lambda) <= options.tol * std::max(lambda_next, 1e-300)) {
            return NormEstimate{std::sqrt(lambda_next), true, iter};
        }
        lambda = lambda_next;
    }
    return NormEstimate{std::sqrt(lambda), false, options.max_iters};
}

} // namespace blockavg
