#include "blockavg/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace blockavg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Streams (w_k, V_k, M_k) per block, continuing past the stored partition
/// via the extension rule. Boundaries switch to doubles in the extended
/// range; they stay exact until they pass 2^53, far beyond where tail
/// certificates settle.
class BlockSeries {
public:
    explicit BlockSeries(const AveragingConfig& config) : config_(config) {}

    struct Block {
        std::int64_t index = 0;
        double lo = 0.0;
        double hi = 0.0;
        double weight = 0.0;      // w_k
        double cum_weight = 0.0;  // V_k = w_1 + ... + w_k
        double norming = 0.0;     // M_k
    };

    /// Advances to the next block; false when the partition cannot be
    /// extended further or the values left the finite double range.
    bool next(Block& out) {
        const Partition& part = config_.partition;
        const std::int64_t stored = part.stored_blocks();
        ++k_;
        double lo, hi;
        if (k_ <= stored) {
            hi = static_cast<double>(part.boundary(k_));
            lo = hi - static_cast<double>(part.block_length(k_)) + 1.0;
        } else {
            switch (part.extension().kind) {
            case ExtensionKind::geometric:
                lo = prev_hi_ + 1.0;
                hi = prev_hi_ * static_cast<double>(part.extension().base);
                break;
            case ExtensionKind::singleton:
                lo = prev_hi_ + 1.0;
                hi = lo;
                break;
            case ExtensionKind::none:
            default:
                return false;
            }
        }
        const double w = config_.weights.block_q_norm(lo, hi, config_.exponents.q);
        cum_w_ += w;
        double M;
        switch (config_.norming.kind()) {
        case NormingScheme::Kind::derived:
            M = cum_w_;
            break;
        case NormingScheme::Kind::power:
            M = std::pow(static_cast<double>(k_), config_.norming.alpha());
            break;
        case NormingScheme::Kind::root_of_boundary:
        default:
            M = std::pow(hi, 1.0 / config_.exponents.q);
            break;
        }
        if (!std::isfinite(w) || !std::isfinite(cum_w_) || !std::isfinite(M) || !(M > 0.0)) {
            return false;
        }
        prev_hi_ = hi;
        out = Block{k_, lo, hi, w, cum_w_, M};
        return true;
    }

private:
    const AveragingConfig& config_;
    std::int64_t k_ = 0;
    double prev_hi_ = 0.0;
    double cum_w_ = 0.0;
};

bool tail_extendable(const AveragingConfig& config) {
    return config.partition.extension().kind != ExtensionKind::none &&
           config.weights.extendable();
}

/// Certified upper bound on sum_{j>L} c_j plus a bound on the supremand for
/// indices past the computed range.
struct TailCertificate {
    bool ok = false;
    double series_tail = kInf;   // bound on sum_{j>L} c_j
    double beyond_sup = kInf;    // bound on w_n * sum_{j>=n} c_j for n > L
};

constexpr int kWindow = 16;
constexpr std::int64_t kMaxBlocks = std::int64_t{1} << 21;

/// Window statistics guard: the certified decay parameter is backed off by
/// four times the observed in-window drift, so a sequence still drifting
/// toward its limit yields a conservative certificate or none at all.
TailCertificate certify_tail(const std::vector<double>& w, const std::vector<double>& c) {
    TailCertificate cert;
    const std::size_t L = c.size();
    if (L < 2 * kWindow) {
        return cert;
    }
    const std::size_t first = L - kWindow;

    // Power-law detector: local exponent s_j of c_j ~ j^-s, integral-test
    // tail. Applies when the exponent is stable across the window.
    {
        double s_min = kInf, s_max = -kInf;
        bool valid = true;
        for (std::size_t i = first; i + 1 < L && valid; ++i) {
            const double cj = c[i], cn = c[i + 1];
            if (!(cj > 0.0) || !(cn > 0.0) || cn >= cj) {
                valid = false;
                break;
            }
            const double j = static_cast<double>(i + 1); // 1-based block index
            const double s = std::log(cj / cn) / std::log((j + 1.0) / j);
            s_min = std::min(s_min, s);
            s_max = std::max(s_max, s);
        }
        if (valid) {
            const double spread = s_max - s_min;
            const double s_cert = s_min - 4.0 * spread;
            if (s_cert > 1.0 + 1e-6 && spread <= 0.01 * (s_min - 1.0)) {
                const double Ld = static_cast<double>(L);
                cert.ok = true;
                cert.series_tail = c[L - 1] * Ld / (s_cert - 1.0);
                // w must be flat (or shrinking) for the beyond-range bound.
                double w_min = kInf, w_max = -kInf;
                for (std::size_t i = first; i < L; ++i) {
                    w_min = std::min(w_min, w[i]);
                    w_max = std::max(w_max, w[i]);
                }
                const double w_spread = w_max - w_min;
                if (w_spread <= 0.01 * w_min) {
                    cert.beyond_sup = (w_max + 4.0 * w_spread) * cert.series_tail;
                } else if (w[L - 1] <= w[first]) {
                    cert.beyond_sup = w[first] * cert.series_tail;
                } else {
                    cert.beyond_sup = kInf;
                }
                return cert;
            }
        }
    }

    // Geometric detector: decay ratio gamma_j = c_j / c_{j+1} stable above 1.
    {
        double g_min = kInf, g_max = -kInf;
        bool valid = true;
        for (std::size_t i = first; i + 1 < L && valid; ++i) {
            const double cj = c[i], cn = c[i + 1];
            if (!(cj > 0.0) || !(cn > 0.0)) {
                valid = false;
                break;
            }
            const double g = cj / cn;
            g_min = std::min(g_min, g);
            g_max = std::max(g_max, g);
        }
        if (valid && g_min > 1.0) {
            const double spread = g_max - g_min;
            const double g_cert = g_min - 4.0 * spread;
            if (g_cert > 1.0 + 1e-9 && spread <= 0.01 * (g_min - 1.0)) {
                cert.ok = true;
                cert.series_tail = c[L - 1] / (g_cert - 1.0);
                // Supremand bound past the range: u_n <= g_n / (1 - 1/gamma)
                // with g_n = w_n c_n; certify a cap on g from its window.
                double gn_min = kInf, gn_max = -kInf;
                for (std::size_t i = first; i < L; ++i) {
                    const double gn = w[i] * c[i];
                    gn_min = std::min(gn_min, gn);
                    gn_max = std::max(gn_max, gn);
                }
                const double gn_spread = gn_max - gn_min;
                double gn_cap;
                if (gn_spread <= 0.02 * gn_min) {
                    gn_cap = gn_max + 4.0 * gn_spread;
                } else if (w[L - 1] * c[L - 1] <= w[first] * c[first]) {
                    gn_cap = w[first] * c[first]; // decreasing: first dominates
                } else {
                    gn_cap = kInf;
                }
                cert.beyond_sup = gn_cap / (1.0 - 1.0 / g_cert);
            }
        }
    }
    return cert;
}

BoundReport diverged_report(std::int64_t level) {
    return BoundReport{kInf, level, kInf, false};
}

/// sup_n (w_n sum_{j>=n} c_j)^(1/p) with a certified truncation. The block
/// stream supplies w and c; the truncation level grows until the tail
/// padding at the maximizer drops below tol (or the certificate shows the
/// sup lives past every finite range, padded accordingly).
BoundReport sup_of_tail_series(const AveragingConfig& config, double p, double tol,
                               double (*term)(const BlockSeries::Block&, double p)) {
    if (!(tol > 0.0)) {
        throw error(errc::invalid_params, "tolerance must be positive");
    }
    if (!tail_extendable(config)) {
        throw error(errc::tail_not_boundable,
                    "tail not boundable: partition (or explicit weight list) has no extension rule");
    }

    BlockSeries series(config);
    std::vector<double> w, c;
    w.reserve(256);
    c.reserve(256);
    double c_sum = 0.0;
    bool exhausted = false;

    for (std::int64_t target = 64; target <= kMaxBlocks; target *= 2) {
        while (static_cast<std::int64_t>(c.size()) < target && !exhausted) {
            BlockSeries::Block blk;
            if (!series.next(blk)) {
                exhausted = true;
                break;
            }
            const double cj = term(blk, p);
            if (!std::isfinite(cj) || !(cj >= 0.0)) {
                exhausted = true;
                break;
            }
            w.push_back(blk.weight);
            c.push_back(cj);
            c_sum += cj;
            if (c_sum > 1e150 || cj > 1e150) {
                return diverged_report(static_cast<std::int64_t>(c.size()));
            }
        }

        const std::int64_t L = static_cast<std::int64_t>(c.size());
        const TailCertificate cert = certify_tail(w, c);
        if (!cert.ok) {
            if (exhausted) {
                return diverged_report(L);
            }
            continue;
        }

        // Padded supremands over the computed range (suffix sums smallest
        // terms first).
        std::vector<double> suffix(static_cast<std::size_t>(L) + 1, 0.0);
        for (std::int64_t j = L - 1; j >= 0; --j) {
            suffix[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j) + 1] +
                                                  c[static_cast<std::size_t>(j)];
        }
        double best = -kInf;
        std::size_t best_n = 0;
        for (std::size_t n = 0; n < static_cast<std::size_t>(L); ++n) {
            const double u = w[n] * (suffix[n] + cert.series_tail);
            if (u > best) {
                best = u;
                best_n = n;
            }
        }
        const double pad_at_max = w[best_n] * cert.series_tail;

        double trailing_max = -kInf;
        for (std::size_t n = static_cast<std::size_t>(L) - kWindow; n < static_cast<std::size_t>(L); ++n) {
            trailing_max = std::max(trailing_max, w[n] * (suffix[n] + cert.series_tail));
        }

        if (cert.beyond_sup <= best) {
            if (pad_at_max <= tol) {
                return BoundReport{std::pow(best, 1.0 / p), L, pad_at_max, true};
            }
        } else if (std::isfinite(cert.beyond_sup)) {
            // The sup is approached past every finite range; report the
            // certified cap once the trailing supremands have closed onto it.
            const double overshoot = cert.beyond_sup - trailing_max;
            if (overshoot <= tol) {
                return BoundReport{std::pow(cert.beyond_sup, 1.0 / p), L,
                                   std::max(overshoot, 0.0), true};
            }
        }
        if (exhausted) {
            break;
        }
    }
    return diverged_report(static_cast<std::int64_t>(c.size()));
}

double derived_term(const BlockSeries::Block& blk, double) { return 1.0 / blk.norming; }

double general_term(const BlockSeries::Block& blk, double p) {
    return std::pow(blk.cum_weight, p - 1.0) / std::pow(blk.norming, p);
}

} // namespace

double block_weight(const AveragingConfig& config, std::int64_t n) {
    if (n < 1) {
        throw error(errc::block_out_of_range, "block index must be >= 1");
    }
    const Partition& part = config.partition;
    if (n <= part.stored_blocks()) {
        const double hi = static_cast<double>(part.boundary(n));
        const double lo = hi - static_cast<double>(part.block_length(n)) + 1.0;
        return config.weights.block_q_norm(lo, hi, config.exponents.q);
    }
    if (part.extension().kind == ExtensionKind::none) {
        throw error(errc::block_out_of_range, "block past the partition and no extension rule");
    }
    BlockSeries series(config);
    BlockSeries::Block blk;
    for (std::int64_t k = 1; k <= n; ++k) {
        if (!series.next(blk)) {
            throw error(errc::block_out_of_range, "block weight left the finite double range");
        }
    }
    return blk.weight;
}

double norming_value(const AveragingConfig& config, std::int64_t n) {
    if (n < 1) {
        throw error(errc::block_out_of_range, "block index must be >= 1");
    }
    const Partition& part = config.partition;
    switch (config.norming.kind()) {
    case NormingScheme::Kind::power:
        return std::pow(static_cast<double>(n), config.norming.alpha());
    case NormingScheme::Kind::root_of_boundary: {
        if (n <= part.stored_blocks()) {
            return std::pow(static_cast<double>(part.boundary(n)), 1.0 / config.exponents.q);
        }
        break; // fall through to the streamed path for extended blocks
    }
    case NormingScheme::Kind::derived:
        break;
    }
    if (n > part.stored_blocks() && part.extension().kind == ExtensionKind::none) {
        throw error(errc::block_out_of_range, "block past the partition and no extension rule");
    }
    BlockSeries series(config);
    BlockSeries::Block blk;
    for (std::int64_t k = 1; k <= n; ++k) {
        if (!series.next(blk)) {
            throw error(errc::block_out_of_range, "norming value left the finite double range");
        }
    }
    return blk.norming;
}

BoundReport averaging_bound(const AveragingConfig& config, double tol) {
    if (config.norming.kind() != NormingScheme::Kind::derived) {
        throw error(errc::invalid_norming, "averaging_bound requires the derived norming");
    }
    return sup_of_tail_series(config, config.exponents.p, tol, &derived_term);
}

BoundReport general_averaging_bound(const AveragingConfig& config, double tol) {
    return sup_of_tail_series(config, config.exponents.p, tol, &general_term);
}

double lacunary_bound(double r, double q) {
    if (!(r > 1.0) || !std::isfinite(r)) {
        throw error(errc::invalid_ratio, "lacunary bound requires ratio r > 1");
    }
    if (!(q > 1.0) || !std::isfinite(q)) {
        throw error(errc::invalid_exponent, "lacunary bound requires q > 1");
    }
    const double root = std::pow(r, 1.0 / q);
    return root / (root - 1.0);
}

double geometric_sharp_constant(std::int64_t b) {
    if (b < 2) {
        throw error(errc::invalid_base, "sharp constant requires integer base b >= 2");
    }
    const double bd = static_cast<double>(b);
    return (std::sqrt(bd) + 1.0) / std::sqrt(bd - 1.0);
}

} // namespace blockavg
