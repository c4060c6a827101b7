#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ledgerflow/errors.hpp"

namespace ledgerflow {

/// A list of non-negative shares summing to 1. The empty list is allowed and
/// stands for "no flow at all"; every index treats it by convention rather
/// than arithmetic.
class ShareList {
public:
    ShareList() = default;

    /// Validates and adopts an already-normalized list.
    static ShareList from_shares(std::vector<double> shares) {
        if (!shares.empty()) {
            double sum = 0.0;
            for (const double s : shares) {
                if (!(s >= 0.0)) throw DomainError("ShareList: negative or NaN share");
                sum += s;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw DomainError("ShareList: shares sum to " + std::to_string(sum) +
                                  ", expected 1");
        }
        return ShareList(std::move(shares));
    }

    bool empty() const { return shares_.empty(); }
    std::size_t size() const { return shares_.size(); }
    const std::vector<double>& values() const { return shares_; }

private:
    explicit ShareList(std::vector<double> shares) : shares_(std::move(shares)) {}
    friend ShareList normalize(std::span<const double>);
    friend ShareList benchmark_shares(int, double);

    std::vector<double> shares_;
};

/// Divides every entry by the total. Empty input stays empty; a negative
/// entry or an all-zero non-empty input is a domain error.
inline ShareList normalize(std::span<const double> raw) {
    if (raw.empty()) return ShareList{};
    double total = 0.0;
    for (const double v : raw) {
        if (!(v >= 0.0)) throw DomainError("normalize: negative or NaN entry");
        total += v;
    }
    if (total <= 0.0) throw DomainError("normalize: all entries zero");
    std::vector<double> shares;
    shares.reserve(raw.size());
    for (const double v : raw) shares.push_back(v / total);
    return ShareList(std::move(shares));
}

/// The benchmark family: m full shares and one partial share r, all scaled by
/// 1/(m+r). Sweeps of r in [0,1] probe how an index responds to a gradual
/// (m+1)-th entrant.
inline ShareList benchmark_shares(int m, double r) {
    if (m < 1) throw DomainError("benchmark_shares: m must be >= 1");
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("benchmark_shares: r must be in [0,1]");
    const double scale = 1.0 / (static_cast<double>(m) + r);
    std::vector<double> shares(static_cast<std::size_t>(m) + 1, scale);
    shares.back() = r * scale;
    return ShareList(std::move(shares));
}

/// Concentration index: sum of squared shares. 1 means everything in one
/// entry, 1/m means m equal entries.
inline double hh_index(const ShareList& shares) {
    if (shares.empty()) throw DomainError("hh_index: empty share list");
    double sum = 0.0;
    for (const double s : shares.values()) sum += s * s;
    return sum;
}

/// Sum of n-th powers of the shares. Order n=2 is hh_index; n=1 is 1 by
/// normalization.
inline double modified_hh(const ShareList& shares, int n) {
    if (n < 1) throw DomainError("modified_hh: order must be >= 1");
    if (shares.empty()) throw DomainError("modified_hh: empty share list");
    double sum = 0.0;
    for (const double s : shares.values()) sum += std::pow(s, static_cast<double>(n));
    return sum;
}

/// Effective-count index of order n: the ratio of consecutive power sums,
/// sum(l^(n-1)) / sum(l^n). Order 2 reduces to the inverse of hh_index; as n
/// grows the value approaches the count of near-maximal shares.
///
/// Evaluated with shares rescaled by the maximum share: with p_k = l_k/l_max,
/// and using 1/l_max = sum(p),
///
///   result = sum(p) * sum(p^(n-1)) / sum(p^n),
///
/// so every factor is >= 1 and nothing underflows even when the smallest
/// share is ~1e-17 of the largest; a list of m equal shares comes out as
/// exactly m. Shares below ~1e-300 of the maximum vanish from the power
/// sums; their contribution is below representable significance anyway.
///
/// The empty list returns 0 (the no-flow convention).
inline double modified_inverse_hh(const ShareList& shares, int n = 20) {
    if (n < 2) throw DomainError("modified_inverse_hh: order must be >= 2");
    if (shares.empty()) return 0.0;
    const auto& v = shares.values();
    const double max_share = *std::max_element(v.begin(), v.end());
    if (max_share <= 0.0) throw DomainError("modified_inverse_hh: all shares zero");
    double sum_p = 0.0;
    double num = 0.0;  // sum of p^(n-1)
    double den = 0.0;  // sum of p^n
    for (const double s : v) {
        const double p = s / max_share;
        const double pn1 = std::pow(p, static_cast<double>(n - 1));
        sum_p += p;
        num += pn1;
        den += pn1 * p;
    }
    return sum_p * num / den;
}

}  // namespace ledgerflow
