#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <span>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ledgerflow/amounts.hpp"
#include "ledgerflow/errors.hpp"
#include "ledgerflow/record.hpp"

namespace ledgerflow {

struct CcdfPoint {
    double value;
    double fraction;  // share of the sample >= value
};

/// Empirical complementary CDF: points ascending by value, fractions
/// non-increasing, starting at 1 for the smallest value.
struct CcdfCurve {
    std::vector<CcdfPoint> points;
};

inline CcdfCurve empirical_ccdf(std::span<const double> values) {
    if (values.empty()) throw DomainError("empirical_ccdf: empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    for (const double v : sorted)
        if (!(v > 0.0)) throw DomainError("empirical_ccdf: values must be positive");
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    CcdfCurve curve;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        curve.points.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
    }
    return curve;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std_error = 0.0;
};

namespace detail {

inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    if (sxx == 0.0) throw DomainError("least_squares: degenerate x (zero variance)");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

}  // namespace detail

enum class ParetoMethod { hill, loglog_ols };

inline std::string_view to_string(ParetoMethod m) {
    return m == ParetoMethod::hill ? "hill" : "loglog-ols";
}

struct ParetoFit {
    double xmin = 0.0;
    double alpha = 0.0;      // CCDF tail exponent magnitude
    double std_error = 0.0;
    std::size_t n_tail = 0;  // sample count strictly above xmin
    ParetoMethod method = ParetoMethod::hill;
};

/// Tail-exponent estimate over values strictly above xmin.
///
/// hill:       alpha = n / sum(ln(x_i / xmin)), the conditional MLE, with the
///             asymptotic standard error alpha / sqrt(n).
/// loglog_ols: least-squares slope of the log CCDF of the tail sample against
///             log value; reported alpha is the slope magnitude.
inline ParetoFit pareto_index(std::span<const double> values, double xmin,
                              ParetoMethod method = ParetoMethod::hill) {
    if (!(xmin > 0.0)) throw DomainError("pareto_index: xmin must be positive");
    std::vector<double> tail;
    for (const double v : values)
        if (v > xmin) tail.push_back(v);
    if (tail.size() < 10)
        throw DomainError("pareto_index: need at least 10 values strictly above xmin, got " +
                          std::to_string(tail.size()));
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    if (*lo == *hi) throw DomainError("pareto_index: degenerate tail (all values equal)");

    ParetoFit fit;
    fit.xmin = xmin;
    fit.n_tail = tail.size();
    fit.method = method;
    if (method == ParetoMethod::hill) {
        double log_sum = 0.0;
        for (const double v : tail) log_sum += std::log(v / xmin);
        fit.alpha = static_cast<double>(tail.size()) / log_sum;
        fit.std_error = fit.alpha / std::sqrt(static_cast<double>(tail.size()));
    } else {
        const CcdfCurve curve = empirical_ccdf(tail);
        std::vector<double> log_v, log_f;
        log_v.reserve(curve.points.size());
        log_f.reserve(curve.points.size());
        for (const CcdfPoint& p : curve.points) {
            log_v.push_back(std::log(p.value));
            log_f.push_back(std::log(p.fraction));
        }
        const LinearFit ols = detail::least_squares(log_v, log_f);
        fit.alpha = -ols.slope;
        fit.std_error = ols.slope_std_error;
    }
    return fit;
}

struct DailyActivity {
    Date date = 0;
    std::uint64_t txn_count = 0;
    Uint128 total_drops = 0;
    std::uint64_t n_sources = 0;
    std::uint64_t n_destinations = 0;
    std::uint64_t n_users = 0;  // |sources ∪ destinations|
};

// Contiguous by construction: interior days with no records appear as
// explicit zero rows so the series is uniform in time.
using DailySeries = std::vector<DailyActivity>;

inline DailySeries daily_aggregate(std::span<const TransactionRecord> records) {
    struct Tally {
        std::uint64_t txn_count = 0;
        Uint128 total_drops = 0;
        std::unordered_set<std::string_view> sources, destinations, users;
    };
    std::map<Date, Tally> per_day;
    for (const TransactionRecord& r : records) {
        Tally& t = per_day[r.date()];
        ++t.txn_count;
        t.total_drops += static_cast<Uint128>(r.amount_drops);
        t.sources.insert(r.source);
        t.destinations.insert(r.destination);
        t.users.insert(r.source);
        t.users.insert(r.destination);
    }
    DailySeries series;
    if (per_day.empty()) return series;
    const Date first = per_day.begin()->first;
    const Date last = per_day.rbegin()->first;
    series.reserve(static_cast<std::size_t>(last - first + 1));
    for (Date d = first; d <= last; ++d) {
        const auto it = per_day.find(d);
        if (it == per_day.end()) {
            series.push_back(DailyActivity{d});
            continue;
        }
        const Tally& t = it->second;
        series.push_back(DailyActivity{d, t.txn_count, t.total_drops, t.sources.size(),
                                       t.destinations.size(), t.users.size()});
    }
    return series;
}

namespace detail {

// Plain O(N^2) transform with unitary 1/sqrt(N) scaling, so the sum of
// squared magnitudes over all bins equals the sum of squared inputs.
inline std::vector<double> dft_magnitudes_all_bins(std::span<const double> series) {
    const std::size_t n = series.size();
    std::vector<double> cos_table(n), sin_table(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle =
            -2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        cos_table[i] = std::cos(angle);
        sin_table[i] = std::sin(angle);
    }
    std::vector<double> magnitudes(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t idx = (k * t) % n;
            re += series[t] * cos_table[idx];
            im += series[t] * sin_table[idx];
        }
        magnitudes[k] = std::sqrt(re * re + im * im) * scale;
    }
    return magnitudes;
}

}  // namespace detail

/// Full unnormalized-spectrum magnitudes (all N bins, DC included, no mean
/// removal); satisfies sum(mag^2) == sum(x^2).
inline std::vector<double> dft_full_magnitudes(std::span<const double> series) {
    if (series.empty()) throw DomainError("dft_full_magnitudes: empty series");
    return detail::dft_magnitudes_all_bins(series);
}

struct PeriodMagnitude {
    double period_days;  // N / k for frequency index k
    double magnitude;
};

/// Spectrum of a daily series after mean removal, reported per period N/k for
/// k = 1..N/2 (bins above the Nyquist index mirror these for real input).
inline std::vector<PeriodMagnitude> dft_magnitudes(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 14) throw DomainError("dft_magnitudes: series must cover at least 14 days");
    double mean = 0.0;
    for (const double v : series) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> centered(series.begin(), series.end());
    for (double& v : centered) v -= mean;
    const std::vector<double> mags = detail::dft_magnitudes_all_bins(centered);
    std::vector<PeriodMagnitude> result;
    result.reserve(n / 2);
    for (std::size_t k = 1; k <= n / 2; ++k)
        result.push_back({static_cast<double>(n) / static_cast<double>(k), mags[k]});
    return result;
}

/// Magnitude at the bin nearest a 7-day period over the median magnitude of
/// all reported bins. A constant series scores 0.
inline double weekly_peak_score(std::span<const double> series) {
    const std::vector<PeriodMagnitude> bins = dft_magnitudes(series);
    const std::size_t n = series.size();
    std::size_t k7 = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) / 7.0));
    k7 = std::clamp<std::size_t>(k7, 1, bins.size());
    const double peak = bins[k7 - 1].magnitude;

    std::vector<double> mags;
    mags.reserve(bins.size());
    double max_mag = 0.0;
    for (const PeriodMagnitude& b : bins) {
        mags.push_back(b.magnitude);
        max_mag = std::max(max_mag, b.magnitude);
    }
    if (max_mag == 0.0) return 0.0;
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    const double median = mags[mags.size() / 2];
    const double floor = 1e-12 * max_mag;
    return peak / std::max(median, floor);
}

struct PowerLawFit {
    double exponent = 0.0;
    double intercept = 0.0;  // of the log-log line
    double std_error = 0.0;
};

/// Least squares of ln(y) on ln(x); the exponent is the slope.
inline PowerLawFit powerlaw_correlation_fit(std::span<const double> x,
                                            std::span<const double> y) {
    if (x.size() != y.size())
        throw DomainError("powerlaw_correlation_fit: length mismatch");
    if (x.size() < 3) throw DomainError("powerlaw_correlation_fit: need at least 3 points");
    std::vector<double> log_x, log_y;
    log_x.reserve(x.size());
    log_y.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw DomainError("powerlaw_correlation_fit: values must be positive");
        log_x.push_back(std::log(x[i]));
        log_y.push_back(std::log(y[i]));
    }
    const LinearFit fit = detail::least_squares(log_x, log_y);
    return {fit.slope, fit.intercept, fit.slope_std_error};
}

inline void write_ccdf_csv(std::ostream& out, const CcdfCurve& curve,
                           std::string_view value_label) {
    out << value_label << ",fraction\n";
    char buf[64];
    for (const CcdfPoint& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.value, p.fraction);
        out << buf;
    }
    if (!out) throw IoError("failed to write CCDF CSV");
}

inline void write_daily_series_csv(std::ostream& out, const DailySeries& series) {
    out << "date,txn_count,total_drops,n_sources,n_destinations,n_users\n";
    for (const DailyActivity& row : series) {
        out << format_date(row.date) << ',' << row.txn_count << ',' << to_string(row.total_drops)
            << ',' << row.n_sources << ',' << row.n_destinations << ',' << row.n_users << '\n';
    }
    if (!out) throw IoError("failed to write daily series CSV");
}

inline void write_dft_csv(std::ostream& out, std::span<const PeriodMagnitude> bins) {
    out << "period_days,magnitude\n";
    char buf[64];
    for (const PeriodMagnitude& b : bins) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", b.period_days, b.magnitude);
        out << buf;
    }
    if (!out) throw IoError("failed to write DFT CSV");
}

}  // namespace ledgerflow
