#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "ledgerflow/amounts.hpp"
#include "ledgerflow/errors.hpp"
#include "ledgerflow/record.hpp"
#include "ledgerflow/time.hpp"

namespace ledgerflow {

struct ArchetypeCounts {
    int pair_nodes = 0;
    int bridge_nodes = 0;
    int even_traders = 0;
};

/// Generator knobs. Each stylized target (amount tail, weekly dip, herding
/// coupling, archetypes) is controlled independently so tests can isolate
/// one effect at a time.
struct SynthConfig {
    std::uint64_t seed = 1;
    int n_days = 364;
    int n_accounts = 1000;
    double pareto_alpha = 1.0;
    std::int64_t amount_xmin_drops = 10'000'000'000'000;  // 10^7 XRP
    double weekend_dip = 0.0;          // fractional weekend reduction of activity
    double herding_exponent = 0.0;     // 0 disables the users->total coupling
    ArchetypeCounts archetypes;

    double mean_daily_txns = 100.0;
    double daily_noise_sigma = 0.45;   // lognormal sigma of daily activity
    double herding_noise_sigma = 0.2;  // lognormal sigma around the coupling law
    double herding_scale_xrp = 1e6;    // coefficient of total = c * users^exponent
    double attachment_bias = 0.95;     // probability of reusing a past participant
    double partial_payment_rate = 0.0;
    double foreign_currency_rate = 0.0;
    Date start_date = static_cast<Date>(days_from_civil(2018, 1, 1));  // a Monday
};

inline constexpr std::int64_t kMaxSynthAmountDrops = 200'000'000'000'000'000;  // 2*10^11 XRP

inline void validate_config(const SynthConfig& c) {
    const auto fail = [](const std::string& what) { throw ConfigError("synth config: " + what); };
    if (c.n_days <= 0) fail("n_days must be positive");
    if (c.n_accounts <= 0) fail("n_accounts must be positive");
    if (!(c.pareto_alpha > 0.0)) fail("pareto_alpha must be positive");
    if (c.amount_xmin_drops <= 0) fail("amount_xmin_drops must be positive");
    if (!(c.weekend_dip >= 0.0 && c.weekend_dip < 1.0)) fail("weekend_dip must be in [0,1)");
    if (c.herding_exponent < 0.0) fail("herding_exponent must be non-negative");
    if (!(c.mean_daily_txns > 0.0)) fail("mean_daily_txns must be positive");
    if (c.daily_noise_sigma < 0.0 || c.herding_noise_sigma < 0.0)
        fail("noise sigmas must be non-negative");
    if (!(c.herding_scale_xrp > 0.0)) fail("herding_scale_xrp must be positive");
    if (!(c.attachment_bias >= 0.0 && c.attachment_bias <= 1.0))
        fail("attachment_bias must be in [0,1]");
    if (!(c.partial_payment_rate >= 0.0 && c.partial_payment_rate < 1.0) ||
        !(c.foreign_currency_rate >= 0.0 && c.foreign_currency_rate < 1.0))
        fail("injection rates must be in [0,1)");
    const ArchetypeCounts& a = c.archetypes;
    if (a.pair_nodes < 0 || a.bridge_nodes < 0 || a.even_traders < 0)
        fail("archetype counts must be non-negative");
    if ((a.pair_nodes > 0 || a.bridge_nodes > 0 || a.even_traders > 0) && c.n_days < 30)
        fail("archetypes need at least 30 days");
}

enum class ArchetypeKind { pair_sender, pair_receiver, bridge };

struct ArchetypeParams {
    std::string account;           // the focal account
    std::string counterparty;      // peer of the large transfer(s)
    std::string counterparty_out;  // bridge outflow target
    std::string small_peer;        // peer for negligible side activity
    Date day = 0;
    std::int64_t amount_drops = 0;
    int small_income_days = 0;
    std::int64_t small_income_drops = kDropsPerXrp;
    int small_outflow_days = 0;
    std::int64_t small_outflow_drops = 10 * kDropsPerXrp;
    int bridge_gap_days = 3;
};

/// Hand-crafted transaction history for one account of the given kind.
/// pair_*: two transfers 50 s apart summing to amount_drops, optionally
/// decorated (receiver side) with negligible daily income and a couple of
/// small outflow days. bridge: one large inflow day, then the same amount
/// out `bridge_gap_days` later.
inline std::vector<TransactionRecord> gen_archetype_account(ArchetypeKind kind,
                                                            const ArchetypeParams& p) {
    std::vector<TransactionRecord> records;
    const auto push = [&](Date day, std::int64_t seconds, const std::string& src,
                          const std::string& dst, std::int64_t drops) {
        TransactionRecord r;
        r.timestamp = static_cast<Timestamp>(day) * kSecondsPerDay + seconds;
        r.source = src;
        r.destination = dst;
        r.amount_drops = drops;
        r.delivered_drops = drops;
        records.push_back(std::move(r));
    };

    if (kind == ArchetypeKind::bridge) {
        push(p.day, 8 * 3600, p.counterparty, p.account, p.amount_drops);
        push(p.day + p.bridge_gap_days, 9 * 3600, p.account, p.counterparty_out, p.amount_drops);
        return records;
    }

    const std::int64_t first_half = p.amount_drops / 2;
    const std::int64_t second_half = p.amount_drops - first_half;
    const bool receiving = kind == ArchetypeKind::pair_receiver;
    const std::string& src = receiving ? p.counterparty : p.account;
    const std::string& dst = receiving ? p.account : p.counterparty;
    push(p.day, 7 * 3600 + 50 * 60 + 20, src, dst, first_half);
    push(p.day, 7 * 3600 + 51 * 60 + 10, src, dst, second_half);
    for (int j = 0; j < p.small_income_days; ++j)
        push(p.day + 1 + j, 12 * 3600, p.small_peer, p.account, p.small_income_drops);
    for (int j = 0; j < p.small_outflow_days; ++j)
        push(p.day + 1 + p.small_income_days + j, 13 * 3600, p.account, p.small_peer,
             p.small_outflow_drops);
    return records;
}

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Independent stream per logical component: archetype injection or rate
// changes must not perturb the background sample.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t tag) {
    std::uint64_t state = master ^ (0xD1B54A32D192ED03ULL * (tag + 1));
    return splitmix64_next(state);
}

inline std::string synth_account_name(const char* prefix, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%06d", prefix, index);
    return std::string(buf);
}

}  // namespace detail

/// Deterministic synthetic ledger. Background amounts are inverse-transform
/// draws from a Pareto(alpha) tail above amount_xmin_drops; daily activity is
/// lognormal around mean_daily_txns with the weekend dip applied; participant
/// selection reuses past participants with probability attachment_bias, which
/// yields a fat-tailed degree distribution. When herding_exponent > 0 each
/// day's amounts are rescaled so the daily total follows
/// herding_scale_xrp * users^exponent up to lognormal noise.
inline std::vector<TransactionRecord> gen_ledger(const SynthConfig& config) {
    validate_config(config);

    std::mt19937_64 rng_counts(detail::stream_seed(config.seed, 1));
    std::mt19937_64 rng_amounts(detail::stream_seed(config.seed, 2));
    std::mt19937_64 rng_select(detail::stream_seed(config.seed, 3));
    std::mt19937_64 rng_times(detail::stream_seed(config.seed, 4));
    std::mt19937_64 rng_inject(detail::stream_seed(config.seed, 5));
    std::mt19937_64 rng_herding(detail::stream_seed(config.seed, 6));

    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> second_of_day(0, kSecondsPerDay - 1);
    std::uniform_int_distribution<int> any_account(0, config.n_accounts - 1);

    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(config.n_accounts));
    for (int i = 0; i < config.n_accounts; ++i)
        names.push_back(detail::synth_account_name("a", i));

    std::vector<int> activity;
    const auto pick_account = [&]() -> int {
        if (!activity.empty() && unit(rng_select) < config.attachment_bias) {
            std::uniform_int_distribution<std::size_t> past(0, activity.size() - 1);
            return activity[past(rng_select)];
        }
        return any_account(rng_select);
    };

    std::vector<TransactionRecord> records;
    records.reserve(static_cast<std::size_t>(config.mean_daily_txns * config.n_days * 1.3));
    const double inv_alpha = 1.0 / config.pareto_alpha;

    for (int d = 0; d < config.n_days; ++d) {
        const Date date = config.start_date + d;
        const double weekday_factor = is_weekend(date) ? 1.0 - config.weekend_dip : 1.0;
        const double noise = std::exp(config.daily_noise_sigma * unit_normal(rng_counts));
        const long txns = std::max(
            1L, std::lround(config.mean_daily_txns * weekday_factor * noise));

        const std::size_t day_first = records.size();
        const bool herding = config.herding_exponent > 0.0;
        std::unordered_set<int> day_users;  // only tracked for the herding target
        for (long t = 0; t < txns; ++t) {
            const int src = pick_account();
            int dst = pick_account();
            if (dst == src) dst = pick_account();  // one retry; rare self-loops stay
            const double u = 1.0 - unit(rng_amounts);
            const double raw = static_cast<double>(config.amount_xmin_drops) *
                               std::pow(u, -inv_alpha);
            const std::int64_t drops =
                raw >= static_cast<double>(kMaxSynthAmountDrops)
                    ? kMaxSynthAmountDrops
                    : std::max<std::int64_t>(std::llround(raw), config.amount_xmin_drops);
            TransactionRecord r;
            r.timestamp = static_cast<Timestamp>(date) * kSecondsPerDay + second_of_day(rng_times);
            r.source = names[static_cast<std::size_t>(src)];
            r.destination = names[static_cast<std::size_t>(dst)];
            r.amount_drops = drops;
            r.delivered_drops = drops;
            records.push_back(std::move(r));
            activity.push_back(src);
            activity.push_back(dst);
            if (herding) {
                day_users.insert(src);
                day_users.insert(dst);
            }
        }

        if (herding) {
            double day_total = 0.0;
            for (std::size_t i = day_first; i < records.size(); ++i)
                day_total += static_cast<double>(records[i].amount_drops);
            const double target =
                config.herding_scale_xrp * static_cast<double>(kDropsPerXrp) *
                std::pow(static_cast<double>(day_users.size()), config.herding_exponent) *
                std::exp(config.herding_noise_sigma * unit_normal(rng_herding));
            const double scale = target / day_total;
            for (std::size_t i = day_first; i < records.size(); ++i) {
                const double scaled = std::min(static_cast<double>(records[i].amount_drops) * scale,
                                               static_cast<double>(kMaxSynthAmountDrops));
                const std::int64_t drops = std::max<std::int64_t>(1, std::llround(scaled));
                records[i].amount_drops = drops;
                records[i].delivered_drops = drops;
            }
        }
    }

    if (config.partial_payment_rate > 0.0 || config.foreign_currency_rate > 0.0) {
        static constexpr const char* kForeignPairs[][2] = {
            {"USD", "USD"}, {"EUR", "EUR"}, {"CNY", "CNY"},
            {"BTC", "BTC"}, {"XRP", "USD"}, {"USD", "XRP"},
        };
        std::uniform_int_distribution<int> pair_pick(0, 5);
        for (TransactionRecord& r : records) {
            if (config.partial_payment_rate > 0.0 && unit(rng_inject) < config.partial_payment_rate) {
                const std::int64_t fee = std::max<std::int64_t>(1, r.amount_drops / 1000);
                r.delivered_drops = r.amount_drops - fee;
            }
            if (config.foreign_currency_rate > 0.0 &&
                unit(rng_inject) < config.foreign_currency_rate) {
                const auto& pair = kForeignPairs[pair_pick(rng_inject)];
                r.source_currency = pair[0];
                r.destination_currency = pair[1];
            }
        }
    }

    const auto append = [&](std::vector<TransactionRecord>&& extra) {
        for (TransactionRecord& r : extra) records.push_back(std::move(r));
    };
    for (int i = 0; i < config.archetypes.pair_nodes; ++i) {
        ArchetypeParams p;
        p.account = detail::synth_account_name("pairrcv", i);
        p.counterparty = detail::synth_account_name("pairsnd", i);
        p.small_peer = detail::synth_account_name("pairpeer", i);
        p.day = config.start_date + config.n_days / 3 + (i % (config.n_days / 5));
        p.amount_drops = kMaxSynthAmountDrops;  // 2*10^11 XRP over the two transfers
        p.small_income_days = std::min(17, config.n_days / 3 - 2);
        p.small_outflow_days = 2;
        append(gen_archetype_account(ArchetypeKind::pair_receiver, p));
    }
    for (int i = 0; i < config.archetypes.bridge_nodes; ++i) {
        ArchetypeParams p;
        p.account = detail::synth_account_name("bridge", i);
        p.counterparty = detail::synth_account_name("bridgesrc", i);
        p.counterparty_out = detail::synth_account_name("bridgedst", i);
        p.day = config.start_date + config.n_days / 2 + (i % (config.n_days / 5));
        p.amount_drops = 11'000'000'000'000'000;  // 1.1*10^10 XRP
        append(gen_archetype_account(ArchetypeKind::bridge, p));
    }
    for (int i = 0; i < config.archetypes.even_traders; ++i) {
        const std::string account = detail::synth_account_name("even", i);
        const std::string peer = detail::synth_account_name("evenpeer", i);
        const std::int64_t drops = 20'000'000'000'000;  // 2*10^7 XRP per day
        const int active_days = std::min(12, config.n_days / 2);
        std::vector<TransactionRecord> extra;
        for (int j = 0; j < active_days; ++j) {
            const Date day = config.start_date + 2 + 2 * j;
            TransactionRecord in_rec;
            in_rec.timestamp = static_cast<Timestamp>(day) * kSecondsPerDay + 10 * 3600;
            in_rec.source = peer;
            in_rec.destination = account;
            in_rec.amount_drops = in_rec.delivered_drops = drops;
            extra.push_back(std::move(in_rec));
            TransactionRecord out_rec;
            out_rec.timestamp = static_cast<Timestamp>(day) * kSecondsPerDay + 11 * 3600;
            out_rec.source = account;
            out_rec.destination = peer;
            out_rec.amount_drops = out_rec.delivered_drops = drops;
            extra.push_back(std::move(out_rec));
        }
        append(std::move(extra));
    }

    std::stable_sort(records.begin(), records.end(),
                     [](const TransactionRecord& a, const TransactionRecord& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         if (a.source != b.source) return a.source < b.source;
                         if (a.destination != b.destination) return a.destination < b.destination;
                         return a.amount_drops < b.amount_drops;
                     });
    return records;
}

inline SynthConfig synth_config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("synth config: expected a JSON object");
    SynthConfig config;
    try {
        const auto get = [&doc](const char* key, auto& out_value) {
            if (doc.contains(key)) out_value = doc.at(key).get<std::decay_t<decltype(out_value)>>();
        };
        get("seed", config.seed);
        get("n_days", config.n_days);
        get("n_accounts", config.n_accounts);
        get("pareto_alpha", config.pareto_alpha);
        get("amount_xmin_drops", config.amount_xmin_drops);
        get("weekend_dip", config.weekend_dip);
        get("herding_exponent", config.herding_exponent);
        get("mean_daily_txns", config.mean_daily_txns);
        get("daily_noise_sigma", config.daily_noise_sigma);
        get("herding_noise_sigma", config.herding_noise_sigma);
        get("herding_scale_xrp", config.herding_scale_xrp);
        get("attachment_bias", config.attachment_bias);
        get("partial_payment_rate", config.partial_payment_rate);
        get("foreign_currency_rate", config.foreign_currency_rate);
        get("pair_nodes", config.archetypes.pair_nodes);
        get("bridge_nodes", config.archetypes.bridge_nodes);
        get("even_traders", config.archetypes.even_traders);
        if (doc.contains("start_date")) {
            const auto parsed = parse_date(doc.at("start_date").get<std::string>());
            if (!parsed) throw ConfigError("synth config: bad start_date");
            config.start_date = *parsed;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("synth config: ") + e.what());
    }
    return config;
}

inline nlohmann::ordered_json synth_config_to_json(const SynthConfig& c) {
    return nlohmann::ordered_json{{"seed", c.seed},
                                  {"n_days", c.n_days},
                                  {"n_accounts", c.n_accounts},
                                  {"pareto_alpha", c.pareto_alpha},
                                  {"amount_xmin_drops", c.amount_xmin_drops},
                                  {"weekend_dip", c.weekend_dip},
                                  {"herding_exponent", c.herding_exponent},
                                  {"mean_daily_txns", c.mean_daily_txns},
                                  {"daily_noise_sigma", c.daily_noise_sigma},
                                  {"herding_noise_sigma", c.herding_noise_sigma},
                                  {"herding_scale_xrp", c.herding_scale_xrp},
                                  {"attachment_bias", c.attachment_bias},
                                  {"partial_payment_rate", c.partial_payment_rate},
                                  {"foreign_currency_rate", c.foreign_currency_rate},
                                  {"pair_nodes", c.archetypes.pair_nodes},
                                  {"bridge_nodes", c.archetypes.bridge_nodes},
                                  {"even_traders", c.archetypes.even_traders},
                                  {"start_date", format_date(c.start_date)}};
}

}  // namespace ledgerflow
