// Monte Carlo harness: paired-decoder sweeps over (rho, r) grids, error and
// outage probability estimation with Wilson intervals, diversity-slope fits,
// and the conditional-error experiment.
//
// Determinism contract: every trial owns a generator seeded from
// (master_seed, global trial index), decoders within a trial share the same
// (s, H, W), and aggregation uses commutative integer counters, so results
// are independent of thread count and scheduling order.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "latticedmt/channel.hpp"
#include "latticedmt/codes.hpp"
#include "latticedmt/decoders.hpp"
#include "latticedmt/errors.hpp"
#include "latticedmt/rng.hpp"

namespace ldmt {

enum class DecoderId { Ml, Naive, Reg, CwReg, Mmse, LrMmse };

inline const char* decoder_name(DecoderId d) {
    switch (d) {
        case DecoderId::Ml: return "ml";
        case DecoderId::Naive: return "naive";
        case DecoderId::Reg: return "reg";
        case DecoderId::CwReg: return "cw_reg";
        case DecoderId::Mmse: return "mmse";
        case DecoderId::LrMmse: return "lr_mmse";
    }
    return "?";
}

inline DecoderId decoder_from_name(const std::string& name) {
    for (DecoderId d : {DecoderId::Ml, DecoderId::Naive, DecoderId::Reg, DecoderId::CwReg,
                        DecoderId::Mmse, DecoderId::LrMmse})
        if (name == decoder_name(d)) return d;
    throw ConfigError("decoders", "unknown decoder '" + name + "'");
}

enum class FadingModel { Rayleigh, Rician };

struct SweepConfig {
    CodeSpec code;
    Shape shape = Shape::Spherical;
    std::vector<double> r_list;
    std::vector<double> rho_db_list;
    std::uint64_t trials_per_point = 0;
    std::vector<DecoderId> decoders;
    double eps = 0.1;  // no-outage margin used for per-trial conditioning
    double delta_lll = 0.75;
    std::uint64_t master_seed = 1;
    std::uint64_t node_budget = kDefaultNodeBudget;
    int n_rx = 0;  // 0 means n_rx = n_tx
    FadingModel fading = FadingModel::Rayleigh;
    double rician_k = 5.0;
    double noise_scale = 1.0;  // 0 is the noiseless test hook
    std::size_t enum_cap = 1'000'000;

    int rx() const { return n_rx > 0 ? n_rx : code.n_tx; }
};

inline void validate(const SweepConfig& cfg) {
    if (cfg.code.kappa < 1) throw ConfigError("code", "missing or invalid code spec");
    if (cfg.r_list.empty()) throw ConfigError("r_list", "must be non-empty");
    for (double r : cfg.r_list)
        if (r < 0.0) throw ConfigError("r_list", "multiplexing gains must be >= 0");
    if (cfg.rho_db_list.empty()) throw ConfigError("rho_db_list", "must be non-empty");
    if (cfg.trials_per_point < 1) throw ConfigError("trials_per_point", "must be >= 1");
    if (cfg.decoders.empty()) throw ConfigError("decoders", "must be non-empty");
    if (!(cfg.eps > 0.0)) throw ConfigError("epsilon", "must be > 0");
    if (!(cfg.delta_lll > 0.5 && cfg.delta_lll < 1.0))
        throw ConfigError("delta_lll", "must be in (1/2, 1)");
    if (cfg.noise_scale < 0.0) throw ConfigError("noise_scale", "must be >= 0");
    if (cfg.n_rx < 0) throw ConfigError("n_rx", "must be >= 0");
    if (cfg.fading == FadingModel::Rician && cfg.rician_k < 0.0)
        throw ConfigError("rician_k", "must be >= 0");
}

// SNR conversion fixed project-wide: rho = 10^(dB/10).
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct TrialRecord {
    std::uint64_t trial_index = 0;  // global, seeds the trial generator
    double r = 0.0;
    double rho_db = 0.0;
    DecoderId decoder = DecoderId::Ml;
    bool correct = false;
    bool in_constellation = false;
    bool no_outage = false;
    bool budget_exceeded = false;
    std::uint64_t work = 0;
};

struct PointStats {
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    std::uint64_t out_of_constellation = 0;
    std::uint64_t no_outage_trials = 0;
    std::uint64_t no_outage_errors = 0;
    std::uint64_t budget_exceeded = 0;
    std::uint64_t work_sum = 0;

    void add(bool correct, bool in_const, bool no_out, bool budget, std::uint64_t work) {
        ++trials;
        errors += correct ? 0 : 1;
        out_of_constellation += in_const ? 0 : 1;
        no_outage_trials += no_out ? 1 : 0;
        no_outage_errors += (no_out && !correct) ? 1 : 0;
        budget_exceeded += budget ? 1 : 0;
        work_sum += work;
    }
    void merge(const PointStats& o) {
        trials += o.trials;
        errors += o.errors;
        out_of_constellation += o.out_of_constellation;
        no_outage_trials += o.no_outage_trials;
        no_outage_errors += o.no_outage_errors;
        budget_exceeded += o.budget_exceeded;
        work_sum += o.work_sum;
    }
};

struct SweepStats {
    std::vector<DecoderId> decoders;
    std::vector<double> r_list;
    std::vector<double> rho_db_list;
    std::vector<PointStats> cells;                  // [decoder][r][rho]
    std::vector<std::size_t> constellation_sizes;   // [r][rho]
    std::vector<double> realized_multiplexing;      // [r][rho]

    PointStats& at(std::size_t d, std::size_t ri, std::size_t pi) {
        return cells[(d * r_list.size() + ri) * rho_db_list.size() + pi];
    }
    const PointStats& at(std::size_t d, std::size_t ri, std::size_t pi) const {
        return cells[(d * r_list.size() + ri) * rho_db_list.size() + pi];
    }
    std::size_t grid_index(std::size_t ri, std::size_t pi) const {
        return ri * rho_db_list.size() + pi;
    }
};

inline unsigned worker_count() {
    if (const char* env = std::getenv("LATTICEDMT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace detail {

struct PointContext {
    const SweepConfig* cfg = nullptr;
    double r = 0.0;
    double rho = 0.0;
    double theta = 0.0;
    double alpha = 0.0;
    std::vector<DataVector> constellation;
    BoundaryContext bctx;
    std::uint64_t first_trial_index = 0;  // global index of the point's trial 0
};

inline PointContext make_point_context(const SweepConfig& cfg, std::size_t ri, std::size_t pi,
                                       std::size_t point_ordinal) {
    PointContext ctx;
    ctx.cfg = &cfg;
    ctx.r = cfg.r_list[ri];
    ctx.rho = db_to_linear(cfg.rho_db_list[pi]);
    const auto cset = make_constellation_spec(cfg.shape, ctx.r, ctx.rho);
    ctx.constellation = enumerate_constellation(cfg.code, cset, cfg.enum_cap);
    ctx.theta = normalize_power(cfg.code, cset, cfg.enum_cap);
    ctx.alpha = mmse_alpha(ctx.rho, ctx.r, cfg.code.block_len, cfg.code.kappa);
    ctx.bctx = BoundaryContext{&cfg.code, cset};
    ctx.first_trial_index = point_ordinal * cfg.trials_per_point;
    return ctx;
}

struct DecoderTrialOutcome {
    bool correct = false;
    bool in_constellation = false;
    bool budget_exceeded = false;
    std::uint64_t work = 0;
};

// One paired trial: all decoders see the same (s, H, W).  Decode failures
// (singular systems, budget or iteration limits) count as errors.
inline bool run_trial(const PointContext& ctx, std::uint64_t local_index,
                      std::vector<DecoderTrialOutcome>& outcomes) {
    const SweepConfig& cfg = *ctx.cfg;
    Rng rng(derive_seed(cfg.master_seed, ctx.first_trial_index + local_index));
    const DataVector& s = ctx.constellation[rng.uniform_below(ctx.constellation.size())];
    const ChannelRealization ch =
        cfg.fading == FadingModel::Rayleigh
            ? sample_rayleigh(cfg.rx(), cfg.code.n_tx, ctx.rho, rng)
            : sample_rician(cfg.rx(), cfg.code.n_tx, cfg.rician_k, ctx.rho, rng);
    const Codeword cw = encode(cfg.code, ctx.theta, s);
    const ReceivedBlock rb = transmit(ch, cw, rng, cfg.noise_scale);
    const CMat f = effective_channel(cfg.code, ctx.theta, ch.H);
    const bool no_out = ctx.rho > 1.0 && in_no_outage(ch, ctx.r, cfg.eps);

    outcomes.resize(cfg.decoders.size());
    for (std::size_t d = 0; d < cfg.decoders.size(); ++d) {
        DecoderTrialOutcome& o = outcomes[d];
        o = {};
        try {
            DecodeOutcome res;
            switch (cfg.decoders[d]) {
                case DecoderId::Ml:
                    res = ml_decode(f, rb.y, ctx.constellation);
                    break;
                case DecoderId::Naive:
                    res = naive_lattice_decode(f, rb.y, ctx.bctx, cfg.node_budget);
                    break;
                case DecoderId::Reg:
                    res = regularized_lattice_decode(f, rb.y, ctx.alpha, ctx.bctx, cfg.node_budget);
                    break;
                case DecoderId::CwReg:
                    res = codeword_regularized_decode(f, rb.y, cfg.code, ctx.theta, ctx.rho, ctx.bctx,
                                                      cfg.node_budget);
                    break;
                case DecoderId::Mmse:
                    res = linear_mmse_decode(f, rb.y, ctx.alpha, ctx.bctx);
                    break;
                case DecoderId::LrMmse:
                    res = lr_mmse_decode(f, rb.y, ctx.alpha, cfg.delta_lll, ctx.bctx);
                    break;
            }
            o.correct = (res.s_hat == s);
            o.in_constellation = res.in_constellation.value_or(false);
            o.work = res.work;
        } catch (const BudgetExceeded&) {
            o.budget_exceeded = true;
        } catch (const SingularSystem&) {
        } catch (const NonConvergence&) {
        }
    }
    return no_out;
}

template <typename Body>
inline void parallel_trials(std::uint64_t n_trials, Body&& body) {
    const unsigned workers = std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(n_trials, 1));
    if (workers <= 1) {
        body(0u, std::uint64_t{0}, n_trials);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (n_trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(n_trials, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, w, begin, end] { body(w, begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

// Aggregated sweep: the workhorse for large runs.  Counters only, no
// per-trial materialization.
inline SweepStats run_sweep_stats(const SweepConfig& cfg) {
    validate(cfg);
    SweepStats stats;
    stats.decoders = cfg.decoders;
    stats.r_list = cfg.r_list;
    stats.rho_db_list = cfg.rho_db_list;
    stats.cells.assign(cfg.decoders.size() * cfg.r_list.size() * cfg.rho_db_list.size(), {});
    stats.constellation_sizes.assign(cfg.r_list.size() * cfg.rho_db_list.size(), 0);
    stats.realized_multiplexing.assign(cfg.r_list.size() * cfg.rho_db_list.size(), 0.0);

    std::size_t point_ordinal = 0;
    for (std::size_t ri = 0; ri < cfg.r_list.size(); ++ri) {
        for (std::size_t pi = 0; pi < cfg.rho_db_list.size(); ++pi, ++point_ordinal) {
            const auto ctx = detail::make_point_context(cfg, ri, pi, point_ordinal);
            stats.constellation_sizes[stats.grid_index(ri, pi)] = ctx.constellation.size();
            const double log2rho = std::log2(ctx.rho);
            stats.realized_multiplexing[stats.grid_index(ri, pi)] =
                log2rho != 0.0
                    ? std::log2(static_cast<double>(ctx.constellation.size())) /
                          (cfg.code.block_len * log2rho)
                    : std::numeric_limits<double>::quiet_NaN();

            const unsigned workers =
                static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), cfg.trials_per_point));
            std::vector<std::vector<PointStats>> partial(
                std::max(workers, 1u), std::vector<PointStats>(cfg.decoders.size()));
            detail::parallel_trials(cfg.trials_per_point,
                                    [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
                                        std::vector<detail::DecoderTrialOutcome> outs;
                                        for (std::uint64_t t = begin; t < end; ++t) {
                                            const bool no_out = detail::run_trial(ctx, t, outs);
                                            for (std::size_t d = 0; d < outs.size(); ++d)
                                                partial[w][d].add(outs[d].correct, outs[d].in_constellation,
                                                                  no_out, outs[d].budget_exceeded,
                                                                  outs[d].work);
                                        }
                                    });
            for (const auto& per_worker : partial)
                for (std::size_t d = 0; d < cfg.decoders.size(); ++d)
                    stats.at(d, ri, pi).merge(per_worker[d]);
        }
    }
    return stats;
}

// Fully materialized sweep for desk-scale runs and tests: exactly
// trials_per_point * |grid| * |decoders| records, in deterministic order.
inline std::vector<TrialRecord> run_sweep(const SweepConfig& cfg) {
    validate(cfg);
    const std::size_t n_dec = cfg.decoders.size();
    const std::size_t points = cfg.r_list.size() * cfg.rho_db_list.size();
    std::vector<TrialRecord> records(points * cfg.trials_per_point * n_dec);

    std::size_t point_ordinal = 0;
    for (std::size_t ri = 0; ri < cfg.r_list.size(); ++ri) {
        for (std::size_t pi = 0; pi < cfg.rho_db_list.size(); ++pi, ++point_ordinal) {
            const auto ctx = detail::make_point_context(cfg, ri, pi, point_ordinal);
            TrialRecord* base = records.data() + point_ordinal * cfg.trials_per_point * n_dec;
            detail::parallel_trials(
                cfg.trials_per_point, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                    std::vector<detail::DecoderTrialOutcome> outs;
                    for (std::uint64_t t = begin; t < end; ++t) {
                        const bool no_out = detail::run_trial(ctx, t, outs);
                        for (std::size_t d = 0; d < outs.size(); ++d) {
                            TrialRecord& rec = base[t * n_dec + d];
                            rec.trial_index = ctx.first_trial_index + t;
                            rec.r = ctx.r;
                            rec.rho_db = cfg.rho_db_list[pi];
                            rec.decoder = cfg.decoders[d];
                            rec.correct = outs[d].correct;
                            rec.in_constellation = outs[d].in_constellation;
                            rec.no_outage = no_out;
                            rec.budget_exceeded = outs[d].budget_exceeded;
                            rec.work = outs[d].work;
                        }
                    }
                });
        }
    }
    return records;
}

// Order-independent aggregation of materialized records.
inline SweepStats aggregate_records(const SweepConfig& cfg, const std::vector<TrialRecord>& records) {
    SweepStats stats;
    stats.decoders = cfg.decoders;
    stats.r_list = cfg.r_list;
    stats.rho_db_list = cfg.rho_db_list;
    stats.cells.assign(cfg.decoders.size() * cfg.r_list.size() * cfg.rho_db_list.size(), {});
    stats.constellation_sizes.assign(cfg.r_list.size() * cfg.rho_db_list.size(), 0);
    stats.realized_multiplexing.assign(cfg.r_list.size() * cfg.rho_db_list.size(), 0.0);
    auto index_of = [](const std::vector<double>& xs, double v) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (xs[i] == v) return i;
        throw NoData("record does not match the sweep grid");
    };
    for (const auto& rec : records) {
        const std::size_t d = static_cast<std::size_t>(
            std::find(cfg.decoders.begin(), cfg.decoders.end(), rec.decoder) - cfg.decoders.begin());
        if (d >= cfg.decoders.size()) throw NoData("record decoder not in config");
        stats.at(d, index_of(cfg.r_list, rec.r), index_of(cfg.rho_db_list, rec.rho_db))
            .add(rec.correct, rec.in_constellation, rec.no_outage, rec.budget_exceeded, rec.work);
    }
    return stats;
}

// ---- estimation ------------------------------------------------------------

struct Wilson {
    double p = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// 95% Wilson score interval (z = 1.95996...).
inline Wilson wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = 1.959963984540054) {
    if (trials == 0) throw NoData("wilson_interval: no trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline Wilson estimate_error_prob(const std::vector<TrialRecord>& records, DecoderId decoder, double r,
                                  double rho_db) {
    std::uint64_t errors = 0, trials = 0;
    for (const auto& rec : records) {
        if (rec.decoder != decoder || rec.r != r || rec.rho_db != rho_db) continue;
        ++trials;
        errors += rec.correct ? 0 : 1;
    }
    if (trials == 0) throw NoData("estimate_error_prob: no matching records");
    return wilson_interval(errors, trials);
}

struct CurvePoint {
    double rho_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double p_e = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t out_of_constellation = 0;
    double mean_work = 0.0;
};

struct SummaryCurve {
    DecoderId decoder = DecoderId::Ml;
    double r = 0.0;
    std::vector<CurvePoint> points;
};

inline std::vector<SummaryCurve> build_curves(const SweepStats& stats) {
    std::vector<SummaryCurve> curves;
    for (std::size_t d = 0; d < stats.decoders.size(); ++d) {
        for (std::size_t ri = 0; ri < stats.r_list.size(); ++ri) {
            SummaryCurve curve{stats.decoders[d], stats.r_list[ri], {}};
            for (std::size_t pi = 0; pi < stats.rho_db_list.size(); ++pi) {
                const PointStats& cell = stats.at(d, ri, pi);
                const Wilson w = wilson_interval(cell.errors, cell.trials);
                curve.points.push_back({stats.rho_db_list[pi], cell.trials, cell.errors, w.p, w.lo,
                                        w.hi, cell.out_of_constellation,
                                        static_cast<double>(cell.work_sum) /
                                            static_cast<double>(cell.trials)});
            }
            curves.push_back(std::move(curve));
        }
    }
    return curves;
}

struct SlopeFit {
    double slope = 0.0;       // fitted diversity estimate d-hat
    int points_used = 0;
    std::size_t censored = 0;  // grid points dropped (too few errors)
    std::vector<double> rho_db_used;
};

// Least-squares slope of -log10(P_e) against log10(rho) over the top
// `window` grid points that have at least `min_errors` errors. Zero- and
// low-error points are censored rather than extrapolated through.
inline SlopeFit fit_diversity_slope(const std::vector<CurvePoint>& points, int window = 3,
                                    std::uint64_t min_errors = 20) {
    std::vector<const CurvePoint*> eligible;
    for (const auto& pt : points)
        if (pt.errors >= std::max<std::uint64_t>(min_errors, 1)) eligible.push_back(&pt);
    SlopeFit fit;
    fit.censored = points.size() - eligible.size();
    if (eligible.size() > static_cast<std::size_t>(window))
        eligible.erase(eligible.begin(), eligible.end() - window);
    if (eligible.size() < 2)
        throw InsufficientData("fit_diversity_slope: need >= 2 grid points with enough errors");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto* pt : eligible) {
        const double x = pt->rho_db / 10.0;  // log10(rho)
        const double y = -std::log10(pt->p_e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        fit.rho_db_used.push_back(pt->rho_db);
    }
    const auto n = static_cast<double>(eligible.size());
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.points_used = static_cast<int>(eligible.size());
    return fit;
}

// Rayleigh outage DMT reference: piecewise-linear through the points
// (k, (n_rx - k)(n_tx - k)).
inline double dout(int n_tx, int n_rx, double r) {
    const int n = std::min(n_tx, n_rx);
    if (r < 0.0 || r > static_cast<double>(n)) throw OutOfRange("dout: need 0 <= r <= min(n_tx, n_rx)");
    const int k = std::min(static_cast<int>(std::floor(r)), n - 1);
    const double d0 = static_cast<double>((n_rx - k) * (n_tx - k));
    const double d1 = static_cast<double>((n_rx - k - 1) * (n_tx - k - 1));
    return d0 + (d1 - d0) * (r - k);
}

struct OutageCurve {
    int n_tx = 0, n_rx = 0;
    double r = 0.0;
    double rate_offset_bits = 0.0;
    std::vector<CurvePoint> points;  // errors = outage events
};

// Empirical outage probability P(log2 det(I + rho H H') <= r log2 rho + offset)
// per grid point.  The offset keeps the outage event measurable at r = 0,
// where the zero-rate event has probability zero at any finite SNR; an O(1)
// rate shift does not change the SNR exponent.
inline OutageCurve outage_curve(int n_tx, int n_rx, double r, const std::vector<double>& rho_db_list,
                                std::uint64_t trials, std::uint64_t seed,
                                double rate_offset_bits = 0.0) {
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    OutageCurve out{n_tx, n_rx, r, rate_offset_bits, {}};
    for (std::size_t pi = 0; pi < rho_db_list.size(); ++pi) {
        const double rho = db_to_linear(rho_db_list[pi]);
        const double rate_bits = r * std::log2(rho) + rate_offset_bits;
        const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), trials));
        std::vector<std::uint64_t> partial(std::max(workers, 1u), 0);
        detail::parallel_trials(trials, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
            std::uint64_t outages = 0;
            for (std::uint64_t t = begin; t < end; ++t) {
                Rng rng(derive_seed(seed, pi * trials + t));
                const ChannelRealization ch = sample_rayleigh(n_rx, n_tx, rho, rng);
                if (mutual_info(ch) <= rate_bits) ++outages;
            }
            partial[w] += outages;
        });
        std::uint64_t outages = 0;
        for (const auto& p : partial) outages += p;
        const Wilson wi = wilson_interval(outages, trials);
        out.points.push_back({rho_db_list[pi], trials, outages, wi.p, wi.lo, wi.hi, 0, 0.0});
    }
    return out;
}

struct ConditionalPoint {
    double rho_db = 0.0;
    std::uint64_t no_outage_trials = 0;
    std::uint64_t no_outage_errors = 0;
    double p = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct ConditionalTable {
    std::vector<DecoderId> decoders;
    double r = 0.0;
    double eps = 0.0;
    // [decoder][rho index]
    std::vector<std::vector<ConditionalPoint>> rows;
};

// P(error | H in the eps-no-outage set) per decoder across the SNR grid.
// Outage trials are excluded from both numerator and denominator.
inline ConditionalTable conditional_error_experiment(const SweepConfig& cfg,
                                                     std::uint64_t min_no_outage = 1000) {
    if (cfg.r_list.size() != 1)
        throw ConfigError("r_list", "conditional experiment expects a single multiplexing gain");
    const SweepStats stats = run_sweep_stats(cfg);
    ConditionalTable table{cfg.decoders, cfg.r_list[0], cfg.eps, {}};
    for (std::size_t d = 0; d < cfg.decoders.size(); ++d) {
        std::vector<ConditionalPoint> row;
        for (std::size_t pi = 0; pi < cfg.rho_db_list.size(); ++pi) {
            const PointStats& cell = stats.at(d, 0, pi);
            if (cell.no_outage_trials < min_no_outage)
                throw InsufficientData("conditional_error_experiment: too few no-outage trials at " +
                                       std::to_string(cfg.rho_db_list[pi]) + " dB");
            const Wilson w = wilson_interval(cell.no_outage_errors, cell.no_outage_trials);
            row.push_back({cfg.rho_db_list[pi], cell.no_outage_trials, cell.no_outage_errors, w.p,
                           w.lo, w.hi});
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace ldmt
