// Serialization and file output: JSON codecs for code specs, configs and
// results, the results CSV, the run manifest, and atomic writes.
//
// Conventions (documented in the README): complex scalars are [re, im]
// pairs; a code generator G is a flat row-major list of pairs; other
// matrices are nested lists of rows.  SNR is expressed in dB externally and
// converted as rho = 10^(dB/10).  All JSON documents carry "schema": 1.
#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latticedmt/codes.hpp"
#include "latticedmt/decoders.hpp"
#include "latticedmt/errors.hpp"
#include "latticedmt/harness.hpp"
#include "latticedmt/reduction.hpp"

namespace ldmt {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "latticedmt 1.0.0";

// ---- JSON codecs -----------------------------------------------------------

inline json to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

inline cxd cx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("complex", "expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const CMat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CMat cmat_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ConfigError("matrix", "expected a non-empty list of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[r].size()) != cols)
            throw ConfigError("matrix", "ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = cx_from_json(j[r][c]);
    }
    return m;
}

inline json to_json(const CVec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
    return out;
}

inline CVec cvec_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("vector", "expected a list of [re, im] pairs");
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cx_from_json(j[i]);
    return v;
}

inline json to_json(const DataVector& s) {
    json out = json::array();
    for (const auto& g : s) out.push_back(json::array({g.re, g.im}));
    return out;
}

inline json to_json(const GaussMat& t) {
    json rows = json::array();
    for (int r = 0; r < t.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < t.cols(); ++c) row.push_back(json::array({t(r, c).re, t(r, c).im}));
        rows.push_back(std::move(row));
    }
    return rows;
}

// CodeSpec: name, dims, and G as a flat row-major list of [re, im] pairs.
inline json to_json(const CodeSpec& spec) {
    json g = json::array();
    for (Eigen::Index r = 0; r < spec.G.rows(); ++r)
        for (Eigen::Index c = 0; c < spec.G.cols(); ++c) g.push_back(to_json(spec.G(r, c)));
    return json{{"name", spec.name},
                {"n_tx", spec.n_tx},
                {"t", spec.block_len},
                {"kappa", spec.kappa},
                {"g", std::move(g)}};
}

inline CodeSpec code_spec_from_json(const json& j) {
    for (const char* field : {"name", "n_tx", "t", "kappa", "g"})
        if (!j.contains(field)) throw ConfigError(std::string("code.") + field, "missing");
    const int n_tx = j["n_tx"].get<int>();
    const int t = j["t"].get<int>();
    const int kappa = j["kappa"].get<int>();
    const auto& g = j["g"];
    if (!g.is_array() || static_cast<int>(g.size()) != n_tx * t * kappa)
        throw ConfigError("code.g", "expected n_tx*t*kappa [re, im] pairs, row-major");
    CMat gm(static_cast<Eigen::Index>(n_tx) * t, kappa);
    std::size_t idx = 0;
    for (Eigen::Index r = 0; r < gm.rows(); ++r)
        for (Eigen::Index c = 0; c < gm.cols(); ++c) gm(r, c) = cx_from_json(g[idx++]);
    return make_code_spec(j["name"].get<std::string>(), n_tx, t, std::move(gm));
}

// "golden", {"family":"uncoded","n_tx":..,"t":..}, or a full CodeSpec object.
inline CodeSpec code_from_config(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "golden") return golden_code_spec();
        throw ConfigError("code", "unknown code name '" + name + "' (use \"golden\" or an object)");
    }
    if (!j.is_object()) throw ConfigError("code", "expected a string or object");
    if (j.contains("family")) {
        const auto family = j["family"].get<std::string>();
        if (family == "golden") return golden_code_spec();
        if (family == "uncoded") {
            if (!j.contains("n_tx")) throw ConfigError("code.n_tx", "missing");
            if (!j.contains("t")) throw ConfigError("code.t", "missing");
            return uncoded_spec(j["n_tx"].get<int>(), j["t"].get<int>());
        }
        throw ConfigError("code.family", "unknown family '" + family + "'");
    }
    return code_spec_from_json(j);
}

inline Shape shape_from_string(const std::string& s) {
    if (s == "spherical") return Shape::Spherical;
    if (s == "cubic") return Shape::Cubic;
    throw ConfigError("shape", "expected 'spherical' or 'cubic'");
}
inline const char* shape_name(Shape s) { return s == Shape::Spherical ? "spherical" : "cubic"; }

inline SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig cfg;
    for (const char* field : {"code", "r_list", "rho_db_list", "trials_per_point", "decoders"})
        if (!j.contains(field)) throw ConfigError(field, "missing");
    cfg.code = code_from_config(j["code"]);
    cfg.r_list = j["r_list"].get<std::vector<double>>();
    cfg.rho_db_list = j["rho_db_list"].get<std::vector<double>>();
    cfg.trials_per_point = j["trials_per_point"].get<std::uint64_t>();
    for (const auto& name : j["decoders"]) cfg.decoders.push_back(decoder_from_name(name.get<std::string>()));
    if (j.contains("shape")) cfg.shape = shape_from_string(j["shape"].get<std::string>());
    if (j.contains("epsilon")) cfg.eps = j["epsilon"].get<double>();
    if (j.contains("delta_lll")) cfg.delta_lll = j["delta_lll"].get<double>();
    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("node_budget")) cfg.node_budget = j["node_budget"].get<std::uint64_t>();
    if (j.contains("n_rx")) cfg.n_rx = j["n_rx"].get<int>();
    if (j.contains("noise_scale")) cfg.noise_scale = j["noise_scale"].get<double>();
    if (j.contains("enum_cap")) cfg.enum_cap = j["enum_cap"].get<std::size_t>();
    if (j.contains("fading")) {
        const auto f = j["fading"].get<std::string>();
        if (f == "rayleigh") {
            cfg.fading = FadingModel::Rayleigh;
        } else if (f == "rician") {
            cfg.fading = FadingModel::Rician;
            if (j.contains("rician_k")) cfg.rician_k = j["rician_k"].get<double>();
        } else {
            throw ConfigError("fading", "expected 'rayleigh' or 'rician'");
        }
    }
    validate(cfg);
    return cfg;
}

inline json to_json(const SweepConfig& cfg) {
    json dec = json::array();
    for (auto d : cfg.decoders) dec.push_back(decoder_name(d));
    json j{{"schema", kSchemaVersion},
           {"code", to_json(cfg.code)},
           {"shape", shape_name(cfg.shape)},
           {"r_list", cfg.r_list},
           {"rho_db_list", cfg.rho_db_list},
           {"trials_per_point", cfg.trials_per_point},
           {"decoders", std::move(dec)},
           {"epsilon", cfg.eps},
           {"delta_lll", cfg.delta_lll},
           {"master_seed", cfg.master_seed},
           {"node_budget", cfg.node_budget},
           {"n_rx", cfg.rx()},
           {"noise_scale", cfg.noise_scale},
           {"enum_cap", cfg.enum_cap},
           {"fading", cfg.fading == FadingModel::Rayleigh ? "rayleigh" : "rician"}};
    if (cfg.fading == FadingModel::Rician) j["rician_k"] = cfg.rician_k;
    return j;
}

inline json to_json(const DecodeOutcome& out) {
    json j{{"schema", kSchemaVersion},
           {"s_hat", to_json(out.s_hat)},
           {"metric", out.metric},
           {"work", out.work}};
    if (out.in_constellation)
        j["in_constellation"] = *out.in_constellation;
    else
        j["in_constellation"] = nullptr;
    return j;
}

// ---- text formatting -------------------------------------------------------

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Results CSV, one row per (decoder, r, rho) cell in config order.
inline std::string sweep_csv(const SweepStats& stats) {
    std::string out = "decoder,r,rho_db,trials,errors,p_e,ci_low,ci_high,oo_constellation,mean_work\n";
    for (std::size_t d = 0; d < stats.decoders.size(); ++d) {
        for (std::size_t ri = 0; ri < stats.r_list.size(); ++ri) {
            for (std::size_t pi = 0; pi < stats.rho_db_list.size(); ++pi) {
                const PointStats& cell = stats.at(d, ri, pi);
                const Wilson w = wilson_interval(cell.errors, cell.trials);
                out += decoder_name(stats.decoders[d]);
                out += ',';
                out += fmt_double(stats.r_list[ri]);
                out += ',';
                out += fmt_double(stats.rho_db_list[pi]);
                out += ',';
                out += std::to_string(cell.trials);
                out += ',';
                out += std::to_string(cell.errors);
                out += ',';
                out += fmt_double(w.p);
                out += ',';
                out += fmt_double(w.lo);
                out += ',';
                out += fmt_double(w.hi);
                out += ',';
                out += std::to_string(cell.out_of_constellation);
                out += ',';
                out += fmt_double(static_cast<double>(cell.work_sum) / static_cast<double>(cell.trials));
                out += '\n';
            }
        }
    }
    return out;
}

inline std::string outage_csv(const OutageCurve& curve) {
    std::string out = "decoder,r,rho_db,trials,errors,p_e,ci_low,ci_high,oo_constellation,mean_work\n";
    for (const auto& pt : curve.points) {
        out += "outage,";
        out += fmt_double(curve.r);
        out += ',';
        out += fmt_double(pt.rho_db);
        out += ',';
        out += std::to_string(pt.trials);
        out += ',';
        out += std::to_string(pt.errors);
        out += ',';
        out += fmt_double(pt.p_e);
        out += ',';
        out += fmt_double(pt.ci_lo);
        out += ',';
        out += fmt_double(pt.ci_hi);
        out += ",0,0\n";
    }
    return out;
}

// Fitted slopes plus references for the summary JSON.
inline json sweep_summary(const SweepConfig& cfg, const SweepStats& stats, int slope_window = 3,
                          std::uint64_t slope_min_errors = 20) {
    json curves = json::array();
    json slopes = json::array();
    for (const auto& curve : build_curves(stats)) {
        json pts = json::array();
        for (const auto& pt : curve.points)
            pts.push_back(json{{"rho_db", pt.rho_db},
                               {"trials", pt.trials},
                               {"errors", pt.errors},
                               {"p_e", pt.p_e},
                               {"ci_low", pt.ci_lo},
                               {"ci_high", pt.ci_hi},
                               {"oo_constellation", pt.out_of_constellation},
                               {"mean_work", pt.mean_work}});
        curves.push_back(json{{"decoder", decoder_name(curve.decoder)}, {"r", curve.r},
                              {"points", std::move(pts)}});
        json s{{"decoder", decoder_name(curve.decoder)}, {"r", curve.r}};
        try {
            const SlopeFit fit = fit_diversity_slope(curve.points, slope_window, slope_min_errors);
            s["slope"] = fit.slope;
            s["points_used"] = fit.points_used;
            s["rho_db_used"] = fit.rho_db_used;
            s["censored_points"] = fit.censored;
        } catch (const InsufficientData& e) {
            s["slope"] = nullptr;
            s["reason"] = e.what();
        }
        slopes.push_back(std::move(s));
    }
    json rates = json::array();
    for (std::size_t ri = 0; ri < stats.r_list.size(); ++ri)
        for (std::size_t pi = 0; pi < stats.rho_db_list.size(); ++pi) {
            const double realized = stats.realized_multiplexing[stats.grid_index(ri, pi)];
            rates.push_back(json{{"r", stats.r_list[ri]},
                                 {"rho_db", stats.rho_db_list[pi]},
                                 {"constellation_size", stats.constellation_sizes[stats.grid_index(ri, pi)]},
                                 {"realized_multiplexing",
                                  std::isfinite(realized) ? json(realized) : json(nullptr)}});
        }
    json douts = json::array();
    const int n = std::min(cfg.code.n_tx, cfg.rx());
    for (double r : cfg.r_list)
        douts.push_back(json{{"r", r},
                             {"d_out", (r >= 0.0 && r <= n) ? json(dout(cfg.code.n_tx, cfg.rx(), r))
                                                            : json(nullptr)}});
    std::uint64_t budget_exceeded = 0;
    for (const auto& cell : stats.cells) budget_exceeded += cell.budget_exceeded;
    return json{{"schema", kSchemaVersion},
                {"tool", kToolVersion},
                {"curves", std::move(curves)},
                {"slopes", std::move(slopes)},
                {"dout", std::move(douts)},
                {"realized_rates", std::move(rates)},
                {"budget_exceeded_total", budget_exceeded}};
}

// ---- files -----------------------------------------------------------------

// FNV-1a 64-bit content digest for the run manifest.
inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// temp file + rename, so readers never observe partial output
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f.good()) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline json run_manifest(const json& config_snapshot, std::uint64_t master_seed,
                         const std::string& started, const std::string& finished,
                         const std::vector<std::pair<std::string, std::string>>& output_digests) {
    json outputs = json::object();
    for (const auto& [file, digest] : output_digests) outputs[file] = "fnv1a64:" + digest;
    return json{{"schema", kSchemaVersion}, {"tool", kToolVersion},
                {"config", config_snapshot},  {"master_seed", master_seed},
                {"started", started},         {"finished", finished},
                {"outputs", std::move(outputs)}};
}

}  // namespace ldmt
