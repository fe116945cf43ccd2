// latticedmt command-line front end.
//
// Subcommands:
//   sweep       run a Monte Carlo decoder sweep from a JSON config
//   outage      estimate empirical outage curves
//   reduce      LLL-reduce a complex basis given as JSON
//   decode-one  run a single decoder on a JSON-specified instance
//   verify      run the invariant suite (metric identity, LLL certificates,
//               CVP oracle equivalence, sigma-max bound)
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error,
// 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "latticedmt/latticedmt.hpp"
#include "latticedmt/verify.hpp"

namespace {

using namespace ldmt;

json read_json_input(const std::string& path) {
    try {
        if (path == "-") return json::parse(std::cin);
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("input", std::string("JSON parse error: ") + e.what());
    }
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
    json config_json;
    SweepConfig cfg;
    try {
        config_json = read_json_input(config_path);
        cfg = sweep_config_from_json(config_json);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        const std::string started = utc_timestamp();
        const SweepStats stats = run_sweep_stats(cfg);
        const std::string csv = sweep_csv(stats);
        const std::string summary = sweep_summary(cfg, stats).dump(2) + "\n";
        atomic_write(dir / "results.csv", csv);
        atomic_write(dir / "summary.json", summary);
        const std::string finished = utc_timestamp();
        const json manifest = run_manifest(to_json(cfg), cfg.master_seed, started, finished,
                                           {{"results.csv", fnv1a64_hex(csv)},
                                            {"summary.json", fnv1a64_hex(summary)}});
        atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
        std::cerr << "wrote " << (dir / "results.csv").string() << ", summary.json, manifest.json\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_outage(int n_tx, int n_rx, double r, const std::vector<double>& rho_db,
               std::uint64_t trials, std::uint64_t seed, double rate_offset_bits,
               const std::string& out_dir) {
    try {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        const std::string started = utc_timestamp();
        const OutageCurve curve = outage_curve(n_tx, n_rx, r, rho_db, trials, seed, rate_offset_bits);
        const std::string csv = outage_csv(curve);
        json summary{{"schema", kSchemaVersion},
                     {"tool", kToolVersion},
                     {"n_tx", n_tx},
                     {"n_rx", n_rx},
                     {"r", r},
                     {"rate_offset_bits", rate_offset_bits},
                     {"trials", trials},
                     {"master_seed", seed}};
        try {
            const auto fit = fit_diversity_slope(curve.points);
            summary["slope"] = fit.slope;
            summary["rho_db_used"] = fit.rho_db_used;
        } catch (const InsufficientData& e) {
            summary["slope"] = nullptr;
            summary["reason"] = e.what();
        }
        summary["d_out"] = dout(n_tx, n_rx, r);
        const std::string summary_text = summary.dump(2) + "\n";
        atomic_write(dir / "outage.csv", csv);
        atomic_write(dir / "outage_summary.json", summary_text);
        const std::string finished = utc_timestamp();
        const json manifest =
            run_manifest(summary, seed, started, finished,
                         {{"outage.csv", fnv1a64_hex(csv)},
                          {"outage_summary.json", fnv1a64_hex(summary_text)}});
        atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const OutOfRange& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_reduce(const std::string& in_path, double delta) {
    json input;
    CMat b;
    try {
        input = read_json_input(in_path);
        if (!input.contains("b")) throw ConfigError("b", "missing basis matrix");
        b = cmat_from_json(input["b"]);
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    try {
        const double defect_before = orthogonality_defect(b);
        const ReducedBasis red = lll_reduce(b, delta);
        emit(json{{"schema", kSchemaVersion},
                  {"b_tilde", to_json(red.B_tilde)},
                  {"t", to_json(red.T)},
                  {"certificate",
                   {{"size_reduced", red.certificate.size_reduced},
                    {"lovasz_ok", red.certificate.lovasz_ok}}},
                  {"delta", red.delta},
                  {"swaps", red.swaps},
                  {"defect_before", defect_before},
                  {"defect_after", orthogonality_defect(red.B_tilde)}});
        return 0;
    } catch (const SingularBasis& e) {
        std::cerr << "input error: SingularBasis: " << e.what() << "\n";
        return 2;
    } catch (const OutOfRange& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_decode_one(const std::string& in_path) {
    json input;
    CMat f;
    CVec y;
    std::string decoder;
    double alpha = 0.0;
    try {
        input = read_json_input(in_path);
        for (const char* field : {"f", "y", "decoder"})
            if (!input.contains(field)) throw ConfigError(field, "missing");
        f = cmat_from_json(input["f"]);
        y = cvec_from_json(input["y"]);
        decoder = input["decoder"].get<std::string>();
        alpha = input.value("alpha", 0.0);
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    try {
        const double delta_lll = input.value("delta_lll", 0.75);
        const std::uint64_t budget = input.value("node_budget", kDefaultNodeBudget);

        // optional constellation context for boundary flags and ml
        CodeSpec spec;
        BoundaryContext ctx;
        std::vector<DataVector> points;
        if (input.contains("code")) {
            spec = code_from_config(input["code"]);
            const auto cset = make_constellation_spec(
                shape_from_string(input.value("shape", std::string("spherical"))),
                input.value("r", 0.0), input.value("rho", 1.0));
            ctx = BoundaryContext{&spec, cset};
            if (decoder == "ml") points = enumerate_constellation(spec, cset);
        }

        DecodeOutcome out;
        if (decoder == "ml") {
            if (points.empty())
                throw ConfigError("code", "ml decoding needs a code and constellation context");
            out = ml_decode(f, y, points);
        } else if (decoder == "naive") {
            out = naive_lattice_decode(f, y, ctx, budget);
        } else if (decoder == "reg") {
            out = regularized_lattice_decode(f, y, alpha, ctx, budget);
        } else if (decoder == "cw_reg") {
            if (!input.contains("code") || !input.contains("theta") || !input.contains("rho"))
                throw ConfigError("code", "cw_reg needs code, theta, and rho");
            out = codeword_regularized_decode(f, y, spec, input["theta"].get<double>(),
                                              input["rho"].get<double>(), ctx, budget);
        } else if (decoder == "mmse") {
            out = linear_mmse_decode(f, y, alpha, ctx);
        } else if (decoder == "lr_mmse") {
            out = lr_mmse_decode(f, y, alpha, delta_lll, ctx);
        } else {
            throw ConfigError("decoder", "unknown decoder '" + decoder + "'");
        }
        emit(to_json(out));
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const OutOfRange& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_verify(bool quick) {
    const auto results = verify::run_verification(quick);
    bool all_pass = true;
    std::printf("%-18s %10s %9s %9s  %s\n", "check", "instances", "failures", "seconds", "detail");
    for (const auto& res : results) {
        all_pass = all_pass && res.pass;
        std::printf("%-18s %10llu %9llu %9.2f  %s [%s]\n", res.name.c_str(),
                    static_cast<unsigned long long>(res.instances),
                    static_cast<unsigned long long>(res.failures), res.seconds,
                    res.detail.c_str(), res.pass ? "PASS" : "FAIL");
    }
    std::printf("verify: %s\n", all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice space-time codes, lattice decoders, and DMT measurements"};
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo decoder sweep from a JSON config");
    std::string sweep_config;
    std::string sweep_out = ".";
    sweep->add_option("config", sweep_config, "path to the sweep config JSON (or - for stdin)")
        ->required();
    sweep->add_option("--out-dir", sweep_out, "output directory (default .)");

    auto* outage = app.add_subcommand("outage", "estimate an empirical outage curve");
    int o_ntx = 2, o_nrx = 2;
    double o_r = 0.0, o_offset = 0.0;
    std::vector<double> o_grid;
    std::uint64_t o_trials = 100000, o_seed = 1;
    std::string o_out = ".";
    outage->add_option("--n-tx", o_ntx, "transmit antennas")->required();
    outage->add_option("--n-rx", o_nrx, "receive antennas")->required();
    outage->add_option("--r", o_r, "multiplexing gain")->required();
    outage->add_option("--rho-db", o_grid, "SNR grid in dB")->required()->expected(-1);
    outage->add_option("--trials", o_trials, "trials per grid point");
    outage->add_option("--seed", o_seed, "master seed");
    outage->add_option("--rate-offset-bits", o_offset,
                       "fixed rate offset in bits added to r*log2(rho); keeps the outage event "
                       "measurable at r = 0");
    outage->add_option("--out-dir", o_out, "output directory (default .)");

    auto* reduce = app.add_subcommand("reduce", "LLL-reduce a complex basis from JSON {\"b\": rows}");
    std::string r_in = "-";
    double r_delta = 0.75;
    reduce->add_option("--in", r_in, "input JSON path (default - for stdin)");
    reduce->add_option("--delta", r_delta, "Lovasz parameter in (1/2, 1)");

    auto* decode = app.add_subcommand("decode-one", "decode a single JSON instance");
    std::string d_in = "-";
    decode->add_option("--in", d_in, "input JSON path (default - for stdin)");

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant verification suite");
    bool v_quick = false;
    verify_cmd->add_flag("--quick", v_quick, "reduced instance counts (< 1 minute)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out);
        if (outage->parsed())
            return cmd_outage(o_ntx, o_nrx, o_r, o_grid, o_trials, o_seed, o_offset, o_out);
        if (reduce->parsed()) return cmd_reduce(r_in, r_delta);
        if (decode->parsed()) return cmd_decode_one(d_in);
        if (verify_cmd->parsed()) return cmd_verify(v_quick);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
