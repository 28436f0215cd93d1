// torusflux: pseudo-spectral diagnostics for periodic flows.
//
// Subcommands: generate, norms, mollscan, fluxscan, simulate, verify, report.
// Exit codes: 0 = all checks pass, 1 = check failure, 2 = configuration error,
// 3 = i/o error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "torusflux/fields.hpp"
#include "torusflux/flux.hpp"
#include "torusflux/mollify.hpp"
#include "torusflux/norms.hpp"
#include "torusflux/reports.hpp"
#include "torusflux/solver.hpp"
#include "torusflux/spectral_ops.hpp"
#include "torusflux/tfld.hpp"
#include "torusflux/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace torusflux;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config(const std::string& path, const std::vector<std::string>& known_keys) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    json cfg;
    try {
        is >> cfg;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        bool known = false;
        for (const auto& k : known_keys)
            if (it.key() == k) known = true;
        if (!known) throw ConfigError("unknown config key: " + it.key());
    }
    return cfg;
}

template <typename T>
void maybe_set(const json& cfg, const char* key, T& target) {
    if (cfg.contains(key)) target = cfg.at(key).get<T>();
}

std::vector<double> parse_ladder(const std::string& text) {
    double start = 0, stop = 0, ratio = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &ratio) != 3)
        throw ConfigError("ladder must be start:stop:ratio");
    if (!(start > 0) || !(stop > 0) || !(ratio > 0) || ratio == 1.0)
        throw ConfigError("ladder values must be positive with ratio != 1");
    std::vector<double> out;
    const bool down = stop < start;
    if (down != (ratio < 1.0)) ratio = 1.0 / ratio;
    for (double v = start; down ? v >= stop * (1 - 1e-12) : v <= stop * (1 + 1e-12); v *= ratio)
        out.push_back(v);
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

// list-valued key: accepts "1,2,3", a bare number, or a JSON array
std::vector<double> get_list(const json& cfg, const char* key) {
    if (!cfg.contains(key)) return {};
    const json& v = cfg.at(key);
    if (v.is_string()) return parse_list(v.get<std::string>());
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& e : v) out.push_back(e.get<double>());
        return out;
    }
    throw ConfigError(std::string("expected a number list for key: ") + key);
}

TorusField load_field(const std::string& path) {
    if (!fs::exists(path)) throw IoError("missing field file: " + path);
    try {
        return read_tfld(path);
    } catch (const std::exception& e) {
        throw IoError(e.what());
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

BesovSpec make_spec(double s, double p, const std::string& q) {
    BesovSpec spec;
    spec.s = s;
    spec.p = p;
    if (q == "inf") {
        spec.qkind = QKind::Value;
        spec.q = kInf;
    } else if (q == "cnat") {
        spec.qkind = QKind::CNat;
    } else if (q == "vmo") {
        spec.qkind = QKind::Vmo;
    } else {
        spec.qkind = QKind::Value;
        spec.q = std::stod(q);
    }
    return spec;
}

// ----------------------------------------------------------------------------

int cmd_generate(const json& cfg_in, std::uint64_t seed, const std::string& out_dir) {
    std::string kind = "random", name = "field";
    int dim = 2, n = 128;
    double alpha = 1.0 / 3.0, p = 3.0, decay = 3.0, A = 1, B = 1, C = 1;
    maybe_set(cfg_in, "kind", kind);
    maybe_set(cfg_in, "name", name);
    maybe_set(cfg_in, "dim", dim);
    maybe_set(cfg_in, "n", n);
    maybe_set(cfg_in, "alpha", alpha);
    maybe_set(cfg_in, "p", p);
    maybe_set(cfg_in, "decay", decay);
    maybe_set(cfg_in, "A", A);
    maybe_set(cfg_in, "B", B);
    maybe_set(cfg_in, "C", C);
    std::vector<double> dj = get_list(cfg_in, "dj");
    std::vector<double> mode = get_list(cfg_in, "mode");
    if (mode.empty()) mode = {4, 0};

    ensure_dir(out_dir);
    TorusGrid grid(dim, n);
    GeneratorCertificate cert;
    cert.seed = seed;
    std::optional<TorusField> field;
    if (kind == "taylor_green") {
        field = taylor_green_2d(grid);
        cert.kind = "taylor_green";
    } else if (kind == "abc") {
        field = abc_flow(grid, A, B, C);
        cert.kind = "abc";
        cert.params = {A, B, C};
    } else if (kind == "single_mode") {
        std::array<int, 3> k{0, 0, 0};
        for (std::size_t i = 0; i < mode.size() && i < 3; ++i) k[i] = static_cast<int>(mode[i]);
        field = single_mode(grid, k, 1.0, 0.0);
        cert.kind = "single_mode";
        cert.params = mode;
    } else if (kind == "lacunary") {
        if (dj.empty()) throw ConfigError("lacunary generator needs dj=\"d1,d2,...\"");
        DyadicPartition part = make_partition(grid);
        GeneratedField gen = lacunary_field(grid, dj, alpha, p, seed, part);
        field = std::move(gen.field);
        cert = std::move(gen.certificate);
        cert.seed = seed;
    } else if (kind == "random") {
        field = random_smooth_field(grid, decay, seed);
        cert.kind = "random_smooth";
        cert.params = {decay};
    } else {
        throw ConfigError("unknown generator kind: " + kind);
    }

    write_tfld(out_dir + "/" + name + ".tfld", *field);
    json meta = report_header(cfg_in, seed);
    meta["certificate"] = to_json(cert);
    write_text(out_dir + "/" + name + ".json", meta.dump(2) + "\n");
    return 0;
}

int cmd_norms(const json& cfg_in, std::uint64_t seed, const std::string& out_dir) {
    std::string field_path, q = "inf", name = "norms";
    double s = 1.0 / 3.0, p = 3.0;
    maybe_set(cfg_in, "field", field_path);
    maybe_set(cfg_in, "s", s);
    maybe_set(cfg_in, "p", p);
    maybe_set(cfg_in, "q", q);
    maybe_set(cfg_in, "name", name);
    if (field_path.empty()) throw ConfigError("norms needs field=PATH");

    TorusField f = load_field(field_path);
    DyadicPartition part = make_partition(f.grid());
    BesovSpec spec = make_spec(s, p, q);
    BesovReport report = besov_norm(f, spec, part);

    ensure_dir(out_dir);
    json out = report_header(cfg_in, seed);
    json rep = to_json(report);
    if (spec.qkind == QKind::CNat) rep["slope"] = cnat_tail_diagnostic(report).slope;
    out["report"] = rep;
    write_text(out_dir + "/" + name + ".json", out.dump(2) + "\n");
    write_text(out_dir + "/" + name + ".csv", csv_dj_rows(report));
    return 0;
}

int cmd_mollscan(const json& cfg_in, std::uint64_t seed, const std::string& out_dir) {
    std::string field_path, ladder_text, name = "mollscan";
    double s = 1.0 / 3.0, p = 2.0;
    int deriv = 0;
    maybe_set(cfg_in, "field", field_path);
    maybe_set(cfg_in, "ladder", ladder_text);
    maybe_set(cfg_in, "s", s);
    maybe_set(cfg_in, "p", p);
    maybe_set(cfg_in, "deriv", deriv);
    maybe_set(cfg_in, "name", name);
    if (field_path.empty()) throw ConfigError("mollscan needs field=PATH");

    TorusField f = load_field(field_path);
    std::vector<double> ladder =
        ladder_text.empty() ? default_eps_ladder(f.grid()) : parse_ladder(ladder_text);
    BesovSpec spec{s, p, QKind::Value, kInf};
    MollificationRates rates = lemma22_rates(f, spec, ladder, deriv);

    LogLogFit fit = fit_log2(rates.eps, rates.diff_lq);
    ensure_dir(out_dir);
    json out = report_header(cfg_in, seed);
    out["rates"] = to_json(rates);
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["r2"] = fit.r2;
    write_text(out_dir + "/" + name + ".json", out.dump(2) + "\n");
    write_text(out_dir + "/" + name + ".csv", csv_scan_rows(rates.eps, rates.diff_lq, "eps"));
    return 0;
}

int cmd_fluxscan(const json& cfg_in, std::uint64_t seed, const std::string& out_dir) {
    std::string field_path, kind = "energy_LP", ladder_text, name = "fluxscan";
    double p = 3.0, alpha = std::nan(""), beta = std::nan(""), theta = std::nan(""),
           q = std::nan("");
    maybe_set(cfg_in, "field", field_path);
    maybe_set(cfg_in, "kind", kind);
    maybe_set(cfg_in, "ladder", ladder_text);
    maybe_set(cfg_in, "p", p);
    maybe_set(cfg_in, "alpha", alpha);
    maybe_set(cfg_in, "beta", beta);
    maybe_set(cfg_in, "theta", theta);
    maybe_set(cfg_in, "q", q);
    maybe_set(cfg_in, "name", name);
    if (field_path.empty()) throw ConfigError("fluxscan needs field=PATH");

    const bool helicity = kind.rfind("helicity", 0) == 0;
    if (helicity) {
        if (!(p > 2.0 && p <= 3.0)) throw ConfigError("helicity scans require 2 < p <= 3");
    } else {
        if (!(p > 1.0 && p <= 3.0)) throw ConfigError("energy scans require 1 < p <= 3");
    }
    if (!std::isnan(theta) && !std::isnan(alpha) && !std::isnan(beta) &&
        theta * alpha + beta < 1.0)
        throw ConfigError("exponents must satisfy theta*alpha + beta >= 1");

    TorusField f = load_field(field_path);
    FluxSeries series;
    if (kind == "energy_LP" || kind == "helicity_LP") {
        DyadicPartition part = make_partition(f.grid());
        series = flux_scan_LP(f, part, helicity);
    } else if (kind == "energy_moll" || kind == "helicity_moll") {
        std::vector<double> ladder =
            ladder_text.empty() ? default_eps_ladder(f.grid()) : parse_ladder(ladder_text);
        series = flux_scan_moll(f, ladder, helicity);
    } else {
        throw ConfigError("unknown flux kind: " + kind);
    }

    ensure_dir(out_dir);
    json out = report_header(cfg_in, seed);
    out["series"] = to_json(series);
    json exps;
    auto put = [&](const char* key, double v) {
        exps[key] = std::isnan(v) ? json(nullptr) : json(v);
    };
    put("alpha", alpha);
    put("beta", beta);
    put("theta", theta);
    put("p", p);
    put("q", q);
    out["exponents"] = exps;
    out["slope"] = series.slope;
    out["budget_residual"] = nullptr; // single snapshot: no trajectory budget
    write_text(out_dir + "/" + name + ".json", out.dump(2) + "\n");
    write_text(out_dir + "/" + name + ".csv", csv_scan_rows(series.index, series.values, "index"));
    return 0;
}

int cmd_simulate(const json& cfg_in, std::uint64_t seed, const std::string& out_dir) {
    std::string field_path;
    double T = 1.0, dt = 0.005, snapshot_every = std::nan("");
    maybe_set(cfg_in, "field", field_path);
    maybe_set(cfg_in, "T", T);
    maybe_set(cfg_in, "dt", dt);
    maybe_set(cfg_in, "snapshot_every", snapshot_every);
    if (field_path.empty()) throw ConfigError("simulate needs field=PATH");

    TorusField v0 = load_field(field_path);
    RunOptions opts;
    opts.T = T;
    opts.dt = dt;
    if (!std::isnan(snapshot_every)) opts.snapshot_every = snapshot_every;
    for (double x : get_list(cfg_in, "probe_N")) opts.probe_N.push_back(static_cast<int>(x));

    RunResult res = run(v0, opts);

    ensure_dir(out_dir);
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
        char fname[32];
        std::snprintf(fname, sizeof(fname), "snap_%06zu.tfld", i + 1);
        write_tfld(out_dir + "/" + fname, res.snapshots[i].v);
    }
    std::string csv = "step,t,energy," +
                      std::string(v0.grid().dim() == 2 ? "enstrophy" : "helicity") + "\n";
    for (const auto& s : res.budgets) {
        csv += std::to_string(s.step) + "," + format_double(s.t) + "," +
               format_double(s.energy) + "," + format_double(s.second) + "\n";
    }
    write_text(out_dir + "/budgets.csv", csv);

    json out = report_header(cfg_in, seed);
    out["T"] = T;
    out["dt"] = dt;
    out["steps"] = res.steps;
    out["snapshots"] = res.snapshots.size();
    out["time_stepping_error"] = res.time_stepping_error;
    {
        json cfl = json::array();
        double cfl_max = 0.0;
        for (const auto& s : res.budgets) {
            if (s.step == 0) continue;
            cfl.push_back(s.cfl);
            cfl_max = std::max(cfl_max, s.cfl);
        }
        out["cfl_history"] = cfl;
        out["cfl_max"] = cfl_max;
    }
    json probes = json::array();
    for (const auto& pr : res.lp_probes) {
        probes.push_back(json{{"N", static_cast<int>(pr.index)},
                              {"flux_integral", pr.integral},
                              {"first_half_norm_sq", pr.first},
                              {"last_half_norm_sq", pr.last},
                              {"budget_residual", (pr.last - pr.first) + pr.integral}});
    }
    out["lp_probes"] = probes;
    write_text(out_dir + "/run.json", out.dump(2) + "\n");
    return 0;
}

int cmd_verify(std::uint64_t seed) {
    VerifyOptions opts;
    opts.seed = seed;
    auto results = run_acceptance(opts, &std::cout);
    int passed = 0;
    for (const auto& r : results)
        if (r.pass) ++passed;
    std::cout << passed << "/" << results.size() << " checks passed\n";
    return all_passed(results) ? 0 : 1;
}

int cmd_report(const json& cfg_in, std::uint64_t seed, const std::string& in_dir,
               const std::string& out_path) {
    if (!fs::is_directory(in_dir)) throw IoError("report: input directory missing: " + in_dir);
    json bundle = report_header(cfg_in, seed);
    json files = json::object();
    json csvs = json::object();
    std::vector<fs::path> jpaths, cpaths;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        if (entry.path().extension() == ".json") jpaths.push_back(entry.path());
        if (entry.path().extension() == ".csv") cpaths.push_back(entry.path());
    }
    std::sort(jpaths.begin(), jpaths.end());
    std::sort(cpaths.begin(), cpaths.end());
    for (const auto& p : jpaths) {
        std::ifstream is(p);
        json j;
        is >> j;
        files[p.filename().string()] = j;
    }
    for (const auto& p : cpaths) {
        std::ifstream is(p);
        std::string content((std::istreambuf_iterator<char>(is)),
                            std::istreambuf_iterator<char>());
        csvs[p.filename().string()] = content;
    }
    bundle["files"] = files;
    bundle["csv_files"] = csvs;
    write_text(out_path, bundle.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral scale-by-scale conservation diagnostics on the torus"};
    app.require_subcommand(1);
    app.fallthrough(true);

    std::string config_path, out_dir = "out", in_dir = ".", report_out = "bundle.json";
    std::uint64_t seed = 1;
    int jobs = 0;

    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--jobs", jobs, "worker thread count (0 = runtime default)");
    app.add_option("--out", out_dir, "output directory");

    // per-command flag overrides collected into the config object
    json flags = json::object();
    auto add_kv = [&flags](CLI::App* cmd, const char* key, const char* help) {
        cmd->add_option_function<std::string>(
            std::string("--") + key,
            [&flags, key](const std::string& v) {
                // numbers stay numbers so config and flags hash identically
                try {
                    std::size_t used = 0;
                    double d = std::stod(v, &used);
                    if (used == v.size()) {
                        flags[key] = d;
                        return;
                    }
                } catch (...) {
                }
                flags[key] = v;
            },
            help);
    };

    auto* gen = app.add_subcommand("generate", "write a synthetic field + certificate");
    for (const char* k : {"kind", "name", "dim", "n", "alpha", "p", "decay", "A", "B", "C", "dj", "mode"})
        add_kv(gen, k, "");
    auto* nrm = app.add_subcommand("norms", "Besov/Lebesgue norm report for a stored field");
    for (const char* k : {"field", "s", "p", "q", "name"}) add_kv(nrm, k, "");
    auto* mol = app.add_subcommand("mollscan", "mollification rate scan over an eps ladder");
    for (const char* k : {"field", "ladder", "s", "p", "deriv", "name"}) add_kv(mol, k, "");
    auto* flx = app.add_subcommand("fluxscan", "energy/helicity flux scan");
    for (const char* k : {"field", "kind", "ladder", "p", "alpha", "beta", "theta", "q", "name"})
        add_kv(flx, k, "");
    auto* sim = app.add_subcommand("simulate", "run the Euler stepper, write a trajectory");
    for (const char* k : {"field", "T", "dt", "snapshot_every", "probe_N"}) add_kv(sim, k, "");
    auto* ver = app.add_subcommand("verify", "run the full verification battery");
    auto* rep = app.add_subcommand("report", "merge emitted JSON reports into one bundle");
    rep->add_option("--in", in_dir, "directory of reports");
    rep->add_option("--report-out", report_out, "bundle output path");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#endif

    static const std::vector<std::string> known_keys = {
        "kind", "name", "dim", "n", "alpha", "p", "decay", "A", "B", "C", "dj", "mode",
        "field", "s", "q", "ladder", "deriv", "theta", "beta",
        "T", "dt", "snapshot_every", "probe_N"};

    try {
        json cfg = json::object();
        if (!config_path.empty()) cfg = load_config(config_path, known_keys);
        for (auto it = flags.begin(); it != flags.end(); ++it) cfg[it.key()] = it.value();

        if (gen->parsed()) return cmd_generate(cfg, seed, out_dir);
        if (nrm->parsed()) return cmd_norms(cfg, seed, out_dir);
        if (mol->parsed()) return cmd_mollscan(cfg, seed, out_dir);
        if (flx->parsed()) return cmd_fluxscan(cfg, seed, out_dir);
        if (sim->parsed()) return cmd_simulate(cfg, seed, out_dir);
        if (ver->parsed()) return cmd_verify(seed);
        if (rep->parsed()) return cmd_report(cfg, seed, in_dir, report_out);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
