// nlslab — numerical laboratory for the 3D focusing cubic NLS outside a
// spherical obstacle (and on free space): ground-state thresholds,
// conservative evolution, Morawetz/interaction-Morawetz diagnostics, and
// the scattering/blowup detector.
//
//   nlslab <subcommand> --config PATH [--out DIR] [--resume PATH]
//                       [--workers N] [--seed N]
//
// Exit codes: 0 success, 1 runtime/numerical failure, 2 config error,
// 3 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include "nlslab/checkpoint.hpp"
#include "nlslab/config.hpp"
#include "nlslab/detector.hpp"
#include "nlslab/evolve.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/morawetz.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nlslab;

namespace {

struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

std::string out_dir(const std::string& flag_value) {
    if (const char* env = std::getenv("NLSLAB_OUT"); env && *env) return env;
    return flag_value.empty() ? "." : flag_value;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw CliError(1, "cannot write " + p.string());
    out << text;
}

std::string fmtd(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json verdict_json(const Verdict& v) {
    json j;
    j["kind"] = to_string(v.kind);
    j["evidence"] = v.evidence;
    if (v.has_window) {
        j["window"] = {{"t_start", v.window_start},
                       {"t_end", v.window_end},
                       {"eps", v.eps}};
    }
    return j;
}

json summarize(const TimeSeries& series, const RunConfig& cfg,
               const ThresholdConstants& tc) {
    json j;
    j["rows"] = series.rows.size();
    j["termination"] = series.termination == Termination::Blowup ? "blowup" : "completed";
    if (!series.reason.empty()) j["reason"] = series.reason;

    const auto [dm, de] = conservation_report(series);
    j["mass_drift"] = dm;
    j["energy_drift"] = de;

    const TrackResult track = kinetic_mass_track(series, tc);
    j["max_product_over_threshold"] = track.max_product / tc.k_threshold;
    j["delta_prime_empirical"] = track.delta_prime_empirical;
    if (!series.rows.empty()) j["final_l4"] = series.rows.back().l4;

    json flux = json::object();
    for (double t0 : cfg.t0_list) {
        if (series.rows.size() >= 2 &&
            series.rows.back().t - series.rows.front().t >= t0) {
            flux[fmtd(t0)] = local_smoothing_average(series, t0);
        }
    }
    j["flux_averages"] = flux;

    const Verdict v = scattering_verdict(series, cfg.eps, cfg.window_len);
    j["verdict"] = verdict_json(v);
    return j;
}

int cmd_ground_state(const RunConfig& cfg, const std::string& out) {
    auto grid = make_grid(0.0, cfg.gs_r_max, cfg.gs_n);
    const GroundState gs = find_ground_state(cfg.gs_tol, grid);
    const ThresholdConstants tc = thresholds(gs, cfg.delta_prime, cfg.rho);
    const auto [res1, res2] = pohozaev_residuals(gs);

    json j;
    j["a0"] = gs.a0;
    j["mass"] = gs.norms.mass;
    j["kinetic"] = gs.norms.kinetic;
    j["l4_fourth"] = gs.norms.l4_fourth;
    j["energy"] = gs.norms.energy;
    j["em_threshold"] = tc.em_threshold;
    j["k_threshold"] = tc.k_threshold;
    j["gn_constant"] = tc.gn_constant;
    j["residuals"] = {{"pohozaev_kinetic", res1}, {"pohozaev_l4", res2}};
    j["match_radius"] = gs.match_radius;

    fs::create_directories(out);
    write_text(fs::path(out) / "ground_state.json", j.dump(2) + "\n");

    std::ofstream csv(fs::path(out) / "ground_state.csv");
    csv << "r,Q\n";
    for (int i = 0; i < grid->n; ++i) {
        const double q = grid->r[i] > 0.0 ? gs.profile[i] / grid->r[i] : gs.a0;
        csv << fmtd(grid->r[i]) << ',' << fmtd(q) << "\n";
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_evolve(const RunConfig& cfg, const std::string& out, const std::string& resume) {
    EvolveResult res;
    if (resume.empty()) {
        res = evolve(cfg);
    } else {
        const SimState start = load_checkpoint(resume);
        res = evolve_from(cfg, start);
    }

    fs::create_directories(out);
    write_series_csv((fs::path(out) / "series.csv").string(), res.series);
    save_checkpoint((fs::path(out) / "checkpoint.json").string(), res.final_state);

    auto gsgrid = make_grid(0.0, cfg.gs_r_max, cfg.gs_n);
    const GroundState gs = find_ground_state(cfg.gs_tol, gsgrid);
    const ThresholdConstants tc = thresholds(gs, cfg.delta_prime, cfg.rho);

    json j = summarize(res.series, cfg, tc);
    const RadialField u0 = build_initial_data(res.grid, cfg.init, cfg.gs_tol);
    const ClassifyResult cls = classify_initial(u0, tc);
    j["initial_class"] = cls.cls == InitialClass::Below    ? "Below"
                         : cls.cls == InitialClass::Above ? "Above"
                                                          : "NearThreshold";
    j["em_margin"] = cls.em_margin;
    j["k_margin"] = cls.k_margin;
    write_text(fs::path(out) / "summary.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";

    if (cls.cls == InitialClass::Below && res.series.termination == Termination::Blowup) {
        std::cerr << "error: below-threshold run terminated in blowup ("
                  << res.series.reason << ")\n";
        return 1;
    }
    return 0;
}

int cmd_diagnose(const RunConfig& cfg, const std::string& series_path,
                 const std::string& out, bool dump_cutoffs) {
    fs::create_directories(out);
    if (dump_cutoffs) {
        const CutoffFamily cf = build_cutoffs(cfg.cutoff_R, cfg.cutoff_eta,
                                              cfg.cutoff_n_tab);
        std::ofstream csv(fs::path(out) / "cutoffs.csv");
        csv << "r,chi,phi,phi1,psi\n";
        for (int i = 0; i < cf.n_tab; ++i) {
            const double r = cf.rho[i] * cf.R;
            csv << fmtd(r) << ',' << fmtd(cf.chi(cf.rho[i])) << ','
                << fmtd(cf.phi_tab[i]) << ',' << fmtd(cf.phi1_tab[i]) << ','
                << fmtd(cf.psi_tab[i]) << "\n";
        }
        if (series_path.empty()) return 0;
    }
    TimeSeries series = read_series_csv(series_path);
    series.r0 = cfg.r0;  // mode comes from the config
    const Verdict v = scattering_verdict(series, cfg.eps, cfg.window_len);
    const json j = verdict_json(v);
    write_text(fs::path(out) / "verdict.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_report(const RunConfig& cfg, const std::string& series_path,
               const std::string& out) {
    TimeSeries series = read_series_csv(series_path);
    series.r0 = cfg.r0;
    auto gsgrid = make_grid(0.0, cfg.gs_r_max, cfg.gs_n);
    const GroundState gs = find_ground_state(cfg.gs_tol, gsgrid);
    const ThresholdConstants tc = thresholds(gs, cfg.delta_prime, cfg.rho);
    const json j = summarize(series, cfg, tc);
    fs::create_directories(out);
    write_text(fs::path(out) / "report.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_text, const std::string& param,
              const std::vector<double>& values, const std::string& out,
              int workers) {
    // validate the parameter path before spawning anything
    {
        const std::string probe = config_text + "\n" + param + " = " +
                                  (values.empty() ? "1.0" : fmtd(values.front())) + "\n";
        config_from_text(probe);  // throws ConfigError on unknown key
    }
    fs::create_directories(out);
    if (values.empty()) {
        std::ofstream csv(fs::path(out) / "sweep_summary.csv");
        csv << "value,class,verdict,max_product_over_threshold,final_l4\n";
        return 0;
    }

    auto gsgrid = make_grid(0.0, 30.0, 30001);
    const GroundState gs = find_ground_state(1e-12, gsgrid);
    const ThresholdConstants tc = thresholds(gs);

    struct Row {
        double value = 0.0;
        std::string cls, verdict;
        double product_ratio = 0.0, final_l4 = 0.0;
    };
    std::vector<Row> rows(values.size());
    std::atomic<std::size_t> next{0};
    std::mutex io;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            const std::string text =
                config_text + "\n" + param + " = " + fmtd(values[i]) + "\n";
            const RunConfig cfg = config_from_text(text);
            EvolveResult res = evolve(cfg);
            const RadialField u0 = build_initial_data(res.grid, cfg.init, cfg.gs_tol);
            const ClassifyResult cls = classify_initial(u0, tc);
            const Verdict v = scattering_verdict(res.series, cfg.eps, cfg.window_len);
            const TrackResult track = kinetic_mass_track(res.series, tc);
            Row row;
            row.value = values[i];
            row.cls = cls.cls == InitialClass::Below    ? "Below"
                      : cls.cls == InitialClass::Above ? "Above"
                                                       : "NearThreshold";
            row.verdict = to_string(v.kind);
            row.product_ratio = track.max_product / tc.k_threshold;
            row.final_l4 = res.series.rows.empty() ? 0.0 : res.series.rows.back().l4;
            rows[i] = row;
            char name[32];
            std::snprintf(name, sizeof name, "sweep_%03zu.csv", i);
            std::lock_guard<std::mutex> lock(io);
            write_series_csv((fs::path(out) / name).string(), res.series);
        }
    };
    std::vector<std::thread> pool;
    const int nw = std::max(1, workers);
    for (int k = 0; k < nw; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ofstream csv(fs::path(out) / "sweep_summary.csv");
    csv << "value,class,verdict,max_product_over_threshold,final_l4\n";
    for (const auto& row : rows) {
        csv << fmtd(row.value) << ',' << row.cls << ',' << row.verdict << ','
            << fmtd(row.product_ratio) << ',' << fmtd(row.final_l4) << "\n";
        std::cout << row.value << " -> " << row.cls << " / " << row.verdict << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------------
// verify: the built-in identity suite on the shipped defaults
// ----------------------------------------------------------------------

struct VerifyReport {
    int failures = 0;
    void check(const char* name, bool ok, const std::string& detail) {
        std::printf("%-52s %s  (%s)\n", name, ok ? "PASS" : "FAIL", detail.c_str());
        if (!ok) ++failures;
    }
};

int cmd_verify(const RunConfig& cfg, std::uint64_t seed) {
    VerifyReport rep;
    char buf[128];

    auto grid = make_grid(0.0, cfg.gs_r_max, cfg.gs_n);
    const GroundState gs = find_ground_state(cfg.gs_tol, grid);
    const auto [res1, res2] = pohozaev_residuals(gs);
    std::snprintf(buf, sizeof buf, "res1=%.2e res2=%.2e", res1, res2);
    rep.check("pohozaev identities (rel 1e-6)", res1 < 1e-6 && res2 < 1e-6, buf);

    const ThresholdConstants tc = thresholds(gs, cfg.delta_prime, cfg.rho);
    const double em_rel =
        std::abs(tc.em_threshold - 0.5 * gs.norms.mass * gs.norms.mass) /
        tc.em_threshold;
    std::snprintf(buf, sizeof buf, "rel=%.2e", em_rel);
    rep.check("threshold identity E(Q)M(Q)=M(Q)^2/2 (rel 1e-6)", em_rel < 1e-6, buf);

    const double grad_res = gradient_identity_residual(build_cutoffs(1.0, 0.1, 4096));
    std::snprintf(buf, sizeof buf, "sup=%.2e", grad_res);
    rep.check("cutoff gradient identity (sup 1e-4)", grad_res < 1e-4, buf);

    const double gnq = gn_check(gs.as_field(), tc);
    std::snprintf(buf, sizeof buf, "ratio=%.6f", gnq);
    rep.check("Gagliardo-Nirenberg equality at Q (1e-4)", std::abs(gnq - 1.0) < 1e-4, buf);

    {
        auto g2 = make_grid(0.0, 24.0, 4001);
        std::mt19937_64 eng(seed);
        auto uni = [&](double lo, double hi) {
            return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
        };
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            RadialField f(g2);
            const int terms = 1 + static_cast<int>(uni(0.0, 3.999));
            for (int m = 0; m < terms; ++m) {
                const double amp = uni(-2.0, 2.0), width = uni(0.3, 3.0),
                             center = uni(0.0, 6.0);
                for (int j = 0; j < g2->n; ++j) {
                    const double z = (g2->r[j] - center) / width;
                    f.v[j] += complexd{g2->r[j] * amp * std::exp(-z * z), 0.0};
                }
            }
            f.enforce_boundary();
            if (norms(f).mass < 1e-10) continue;
            worst = std::max(worst, gn_check(f, tc));
        }
        std::snprintf(buf, sizeof buf, "max ratio=%.10f", worst);
        rep.check("Gagliardo-Nirenberg bound, 100 random fields", worst <= 1.0 + 1e-10,
                  buf);
    }

    {
        // short conservative exterior run: rate identity, conservation, Hoelder
        RunConfig run;
        run.r0 = 1.0;
        run.r_max = 40.0;
        run.n = 1561;
        run.dt = 0.01;
        run.t_end = 2.0;
        run.sample_every = 5;
        run.init.kind = InitialData::Kind::Gaussian;
        run.init.amplitude = 1.0;
        run.init.width = 1.3;
        run.init.center = 4.0;
        run.sponge_enabled = false;
        run.cutoff_R = 6.0;
        run.cutoff_eta = 0.1;
        run.cutoff_n_tab = 2048;
        const EvolveResult res = evolve(run);
        const auto& rows = res.series.rows;
        double worst = 0.0, scale = 0.0;
        for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
            const double dmdt =
                (rows[k + 1].action - rows[k - 1].action) / (rows[k + 1].t - rows[k - 1].t);
            const double sum = rows[k].term_bulk + rows[k].term_boundary +
                               rows[k].term_quartic_err + rows[k].term_gradient_err;
            worst = std::max(worst, std::abs(dmdt - sum));
            scale = std::max(scale, std::abs(dmdt) + std::abs(sum));
        }
        std::snprintf(buf, sizeof buf, "rel=%.2e", worst / scale);
        rep.check("Morawetz rate identity (rel 1e-2)", worst / scale < 1e-2, buf);

        const auto [dm, de] = conservation_report(res.series);
        std::snprintf(buf, sizeof buf, "mass=%.2e energy=%.2e", dm, de);
        rep.check("conservation on sponge-free run", dm < 1e-10 && de < 1e-3, buf);

        bool hold = true;
        double worst_gap = 0.0;
        for (double t1 = 0.0; t1 + 0.5 <= 2.0 + 1e-9; t1 += 0.25) {
            const auto [lhs, rhs] = interpolation_l5(res.series, t1, t1 + 0.5);
            worst_gap = std::max(worst_gap, lhs - rhs);
            if (lhs > rhs + 1e-10) hold = false;
        }
        std::snprintf(buf, sizeof buf, "max lhs-rhs=%.2e", worst_gap);
        rep.check("Hoelder interpolation L5 <= L3^(3/7) L10^(4/7)", hold, buf);
    }

    std::printf("verify: %d failure(s)\n", rep.failures);
    return rep.failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlslab: radial NLS laboratory (exterior-domain Dirichlet / free space)"};
    app.require_subcommand(1);

    std::string config_path, out_flag, resume_path, series_path, param;
    std::vector<double> values;
    int workers = 1;
    std::uint64_t seed = 12345;
    bool dump_cutoffs = false;

    auto* gs_cmd = app.add_subcommand("ground-state", "compute Q and its constants");
    gs_cmd->add_option("--config", config_path);
    gs_cmd->add_option("--out", out_flag);

    auto* ev_cmd = app.add_subcommand("evolve", "run the configured experiment");
    ev_cmd->add_option("--config", config_path)->required();
    ev_cmd->add_option("--out", out_flag);
    ev_cmd->add_option("--resume", resume_path);

    auto* di_cmd = app.add_subcommand("diagnose", "verdict from a series CSV");
    di_cmd->add_option("--config", config_path)->required();
    di_cmd->add_option("--series", series_path);
    di_cmd->add_option("--out", out_flag);
    di_cmd->add_flag("--dump-cutoffs", dump_cutoffs);

    auto* re_cmd = app.add_subcommand("report", "summary JSON from a series CSV");
    re_cmd->add_option("--config", config_path)->required();
    re_cmd->add_option("--series", series_path)->required();
    re_cmd->add_option("--out", out_flag);

    auto* sw_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sw_cmd->add_option("--config", config_path)->required();
    sw_cmd->add_option("--param", param)->required();
    sw_cmd->add_option("--values", values)->required()->delimiter(',');
    sw_cmd->add_option("--out", out_flag);
    sw_cmd->add_option("--workers", workers);

    auto* ve_cmd = app.add_subcommand("verify", "run the invariant suite");
    ve_cmd->add_option("--config", config_path);
    ve_cmd->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        std::string config_text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file: " + config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            config_text = ss.str();
            cfg = config_from_text(config_text);
        }
        const std::string out = out_dir(out_flag);

        if (gs_cmd->parsed()) return cmd_ground_state(cfg, out);
        if (ev_cmd->parsed()) return cmd_evolve(cfg, out, resume_path);
        if (di_cmd->parsed()) {
            if (series_path.empty() && !dump_cutoffs)
                throw CliError(2, "diagnose: need --series or --dump-cutoffs");
            return cmd_diagnose(cfg, series_path, out, dump_cutoffs);
        }
        if (re_cmd->parsed()) return cmd_report(cfg, series_path, out);
        if (sw_cmd->parsed()) return cmd_sweep(config_text, param, values, out, workers);
        if (ve_cmd->parsed()) return cmd_verify(cfg, seed);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
