// Command-line front end: spectrum / bethe / verify / scan.
#include <chrono>
#include <cstdio>
#include <algorithm>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ellspin/bethe.hpp"
#include "ellspin/chain.hpp"
#include "ellspin/result_io.hpp"
#include "ellspin/verify.hpp"

using namespace ellspin;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

json base_document(const RunConfig& cfg) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["params"] = to_json(cfg);
    return doc;
}

void finish_document(json& doc, const RunConfig& cfg, const Timer& timer) {
    if (cfg.timings) doc["timings"] = {{"total_seconds", timer.seconds()}};
    if (!cfg.out_path.empty()) write_document_atomic(doc, cfg.out_path);
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions opts;
    opts.tol = cfg.tol;
    opts.continuation_steps = cfg.continuation_steps;
    return opts;
}

int cmd_spectrum(const RunConfig& cfg) {
    Timer timer;
    const auto ed = diagonalize(build_hamiltonian(cfg.model(), cfg.M));
    std::printf("# spectrum  n=%d m=%d alpha=%g j=%g\n", cfg.N, cfg.M,
                cfg.alpha, cfg.J);
    std::printf("%4s %22s %3s %4s %12s\n", "idx", "energy", "k", "hw",
                "residual");
    for (size_t i = 0; i < ed.record.eigenvalues.size(); ++i)
        std::printf("%4zu %22.15f %3d %4s %12.3e\n", i,
                    ed.record.eigenvalues[i], ed.record.momentum_labels[i],
                    ed.highest_weight[i] ? "yes" : "no",
                    ed.record.residuals[i]);
    json doc = base_document(cfg);
    doc["spectra"] = json::array({to_json(ed.record)});
    json hw = json::array();
    for (bool b : ed.highest_weight) hw.push_back(b);
    doc["highest_weight"] = std::move(hw);
    finish_document(doc, cfg, timer);
    return 0;
}

MatchReport run_bethe(const RunConfig& cfg, const ModelParams& params) {
    EDResult ed;
    if (cfg.verify) {
        ed = diagonalize(build_hamiltonian(params, cfg.M));
    } else {
        // matching disabled: only the basis is needed (state filters)
        ed.params = params;
        ed.basis = sector_basis(params.N, cfg.M);
        ed.record.M = cfg.M;
    }
    return enumerate_and_match(params, cfg.M, cfg.parsed_l_range(), ed,
                               cfg.match_tol, solve_options(cfg));
}

void print_report(const MatchReport& rep, bool verified) {
    std::printf(
        "# bethe  n=%d m=%d alpha=%g  tuples=%d converged=%d "
        "quarantined=%d duplicates=%d\n",
        rep.params.N, rep.M, rep.params.alpha, rep.tuples_attempted,
        rep.converged, rep.quarantined, rep.duplicates);
    for (const auto& rs : rep.roots) {
        std::printf("l=(");
        for (size_t i = 0; i < rs.roots.quantum_numbers.l.size(); ++i)
            std::printf("%s%d", i ? "," : "", rs.roots.quantum_numbers.l[i]);
        std::printf(") %-11s", rs.status.c_str());
        if (rs.status == "ok") {
            std::printf(" E=%+.12f res=%.2e", rs.roots.energies.E_M,
                        rs.roots.residual_norm);
            if (rs.matched_level >= 0)
                std::printf("  -> level %d (dev %.2e)", rs.matched_level,
                            rs.deviation);
        } else if (!rs.detail.empty()) {
            std::printf(" [%s]", rs.detail.c_str());
        }
        std::printf("\n");
    }
    if (verified)
        std::printf(
            "# matched %d of %d highest-weight levels (fraction %.3f), "
            "max deviation %.3e\n",
            rep.hw_matched, rep.hw_levels, rep.hw_fraction,
            rep.max_deviation);
}

int cmd_bethe(const RunConfig& cfg) {
    Timer timer;
    const auto rep = run_bethe(cfg, cfg.model());
    print_report(rep, cfg.verify);
    json doc = base_document(cfg);
    doc["match_report"] = to_json(rep);
    finish_document(doc, cfg, timer);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    Timer timer;
    const auto checks = run_verification(cfg.model(), cfg.inject_perturbation);
    bool all = true;
    std::printf("# verify  n=%d alpha=%g\n", cfg.N, cfg.alpha);
    for (const auto& c : checks) {
        std::printf("%-34s %s  %s\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("# verify: %s\n", all ? "all checks passed" : "FAILED");
    json doc = base_document(cfg);
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name}, {"pass", c.pass},
                       {"detail", c.detail}});
    doc["checks"] = std::move(arr);
    doc["all_passed"] = all;
    finish_document(doc, cfg, timer);
    return all ? 0 : 1;
}

int cmd_scan(const RunConfig& cfg) {
    Timer timer;
    std::vector<double> grid = cfg.alpha_grid;
    if (grid.empty()) grid.push_back(cfg.alpha);
    json doc = base_document(cfg);
    json points = json::array();
    std::vector<std::vector<double>> levels;
    for (double a : grid) {
        RunConfig point = cfg;
        point.alpha = a;
        const ModelParams params{cfg.N, a, cfg.J};
        const auto rep = run_bethe(point, params);
        std::printf("== alpha = %g ==\n", a);
        print_report(rep, cfg.verify);
        json pj;
        pj["alpha"] = a;
        pj["match_report"] = to_json(rep);
        points.push_back(std::move(pj));
        if (cfg.verify) levels.push_back(rep.ed_eigenvalues);
        if (!cfg.out_path.empty()) {
            json pd = base_document(point);
            pd["match_report"] = to_json(rep);
            std::ostringstream suffix;
            suffix << cfg.out_path << ".alpha" << a;
            write_document_atomic(pd, suffix.str());
        }
    }
    doc["points"] = std::move(points);
    // level-trajectory continuity summary across the grid
    if (levels.size() > 1) {
        json traj;
        double worst_ratio = 0.0;
        for (size_t k = 1; k < levels.size(); ++k) {
            const auto& a = levels[k - 1];
            const auto& b = levels[k];
            const size_t n = std::min(a.size(), b.size());
            // typical drift of the spectrum across this grid step
            std::vector<double> drifts;
            for (size_t i = 0; i < n; ++i)
                drifts.push_back(std::abs(b[i] - a[i]));
            std::nth_element(drifts.begin(),
                             drifts.begin() + drifts.size() / 2,
                             drifts.end());
            const double med = std::max(drifts[drifts.size() / 2], 1e-9);
            for (size_t i = 0; i < n; ++i) {
                // local spacing: distance to the nearest distinct level
                double spacing = 1e300;
                for (size_t j = 0; j < a.size(); ++j) {
                    const double d = std::abs(a[j] - a[i]);
                    if (d > 1e-9) spacing = std::min(spacing, d);
                }
                if (spacing == 1e300) spacing = 1.0;
                worst_ratio =
                    std::max(worst_ratio, std::abs(b[i] - a[i]) /
                                              std::max(spacing, med));
            }
        }
        traj["max_jump_over_local_spacing"] = worst_ratio;
        traj["continuous"] = worst_ratio < 10.0;
        doc["trajectories"] = std::move(traj);
        std::printf("# trajectories: max jump / local spacing = %.3f (%s)\n",
                    worst_ratio,
                    worst_ratio < 10.0 ? "continuous" : "jump detected");
    }
    finish_document(doc, cfg, timer);
    return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool with_m) {
    sub->add_option("--n", cfg.N, "number of chain sites");
    if (with_m) sub->add_option("--m", cfg.M, "magnon count");
    sub->add_option("--alpha", cfg.alpha, "imaginary period parameter");
    sub->add_option("--j", cfg.J, "exchange coupling");
    sub->add_option("--tol", cfg.tol, "solver tolerance");
    sub->add_option("--out", cfg.out_path, "output document path");
    sub->add_flag("--timings", cfg.timings,
                  "include wall-clock timings in the document");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"elliptic-exchange spin chain: exact diagonalization and "
                 "Bethe-type transcendental system"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto* spectrum = app.add_subcommand(
        "spectrum", "exact diagonalization of one magnon sector");
    add_common(spectrum, cfg, true);

    auto* bethe = app.add_subcommand(
        "bethe", "solve the transcendental system over quantum numbers");
    add_common(bethe, cfg, true);
    bethe->add_flag("--verify", cfg.verify,
                    "match the roots against the ED spectrum");
    bethe->add_option("--l-range", cfg.l_range,
                      "'default' (0..N-1) or 'custom:a,b,c'");
    bethe->add_option("--match-tol", cfg.match_tol,
                      "energy matching tolerance");

    auto* verify = app.add_subcommand(
        "verify", "run the standing invariant suite at one parameter point");
    add_common(verify, cfg, false);
    verify
        ->add_flag("--inject-perturbation", cfg.inject_perturbation,
                   "negative control: inject a defect so checks must fail")
        ->group("");  // hidden test hook

    auto* scan = app.add_subcommand("scan", "track roots across an alpha grid");
    add_common(scan, cfg, true);
    scan->add_flag("--verify", cfg.verify,
                   "match the roots against the ED spectrum");
    scan->add_option("--l-range", cfg.l_range,
                     "'default' (0..N-1) or 'custom:a,b,c'");
    scan->add_option("--match-tol", cfg.match_tol,
                     "energy matching tolerance");
    scan->add_option("--alpha-grid", cfg.alpha_grid,
                     "comma- or space-separated alpha grid")
        ->delimiter(',');
    scan->add_option("--continuation-steps", cfg.continuation_steps,
                     "geometric continuation steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (spectrum->parsed()) cfg.command = "spectrum";
        if (bethe->parsed()) cfg.command = "bethe";
        if (verify->parsed()) cfg.command = "verify";
        if (scan->parsed()) cfg.command = "scan";
        cfg.validate();
        if (spectrum->parsed()) return cmd_spectrum(cfg);
        if (bethe->parsed()) return cmd_bethe(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
