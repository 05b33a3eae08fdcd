// fecpareto: concatenated RS + soft-decision BCH code analysis over PAM4-AWGN.
//
// Subcommands: inner-sim, fer, gap, csl, search, pareto, info.
// Exit status: 0 success, 2 usage error, 3 compute error, 4 missing cache
// entries (the needed inner-sim commands are printed).

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fecpareto/code_search.hpp"
#include "fecpareto/cost_model.hpp"
#include "fecpareto/fer_analysis.hpp"
#include "fecpareto/inner_mc.hpp"

using namespace fecpareto;

namespace {

struct GlobalOpts {
    std::string cache_path;
    bool no_timestamp = false;
    int workers = 1;
    uint64_t seed = 1;
};

std::string default_cache_path() {
    const char* env = std::getenv("FECPARETO_CACHE");
    return env ? env : "ucache.jsonl";
}

// every table-producing subcommand goes through this so outputs stay
// reproducible byte for byte under --no-timestamp
class TableWriter {
public:
    TableWriter(const std::string& path, bool no_timestamp) {
        if (!path.empty()) {
            file_.open(path, std::ios::trunc);
            if (!file_) throw ComputeError("cannot open output file " + path);
        }
        if (!no_timestamp) {
            std::time_t now = std::time(nullptr);
            char buf[64];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
            line(std::string("# generated: ") + buf);
        }
    }
    void line(const std::string& s) { (file_.is_open() ? file_ : std::cout) << s << "\n"; }

private:
    std::ofstream file_;
};

Scheme parse_scheme(const std::string& s) {
    if (s == "bicm") return Scheme::BICM;
    if (s == "mlc") return Scheme::MLC;
    throw ConfigError("scheme must be 'bicm' or 'mlc', got '" + s + "'");
}

FrameGeometry make_geometry(const std::string& scheme, int b, int t, int n, int N, int T, int B) {
    BchSpec spec = design_bch(b, t, n);
    return build_geometry(make_outer(N, T, B), InnerCode::of(spec), parse_scheme(scheme));
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"concatenated RS-SDBCH code analysis over PAM4-AWGN"};
    app.require_subcommand(1);

    GlobalOpts g;
    g.cache_path = default_cache_path();
    app.add_option("--cache", g.cache_path, "U-distribution cache file");
    app.add_flag("--no-timestamp", g.no_timestamp, "omit the timestamp header line");
    app.add_option("--workers", g.workers, "worker threads (results are worker-count independent)");
    app.add_option("--seed", g.seed, "master seed; all randomness derives from it");

    // ---- inner-sim -------------------------------------------------------
    auto* sim = app.add_subcommand("inner-sim", "Monte-Carlo estimation of the U distribution");
    std::string sim_scheme = "mlc";
    int sim_b = 6, sim_t = 1, sim_n = 57, sim_J = 2;
    std::vector<double> sim_snrs;
    uint64_t sim_trials = 1000000, sim_min_events = 0, sim_max_trials = 0;
    sim->add_option("--scheme", sim_scheme, "bicm or mlc")->required();
    sim->add_option("--b", sim_b, "field extension degree (5..11)")->required();
    sim->add_option("--t", sim_t, "error-correcting radius (1..3)")->required();
    sim->add_option("--n", sim_n, "inner block length incl. extension bit")->required();
    sim->add_option("--J", sim_J, "Chase test bits (0..6)")->required();
    sim->add_option("--snr", sim_snrs, "SNR points in dB (repeatable)")->required();
    sim->add_option("--trials", sim_trials, "trials per SNR point");
    sim->add_option("--min-events", sim_min_events, "optional stopping rule: minimum U>0 events");
    sim->add_option("--max-trials", sim_max_trials, "trial cap for the stopping rule");

    // ---- fer -------------------------------------------------------------
    auto* fer = app.add_subcommand("fer", "semi-analytic FER over an SNR grid");
    std::string fer_scheme = "mlc", fer_out;
    int fer_b = 6, fer_t = 1, fer_n = 57, fer_J = 2, fer_N = 544, fer_T = 15, fer_B = 10;
    double fer_start = 14.0, fer_stop = 16.0, fer_step = 0.1;
    uint64_t fer_sim_trials = 0;
    fer->add_option("--scheme", fer_scheme)->required();
    fer->add_option("--b", fer_b)->required();
    fer->add_option("--t", fer_t)->required();
    fer->add_option("--n", fer_n)->required();
    fer->add_option("--J", fer_J)->required();
    fer->add_option("--N", fer_N, "outer RS length")->required();
    fer->add_option("--T", fer_T, "outer RS radius")->required();
    fer->add_option("--B", fer_B, "outer RS symbol bits");
    fer->add_option("--snr-start", fer_start);
    fer->add_option("--snr-stop", fer_stop);
    fer->add_option("--snr-step", fer_step);
    fer->add_option("--sim-trials", fer_sim_trials,
                    "simulate missing cache entries with this many trials (0: cache only)");
    fer->add_option("--out", fer_out, "output file (default stdout)");

    // ---- gap -------------------------------------------------------------
    auto* gap = app.add_subcommand("gap", "gap to the constrained Shannon limit");
    std::string gap_scheme = "mlc", gap_out;
    int gap_b = 6, gap_t = 1, gap_n = 57, gap_J = 2, gap_N = 544, gap_T = 15, gap_B = 10;
    double gap_target = 1e-13;
    uint64_t gap_sim_trials = 0;
    gap->add_option("--scheme", gap_scheme)->required();
    gap->add_option("--b", gap_b)->required();
    gap->add_option("--t", gap_t)->required();
    gap->add_option("--n", gap_n)->required();
    gap->add_option("--J", gap_J)->required();
    gap->add_option("--N", gap_N)->required();
    gap->add_option("--T", gap_T)->required();
    gap->add_option("--B", gap_B);
    gap->add_option("--target", gap_target, "target FER");
    gap->add_option("--sim-trials", gap_sim_trials);
    gap->add_option("--out", gap_out);

    // ---- csl -------------------------------------------------------------
    auto* csl = app.add_subcommand("csl", "PAM4 constrained capacity and its inverse");
    double csl_snr_in = 1e9, csl_se = 0.0, csl_rate = 0.0;
    csl->add_option("--snr", csl_snr_in, "print capacity (bits/PAM4 symbol) at this SNR");
    csl->add_option("--se", csl_se, "print the SNR where capacity equals this spectral efficiency");
    csl->add_option("--rate", csl_rate, "print the CSL SNR for overall rate R (SE = 2R)");

    // ---- search ----------------------------------------------------------
    auto* search = app.add_subcommand("search", "enumerate and evaluate the code space");
    std::string search_schemes = "both", search_out = "results.txt", search_ck, search_preset;
    std::string sb_list, st_list, sn_list, sT_list, sN_list, sJ_list;
    bool search_resume = false;
    uint64_t search_sim_trials = 1000000;
    double search_target = 1e-13;
    search->add_option("--schemes", search_schemes, "both, bicm or mlc");
    search->add_option("--preset", search_preset, "named restriction: table1 or desk");
    search->add_option("--b-list", sb_list, "comma-separated b values");
    search->add_option("--t-list", st_list);
    search->add_option("--n-list", sn_list);
    search->add_option("--T-list", sT_list);
    search->add_option("--N-list", sN_list);
    search->add_option("--J-list", sJ_list);
    search->add_option("--out", search_out, "results table path");
    search->add_option("--checkpoint", search_ck, "checkpoint file path");
    search->add_flag("--resume", search_resume, "resume from the checkpoint");
    search->add_option("--sim-trials", search_sim_trials);
    search->add_option("--target", search_target);

    // ---- pareto ----------------------------------------------------------
    auto* pareto = app.add_subcommand("pareto", "reduce a results table to Pareto frontiers");
    std::string pareto_in, pareto_prefix = "front";
    std::string pareto_caps = "20000,60000,150000";
    pareto->add_option("--in", pareto_in, "results table")->required();
    pareto->add_option("--out-prefix", pareto_prefix, "frontier file prefix");
    pareto->add_option("--caps", pareto_caps, "comma-separated latency caps in bits");

    // ---- info ------------------------------------------------------------
    auto* info = app.add_subcommand("info", "code and geometry summary");
    std::string info_scheme = "mlc";
    int info_b = 6, info_t = 1, info_n = 57, info_N = 0, info_T = 0, info_J = 2, info_B = 10;
    info->add_option("--scheme", info_scheme)->required();
    info->add_option("--b", info_b)->required();
    info->add_option("--t", info_t)->required();
    info->add_option("--n", info_n)->required();
    info->add_option("--N", info_N);
    info->add_option("--T", info_T);
    info->add_option("--J", info_J);
    info->add_option("--B", info_B);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (sim->parsed()) {
        SchemeConfig cfg;
        cfg.scheme = parse_scheme(sim_scheme);
        cfg.spec = design_bch(sim_b, sim_t, sim_n);
        cfg.J = sim_J;
        validate_config(cfg);
        UCache cache(g.cache_path);
        for (double snr : sim_snrs) {
            SimOptions opt;
            opt.trials = sim_trials;
            opt.master_seed = g.seed;
            opt.workers = g.workers;
            opt.min_events = sim_min_events;
            opt.max_trials = sim_max_trials;
            UDistribution d = simulate_u(cfg, snr, opt);
            bool stored = cache.store(d);
            std::cout << fmt("%s snr=%.4f trials=%llu Pr(U=0)=%.8g E[U]=%.8g%s\n",
                             UCacheKey::of(d).describe().c_str(), snr,
                             static_cast<unsigned long long>(d.trials), d.pr_zero(), d.mean(),
                             stored ? "" : " (kept existing record with more trials)");
        }
        cache.save();
        return 0;
    }

    if (fer->parsed()) {
        FrameGeometry geom = make_geometry(fer_scheme, fer_b, fer_t, fer_n, fer_N, fer_T, fer_B);
        UProvider provider(g.cache_path,
                           {fer_sim_trials, g.seed, g.workers, 0, 0});
        std::vector<double> grid;
        for (double s = fer_start; s <= fer_stop + 1e-9; s += fer_step) grid.push_back(s);
        auto curve = fer_curve(geom, fer_J, grid, provider);
        TableWriter w(fer_out, g.no_timestamp);
        w.line("# columns: snr_db fer_raw fer_clipped");
        for (const auto& p : curve)
            w.line(fmt("%.4f %.8e %.8e", p.snr_db, p.fer_raw, p.fer_clipped));
        return 0;
    }

    if (gap->parsed()) {
        FrameGeometry geom = make_geometry(gap_scheme, gap_b, gap_t, gap_n, gap_N, gap_T, gap_B);
        UProvider provider(g.cache_path,
                           {gap_sim_trials, g.seed, g.workers, 0, 0});
        GapResult r = gap_to_csl(geom, gap_J, provider, gap_target);
        TableWriter w(gap_out, g.no_timestamp);
        w.line("# columns: gap_db snr_at_target snr_csl spectral_efficiency target");
        w.line(fmt("%.6f %.6f %.6f %.6f %.3e", r.gap_db, r.snr_at_target, r.snr_csl,
                   r.spectral_efficiency, r.target));
        return 0;
    }

    if (csl->parsed()) {
        TableWriter w("", g.no_timestamp);
        if (csl_snr_in < 1e8) {
            w.line(fmt("%.6f", pam4_capacity(csl_snr_in)));
        } else if (csl_se > 0.0) {
            w.line(fmt("%.4f", csl_snr(csl_se)));
        } else if (csl_rate > 0.0) {
            w.line(fmt("%.4f", csl_snr(2.0 * csl_rate)));
        } else {
            throw ConfigError("csl: give one of --snr, --se, --rate");
        }
        return 0;
    }

    if (search->parsed()) {
        SearchSpace space;
        if (search_schemes == "bicm") space.mlc = false;
        else if (search_schemes == "mlc") space.bicm = false;
        else if (search_schemes != "both")
            throw ConfigError("--schemes must be both, bicm or mlc");
        if (search_preset == "table1") {
            // exactly the six published rows (plus scheme contrast)
            space.b_list = {6, 7, 8};
            space.t_list = {1, 2};
            space.n_list = {57, 125, 142, 47, 90, 95};
            space.T_list = {10, 14, 15};
            space.N_list = {544, 689, 752, 857};
            space.J_list = {2, 4, 5, 6};
        } else if (search_preset == "desk") {
            // Table 1 neighborhoods at desk scale
            space.b_list = {6, 7, 8};
            space.t_list = {1, 2};
            space.T_list = {10, 13, 14, 15, 16};
            space.N_list = {544, 689, 752, 857};
            space.J_list = {1, 2, 4, 5};
        } else if (!search_preset.empty()) {
            throw ConfigError("unknown preset '" + search_preset + "'");
        }
        if (!sb_list.empty()) space.b_list = parse_int_list(sb_list);
        if (!st_list.empty()) space.t_list = parse_int_list(st_list);
        if (!sn_list.empty()) space.n_list = parse_int_list(sn_list);
        if (!sT_list.empty()) space.T_list = parse_int_list(sT_list);
        if (!sN_list.empty()) space.N_list = parse_int_list(sN_list);
        if (!sJ_list.empty()) space.J_list = parse_int_list(sJ_list);

        UProvider provider(g.cache_path, {search_sim_trials, g.seed, g.workers, 0, 0});
        SearchProgress prog =
            run_search(space, provider, search_out, search_ck, search_resume, search_target,
                       [](const SearchProgress& p) {
                           if (p.completed % 10 == 0)
                               std::cerr << "search: " << p.completed << "/" << p.total << "\r";
                       });
        std::cerr << "\n";
        std::cout << fmt("search: %ld candidates, %ld evaluated, %ld unevaluated -> %s\n",
                         prog.total, prog.evaluated, prog.unevaluated, search_out.c_str());
        return 0;
    }

    if (pareto->parsed()) {
        auto points = read_results_file(pareto_in);
        for (int cap : parse_int_list(pareto_caps)) {
            auto front = pareto_front(points, cap);
            std::string path = pareto_prefix + "_" + std::to_string(cap / 1000) + "k.txt";
            TableWriter w(path, g.no_timestamp);
            w.line(std::string("# latency cap: ") + std::to_string(cap) + " bits");
            w.line(std::string("# columns: ") + results_columns());
            for (const auto& p : front) w.line(format_candidate_row(p));
            std::cout << path << ": " << front.size() << " frontier points\n";
        }
        return 0;
    }

    if (info->parsed()) {
        BchSpec spec = design_bch(info_b, info_t, info_n);
        TableWriter w("", g.no_timestamp);
        w.line(fmt("inner: n=%d k=%d b=%d t=%d shorten=%d rate=%.6f gen_poly=0x%llx", spec.n,
                   spec.k, spec.b(), spec.t, spec.shorten,
                   static_cast<double>(spec.k) / spec.n,
                   static_cast<unsigned long long>(spec.gen_poly)));
        if (info_N > 0) {
            FrameGeometry geom = build_geometry(make_outer(info_N, info_T, info_B),
                                                InnerCode::of(spec), parse_scheme(info_scheme));
            w.line(fmt("outer: N=%d K=%d T=%d B=%d", geom.outer.N, geom.outer.K, geom.outer.T,
                       geom.outer.B));
            w.line(fmt("frame: scheme=%s M=%ld m=%ld rate=%.6f latency=%ld complexity(J=%d)=%.4f",
                       to_string(geom.scheme).c_str(), geom.M, geom.m, overall_rate(geom),
                       latency_bits(geom), info_J, complexity_per_bit(geom, info_J)));
        }
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NeedsSimulation& e) {
        std::cerr << "missing cache entries; run:\n";
        for (const auto& key : e.missing_keys) {
            // turn "mlc b=6 t=1 n=57 k=50 J=2 snr=15.3000" into an inner-sim call
            std::string cmd = "  fecpareto inner-sim";
            std::istringstream ss(key);
            std::string tok;
            ss >> tok;
            cmd += " --scheme " + tok;
            while (ss >> tok) {
                auto eq = tok.find('=');
                std::string name = tok.substr(0, eq), value = tok.substr(eq + 1);
                if (name == "k") continue;
                cmd += " --" + name + " " + value;
            }
            std::cerr << cmd << " --trials 1000000\n";
        }
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
