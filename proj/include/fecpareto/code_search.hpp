#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "fecpareto/cost_model.hpp"
#include "fecpareto/errors.hpp"
#include "fecpareto/fer_analysis.hpp"

namespace fecpareto {

// The searched space. Empty restriction lists mean the full published range;
// non-empty lists narrow a dimension (used by the desk-scale presets).
struct SearchSpace {
    int B = 10;
    int T_min = 1, T_max = 20;
    int b_min = 5, b_max = 11;
    int t_min = 1, t_max = 3;
    int J_min = 1, J_max = 6;
    bool bicm = true, mlc = true;
    double rate_min = 0.875, rate_max = 0.885;
    double inner_rate_max = 0.99;
    int N_max = 1023;  // 2^B - 1
    std::vector<long> latency_caps = {20000, 60000, 150000};

    std::vector<int> b_list, t_list, n_list, T_list, N_list, J_list;  // optional restrictions

    long max_latency() const {
        long m = 0;
        for (long c : latency_caps) m = std::max(m, c);
        return m;
    }
};

struct CandidateSpec {
    FrameGeometry geom;
    int J = 0;

    auto order_tuple() const {
        return std::make_tuple(static_cast<int>(geom.scheme), geom.inner.b, geom.inner.t,
                               geom.inner.n, geom.outer.T, geom.outer.N, J);
    }
};

struct SkipReport {
    long inadmissible_bt = 0;   // generator degree != b*t
    long divisibility = 0;      // scheme divisibility fails
    long inner_rate = 0;        // k/n above the limit
    long rate_window = 0;       // overall rate outside 0.88 +- 0.005
    long latency = 0;           // above the largest cap
    long emitted = 0;
};

// Enumerates (geometry, J) candidates in lexicographic order over
// (scheme, b, t, n, T, N, J), BICM before MLC. Infeasible tuples are skipped
// silently and tallied in the report.
inline SkipReport enumerate_candidates(const SearchSpace& space,
                                       const std::function<void(const CandidateSpec&)>& sink) {
    SkipReport report;
    auto in_list = [](const std::vector<int>& list, int v) {
        return list.empty() || std::find(list.begin(), list.end(), v) != list.end();
    };

    std::vector<Scheme> schemes;
    if (space.bicm) schemes.push_back(Scheme::BICM);
    if (space.mlc) schemes.push_back(Scheme::MLC);

    for (Scheme scheme : schemes) {
        for (int b = space.b_min; b <= space.b_max; ++b) {
            if (!in_list(space.b_list, b)) continue;
            for (int t = space.t_min; t <= space.t_max; ++t) {
                if (!in_list(space.t_list, t)) continue;
                // admissibility of (b,t) is independent of n
                try {
                    design_bch(b, t, b * t + 2);
                } catch (const ConfigError&) {
                    ++report.inadmissible_bt;
                    continue;
                }
                for (int n = b * t + 2; n <= (1 << b); ++n) {
                    if (!in_list(space.n_list, n)) continue;
                    const int k = n - b * t - 1;
                    const int payload = scheme == Scheme::BICM ? k : 2 * k;
                    if (payload % space.B != 0) {
                        ++report.divisibility;
                        continue;
                    }
                    if (static_cast<double>(k) / n > space.inner_rate_max) {
                        ++report.inner_rate;
                        continue;
                    }
                    InnerCode inner{n, k, b, t};
                    // the rate window pins K/N to a narrow band, hence N to a
                    // short run per T
                    const double f = scheme == Scheme::BICM
                                         ? static_cast<double>(k) / n
                                         : 2.0 * k / (n + k);
                    const double ratio_lo = space.rate_min / f, ratio_hi = space.rate_max / f;
                    if (ratio_lo >= 1.0) continue;  // even K = N cannot reach the window
                    for (int T = space.T_min; T <= space.T_max; ++T) {
                        if (!in_list(space.T_list, T)) continue;
                        int N_lo = std::max(2 * T + 1,
                                            static_cast<int>(std::floor(2 * T / (1.0 - ratio_lo))));
                        int N_hi = ratio_hi >= 1.0
                                       ? space.N_max
                                       : std::min(space.N_max,
                                                  static_cast<int>(std::ceil(2 * T / (1.0 - ratio_hi))));
                        for (int N = N_lo; N <= N_hi; ++N) {
                            if (!in_list(space.N_list, N)) continue;
                            FrameGeometry geom;
                            try {
                                geom = build_geometry(make_outer(N, T, space.B), inner, scheme);
                            } catch (const ConfigError&) {
                                ++report.divisibility;
                                continue;
                            }
                            double rate = overall_rate(geom);
                            if (rate < space.rate_min - 1e-12 || rate > space.rate_max + 1e-12) {
                                ++report.rate_window;
                                continue;
                            }
                            if (latency_bits(geom) > space.max_latency()) {
                                ++report.latency;
                                continue;
                            }
                            for (int J = space.J_min; J <= space.J_max; ++J) {
                                if (!in_list(space.J_list, J)) continue;
                                sink(CandidateSpec{geom, J});
                                ++report.emitted;
                            }
                        }
                    }
                }
            }
        }
    }
    return report;
}

struct CandidatePoint {
    FrameGeometry geom;
    int J = 0;
    double gap_db = 0.0;
    double complexity = 0.0;
    long latency = 0;
    double fer_snr = 0.0;  // SNR achieving the target FER
    double rate = 0.0;
    bool evaluated = false;
    std::string reason;  // set when not evaluated

    auto order_tuple() const {
        return std::make_tuple(static_cast<int>(geom.scheme), geom.inner.b, geom.inner.t,
                               geom.inner.n, geom.outer.T, geom.outer.N, J);
    }
};

inline CandidatePoint evaluate(const CandidateSpec& cand, UProvider& provider,
                               double target = 1e-13) {
    CandidatePoint p;
    p.geom = cand.geom;
    p.J = cand.J;
    p.latency = latency_bits(cand.geom);
    p.complexity = complexity_per_bit(cand.geom, cand.J);
    p.rate = overall_rate(cand.geom);
    try {
        GapResult g = gap_to_csl(cand.geom, cand.J, provider, target);
        p.gap_db = g.gap_db;
        p.fer_snr = g.snr_at_target;
        p.evaluated = true;
    } catch (const NeedsSimulation& e) {
        p.reason = std::string("needs simulation: ") + e.what();
    } catch (const ComputeError& e) {
        p.reason = e.what();
    }
    return p;
}

// ---------------------------------------------------------------------------
// Results-table format (one row per evaluated candidate)

inline const char* results_columns() {
    return "scheme N K T B M m n k b t J latency complexity gap_db snr_at_target rate";
}

inline std::string format_candidate_row(const CandidatePoint& p) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s %d %d %d %d %ld %ld %d %d %d %d %d %ld %.4f %.6f %.6f %.6f",
                  to_string(p.geom.scheme).c_str(), p.geom.outer.N, p.geom.outer.K,
                  p.geom.outer.T, p.geom.outer.B, p.geom.M, p.geom.m, p.geom.inner.n,
                  p.geom.inner.k, p.geom.inner.b, p.geom.inner.t, p.J, p.latency, p.complexity,
                  p.gap_db, p.fer_snr, p.rate);
    return buf;
}

inline CandidatePoint parse_candidate_row(const std::string& line) {
    char scheme[16];
    CandidatePoint p;
    int N, K, T, B, n, k, b, t;
    long M, m;
    int got = std::sscanf(line.c_str(), "%15s %d %d %d %d %ld %ld %d %d %d %d %d %ld %lf %lf %lf %lf",
                          scheme, &N, &K, &T, &B, &M, &m, &n, &k, &b, &t, &p.J, &p.latency,
                          &p.complexity, &p.gap_db, &p.fer_snr, &p.rate);
    if (got != 17) throw ConfigError("malformed results row: " + line);
    p.geom.outer = OuterSpec{N, K, T, B};
    p.geom.inner = InnerCode{n, k, b, t};
    p.geom.scheme = std::string(scheme) == "bicm" ? Scheme::BICM : Scheme::MLC;
    p.geom.M = M;
    p.geom.m = m;
    p.geom.families = {StripFamily{{{1, m}}, M}};
    p.evaluated = true;
    return p;
}

inline std::vector<CandidatePoint> read_results_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open results file " + path);
    std::vector<CandidatePoint> points;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        points.push_back(parse_candidate_row(line));
    }
    return points;
}

struct SearchProgress {
    long total = 0;
    long completed = 0;
    long evaluated = 0;
    long unevaluated = 0;
};

// Streaming search with a resumable checkpoint. Candidates are enumerated in
// deterministic order; the checkpoint records how many have been completed so
// a rerun appends where it left off.
inline SearchProgress run_search(const SearchSpace& space, UProvider& provider,
                                 const std::string& results_path,
                                 const std::string& checkpoint_path, bool resume,
                                 double target = 1e-13,
                                 const std::function<void(const SearchProgress&)>& on_progress = {}) {
    SearchProgress prog;
    enumerate_candidates(space, [&](const CandidateSpec&) { ++prog.total; });

    long skip = 0;
    if (resume && !checkpoint_path.empty()) {
        std::ifstream ck(checkpoint_path);
        std::string word;
        if (ck >> word >> skip) {
            if (word != "completed") throw ConfigError("malformed checkpoint file");
        } else {
            skip = 0;
        }
    }

    std::ofstream out;
    std::ofstream side;
    auto open_outputs = [&](bool append) {
        auto mode = append ? std::ios::app : std::ios::trunc;
        out.open(results_path, mode);
        if (!out) throw ComputeError("cannot write results file " + results_path);
        side.open(results_path + ".unevaluated", mode);
        if (!append) out << "# columns: " << results_columns() << "\n";
    };
    open_outputs(resume && skip > 0);

    long index = 0;
    enumerate_candidates(space, [&](const CandidateSpec& cand) {
        ++index;
        if (index <= skip) {
            ++prog.completed;
            return;
        }
        CandidatePoint p = evaluate(cand, provider, target);
        if (p.evaluated) {
            out << format_candidate_row(p) << "\n";
            ++prog.evaluated;
        } else {
            side << format_candidate_row(p) << "  # " << p.reason << "\n";
            ++prog.unevaluated;
        }
        out.flush();
        side.flush();
        ++prog.completed;
        if (!checkpoint_path.empty()) {
            std::ofstream ck(checkpoint_path, std::ios::trunc);
            ck << "completed " << prog.completed << "\n";
        }
        if (on_progress) on_progress(prog);
    });
    return prog;
}

// Non-dominated points in (gap_db, complexity) among those within the latency
// cap, sorted by complexity ascending. Exact duplicates in both objectives
// keep the lexicographically smallest parameter tuple.
inline std::vector<CandidatePoint> pareto_front(const std::vector<CandidatePoint>& points,
                                                long cap) {
    std::vector<CandidatePoint> in;
    for (const auto& p : points)
        if (p.evaluated && p.latency <= cap) in.push_back(p);
    std::sort(in.begin(), in.end(), [](const CandidatePoint& a, const CandidatePoint& b) {
        if (a.complexity != b.complexity) return a.complexity < b.complexity;
        if (a.gap_db != b.gap_db) return a.gap_db < b.gap_db;
        return a.order_tuple() < b.order_tuple();
    });
    std::vector<CandidatePoint> front;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& p : in) {
        // within an equal-complexity group only the first (least gap, smallest
        // tuple) can survive
        if (!front.empty() && p.complexity == front.back().complexity) continue;
        if (p.gap_db < best_gap) {
            front.push_back(p);
            best_gap = p.gap_db;
        }
    }
    return front;
}

} // namespace fecpareto
