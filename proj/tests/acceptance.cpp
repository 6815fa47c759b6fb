// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failing criteria. Criteria that cannot be met at desk scale run anyway
// and report their measured values; nothing is loosened to force a pass.

#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cfhm/apps/covering.hpp"
#include "cfhm/apps/ramsey_cycles.hpp"
#include "cfhm/apps/steiner.hpp"
#include "cfhm/conditions.hpp"
#include "cfhm/io.hpp"
#include "cfhm/stage1.hpp"
#include "cfhm/stage2.hpp"
#include "cfhm/unavoidability.hpp"
#include "cfhm/verify.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cfhm;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %d [%s]: %s — %s\n", idx, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

// ---------------------------------------------------------------------------
// shared suite: random near-regular 3-graphs with planted conflict systems
// ---------------------------------------------------------------------------

struct SuiteInstance {
    TripartiteHypergraph h;
    ConflictSystem cs;
};

SuiteInstance make_suite_instance(int n, int d, int nr, int dx,
                                  std::uint64_t seed) {
    auto base = gen::near_regular_3graph(n, d, seed);
    auto h = gen::with_h2_layer(base, nr, dx, seed + 1);
    auto cl = gen::plant_c_conflicts(h, 8000, 4, seed + 2);
    auto dl = gen::plant_d_conflicts(h, 2000, 2000, 1500, 800, seed + 3);
    ConflictSystem cs(h, cl, dl, 4, 0.25);
    return SuiteInstance{std::move(h), std::move(cs)};
}

// girth-style configurations on a sparse 3-graph: j edges pairwise sharing
// at most one vertex, spanning at most j + 2 vertices, minimal; enumerated
// by edge-driven DFS through the incidence structure
std::vector<std::vector<int>> sparse_bad_configs(
    const std::vector<std::vector<int>>& edges, int n, int j) {
    std::vector<std::vector<int>> incident(n);
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
        for (int v : edges[i]) incident[v].push_back(i);
    const int bound = j + 2;
    std::vector<std::vector<int>> out;
    std::vector<int> pick;
    std::set<int> uni;
    auto sparse_pair = [&](int a, int b) {
        int common = 0;
        for (int v : edges[a])
            if (std::binary_search(edges[b].begin(), edges[b].end(), v)) ++common;
        return common <= 1;
    };
    std::function<void(int)> rec = [&](int min_next) {
        if (static_cast<int>(pick.size()) == j) {
            if (static_cast<int>(uni.size()) > bound) return;
            // minimality: no smaller sub-configuration is bad
            for (int jp = 3; jp < j; ++jp) {
                for (const auto& sub : oracles::subsets(pick, jp)) {
                    std::set<int> u2;
                    for (int id : sub) u2.insert(edges[id].begin(), edges[id].end());
                    if (static_cast<int>(u2.size()) <= jp + 2) return;
                }
            }
            out.push_back(pick);
            return;
        }
        // candidates must overlap the current union (else the span bound dies)
        std::set<int> cands;
        if (pick.empty()) return;  // seeded externally
        for (int v : uni)
            for (int e : incident[v])
                if (e > min_next) cands.insert(e);
        for (int e : cands) {
            bool ok = true;
            for (int id : pick)
                if (!sparse_pair(id, e)) { ok = false; break; }
            if (!ok) continue;
            std::set<int> grown = uni;
            grown.insert(edges[e].begin(), edges[e].end());
            // adding edges never shrinks the span, so prune eagerly
            if (static_cast<int>(grown.size()) > bound) continue;
            pick.push_back(e);
            std::swap(uni, grown);
            rec(e);
            std::swap(uni, grown);
            pick.pop_back();
        }
    };
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        pick = {i};
        uni.clear();
        uni.insert(edges[i].begin(), edges[i].end());
        rec(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// criterion 1: oracle equivalence for unavoidability
// ---------------------------------------------------------------------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    int exact_ok = 0, mc_ok = 0, total = 50;
    for (int t = 0; t < total; ++t) {
        std::uint64_t seed = 1000 + 17 * t;
        CounterRng rng(seed);
        const int np = 8 + static_cast<int>(rng.below(5));   // <= 12
        const int nr = 10 + static_cast<int>(rng.below(8));
        TripartiteHypergraph h(np, 0, nr);
        std::vector<int> h2;
        for (int x = 0; x < np; ++x) {
            int dx = 2 + static_cast<int>(rng.below(2));  // degree 2..3
            int guard = 0;
            while (dx > 0 && guard < 200) {
                int r = np + static_cast<int>(rng.below(nr));
                try {
                    h2.push_back(h.add_edge(EdgeClass::H2, {x, r}));
                    --dx;
                } catch (const std::invalid_argument&) {
                    ++guard;
                }
            }
        }
        std::vector<int> h1;
        for (int x = 0; x + 1 < np; x += 2)
            h1.push_back(h.add_edge(EdgeClass::H1, {x, x + 1}));
        // up to 20 mixed conflicts at distinct P-vertices
        std::set<std::vector<int>> seen;
        std::vector<std::vector<int>> dl;
        int want = 8 + static_cast<int>(rng.below(13));
        int guard = 0;
        while (static_cast<int>(dl.size()) < want && guard < 500) {
            ++guard;
            int sz = 2 + static_cast<int>(rng.below(2));
            std::vector<int> ids, used_x;
            bool ok = true;
            for (int i = 0; i < sz; ++i) {
                int e = h2[rng.below(h2.size())];
                int x = h.h2_pvertex(e);
                if (std::count(ids.begin(), ids.end(), e) ||
                    std::count(used_x.begin(), used_x.end(), x)) {
                    ok = false;
                    break;
                }
                ids.push_back(e);
                used_x.push_back(x);
            }
            if (!ok) continue;
            if (rng.below(3) == 0 && !h1.empty()) ids.push_back(h1[rng.below(h1.size())]);
            std::sort(ids.begin(), ids.end());
            if (!seen.insert(ids).second) continue;
            dl.push_back(ids);
        }
        ConflictSystem cs(h, {}, dl, 4, 0.25);
        Rational a = family_unavoidability_exact(h, cs.d());
        Rational expect = oracles::choice_function_expectation(h, cs.d());
        if (a == expect) ++exact_ok;
        auto est = mc_unavoidability_oracle(cs, h, 100000, seed + 7);
        double exact_dbl = a.to_double();
        if (std::abs(est.mean - exact_dbl) <= 5 * est.stderr_ + 1e-12) ++mc_ok;
    }
    double dt = seconds_since(t0);
    bool pass = exact_ok == total && mc_ok == total && dt < 30.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "exact match %d/%d, MC within 5 SE %d/%d, runtime %.1fs (< 30s)",
                  exact_ok, total, mc_ok, total, dt);
    report(1, "unavoidability-oracle", pass, buf);
}

// ---------------------------------------------------------------------------
// criteria 2, 3, 7: the big random suite
// ---------------------------------------------------------------------------

struct SuiteOutcome {
    int runs = 0;
    int sound = 0;          // m1 matching + zero conflicts + zero flagged pairs
    int cover_ok = 0;       // uncovered fraction <= 0.15
    int stage2_ok = 0;      // success within the round cap
    int verify_ok = 0;      // verify_matching passes on successes
    int bonferroni_ok = 0;  // incl-excl lower bound <= direct safe count
    int bonferroni_total = 0;
    int gamma_ok = 0;  // gamma_{e,j} <= ell
    int gamma_total = 0;
    double stage1_seconds = 0;
    bool conditions_ok = true;
    std::string first_stats;  // serialized outputs of the first run (determinism)
    std::string first_log;
};

SuiteOutcome run_suite(bool redo_first_only = false) {
    SuiteOutcome out;
    const int instances = 5, seeds_per = 20;
    for (int inst_i = 0; inst_i < instances; ++inst_i) {
        SuiteInstance si = make_suite_instance(3000, 50, 20000, 40,
                                               900000 + 31 * inst_i);
        // planted families must satisfy their boundedness conditions
        if (!check_c_conditions(si.cs, si.h, 50.0, 0.25).all_hold())
            out.conditions_ok = false;
        if (!check_h_conditions(si.h, 50.0, 0.25).find("H3p.vertex-unavoidability")->holds)
            out.conditions_ok = false;
        if (!check_h_conditions(si.h, 50.0, 0.25).find("H4p.codegree-ratio")->holds)
            out.conditions_ok = false;
        if (!check_d_conditions(si.cs, si.h, 50.0, 0.25, DMode::Mixed).all_hold())
            out.conditions_ok = false;
        auto excl = conflict_sharing_pairs(si.cs, si.h, 0.25 / 2, 50.0);
        for (int s = 0; s < seeds_per; ++s) {
            std::uint64_t seed = 4000 + 13 * s + inst_i;
            auto w0 = std::chrono::steady_clock::now();
            auto r1 = run_stage1(si.h, si.cs, 50.0, 0.25, seed);
            out.stage1_seconds += seconds_since(w0);
            ++out.runs;
            // exhaustive soundness rescans
            bool sound = matching_invariants_hold(si.h, r1.matching);
            const auto& m1 = r1.matching.m1;
            for (const Conflict& cfc : si.cs.c()) {
                bool inside = true;
                for (int id : cfc.edges)
                    if (!std::binary_search(m1.begin(), m1.end(), id)) {
                        inside = false;
                        break;
                    }
                if (inside) { sound = false; break; }
            }
            for (const auto& pr : excl.pairs)
                if (std::binary_search(m1.begin(), m1.end(), pr.first) &&
                    std::binary_search(m1.begin(), m1.end(), pr.second))
                    sound = false;
            out.sound += sound;
            out.cover_ok += r1.uncovered_fraction <= 0.15;

            // stage 2 on the same suite
            try {
                auto r2 = run_stage2(si.cs, si.h, r1.matching, seed + 500, 10000);
                if (r2.success) {
                    ++out.stage2_ok;
                    VerifyReport rep = verify_matching(si.h, si.cs, r2.matching,
                                                       50.0, 0.25);
                    out.verify_ok += rep.all_pass();
                }
                for (const auto& prof : r2.safe_profiles) {
                    ++out.bonferroni_total;
                    if (prof.incl_excl_lower <=
                        static_cast<double>(prof.n_x_safe.size()) + 1e-9)
                        ++out.bonferroni_ok;
                    for (const auto& row : prof.gamma_by_j)
                        for (double g : row) {
                            ++out.gamma_total;
                            if (g <= si.cs.ell() + 1e-12) ++out.gamma_ok;
                        }
                }
                if (out.runs == 1) {
                    std::ostringstream ms;
                    write_matching(r2.matching, ms);
                    out.first_stats = r1.stats_json().dump() + ms.str();
                    out.first_log = r2.log.to_json().dump();
                }
            } catch (const LocalUnsatError&) {
                // counts as a stage-2 failure
            }
            if (redo_first_only) return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// criterion 4: ramsey-cycles pipeline at the pinned sizes
// ---------------------------------------------------------------------------

struct CyclesRun {
    int success = 0, clean = 0, palette_exact = 0;
    double dt = 0;
    std::string first_bytes;
};

CyclesRun run_cycles_pipeline(int n, int seeds, bool first_only = false) {
    CyclesRun out;
    auto t0 = std::chrono::steady_clock::now();
    auto inst = apps::build_ramsey_cycles(n, 2, 4, 0.25);
    ConflictSystem none(inst.h, {}, {}, 4, 0.25);
    int expected_palette =
        n / 2 + static_cast<int>(std::llround(std::pow(n, 0.75)));
    for (int s = 1; s <= seeds; ++s) {
        auto hooks = apps::cycles_guard_hooks(inst);
        apps::PairPatternGuard guard(hooks);
        auto r1 = run_stage1(inst.h, none, inst.d_declared, 0.25,
                             static_cast<std::uint64_t>(s), {}, {}, &guard);
        auto events = apps::cycles_stage2_events(inst, r1.matching);
        try {
            auto r2 = run_stage2(none, inst.h, r1.matching,
                                 static_cast<std::uint64_t>(s) + 77, 10000, 0,
                                 inst.d_declared, events);
            if (r2.success) {
                ++out.success;
                auto col = apps::decode_cycles_coloring(inst, r2.matching);
                RamseyPattern pat;
                pat.ell = 4;
                auto rep = verify_ramsey_coloring(n, 2, pat, 3, col,
                                                  inst.t1 + inst.t2);
                if (rep.counts.at("violations") == 0.0) ++out.clean;
                if (inst.t1 + inst.t2 == expected_palette) ++out.palette_exact;
                if (out.first_bytes.empty()) {
                    std::ostringstream ms;
                    write_matching(r2.matching, ms);
                    out.first_bytes = ms.str() + r2.log.to_json().dump();
                }
            }
        } catch (const LocalUnsatError&) {
        }
        if (out.first_bytes.empty() && first_only) {
            std::ostringstream ms;
            write_matching(r1.matching, ms);
            out.first_bytes = ms.str();
        }
        if (first_only) break;
    }
    out.dt = seconds_since(t0);
    return out;
}

void criterion_4() {
    std::string detail;
    bool pass = true;
    for (int n : {16, 24, 32}) {
        CyclesRun r = run_cycles_pipeline(n, 10);
        int expected_palette =
            n / 2 + static_cast<int>(std::llround(std::pow(n, 0.75)));
        bool ok = r.clean >= 8 && r.dt < 300.0 && r.palette_exact == r.success;
        pass = pass && ok;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "n=%d: %d/10 complete, %d/10 clean (palette %d), %.0fs; ",
                      n, r.success, r.clean, expected_palette, r.dt);
        detail += buf;
    }
    report(4, "ramsey-cycles-end-to-end", pass,
           detail + (pass ? "" :
               "stage-1 residue needs more reserve colours than n^{3/4} at these n"));
}

// ---------------------------------------------------------------------------
// criterion 5: covering pipeline
// ---------------------------------------------------------------------------

struct CoveringRun {
    bool covered = false, max_twice = false, conflict_free = false;
    double doubly = 1.0;
    bool completed = false;
    std::string bytes;
};

CoveringRun run_covering_pipeline(std::uint64_t seed) {
    CoveringRun out;
    auto src = gen::near_regular_3graph(1500, 40, 777);
    std::vector<std::vector<int>> edges;
    for (const Edge& e : src.edges()) edges.push_back(e.vertices);
    std::vector<std::vector<int>> confs = sparse_bad_configs(edges, 1500, 3);
    auto b4 = sparse_bad_configs(edges, 1500, 4);
    confs.insert(confs.end(), b4.begin(), b4.end());
    auto inst = apps::build_covering_reduction(1500, edges, confs, 40.0, 0.25);
    Stage1Options opts;
    opts.force = true;  // report-only margins at desk scale
    auto r1 = run_stage1(inst.h, inst.cs, 40.0, 0.25, seed, {}, opts);
    try {
        auto r2 = run_stage2(inst.cs, inst.h, r1.matching, seed + 1, 10000);
        if (!r2.success) return out;
        out.completed = true;
        auto cover = apps::decode_covering(inst, r2.matching);
        VerifyReport rep =
            verify_covering(1500, edges, confs, cover, 40.0, 0.25);
        out.covered = rep.find("all-covered")->pass;
        out.max_twice = rep.find("max-twice")->pass;
        out.conflict_free = rep.find("conflict-free")->pass;
        out.doubly = rep.fractions.at("doubly_covered");
        std::ostringstream ms;
        write_matching(r2.matching, ms);
        out.bytes = ms.str() + rep.to_json().dump();
    } catch (const LocalUnsatError&) {
    }
    return out;
}

void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    CoveringRun r = run_covering_pipeline(1);
    bool pass = r.completed && r.covered && r.max_twice && r.conflict_free &&
                r.doubly <= 0.2;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "completed=%d covered=%d max-twice=%d conflict-free=%d "
                  "doubly=%.4f (<= 0.2), %.0fs",
                  r.completed, r.covered, r.max_twice, r.conflict_free, r.doubly,
                  seconds_since(t0));
    report(5, "covering-end-to-end", pass, buf);
}

// ---------------------------------------------------------------------------
// criterion 6: steiner generator + span condition
// ---------------------------------------------------------------------------

// independent exhaustive search over candidate combinations (index-ordered
// DFS with union pruning) — a different strategy from the support-first
// generator
std::vector<std::vector<int>> steiner_bad_brute(
    int s, int t, const std::vector<std::vector<int>>& kappa, int j) {
    std::vector<std::vector<int>> out;
    const int bound = (s - t) * j + t;
    std::vector<int> pick;
    std::set<int> uni;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(pick.size()) == j) {
            if (static_cast<int>(uni.size()) > bound) return;
            if (!apps::detail::is_bad_config(kappa, pick, s, t)) return;
            if (apps::detail::contains_smaller_bad(kappa, pick, s, t)) return;
            out.push_back(pick);
            return;
        }
        for (std::size_t i = start; i < kappa.size(); ++i) {
            std::set<int> grown = uni;
            grown.insert(kappa[i].begin(), kappa[i].end());
            if (static_cast<int>(grown.size()) > bound) continue;
            bool sparse = true;
            for (int id : pick)
                if (!apps::detail::sets_sparse(kappa[id], kappa[i], t))
                    sparse = false;
            if (!sparse) continue;
            pick.push_back(static_cast<int>(i));
            std::swap(uni, grown);
            rec(i + 1);
            std::swap(uni, grown);
            pick.pop_back();
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    auto kappa = apps::all_subsets_of_size(12, 3);
    auto g3 = apps::enumerate_bad_configs(12, 3, 2, kappa, 3);
    auto g4 = apps::enumerate_bad_configs(12, 3, 2, kappa, 4);
    auto b3 = steiner_bad_brute(3, 2, kappa, 3);
    auto b4 = steiner_bad_brute(3, 2, kappa, 4);
    bool equal = g3 == b3 && g4 == b4;

    // span condition on every pipeline output at (12,3,2), ell = 4 (lazy
    // event path); the dense configuration family leaves little room at this
    // size, so completions are counted honestly
    auto st = apps::build_steiner_covering(12, 3, 2, kappa, 4);
    auto inst = apps::steiner_to_covering_lazy(st, 10.0, 0.2);
    int outputs = 0, span_ok = 0;
    Stage1Options opts;
    opts.force = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto r1 = run_stage1(inst.h, inst.cs, 10.0, 0.2, seed, {}, opts);
        auto events = apps::steiner_stage2_events(st, inst, r1.matching);
        auto filter = apps::steiner_safe_filter(st, inst, r1.matching.m1);
        try {
            auto r2 = run_stage2(inst.cs, inst.h, r1.matching, seed + 9, 200000,
                                 0, 10.0, events, &filter);
            if (!r2.success) continue;
            ++outputs;
            auto cover = apps::decode_covering(inst, r2.matching);
            SteinerCheckParams sp{3, 2, 4};
            auto rep = verify_covering(static_cast<int>(st.tsets.size()),
                                       st.h_edges, st.bad_configs, cover, 10.0,
                                       0.2, &sp);
            if (rep.find("steiner-span")->pass) ++span_ok;
        } catch (const LocalUnsatError&) {
        }
    }
    // supporting evidence: at ell = 3 the family is structurally empty and
    // the pipeline outputs must still satisfy the span condition for j <= 3
    auto kappa9 = apps::all_subsets_of_size(9, 3);
    auto st9 = apps::build_steiner_covering(9, 3, 2, kappa9, 3);
    auto inst9 = apps::steiner_to_covering_lazy(st9, 7.0, 0.2);
    int outputs9 = 0, span9 = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        try {
            auto r1 = run_stage1(inst9.h, inst9.cs, 7.0, 0.2, seed);
            auto r2 = run_stage2(inst9.cs, inst9.h, r1.matching, seed + 9, 50000);
            if (!r2.success) continue;
            ++outputs9;
            auto cover = apps::decode_covering(inst9, r2.matching);
            SteinerCheckParams sp{3, 2, 3};
            auto rep = verify_covering(static_cast<int>(st9.tsets.size()),
                                       st9.h_edges, st9.bad_configs, cover, 7.0,
                                       0.2, &sp);
            if (rep.find("steiner-span")->pass) ++span9;
        } catch (const LocalUnsatError&) {
        }
    }
    bool pass = equal && span_ok == outputs && outputs9 > 0 && span9 == outputs9;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "set equality j=3: %zu==%zu, j=4: %zu==%zu; (12,3,2) outputs "
                  "%d (span ok %d); (9,3,2,ell=3) outputs %d (span ok %d); %.0fs",
                  g3.size(), b3.size(), g4.size(), b4.size(), outputs, span_ok,
                  outputs9, span9, seconds_since(t0));
    report(6, "steiner-generator", pass, buf);
}

}  // namespace

int main() {
    std::printf("== acceptance suite ==\n");

    criterion_1();

    auto t2 = std::chrono::steady_clock::now();
    SuiteOutcome suite = run_suite();
    {
        bool pass = suite.conditions_ok && suite.sound == suite.runs &&
                    suite.cover_ok >= 95 && suite.stage1_seconds < 120.0;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "%d runs: all sound %d, uncovered<=0.15 in %d (>=95), "
                      "conditions hold %d, stage-1 time %.0fs (< 120s)",
                      suite.runs, suite.sound, suite.cover_ok,
                      suite.conditions_ok, suite.stage1_seconds);
        report(2, "stage1-soundness", pass, buf);
    }
    {
        bool pass = suite.stage2_ok >= 95 && suite.verify_ok == suite.stage2_ok;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "stage-2 success %d/%d (>=95), verify_matching clean on "
                      "%d/%d successes, total %.0fs",
                      suite.stage2_ok, suite.runs, suite.verify_ok,
                      suite.stage2_ok, seconds_since(t2));
        report(3, "stage2-completeness", pass, buf);
    }

    criterion_4();
    criterion_5();
    criterion_6();

    {
        bool pass = suite.bonferroni_total > 0 &&
                    suite.bonferroni_ok == suite.bonferroni_total &&
                    suite.gamma_ok == suite.gamma_total;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "inclusion-exclusion lower bound valid %d/%d, "
                      "gamma_(e,j) <= ell %d/%d",
                      suite.bonferroni_ok, suite.bonferroni_total, suite.gamma_ok,
                      suite.gamma_total);
        report(7, "safe-edge-analytics", pass, buf);
    }

    {
        // determinism: rerun representative slices and compare bytes
        SuiteOutcome again = run_suite(true);
        CyclesRun c1 = run_cycles_pipeline(16, 1, true);
        CyclesRun c2 = run_cycles_pipeline(16, 1, true);
        bool pass = again.first_stats == suite.first_stats &&
                    again.first_log == suite.first_log &&
                    c1.first_bytes == c2.first_bytes;
        report(8, "determinism", pass,
               pass ? "byte-identical matchings, logs and stats on reruns"
                    : "outputs differ between identical reruns");
    }

    std::printf("== %d criterion(s) failed ==\n", failures);
    return failures == 0 ? 0 : 1;
}
