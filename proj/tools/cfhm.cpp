// cfhm: build, validate, match, decode and verify conflict-free tripartite
// hypergraph matchings and the colouring/covering constructions built on
// them. Every stage works through files so runs are replayable; all
// randomness derives from one 64-bit seed through a counter-based generator
// (SplitMix64 finalizer over key + index), with stage 2 on an independent
// substream.
//
// Exit codes: 0 success, 2 input error, 3 resample cap exceeded,
// 4 locally unsatisfiable (empty safe set).

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfhm/apps/covering.hpp"
#include "cfhm/apps/ramsey_cycles.hpp"
#include "cfhm/apps/ramsey_k4.hpp"
#include "cfhm/apps/steiner.hpp"
#include "cfhm/conditions.hpp"
#include "cfhm/io.hpp"
#include "cfhm/stage1.hpp"
#include "cfhm/stage2.hpp"
#include "cfhm/verify.hpp"

using nlohmann::json;
using namespace cfhm;

namespace {

int log_level() {
    const char* v = std::getenv("CFHM_LOG");
    return v ? std::atoi(v) : 0;
}

void logline(const std::string& s) {
    if (log_level() > 0) std::cerr << "[cfhm] " << s << "\n";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

TripartiteHypergraph load_hg(const std::string& path) {
    std::string text = slurp(path);
    return parse_hypergraph(text);
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

// hypergraph as json, for --format json
json hg_to_json(const TripartiteHypergraph& h) {
    json edges = json::array();
    for (const Edge& e : h.edges())
        edges.push_back({{"klass", e.klass == EdgeClass::H1 ? "e1" : "e2"},
                         {"vertices", e.vertices}});
    return json{{"parts", {h.p_size(), h.q_size(), h.r_size()}},
                {"p", std::max(h.p_param(), 0)},
                {"q", std::max(h.q_param(), 0)},
                {"r", std::max(h.r_param(), 0)},
                {"edges", edges}};
}

struct TrackerParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// tracker descriptors: wx:x:j1:j2 | wxp:x:j1:j2 | wxb:x:b1,b2,...
TrackerSpec parse_tracker(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') { parts.push_back(cur); cur.clear(); }
        else cur += c;
    }
    parts.push_back(cur);
    if (parts.size() < 2) throw TrackerParseError("bad tracker: " + text);
    TrackerSpec sp;
    sp.x = std::stoi(parts[1]);
    if (parts[0] == "wx" || parts[0] == "wxp") {
        if (parts.size() != 4) throw TrackerParseError("bad tracker: " + text);
        sp.kind = parts[0] == "wx" ? TrackerSpec::Kind::WX : TrackerSpec::Kind::WXP;
        sp.j1 = std::stoi(parts[2]);
        sp.j2 = std::stoi(parts[3]);
    } else if (parts[0] == "wxb") {
        if (parts.size() != 3) throw TrackerParseError("bad tracker: " + text);
        sp.kind = TrackerSpec::Kind::WXB;
        std::string bs = parts[2];
        std::string tok;
        for (char c : bs + ",") {
            if (c == ',') { sp.b.push_back(std::stoi(tok)); tok.clear(); }
            else tok += c;
        }
    } else {
        throw TrackerParseError("unknown tracker kind: " + parts[0]);
    }
    return sp;
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

struct BuildArgs {
    std::string app;
    int n = 16, k = 2, cycle_len = 4;
    double delta = 0.25;
    double rho = -1.0;
    std::uint64_t seed = 1;
    int m = 12, s = 3, t = 2, ell = 4;
    double d = 0.0, eps = 0.25;
    std::string input, conflicts;
    std::string out = "instance";
    std::string format = "hg";
    bool explicit_conflicts = false;
    std::size_t conflict_limit = 2000000;
};

void write_instance(const BuildArgs& a, const TripartiteHypergraph& h,
                    const ConflictFileData& cf, const json& meta) {
    if (a.format == "json") spit(a.out + ".hg.json", hg_to_json(h).dump(2) + "\n");
    std::ostringstream hg;
    write_hypergraph(h, hg);
    spit(a.out + ".hg", hg.str());
    std::ostringstream cfs;
    write_conflicts(cf, cfs);
    spit(a.out + ".cf", cfs.str());
    spit(a.out + ".meta.json", meta.dump(2) + "\n");
    logline("wrote " + a.out + ".hg/.cf/.meta.json");
}

int cmd_build(const BuildArgs& a) {
    if (a.app == "ramsey-cycles") {
        auto inst = apps::build_ramsey_cycles(a.n, a.k, a.cycle_len, a.delta);
        ConflictFileData cf;
        cf.app = "ramsey-cycles";
        if (a.explicit_conflicts) {
            auto lists = apps::enumerate_cycle_conflicts(inst, a.conflict_limit);
            cf.c = lists.c;
            cf.d = lists.d;
            cf.app.clear();  // fully explicit
            cf.ell = 0;
            for (const auto& v : lists.c) cf.ell = std::max<int>(cf.ell, v.size());
            for (const auto& v : lists.d) cf.ell = std::max<int>(cf.ell, v.size());
        }
        write_instance(a, inst.h, cf, inst.meta_json());
        return 0;
    }
    if (a.app == "ramsey-k4") {
        auto inst = apps::build_ramsey_k4(a.n, a.delta, a.seed, a.rho);
        ConflictFileData cf;
        cf.app = "ramsey-k4";
        write_instance(a, inst.h, cf, inst.meta_json());
        return 0;
    }
    if (a.app == "covering") {
        auto h_in = load_hg(a.input);
        std::vector<std::vector<int>> edges;
        for (const Edge& e : h_in.edges()) edges.push_back(e.vertices);
        ConflictFileData src;
        if (!a.conflicts.empty()) src = parse_conflicts(slurp(a.conflicts));
        double d = a.d;
        if (d <= 0) {
            for (int v = 0; v < h_in.p_size(); ++v)
                d = std::max(d, static_cast<double>(h_in.degree1(v)));
        }
        auto inst = apps::build_covering_reduction(h_in.vertex_count(), edges,
                                                   src.c, d, a.eps, a.ell);
        ConflictFileData cf;
        cf.ell = inst.cs.ell();
        for (const Conflict& c : inst.cs.c()) cf.c.push_back(c.edges);
        for (const Conflict& c : inst.cs.d()) cf.d.push_back(c.edges);
        json meta = {{"app", "covering"},
                     {"n", h_in.vertex_count()},
                     {"d", d},
                     {"eps", a.eps},
                     {"ell", inst.cs.ell()},
                     {"source", a.input}};
        write_instance(a, inst.h, cf, meta);
        return 0;
    }
    if (a.app == "steiner") {
        auto kappa = apps::all_subsets_of_size(a.m, a.s);
        auto st = apps::build_steiner_covering(a.m, a.s, a.t, kappa, a.ell);
        double d = a.d > 0 ? a.d
                           : static_cast<double>(st.h_edges.size()) *
                                 st.h_edges[0].size() / st.tsets.size();
        auto inst = apps::steiner_to_covering_lazy(st, d, a.eps);
        ConflictFileData cf;
        cf.app = "steiner";
        cf.ell = st.ell;
        for (const auto& cfg : st.bad_configs) cf.c.push_back(cfg);
        json meta = {{"app", "steiner"}, {"m", a.m},     {"s", a.s},
                     {"t", a.t},         {"ell", a.ell}, {"d", d},
                     {"eps", a.eps}};
        write_instance(a, inst.h, cf, meta);
        return 0;
    }
    std::cerr << "unknown app: " << a.app << "\n";
    return 2;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& hg_path, const std::string& cf_path,
                 double d, double eps, const std::string& mode,
                 const std::string& out) {
    auto h = load_hg(hg_path);
    ConflictFileData cf;
    if (!cf_path.empty()) cf = parse_conflicts(slurp(cf_path));
    ConflictSystem cs(h, cf.c, cf.d, cf.ell, eps);
    if (d <= 0) {
        for (int v = 0; v < h.p_size(); ++v)
            d = std::max(d, static_cast<double>(h.degree1(v, EdgeClass::H1)));
        d = std::max(d, 2.0);
    }
    json rep;
    rep["h"] = check_h_conditions(h, d, eps).to_json();
    rep["c"] = check_c_conditions(cs, h, d, eps).to_json();
    DMode dm = mode == "simple" ? DMode::Simple
               : mode == "mixed" ? DMode::Mixed
                                 : DMode::Both;
    rep["d"] = check_d_conditions(cs, h, d, eps, dm).to_json();
    bool all = rep["h"]["all_hold"].get<bool>() && rep["c"]["all_hold"].get<bool>() &&
               rep["d"]["all_hold"].get<bool>();
    rep["all_hold"] = all;
    std::string text = rep.dump(2) + "\n";
    if (out.empty()) std::cout << text;
    else spit(out, text);
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// match
// ---------------------------------------------------------------------------

struct MatchArgs {
    std::string hg_path, cf_path, meta_path;
    std::uint64_t seed = 1;
    int seed_count = 1;
    int jobs = 1;
    int max_rounds = 10000;
    double d = 0.0, eps = 0.25;
    bool stage1_only = false;
    bool pad = false;
    bool force = false;
    std::vector<std::string> trackers;
    std::string out = "run";
};

struct AppContext {
    std::string app;
    // rebuilt instances (exactly one engaged)
    std::unique_ptr<apps::RamseyCyclesInstance> cycles;
    std::unique_ptr<apps::RamseyK4Instance> k4;
    std::unique_ptr<apps::SteinerInstance> steiner;
    std::unique_ptr<apps::CoveringInstance> steiner_cov;
};

AppContext make_app_context(const std::string& app, const json& meta,
                            const TripartiteHypergraph& h) {
    AppContext ctx;
    ctx.app = app;
    if (app.empty()) return ctx;
    if (meta.is_null())
        throw std::invalid_argument("conflicts file names app `" + app +
                                    "` but no --meta was given");
    if (meta.value("app", "") != app)
        throw std::invalid_argument("metadata app does not match conflicts file");
    if (app == "ramsey-cycles") {
        ctx.cycles = std::make_unique<apps::RamseyCyclesInstance>(
            apps::build_ramsey_cycles(meta.at("n"), meta.at("k"),
                                      meta.at("ell_cycle"), meta.at("delta")));
        if (hypergraph_to_string(ctx.cycles->h) != hypergraph_to_string(h))
            throw std::invalid_argument(
                "hypergraph file does not match the rebuilt instance");
    } else if (app == "ramsey-k4") {
        ctx.k4 = std::make_unique<apps::RamseyK4Instance>(apps::build_ramsey_k4(
            meta.at("n"), meta.at("delta"), meta.at("seed"), meta.at("rho")));
        if (hypergraph_to_string(ctx.k4->h) != hypergraph_to_string(h))
            throw std::invalid_argument(
                "hypergraph file does not match the rebuilt instance");
    } else if (app == "steiner") {
        auto kappa = apps::all_subsets_of_size(meta.at("m"), meta.at("s"));
        ctx.steiner = std::make_unique<apps::SteinerInstance>(
            apps::build_steiner_covering(meta.at("m"), meta.at("s"), meta.at("t"),
                                         kappa, meta.at("ell")));
        ctx.steiner_cov = std::make_unique<apps::CoveringInstance>(
            apps::steiner_to_covering_lazy(*ctx.steiner, meta.at("d"),
                                           meta.at("eps")));
        if (hypergraph_to_string(ctx.steiner_cov->h) != hypergraph_to_string(h))
            throw std::invalid_argument(
                "hypergraph file does not match the rebuilt instance");
    } else {
        throw std::invalid_argument("unknown app `" + app + "`");
    }
    return ctx;
}

// one full pipeline run; returns the exit code for this seed
int run_match_once(const MatchArgs& a, const TripartiteHypergraph& h,
                   const ConflictSystem& cs, const AppContext& ctx,
                   std::uint64_t seed, const std::string& prefix) {
    double d = a.d;
    if (d <= 0 && ctx.cycles) d = ctx.cycles->d_declared;
    if (d <= 0 && ctx.k4) d = ctx.k4->d_declared;
    if (d <= 0) {
        for (int v = 0; v < h.p_size(); ++v)
            d = std::max(d, static_cast<double>(h.degree1(v, EdgeClass::H1)));
        d = std::max(d, 2.0);
    }

    std::vector<TrackerSpec> specs;
    for (const auto& t : a.trackers) specs.push_back(parse_tracker(t));

    Stage1Options opts;
    opts.force = a.force;
    std::unique_ptr<apps::PairPatternGuard> guard;
    if (ctx.cycles) {
        guard = std::make_unique<apps::PairPatternGuard>(
            apps::cycles_guard_hooks(*ctx.cycles));
    } else if (ctx.k4) {
        guard = std::make_unique<apps::PairPatternGuard>(
            apps::k4_guard_hooks(*ctx.k4));
    }

    const TripartiteHypergraph* run_h = &h;
    std::unique_ptr<PaddedHypergraph> padded;
    if (a.pad && h.q_size() > 0) {
        padded = std::make_unique<PaddedHypergraph>(
            add_dummy_padding(h, static_cast<int>(d)));
        run_h = &padded->h;
        logline("padded Q with " + std::to_string(padded->h.dummy_count()) +
                " dummy edges");
    }

    CounterRng root(seed);
    std::uint64_t s2_seed = root.child(2).next_u64();

    Stage1Result r1 =
        run_stage1(*run_h, cs, d, a.eps, seed, specs, opts, guard.get());
    Matching stripped = padded ? strip_dummy_edges(*run_h, r1.matching) : r1.matching;
    stripped.uncovered = r1.matching.uncovered;

    json stats = r1.stats_json();
    stats["m1_size"] = stripped.m1.size();  // without padding edges
    spit(prefix + ".stats.json", stats.dump(2) + "\n");

    if (a.stage1_only) {
        std::ostringstream ms;
        write_matching(stripped, ms);
        spit(prefix + ".matching", ms.str());
        return 0;
    }

    std::vector<Stage2Event> events;
    std::function<void(int, std::vector<int>&)> safe_filter;
    if (ctx.cycles) events = apps::cycles_stage2_events(*ctx.cycles, r1.matching);
    if (ctx.k4) events = apps::k4_stage2_events(*ctx.k4, r1.matching);
    if (ctx.steiner) {
        events = apps::steiner_stage2_events(*ctx.steiner, *ctx.steiner_cov,
                                             r1.matching);
        safe_filter = apps::steiner_safe_filter(*ctx.steiner, *ctx.steiner_cov,
                                                r1.matching.m1);
    }

    Stage2Result r2;
    try {
        r2 = run_stage2(cs, *run_h, r1.matching, s2_seed, a.max_rounds, 0, d,
                        events, safe_filter ? &safe_filter : nullptr);
    } catch (const LocalUnsatError& e) {
        std::cerr << "locally unsatisfiable: " << e.what() << "\n";
        json log = {{"outcome", "local-unsat"}, {"witness", e.witness}};
        spit(prefix + ".resample.json", log.dump(2) + "\n");
        return 4;
    }
    Matching final_m =
        padded ? strip_dummy_edges(*run_h, r2.matching) : r2.matching;
    std::ostringstream ms;
    write_matching(final_m, ms);
    spit(prefix + ".matching", ms.str());
    json log = r2.log.to_json();
    log["events"] = r2.event_count;
    log["max_event_prob"] = r2.max_event_prob;
    log["max_neighborhood_prob_sum"] = r2.max_neighborhood_sum;
    json profiles = json::array();
    for (const auto& p : r2.safe_profiles) profiles.push_back(p.to_json());
    log["safe_profiles"] = profiles;
    spit(prefix + ".resample.json", log.dump(2) + "\n");
    if (!r2.success) {
        std::cerr << "resample cap exceeded after " << r2.log.rounds.size()
                  << " rounds\n";
        return 3;
    }
    return 0;
}

int cmd_match(const MatchArgs& a) {
    auto h = load_hg(a.hg_path);
    ConflictFileData cf;
    if (!a.cf_path.empty()) cf = parse_conflicts(slurp(a.cf_path));
    json meta;
    if (!a.meta_path.empty()) meta = load_json(a.meta_path);
    AppContext ctx = make_app_context(cf.app, meta, h);
    ConflictSystem cs(h, cf.c, cf.d, cf.ell, a.eps);

    if (a.seed_count <= 1)
        return run_match_once(a, h, cs, ctx, a.seed, a.out);

    // multi-seed ensemble, optionally parallel; per-seed outputs
    std::vector<int> codes(a.seed_count, 0);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    int jobs = std::max(1, a.jobs);
    for (int j = 0; j < jobs; ++j) {
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= a.seed_count) return;
                std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
                std::string prefix = a.out + ".s" + std::to_string(seed);
                try {
                    codes[i] = run_match_once(a, h, cs, ctx, seed, prefix);
                } catch (const std::exception& e) {
                    std::cerr << "seed " << seed << ": " << e.what() << "\n";
                    codes[i] = 2;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    int worst = 0;
    for (int c : codes) worst = std::max(worst, c);
    return worst;
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

int cmd_decode(const std::string& hg_path, const std::string& meta_path,
               const std::string& matching_path, const std::string& out) {
    auto h = load_hg(hg_path);
    json meta = load_json(meta_path);
    Matching m = parse_matching(slurp(matching_path));
    const std::string app = meta.value("app", "");
    std::ostringstream os;
    if (app == "ramsey-cycles") {
        auto inst = apps::build_ramsey_cycles(meta.at("n"), meta.at("k"),
                                              meta.at("ell_cycle"), meta.at("delta"));
        auto col = apps::decode_cycles_coloring(inst, m);
        std::vector<ColoredEdge> lines;
        for (const auto& [e, c] : col) lines.push_back({e, c});
        write_coloring(lines, os);
    } else if (app == "ramsey-k4") {
        auto inst = apps::build_ramsey_k4(meta.at("n"), meta.at("delta"),
                                          meta.at("seed"), meta.at("rho"));
        auto col = apps::decode_k4_coloring(inst, m);
        std::vector<ColoredEdge> lines;
        for (const auto& [e, c] : col) lines.push_back({e, c});
        write_coloring(lines, os);
    } else if (app == "steiner") {
        auto kappa = apps::all_subsets_of_size(meta.at("m"), meta.at("s"));
        auto st = apps::build_steiner_covering(meta.at("m"), meta.at("s"),
                                               meta.at("t"), kappa, meta.at("ell"));
        auto inst = apps::steiner_to_covering_lazy(st, meta.at("d"), meta.at("eps"));
        write_cover(apps::decode_covering(inst, m), os);
    } else if (app == "covering") {
        auto src = load_hg(meta.at("source").get<std::string>());
        std::vector<std::vector<int>> edges;
        for (const Edge& e : src.edges()) edges.push_back(e.vertices);
        auto inst = apps::build_covering_reduction(src.vertex_count(), edges, {},
                                                   meta.at("d"), meta.at("eps"));
        write_cover(apps::decode_covering(inst, m), os);
    } else {
        throw std::invalid_argument("metadata has no decodable app");
    }
    spit(out, os.str());
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

std::vector<ColoredEdge> parse_coloring_from(const std::string& path, int k) {
    std::istringstream is(slurp(path));
    return parse_coloring(is, k);
}

int cmd_verify(const std::string& hg_path, const std::string& cf_path,
               const std::string& matching_path, const std::string& meta_path,
               const std::string& decoded_path, double d, double eps,
               const std::string& out) {
    auto h = load_hg(hg_path);
    ConflictFileData cf;
    if (!cf_path.empty()) cf = parse_conflicts(slurp(cf_path));
    ConflictSystem cs(h, cf.c, cf.d, cf.ell, eps);
    Matching m = parse_matching(slurp(matching_path));
    json rep;
    rep["matching"] = verify_matching(h, cs, m, d, eps).to_json();
    bool all = rep["matching"]["all_pass"].get<bool>();

    if (!meta_path.empty()) {
        json meta = load_json(meta_path);
        const std::string app = meta.value("app", "");
        if (app == "ramsey-cycles" || app == "ramsey-k4") {
            int n = meta.at("n");
            int k = app == "ramsey-k4" ? 2 : static_cast<int>(meta.at("k"));
            std::map<std::vector<int>, int> col;
            if (!decoded_path.empty()) {
                for (const auto& ce : parse_coloring_from(decoded_path, k))
                    col[ce.vertices] = ce.colour;
            } else if (app == "ramsey-cycles") {
                auto inst = apps::build_ramsey_cycles(n, k, meta.at("ell_cycle"),
                                                      meta.at("delta"));
                col = apps::decode_cycles_coloring(inst, m);
            } else {
                auto inst = apps::build_ramsey_k4(n, meta.at("delta"),
                                                  meta.at("seed"), meta.at("rho"));
                col = apps::decode_k4_coloring(inst, m);
            }
            RamseyPattern pat;
            int q;
            if (app == "ramsey-k4") {
                pat.kind = RamseyPattern::Kind::K4;
                q = 5;
            } else {
                pat.kind = RamseyPattern::Kind::TightCycle;
                pat.ell = meta.at("ell_cycle");
                q = k + 1;
            }
            int palette = static_cast<int>(meta.at("t1")) + static_cast<int>(meta.at("t2"));
            auto vrep = verify_ramsey_coloring(n, k, pat, q, col, palette);
            rep["coloring"] = vrep.to_json();
            all = all && vrep.all_pass();
        } else if (app == "steiner") {
            auto kappa = apps::all_subsets_of_size(meta.at("m"), meta.at("s"));
            auto st = apps::build_steiner_covering(meta.at("m"), meta.at("s"),
                                                   meta.at("t"), kappa,
                                                   meta.at("ell"));
            auto inst = apps::steiner_to_covering_lazy(st, meta.at("d"),
                                                       meta.at("eps"));
            std::vector<int> cover;
            if (!decoded_path.empty()) {
                std::istringstream is(slurp(decoded_path));
                cover = parse_cover(is);
            } else {
                cover = apps::decode_covering(inst, m);
            }
            SteinerCheckParams sp{st.s, st.t, st.ell};
            auto vrep = verify_covering(static_cast<int>(st.tsets.size()),
                                        st.h_edges, st.bad_configs, cover,
                                        meta.at("d"), meta.at("eps"), &sp);
            rep["covering"] = vrep.to_json();
            all = all && vrep.all_pass();
        } else if (app == "covering") {
            auto src = load_hg(meta.at("source").get<std::string>());
            std::vector<std::vector<int>> edges;
            for (const Edge& e : src.edges()) edges.push_back(e.vertices);
            auto inst = apps::build_covering_reduction(src.vertex_count(), edges,
                                                       {}, meta.at("d"),
                                                       meta.at("eps"));
            std::vector<int> cover;
            if (!decoded_path.empty()) {
                std::istringstream is(slurp(decoded_path));
                cover = parse_cover(is);
            } else {
                cover = apps::decode_covering(inst, m);
            }
            auto vrep = verify_covering(src.vertex_count(), edges, cf.c, cover,
                                        meta.at("d"), meta.at("eps"));
            rep["covering"] = vrep.to_json();
            all = all && vrep.all_pass();
        } else {
            throw std::invalid_argument("metadata has no verifiable app");
        }
    }
    rep["all_pass"] = all;
    std::string text = rep.dump(2) + "\n";
    if (out.empty()) std::cout << text;
    else spit(out, text);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conflict-free hypergraph matching toolkit"};
    app.require_subcommand(1);

    // ---- build
    BuildArgs b;
    auto* cb = app.add_subcommand("build", "construct an application instance");
    cb->add_option("app", b.app, "ramsey-cycles | ramsey-k4 | covering | steiner")
        ->required();
    cb->add_option("--n", b.n);
    cb->add_option("--k", b.k);
    cb->add_option("--cycle-len", b.cycle_len);
    cb->add_option("--delta", b.delta);
    cb->add_option("--rho", b.rho);
    cb->add_option("--seed", b.seed);
    cb->add_option("--m", b.m);
    cb->add_option("--s", b.s);
    cb->add_option("--t", b.t);
    cb->add_option("--ell", b.ell);
    cb->add_option("--d", b.d);
    cb->add_option("--eps", b.eps);
    cb->add_option("--input", b.input, "source hypergraph (covering)");
    cb->add_option("--conflicts", b.conflicts, "source conflicts (covering)");
    cb->add_option("--out", b.out, "output prefix");
    cb->add_option("--format", b.format)->check(CLI::IsMember({"hg", "json"}));
    cb->add_flag("--explicit-conflicts", b.explicit_conflicts,
                 "materialise the conflict lists (small instances only)");

    // ---- validate
    std::string v_hg, v_cf, v_mode = "both", v_out;
    double v_d = 0.0, v_eps = 0.25;
    auto* cv = app.add_subcommand("validate", "run the boundedness checks");
    cv->add_option("--hg", v_hg)->required();
    cv->add_option("--conflicts", v_cf);
    cv->add_option("--d", v_d);
    cv->add_option("--eps", v_eps);
    cv->add_option("--mode", v_mode)->check(CLI::IsMember({"simple", "mixed", "both"}));
    cv->add_option("--out", v_out);

    // ---- match
    MatchArgs m;
    auto* cm = app.add_subcommand("match", "stage 1 + stage 2 matching");
    cm->add_option("--hg", m.hg_path)->required();
    cm->add_option("--conflicts", m.cf_path);
    cm->add_option("--meta", m.meta_path);
    cm->add_option("--seed", m.seed);
    cm->add_option("--seed-count", m.seed_count);
    cm->add_option("--jobs", m.jobs);
    cm->add_option("--max-rounds", m.max_rounds);
    cm->add_option("--d", m.d);
    cm->add_option("--eps", m.eps);
    cm->add_option("--trackers", m.trackers,
                   "wx:x:j1:j2 | wxp:x:j1:j2 | wxb:x:b1,b2,...");
    cm->add_flag("--stage1-only", m.stage1_only);
    cm->add_flag("--pad", m.pad, "pad Q-vertex degrees up to d with dummy edges");
    cm->add_flag("--force", m.force, "skip the (C1)-(C3) precheck");
    cm->add_option("--out", m.out, "output prefix");

    // ---- decode
    std::string d_hg, d_meta, d_matching, d_out = "decoded.out";
    auto* cd = app.add_subcommand("decode", "matching -> domain object");
    cd->add_option("--hg", d_hg)->required();
    cd->add_option("--meta", d_meta)->required();
    cd->add_option("--matching", d_matching)->required();
    cd->add_option("--out", d_out);

    // ---- verify
    std::string f_hg, f_cf, f_matching, f_meta, f_decoded, f_out;
    double f_d = 0.0, f_eps = 0.25;
    auto* cf = app.add_subcommand("verify", "independent verification");
    cf->add_option("--hg", f_hg)->required();
    cf->add_option("--conflicts", f_cf);
    cf->add_option("--matching", f_matching)->required();
    cf->add_option("--meta", f_meta);
    cf->add_option("--decoded", f_decoded);
    cf->add_option("--d", f_d);
    cf->add_option("--eps", f_eps);
    cf->add_option("--out", f_out);

    CLI11_PARSE(app, argc, argv);
    try {
        if (cb->parsed()) return cmd_build(b);
        if (cv->parsed()) return cmd_validate(v_hg, v_cf, v_d, v_eps, v_mode, v_out);
        if (cm->parsed()) return cmd_match(m);
        if (cd->parsed()) return cmd_decode(d_hg, d_meta, d_matching, d_out);
        if (cf->parsed())
            return cmd_verify(f_hg, f_cf, f_matching, f_meta, f_decoded, f_d,
                              f_eps, f_out);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const LocalUnsatError& e) {
        std::cerr << "locally unsatisfiable: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
