#ifndef CFHM_STAGE1_HPP
#define CFHM_STAGE1_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "cfhm/conditions.hpp"
#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"
#include "cfhm/rng.hpp"
#include "cfhm/unavoidability.hpp"

namespace cfhm {

// -------------------------------------------------------------------------
// Conflict-sharing pairs
// -------------------------------------------------------------------------

struct SharingPairs {
    // flagged pairs (a < b), ascending; partners[e] holds every partner of e
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::vector<int>> partners;

    bool flagged(int a, int b) const {
        if (a >= static_cast<int>(partners.size())) return false;
        return std::binary_search(partners[a].begin(), partners[a].end(), b);
    }
};

// Pairs {e, f} of H1 edges whose semiconflict links overlap above
// d^{j' - eps_threshold} for some semiconflict size j' in [ell - 1].
// Stage 1 excludes pairs at eps/2; tracker testability gates use 2*eps.
inline SharingPairs conflict_sharing_pairs(const ConflictSystem& cs,
                                           const TripartiteHypergraph& h,
                                           double eps_threshold, double d) {
    SharingPairs out;
    out.partners.resize(h.edge_count());
    if (cs.c().empty()) return out;

    // semiconflict -> list of completing edges
    std::unordered_map<std::vector<int>, std::vector<int>, VecHash> completions;
    for (const Conflict& cf : cs.c()) {
        for (std::size_t i = 0; i < cf.edges.size(); ++i) {
            std::vector<int> semi;
            semi.reserve(cf.edges.size() - 1);
            for (std::size_t t = 0; t < cf.edges.size(); ++t)
                if (t != i) semi.push_back(cf.edges[t]);
            completions[semi].push_back(cf.edges[i]);
        }
    }
    // per-pair shared-semiconflict counts, split by semiconflict size
    std::map<std::pair<int, int>, std::map<int, long long>> counts;
    for (auto& [semi, comps] : completions) {
        std::sort(comps.begin(), comps.end());
        const int jp = static_cast<int>(semi.size());
        for (std::size_t a = 0; a < comps.size(); ++a)
            for (std::size_t b = a + 1; b < comps.size(); ++b)
                ++counts[{comps[a], comps[b]}][jp];
    }
    for (const auto& [pr, by_size] : counts) {
        bool flag = false;
        for (const auto& [jp, cnt] : by_size) {
            if (jp < 1 || jp > cs.ell() - 1) continue;
            if (static_cast<double>(cnt) > std::pow(d, jp - eps_threshold)) {
                flag = true;
                break;
            }
        }
        if (flag) {
            out.pairs.push_back(pr);
            out.partners[pr.first].push_back(pr.second);
            out.partners[pr.second].push_back(pr.first);
        }
    }
    for (auto& v : out.partners) std::sort(v.begin(), v.end());
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

// -------------------------------------------------------------------------
// Testability
// -------------------------------------------------------------------------

inline bool edges_form_matching(const TripartiteHypergraph& h,
                                const std::vector<int>& ids) {
    std::vector<int> seen;
    for (int id : ids)
        for (int v : h.edge(id).vertices) seen.push_back(v);
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

inline bool contains_c_conflict(const ConflictSystem& cs,
                                const std::vector<int>& sorted_ids) {
    std::vector<int> cands;
    for (int id : sorted_ids)
        for (int ci : cs.c_at_edge(id)) cands.push_back(ci);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (int ci : cands) {
        bool inside = true;
        for (int id : cs.c()[ci].edges)
            if (!std::binary_search(sorted_ids.begin(), sorted_ids.end(), id)) {
                inside = false;
                break;
            }
        if (inside) return true;
    }
    return false;
}

inline bool sharing_clean(const SharingPairs& pairs, const std::vector<int>& h1_ids) {
    for (std::size_t a = 0; a < h1_ids.size(); ++a)
        for (std::size_t b = a + 1; b < h1_ids.size(); ++b)
            if (pairs.flagged(std::min(h1_ids[a], h1_ids[b]),
                              std::max(h1_ids[a], h1_ids[b])))
                return false;
    return true;
}

// The gate applied to test functions and conflicts: the H1 part is a
// matching, the whole set is C-free and carries no flagged sharing pair.
inline bool testable(const TripartiteHypergraph& h, const ConflictSystem& cs,
                     const SharingPairs& gate_pairs, const std::vector<int>& ids) {
    std::vector<int> sorted_ids = ids;
    std::sort(sorted_ids.begin(), sorted_ids.end());
    std::vector<int> h1_ids;
    for (int id : sorted_ids)
        if (h.edge(id).klass == EdgeClass::H1) h1_ids.push_back(id);
    if (!edges_form_matching(h, sorted_ids)) {
        // only the H1 side must be a matching for testability
        if (!edges_form_matching(h, h1_ids)) return false;
    }
    if (contains_c_conflict(cs, sorted_ids)) return false;
    return sharing_clean(gate_pairs, h1_ids);
}

// -------------------------------------------------------------------------
// Test-function evaluation (from scratch)
// -------------------------------------------------------------------------

namespace detail {

inline bool subset_of_sorted(const std::vector<int>& small,
                             const std::vector<int>& big) {
    for (int id : small)
        if (!std::binary_search(big.begin(), big.end(), id)) return false;
    return true;
}

}  // namespace detail

// w_x over an H1 edge set m: the A-mass of testable (j1, j2)-conflicts with
// x in the H2 part whose H1 part sits inside m. Pass all_h1 = true for the
// w_x(H1) total (no m filter).
inline double eval_w_x(const ConflictSystem& cs, const TripartiteHypergraph& h,
                       const SharingPairs& gate_pairs, int x, int j1, int j2,
                       const std::vector<int>& m, bool all_h1 = false) {
    std::vector<int> ms = m;
    std::sort(ms.begin(), ms.end());
    double total = 0.0;
    for (int di : cs.d_at_pvertex(x)) {
        const Conflict& cf = cs.d()[di];
        if (cf.j1() != j1 || cf.j2() != j2) continue;
        if (!all_h1 && !detail::subset_of_sorted(cf.h1_part, ms)) continue;
        if (!testable(h, cs, gate_pairs, cf.edges)) continue;
        total += unavoidability(h, cf);
    }
    return total;
}

// w'_x over m: for each conflict counted by w_x, weight by the number of m
// edges e outside its H1 part C such that C ∪ {e} is testable and e covers
// some y in the H2 part other than x. all_h1 = true sums e over all of H1.
inline double eval_w_x_prime(const ConflictSystem& cs, const TripartiteHypergraph& h,
                             const SharingPairs& gate_pairs, int x, int j1, int j2,
                             const std::vector<int>& m, bool all_h1 = false) {
    std::vector<int> ms = m;
    std::sort(ms.begin(), ms.end());
    double total = 0.0;
    for (int di : cs.d_at_pvertex(x)) {
        const Conflict& cf = cs.d()[di];
        if (cf.j1() != j1 || cf.j2() != j2) continue;
        if (!all_h1 && !detail::subset_of_sorted(cf.h1_part, ms)) continue;
        if (!testable(h, cs, gate_pairs, cf.edges)) continue;
        const double a = unavoidability(h, cf);
        for (int y : cf.vp) {
            if (y == x) continue;
            // edges of m (or H1) at y, outside the H1 part
            const auto& inc = h.incident(y, EdgeClass::H1);
            for (int e : inc) {
                if (h.edge(e).dummy) continue;
                if (!all_h1 && !std::binary_search(ms.begin(), ms.end(), e)) continue;
                if (std::binary_search(cf.h1_part.begin(), cf.h1_part.end(), e))
                    continue;
                std::vector<int> cprime = cf.h1_part;
                cprime.push_back(e);
                if (!testable(h, cs, gate_pairs, cprime)) continue;
                total += a;
            }
        }
    }
    return total;
}

// w_x^b over m: families of pairwise-disjoint H1 parts inside m, b[j-1]
// parts of size j, each forming a (j,1)-conflict with the same edge
// e in N_x, with the union testable; normalized by 1/d_x.
inline double eval_w_x_b(const ConflictSystem& cs, const TripartiteHypergraph& h,
                         const SharingPairs& gate_pairs, int x,
                         const std::vector<int>& b, const std::vector<int>& m,
                         bool all_h1 = false) {
    const int dx = h.degree1(x, EdgeClass::H2);
    if (dx == 0) throw std::invalid_argument("w_x^b needs d_H2(x) > 0");
    std::vector<int> ms = m;
    std::sort(ms.begin(), ms.end());
    std::vector<int> sizes;  // sizes with b_j > 0, ascending
    for (std::size_t j = 1; j <= b.size(); ++j)
        if (b[j - 1] > 0) sizes.push_back(static_cast<int>(j));
    if (sizes.empty()) return 0.0;

    long long families = 0;
    for (int e : h.incident(x, EdgeClass::H2)) {
        // candidate parts per size
        std::map<int, std::vector<const std::vector<int>*>> parts;
        for (int di : cs.d_at_edge(e)) {
            const Conflict& cf = cs.d()[di];
            if (cf.j2() != 1 || cf.h2_part[0] != e) continue;
            const int j = cf.j1();
            if (j < 1 || j > static_cast<int>(b.size()) || b[j - 1] == 0) continue;
            if (!all_h1 && !detail::subset_of_sorted(cf.h1_part, ms)) continue;
            parts[j].push_back(&cf.h1_part);
        }
        bool enough = true;
        for (int j : sizes)
            if (static_cast<int>(parts[j].size()) < b[j - 1]) { enough = false; break; }
        if (!enough) continue;

        // DFS over size groups choosing b_j pairwise-disjoint parts
        std::vector<int> chosen_edges;
        std::function<void(std::size_t, int, std::size_t)> rec =
            [&](std::size_t size_idx, int taken_in_size, std::size_t start) {
                if (size_idx == sizes.size()) {
                    std::vector<int> uni = chosen_edges;
                    std::sort(uni.begin(), uni.end());
                    if (testable(h, cs, gate_pairs, uni)) ++families;
                    return;
                }
                const int j = sizes[size_idx];
                const auto& pool = parts[j];
                if (taken_in_size == b[j - 1]) {
                    rec(size_idx + 1, 0, 0);
                    return;
                }
                for (std::size_t i = start; i < pool.size(); ++i) {
                    const auto& part = *pool[i];
                    bool disjoint = true;
                    for (int id : part)
                        if (std::find(chosen_edges.begin(), chosen_edges.end(), id) !=
                            chosen_edges.end()) {
                            disjoint = false;
                            break;
                        }
                    if (!disjoint) continue;
                    chosen_edges.insert(chosen_edges.end(), part.begin(), part.end());
                    rec(size_idx, taken_in_size + 1, i + 1);
                    chosen_edges.resize(chosen_edges.size() - part.size());
                }
            };
        rec(0, 0, 0);
    }
    return static_cast<double>(families) / dx;
}

// -------------------------------------------------------------------------
// Normalizers (reporting only)
// -------------------------------------------------------------------------

// alpha_x = max over j' in [j1] of d^{j'-j1} * Delta^A_{j',0}(G_x), and
// d^{-j1} * max_y A(G_{x,y}), for G = D^{(j1,j2)}.
inline double alpha_normalizer(const ConflictSystem& cs, const TripartiteHypergraph& h,
                               int x, int j1, int j2, double d) {
    std::vector<Conflict> gx;
    for (int di : cs.d_at_pvertex(x)) {
        const Conflict& cf = cs.d()[di];
        if (cf.j1() == j1 && cf.j2() == j2) gx.push_back(cf);
    }
    double alpha = 0.0;
    for (int jp = 1; jp <= j1; ++jp) {
        WeightedDegree wd = weighted_max_degree(h, gx, jp, 0);
        alpha = std::max(alpha, std::pow(d, jp - j1) * wd.value);
    }
    std::map<int, double> ay;
    for (const Conflict& cf : gx) {
        double a = unavoidability(h, cf);
        for (int y : cf.vp)
            if (y != x) ay[y] += a;
    }
    for (const auto& [y, a] : ay) alpha = std::max(alpha, std::pow(d, -j1) * a);
    return alpha;
}

// beta_x for the (j1, 1) families.
inline double beta_normalizer(const ConflictSystem& cs, const TripartiteHypergraph& h,
                              int x, double d) {
    const int dx = h.degree1(x, EdgeClass::H2);
    if (dx == 0) return 0.0;
    double beta = 0.0;
    // beta': counts of conflicts containing (j'-subset of H1 part, the H2 edge)
    std::map<std::vector<int>, long long> counts;
    std::map<std::vector<int>, long long> full_counts;  // key: full H1 part
    std::vector<std::vector<int>> subs;
    for (int di : cs.d_at_pvertex(x)) {
        const Conflict& cf = cs.d()[di];
        if (cf.j2() != 1) continue;
        const int j1 = cf.j1();
        for (int jp = 1; jp <= j1 - 1; ++jp) {
            subs.clear();
            detail::subsets_of(cf.h1_part, jp, subs);
            for (const auto& s : subs) {
                std::vector<int> key = {cf.h2_part[0], j1};
                key.insert(key.end(), s.begin(), s.end());
                long long c = ++counts[key];
                beta = std::max(beta, std::pow(d, jp - j1) * static_cast<double>(c));
            }
        }
        std::vector<int> fkey = {j1};
        fkey.insert(fkey.end(), cf.h1_part.begin(), cf.h1_part.end());
        long long c = ++full_counts[fkey];
        beta = std::max(beta, static_cast<double>(c) / dx);
    }
    return beta;
}

// -------------------------------------------------------------------------
// Stage 1: conflict-aware random greedy matching
// -------------------------------------------------------------------------

struct TrackerSpec {
    enum class Kind { WX, WXP, WXB };
    Kind kind = Kind::WX;
    int x = -1;
    int j1 = 0;
    int j2 = 0;
    std::vector<int> b;  // WXB: b[j-1] parts of size j

    int uniformity() const {
        if (kind == Kind::WX) return j1;
        if (kind == Kind::WXP) return j1 + 1;
        int s = 0;
        for (std::size_t j = 1; j <= b.size(); ++j)
            s += static_cast<int>(j) * b[j - 1];
        return s;
    }

    std::string name() const {
        switch (kind) {
            case Kind::WX:
                return "w_x[x=" + std::to_string(x) + ",j1=" + std::to_string(j1) +
                       ",j2=" + std::to_string(j2) + "]";
            case Kind::WXP:
                return "w_x'[x=" + std::to_string(x) + ",j1=" + std::to_string(j1) +
                       ",j2=" + std::to_string(j2) + "]";
            default: {
                std::string bs;
                for (int v : b) bs += std::to_string(v);
                return "w_x^b[x=" + std::to_string(x) + ",b=" + bs + "]";
            }
        }
    }
};

struct TrackerResult {
    TrackerSpec spec;
    double value = 0.0;       // incremental value over m1 at termination
    double h1_value = 0.0;    // value over all of H1
    double prediction = 0.0;  // d^{-uniformity} * h1_value
    double ratio = 0.0;
    double normalizer = 0.0;  // alpha_x or beta_x
};

enum class ExclusionReason : std::uint8_t {
    None = 0,
    InMatching = 1,
    VertexOverlap = 2,
    CompletesConflict = 3,
    SharingPair = 4,
};

struct Stage1Options {
    bool force = false;          // skip the (C1)-(C3) precheck
    int consistency_every = 0;   // debug: scratch-check trackers every N adds
    bool check_q_degrees = true; // enforce Q-degrees <= d
};

// Implicit conflict families hook: after `edge` joins m1, append every alive
// edge that would now complete a conflict. The view argument exposes the
// current matching state.
class Stage1Guard {
public:
    virtual ~Stage1Guard() = default;
    virtual void on_add(int edge, std::vector<int>& kill) = 0;
};

struct Stage1Result {
    Matching matching;  // m2 empty
    double uncovered_fraction = 0.0;
    long long excluded_vertex_overlap = 0;
    long long excluded_completes_conflict = 0;
    long long excluded_sharing_pair = 0;
    std::uint64_t seed = 0;
    std::uint64_t draws = 0;
    std::vector<ExclusionReason> reasons;  // per H1 edge id
    std::vector<TrackerResult> trackers;

    nlohmann::json stats_json() const {
        nlohmann::json tr = nlohmann::json::array();
        for (const auto& t : trackers) {
            tr.push_back({{"kind", t.spec.name()},
                          {"value", t.value},
                          {"h1_value", t.h1_value},
                          {"prediction", t.prediction},
                          {"ratio", t.ratio},
                          {"normalizer", t.normalizer}});
        }
        return nlohmann::json{
            {"seed", seed},
            {"m1_size", matching.m1.size()},
            {"uncovered_fraction", uncovered_fraction},
            {"draws", draws},
            {"exclusion_counts",
             {{"vertex_overlap", excluded_vertex_overlap},
              {"completes_conflict", excluded_completes_conflict},
              {"conflict_sharing_pair", excluded_sharing_pair}}},
            {"trackers", tr}};
    }
};

inline Stage1Result run_stage1(const TripartiteHypergraph& h, const ConflictSystem& cs,
                               double d, double eps, std::uint64_t seed,
                               const std::vector<TrackerSpec>& tracker_specs = {},
                               const Stage1Options& opts = {},
                               Stage1Guard* guard = nullptr) {
    if (opts.check_q_degrees) {
        for (int i = 0; i < h.q_size(); ++i) {
            int v = h.q_begin() + i;
            if (h.degree1(v, EdgeClass::H1) > d)
                throw std::invalid_argument(
                    "Q-vertex " + std::to_string(v) +
                    " exceeds d; pad the instance or raise d");
        }
    }
    if (!opts.force && !cs.c().empty()) {
        ConditionReport crep = check_c_conditions(cs, h, d, eps);
        if (!crep.all_hold())
            throw std::invalid_argument(
                "conflict system fails (C1)-(C3); set force to run anyway");
    }

    SharingPairs excl_pairs = conflict_sharing_pairs(cs, h, eps / 2.0, d);
    SharingPairs gate_pairs = conflict_sharing_pairs(cs, h, 2.0 * eps, d);

    Stage1Result res;
    res.seed = seed;
    res.reasons.assign(h.edge_count(), ExclusionReason::None);

    // alive pool: all H1-class edges (padding included)
    std::vector<int> alive_ids;
    std::vector<int> pos(h.edge_count(), -1);
    for (int id = 0; id < h.edge_count(); ++id) {
        if (h.edge(id).klass != EdgeClass::H1) continue;
        pos[id] = static_cast<int>(alive_ids.size());
        alive_ids.push_back(id);
    }
    auto remove_alive = [&](int id) {
        int p = pos[id];
        int last = alive_ids.back();
        alive_ids[p] = last;
        pos[last] = p;
        alive_ids.pop_back();
        pos[id] = -1;
    };
    auto kill = [&](int id, ExclusionReason why) {
        if (pos[id] < 0) return;
        remove_alive(id);
        res.reasons[id] = why;
        switch (why) {
            case ExclusionReason::VertexOverlap: ++res.excluded_vertex_overlap; break;
            case ExclusionReason::CompletesConflict:
                ++res.excluded_completes_conflict;
                break;
            case ExclusionReason::SharingPair: ++res.excluded_sharing_pair; break;
            default: break;
        }
    };

    // C-conflict completion bookkeeping
    std::vector<int> c_need(cs.c().size());
    std::vector<char> c_dead(cs.c().size(), 0);
    for (std::size_t i = 0; i < cs.c().size(); ++i)
        c_need[i] = static_cast<int>(cs.c()[i].edges.size());

    std::vector<char> in_m1(h.edge_count(), 0);
    std::vector<int> covered_by(h.vertex_count(), -1);

    // ---- tracker state ----
    struct WxState {
        std::size_t spec_idx;
        double value = 0.0;
    };
    struct WxpState {
        std::size_t spec_idx;
        double value = 0.0;
    };
    struct WxbState {
        std::size_t spec_idx;
        double value = 0.0;                  // d_x * value actually tracked below
        long long families = 0;              // running family count
        std::map<int, std::vector<int>> parts_by_edge;  // e -> d-conflict idxs in m1
    };
    std::vector<WxState> wx_states;
    std::vector<WxpState> wxp_states;
    std::vector<WxbState> wxb_states;
    // conflict -> trackers watching it
    std::vector<int> d_in_m1(cs.d().size(), 0);
    std::vector<char> d_testable(cs.d().size(), 0);
    for (std::size_t i = 0; i < cs.d().size(); ++i)
        d_testable[i] = testable(h, cs, gate_pairs, cs.d()[i].edges) ? 1 : 0;
    std::vector<char> d_complete(cs.d().size(), 0);
    // completed conflicts watched by wxp trackers, indexed by P-vertex
    struct WxpWatch {
        std::size_t state_idx;
        int conflict;
        double a;
    };
    std::vector<std::vector<WxpWatch>> wxp_waiting(h.p_size());

    for (std::size_t si = 0; si < tracker_specs.size(); ++si) {
        const TrackerSpec& sp = tracker_specs[si];
        if (sp.x < 0 || sp.x >= h.p_size())
            throw std::invalid_argument("tracker vertex out of range");
        switch (sp.kind) {
            case TrackerSpec::Kind::WX: {
                WxState st{si, 0.0};
                if (sp.j1 == 0) {
                    // constant: every (0, j2) conflict at x counts from the start
                    for (int di : cs.d_at_pvertex(sp.x)) {
                        const Conflict& cf = cs.d()[di];
                        if (cf.j1() == 0 && cf.j2() == sp.j2 && d_testable[di])
                            st.value += unavoidability(h, cf);
                    }
                }
                wx_states.push_back(st);
                break;
            }
            case TrackerSpec::Kind::WXP: {
                const std::size_t wi = wxp_states.size();
                wxp_states.push_back(WxpState{si, 0.0});
                if (sp.j1 == 0) {
                    // empty H1 parts are inside m1 from the start; watch their
                    // H2-part vertices for covering edges
                    for (int di : cs.d_at_pvertex(sp.x)) {
                        const Conflict& cf = cs.d()[di];
                        if (cf.j1() != 0 || cf.j2() != sp.j2 || !d_testable[di])
                            continue;
                        const double a = unavoidability(h, cf);
                        for (int y : cf.vp)
                            if (y != sp.x) wxp_waiting[y].push_back(WxpWatch{wi, di, a});
                    }
                }
                break;
            }
            case TrackerSpec::Kind::WXB: {
                if (h.degree1(sp.x, EdgeClass::H2) == 0)
                    throw std::invalid_argument("w_x^b tracker needs d_H2(x) > 0");
                wxb_states.push_back(WxbState{si, 0.0, 0, {}});
                break;
            }
        }
    }

    auto wxb_gate = [&](const WxbState& st, const TrackerSpec& sp, int e) -> long long {
        // recount families at H2 edge e for profile sp.b
        auto it = st.parts_by_edge.find(e);
        if (it == st.parts_by_edge.end()) return 0;
        std::vector<int> sizes;
        for (std::size_t j = 1; j <= sp.b.size(); ++j)
            if (sp.b[j - 1] > 0) sizes.push_back(static_cast<int>(j));
        std::map<int, std::vector<const std::vector<int>*>> pool;
        for (int di : it->second) {
            const Conflict& cf = cs.d()[di];
            pool[cf.j1()].push_back(&cf.h1_part);
        }
        long long families = 0;
        std::vector<int> chosen;
        std::function<void(std::size_t, int, std::size_t)> rec =
            [&](std::size_t size_idx, int taken, std::size_t start) {
                if (size_idx == sizes.size()) {
                    std::vector<int> uni = chosen;
                    std::sort(uni.begin(), uni.end());
                    if (testable(h, cs, gate_pairs, uni)) ++families;
                    return;
                }
                const int j = sizes[size_idx];
                const auto& lst = pool[j];
                if (taken == sp.b[j - 1]) { rec(size_idx + 1, 0, 0); return; }
                for (std::size_t i = start; i < lst.size(); ++i) {
                    const auto& part = *lst[i];
                    bool dis = true;
                    for (int id : part)
                        if (std::find(chosen.begin(), chosen.end(), id) != chosen.end()) {
                            dis = false;
                            break;
                        }
                    if (!dis) continue;
                    chosen.insert(chosen.end(), part.begin(), part.end());
                    rec(size_idx, taken + 1, i + 1);
                    chosen.resize(chosen.size() - part.size());
                }
            };
        rec(0, 0, 0);
        return families;
    };

    CounterRng rng(seed);
    std::vector<int> m1;
    std::vector<int> guard_kills;

    while (!alive_ids.empty()) {
        const int e = alive_ids[rng.below(alive_ids.size())];
        remove_alive(e);
        res.reasons[e] = ExclusionReason::InMatching;
        in_m1[e] = 1;
        m1.push_back(e);

        // --- the new edge may cover watched H2-part vertices of conflicts
        // whose H1 part completed earlier
        for (int v : h.edge(e).vertices) {
            if (!h.in_p(v)) continue;
            for (const WxpWatch& w : wxp_waiting[v]) {
                const Conflict& cf = cs.d()[w.conflict];
                if (std::binary_search(cf.h1_part.begin(), cf.h1_part.end(), e))
                    continue;
                std::vector<int> cprime = cf.h1_part;
                cprime.push_back(e);
                if (testable(h, cs, gate_pairs, cprime))
                    wxp_states[w.state_idx].value += w.a;
            }
        }

        // matching constraint
        for (int v : h.edge(e).vertices) {
            covered_by[v] = e;
            for (int f : h.incident(v, EdgeClass::H1)) kill(f, ExclusionReason::VertexOverlap);
        }
        // C-conflict completion
        for (int ci : cs.c_at_edge(e)) {
            if (c_dead[ci]) continue;
            if (--c_need[ci] == 1) {
                int remaining = -1;
                for (int g : cs.c()[ci].edges)
                    if (!in_m1[g]) { remaining = g; break; }
                if (remaining < 0) continue;
                if (pos[remaining] >= 0) kill(remaining, ExclusionReason::CompletesConflict);
                else c_dead[ci] = 1;
            }
        }
        // flagged conflict-sharing pairs
        for (int f : excl_pairs.partners[e]) kill(f, ExclusionReason::SharingPair);
        // implicit families
        if (guard) {
            guard_kills.clear();
            guard->on_add(e, guard_kills);
            for (int f : guard_kills) kill(f, ExclusionReason::CompletesConflict);
        }

        // --- D-conflict completions feed the trackers
        for (int di : cs.d_at_edge(e)) {
            const Conflict& cf = cs.d()[di];
            if (++d_in_m1[di] != cf.j1()) continue;
            d_complete[di] = 1;
            if (!d_testable[di]) continue;
            const double a = unavoidability(h, cf);
            for (auto& st : wx_states) {
                const TrackerSpec& sp = tracker_specs[st.spec_idx];
                if (sp.j1 != cf.j1() || sp.j2 != cf.j2() || sp.j1 == 0) continue;
                if (!std::binary_search(cf.vp.begin(), cf.vp.end(), sp.x)) continue;
                st.value += a;
            }
            for (std::size_t wi = 0; wi < wxp_states.size(); ++wi) {
                auto& st = wxp_states[wi];
                const TrackerSpec& sp = tracker_specs[st.spec_idx];
                if (sp.j1 != cf.j1() || sp.j2 != cf.j2()) continue;
                if (!std::binary_search(cf.vp.begin(), cf.vp.end(), sp.x)) continue;
                // count existing covering edges at the other H2-part vertices
                for (int y : cf.vp) {
                    if (y == sp.x) continue;
                    int cov = covered_by[y];
                    if (cov < 0 || h.edge(cov).klass != EdgeClass::H1) continue;
                    if (std::binary_search(cf.h1_part.begin(), cf.h1_part.end(), cov))
                        continue;
                    std::vector<int> cprime = cf.h1_part;
                    cprime.push_back(cov);
                    if (testable(h, cs, gate_pairs, cprime)) st.value += a;
                    // future edges covering y are handled by the waiting list
                }
                for (int y : cf.vp)
                    if (y != sp.x) wxp_waiting[y].push_back(WxpWatch{wi, di, a});
            }
            for (auto& st : wxb_states) {
                const TrackerSpec& sp = tracker_specs[st.spec_idx];
                if (cf.j2() != 1) continue;
                if (cf.j1() < 1 || cf.j1() > static_cast<int>(sp.b.size()) ||
                    sp.b[cf.j1() - 1] == 0)
                    continue;
                const int he = cf.h2_part[0];
                if (h.h2_pvertex(he) != sp.x) continue;
                long long before = wxb_gate(st, tracker_specs[st.spec_idx], he);
                st.parts_by_edge[he].push_back(di);
                long long after = wxb_gate(st, tracker_specs[st.spec_idx], he);
                st.families += after - before;
            }
        }

        if (opts.consistency_every > 0 &&
            static_cast<int>(m1.size()) % opts.consistency_every == 0) {
            std::vector<int> msorted = m1;
            std::sort(msorted.begin(), msorted.end());
            for (const auto& st : wx_states) {
                const TrackerSpec& sp = tracker_specs[st.spec_idx];
                double scratch =
                    eval_w_x(cs, h, gate_pairs, sp.x, sp.j1, sp.j2, msorted);
                if (std::abs(scratch - st.value) >
                    1e-6 * std::max(1.0, std::abs(scratch)))
                    throw std::logic_error("w_x tracker diverged from scratch value");
            }
            for (const auto& st : wxp_states) {
                const TrackerSpec& sp = tracker_specs[st.spec_idx];
                double scratch =
                    eval_w_x_prime(cs, h, gate_pairs, sp.x, sp.j1, sp.j2, msorted);
                if (std::abs(scratch - st.value) >
                    1e-6 * std::max(1.0, std::abs(scratch)))
                    throw std::logic_error("w_x' tracker diverged from scratch value");
            }
            for (const auto& st : wxb_states) {
                const TrackerSpec& sp = tracker_specs[st.spec_idx];
                double scratch = eval_w_x_b(cs, h, gate_pairs, sp.x, sp.b, msorted);
                double inc = static_cast<double>(st.families) /
                             h.degree1(sp.x, EdgeClass::H2);
                if (std::abs(scratch - inc) > 1e-6 * std::max(1.0, std::abs(scratch)))
                    throw std::logic_error("w_x^b tracker diverged from scratch value");
            }
        }
    }

    res.draws = rng.draws();
    std::sort(m1.begin(), m1.end());
    res.matching.m1 = std::move(m1);
    res.matching.uncovered = uncovered_p_vertices(h, res.matching);
    res.uncovered_fraction =
        h.p_size() == 0 ? 0.0
                        : static_cast<double>(res.matching.uncovered.size()) / h.p_size();

    // finalize trackers: scratch re-evaluation is mandatory at termination
    std::vector<int> msorted = res.matching.m1;
    auto finish = [&](const TrackerSpec& sp, double inc_value) {
        TrackerResult tr;
        tr.spec = sp;
        tr.value = inc_value;
        double scratch;
        switch (sp.kind) {
            case TrackerSpec::Kind::WX:
                scratch = eval_w_x(cs, h, gate_pairs, sp.x, sp.j1, sp.j2, msorted);
                tr.h1_value = eval_w_x(cs, h, gate_pairs, sp.x, sp.j1, sp.j2, {}, true);
                tr.normalizer = alpha_normalizer(cs, h, sp.x, sp.j1, sp.j2, d);
                break;
            case TrackerSpec::Kind::WXP:
                scratch = eval_w_x_prime(cs, h, gate_pairs, sp.x, sp.j1, sp.j2, msorted);
                tr.h1_value =
                    eval_w_x_prime(cs, h, gate_pairs, sp.x, sp.j1, sp.j2, {}, true);
                tr.normalizer = alpha_normalizer(cs, h, sp.x, sp.j1, sp.j2, d);
                break;
            default:
                scratch = eval_w_x_b(cs, h, gate_pairs, sp.x, sp.b, msorted);
                tr.h1_value = eval_w_x_b(cs, h, gate_pairs, sp.x, sp.b, {}, true);
                tr.normalizer = beta_normalizer(cs, h, sp.x, d);
                break;
        }
        if (std::abs(scratch - tr.value) > 1e-6 * std::max(1.0, std::abs(scratch)))
            throw std::logic_error("tracker diverged from scratch value at termination");
        tr.prediction = std::pow(d, -sp.uniformity()) * tr.h1_value;
        tr.ratio = tr.prediction > 0 ? tr.value / tr.prediction : 0.0;
        res.trackers.push_back(tr);
    };
    for (const auto& st : wx_states) finish(tracker_specs[st.spec_idx], st.value);
    for (const auto& st : wxp_states) finish(tracker_specs[st.spec_idx], st.value);
    for (const auto& st : wxb_states)
        finish(tracker_specs[st.spec_idx],
               static_cast<double>(st.families) /
                   h.degree1(tracker_specs[st.spec_idx].x, EdgeClass::H2));
    std::sort(res.trackers.begin(), res.trackers.end(),
              [](const TrackerResult& a, const TrackerResult& b) {
                  return a.spec.name() < b.spec.name();
              });
    return res;
}

}  // namespace cfhm

#endif  // CFHM_STAGE1_HPP
