#ifndef CFHM_APPS_RAMSEY_CYCLES_HPP
#define CFHM_APPS_RAMSEY_CYCLES_HPP

// Tight-cycle Ramsey construction: colour E(K_n^k) so that every tight
// cycle C_ell^k receives at least k+1 distinct colours. Auxiliary H1 edges
// are (clique, main-colour) pairs that colour every edge of a copy of
// K_{ell-1}^k at once; H2 edges are (edge, reserve-colour) pairs that colour
// a single edge. A P-perfect conflict-free matching decodes to a full
// colouring with t1 + t2 colours.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfhm/apps/pair_patterns.hpp"
#include "cfhm/apps/util.hpp"
#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"
#include "cfhm/verify.hpp"

namespace cfhm::apps {

struct RamseyCyclesInstance {
    int n = 0, k = 0, ell_cycle = 0;
    double delta = 0.25;
    int t1 = 0, t2 = 0;
    double d_declared = 0.0;  // n^{ell-k} / (ell-k)!
    TripartiteHypergraph h{0, 0, 0};
    std::vector<std::vector<int>> ksubs;    // P vertex -> k-subset of [n]
    std::vector<std::vector<int>> k1subs;   // copy template -> (k-1)-subset
    std::vector<std::vector<int>> cliques;  // (ell-1)-subsets of [n]
    std::map<std::vector<int>, int> ksub_rank;
    std::map<std::vector<int>, int> k1sub_rank;
    std::map<std::vector<int>, int> clique_rank;
    int h1_count = 0;

    int h1_edge_id(int clique, int alpha) const { return clique * t1 + alpha; }
    int h2_edge_id(int ksub, int beta) const { return h1_count + ksub * t2 + beta; }
    std::pair<int, int> h1_parts(int id) const { return {id / t1, id % t1}; }
    std::pair<int, int> h2_parts(int id) const {
        int rel = id - h1_count;
        return {rel / t2, rel % t2};
    }

    nlohmann::json meta_json() const {
        return nlohmann::json{{"app", "ramsey-cycles"}, {"n", n},     {"k", k},
                              {"ell_cycle", ell_cycle}, {"delta", delta},
                              {"t1", t1},               {"t2", t2},
                              {"d", d_declared}};
    }
};

inline RamseyCyclesInstance build_ramsey_cycles(int n, int k, int ell_cycle,
                                                double delta) {
    if (k < 2) throw std::invalid_argument("need k >= 2");
    if (ell_cycle < k + 2) throw std::invalid_argument("need cycle length >= k + 2");
    if (n < ell_cycle) throw std::invalid_argument("need n >= cycle length");
    RamseyCyclesInstance inst;
    inst.n = n;
    inst.k = k;
    inst.ell_cycle = ell_cycle;
    inst.delta = delta;
    inst.t1 = static_cast<int>(std::llround(static_cast<double>(n) / (ell_cycle - k)));
    if (inst.t1 < 1) throw std::invalid_argument("t1 = n/(ell-k) must be >= 1");
    inst.t2 = std::max(1, static_cast<int>(std::llround(std::pow(n, 1.0 - delta))));
    double fact = 1.0;
    for (int i = 2; i <= ell_cycle - k; ++i) fact *= i;
    inst.d_declared = std::pow(n, ell_cycle - k) / fact;

    inst.ksubs = all_subsets_of_size(n, k);
    inst.k1subs = all_subsets_of_size(n, k - 1);
    inst.cliques = all_subsets_of_size(n, ell_cycle - 1);
    for (int i = 0; i < static_cast<int>(inst.ksubs.size()); ++i)
        inst.ksub_rank[inst.ksubs[i]] = i;
    for (int i = 0; i < static_cast<int>(inst.k1subs.size()); ++i)
        inst.k1sub_rank[inst.k1subs[i]] = i;
    for (int i = 0; i < static_cast<int>(inst.cliques.size()); ++i)
        inst.clique_rank[inst.cliques[i]] = i;

    const int np = static_cast<int>(inst.ksubs.size());
    const int copy = static_cast<int>(inst.k1subs.size());
    inst.h = TripartiteHypergraph(np, inst.t1 * copy, inst.t2 * copy);
    inst.h1_count = static_cast<int>(inst.cliques.size()) * inst.t1;

    const int q0 = inst.h.q_begin();
    const int r0 = inst.h.r_begin();
    // subsets of a clique or edge, as ranks
    auto sub_ranks = [](const std::vector<int>& base, int want,
                        const std::map<std::vector<int>, int>& rank) {
        std::vector<int> out;
        std::vector<int> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (static_cast<int>(pick.size()) == want) {
                out.push_back(rank.at(pick));
                return;
            }
            for (std::size_t i = start; i < base.size(); ++i) {
                pick.push_back(base[i]);
                rec(i + 1);
                pick.pop_back();
            }
        };
        rec(0);
        return out;
    };

    // H1: (clique X, alpha) covers the k-subsets of X in P and the copy of
    // the (k-1)-subsets of X in U_alpha
    for (int ci = 0; ci < static_cast<int>(inst.cliques.size()); ++ci) {
        const auto& X = inst.cliques[ci];
        std::vector<int> base_p = sub_ranks(X, k, inst.ksub_rank);
        std::vector<int> base_q = sub_ranks(X, k - 1, inst.k1sub_rank);
        for (int alpha = 0; alpha < inst.t1; ++alpha) {
            std::vector<int> verts = base_p;
            for (int qr : base_q) verts.push_back(q0 + alpha * copy + qr);
            int id = inst.h.add_edge(EdgeClass::H1, std::move(verts));
            if (id != inst.h1_edge_id(ci, alpha))
                throw std::logic_error("H1 id scheme out of sync");
        }
    }
    // H2: (edge e, beta) covers {e} in P and the copy of the (k-1)-subsets
    // of e in U_beta
    for (int ei = 0; ei < np; ++ei) {
        std::vector<int> base_r = sub_ranks(inst.ksubs[ei], k - 1, inst.k1sub_rank);
        for (int beta = 0; beta < inst.t2; ++beta) {
            std::vector<int> verts = {ei};
            for (int rr : base_r) verts.push_back(r0 + beta * copy + rr);
            int id = inst.h.add_edge(EdgeClass::H2, std::move(verts));
            if (id != inst.h2_edge_id(ei, beta))
                throw std::logic_error("H2 id scheme out of sync");
        }
    }
    return inst;
}

// Decodes a P-perfect matching to a total colouring of E(K_n^k). Colours
// [0, t1) are the clique colours, [t1, t1 + t2) the single-edge colours.
inline std::map<std::vector<int>, int> decode_cycles_coloring(
    const RamseyCyclesInstance& inst, const Matching& m) {
    std::map<std::vector<int>, int> colouring;
    auto assign = [&](const std::vector<int>& edge, int colour) {
        auto [it, fresh] = colouring.emplace(edge, colour);
        if (!fresh && it->second != colour)
            throw std::invalid_argument("matching colours an edge twice");
    };
    for (int id : m.m1) {
        if (inst.h.edge(id).dummy) continue;
        auto [ci, alpha] = inst.h1_parts(id);
        const auto& X = inst.cliques[ci];
        std::vector<int> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (static_cast<int>(pick.size()) == inst.k) {
                assign(pick, alpha);
                return;
            }
            for (std::size_t i = start; i < X.size(); ++i) {
                pick.push_back(X[i]);
                rec(i + 1);
                pick.pop_back();
            }
        };
        rec(0);
    }
    for (int id : m.m2) {
        auto [ei, beta] = inst.h2_parts(id);
        assign(inst.ksubs[ei], inst.t1 + beta);
    }
    return colouring;
}

// Re-encodes the colour classes of a decoded colouring: the auxiliary edges
// whose full footprint carries their colour. On a valid decode this returns
// exactly the matched (non-dummy) auxiliary edges.
inline std::vector<int> encode_cycles_matching(
    const RamseyCyclesInstance& inst, const std::map<std::vector<int>, int>& col,
    const Matching& reference) {
    std::vector<int> ids;
    for (int id : reference.m1) {
        if (inst.h.edge(id).dummy) continue;
        auto [ci, alpha] = inst.h1_parts(id);
        const auto& X = inst.cliques[ci];
        std::vector<int> pick;
        bool ok = true;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (!ok) return;
            if (static_cast<int>(pick.size()) == inst.k) {
                auto it = col.find(pick);
                if (it == col.end() || it->second != alpha) ok = false;
                return;
            }
            for (std::size_t i = start; i < X.size(); ++i) {
                pick.push_back(X[i]);
                rec(i + 1);
                pick.pop_back();
            }
        };
        rec(0);
        if (ok) ids.push_back(id);
    }
    for (int id : reference.m2) {
        auto [ei, beta] = inst.h2_parts(id);
        auto it = col.find(inst.ksubs[ei]);
        if (it != col.end() && it->second == inst.t1 + beta) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

// ---------------------------------------------------------------------------
// Explicit conflict enumeration (k = 2)
// ---------------------------------------------------------------------------

struct CycleConflictLists {
    std::vector<std::vector<int>> c;  // clique colours only (j2 = 0)
    std::vector<std::vector<int>> d;  // at least one single-edge colour
};

// Enumerates the forbidden submatchings per tight cycle: a subset of the
// cycle's edges is partitioned into colour classes (each class at least two
// edges, classes plus discarded edges at most k colours in total), realised
// by cliques on consecutive runs or single-edge colours on matchings.
// Feasible at small n only; the scaled pipelines use the implicit pattern
// guard, which realises this same family without listing it.
inline CycleConflictLists enumerate_cycle_conflicts(const RamseyCyclesInstance& inst,
                                                    std::size_t limit = 5000000) {
    if (inst.k != 2)
        throw std::invalid_argument(
            "explicit cycle conflicts implemented for k = 2 only");
    const int L = inst.ell_cycle;
    const int n = inst.n;
    CycleConflictLists out;
    std::set<std::vector<int>> seen;

    struct Realization {
        bool clique_colour = false;
        std::vector<std::vector<int>> cliques;  // T1: one vertex set per run
    };

    cfhm::detail::for_each_tight_cycle_vertexseq(n, L, [&](const std::vector<int>& z) {
        auto edge_of = [&](int i) {
            int a = z[i % L], b = z[(i + 1) % L];
            return std::vector<int>{std::min(a, b), std::max(a, b)};
        };

        for (int mask = 1; mask < (1 << L); ++mask) {
            const int fsz = __builtin_popcount(static_cast<unsigned>(mask));
            if (fsz < L - (inst.k - 1)) continue;
            const int t = L - fsz;
            const int max_classes = inst.k - t;
            if (max_classes < 1) continue;
            std::vector<int> fpos;
            for (int i = 0; i < L; ++i)
                if (mask & (1 << i)) fpos.push_back(i);

            std::vector<std::vector<int>> classes;
            std::function<void(std::size_t)> part = [&](std::size_t idx) {
                if (idx == fpos.size()) {
                    for (const auto& cl : classes)
                        if (static_cast<int>(cl.size()) < 2) return;
                    if (classes.empty()) return;

                    // --- realization options per class
                    std::vector<std::vector<Realization>> options(classes.size());
                    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
                        const auto& pos = classes[ci];
                        // T2: edges pairwise vertex-disjoint
                        bool disj = true;
                        for (std::size_t i = 0; i < pos.size() && disj; ++i)
                            for (std::size_t j = i + 1; j < pos.size() && disj; ++j) {
                                auto a = edge_of(pos[i]), b = edge_of(pos[j]);
                                for (int va : a)
                                    for (int vb : b)
                                        if (va == vb) disj = false;
                            }
                        if (disj) options[ci].push_back(Realization{false, {}});

                        // T1: maximal cyclic runs, one clique per run
                        std::vector<char> member(L, 0);
                        for (int p : pos) member[p] = 1;
                        std::vector<std::vector<int>> runs;
                        bool full = static_cast<int>(pos.size()) == L;
                        if (!full) {
                            int start = 0;
                            while (member[start]) ++start;
                            std::vector<int> cur;
                            for (int step = 1; step <= L; ++step) {
                                int p = (start + step) % L;
                                if (member[p]) cur.push_back(p);
                                else if (!cur.empty()) {
                                    runs.push_back(cur);
                                    cur.clear();
                                }
                            }
                            if (!cur.empty()) runs.push_back(cur);
                        }
                        bool feasible = !full;
                        std::vector<std::vector<int>> run_verts;
                        for (const auto& run : runs) {
                            std::set<int> vs;
                            for (int p : run) {
                                vs.insert(z[p % L]);
                                vs.insert(z[(p + 1) % L]);
                            }
                            if (static_cast<int>(vs.size()) > L - 1) {
                                feasible = false;
                                break;
                            }
                            run_verts.emplace_back(vs.begin(), vs.end());
                        }
                        if (feasible) {
                            std::vector<std::vector<int>> chosen(runs.size());
                            std::set<int> used;
                            std::function<void(std::size_t)> rec = [&](std::size_t ri) {
                                if (ri == runs.size()) {
                                    options[ci].push_back(Realization{true, chosen});
                                    return;
                                }
                                const auto& base = run_verts[ri];
                                const int need =
                                    (L - 1) - static_cast<int>(base.size());
                                std::vector<int> cands;
                                for (int v = 0; v < n; ++v) {
                                    if (used.count(v)) continue;
                                    if (std::find(base.begin(), base.end(), v) !=
                                        base.end())
                                        continue;
                                    cands.push_back(v);
                                }
                                std::vector<int> free_pick;
                                std::function<void(std::size_t)> pick_free =
                                    [&](std::size_t start) {
                                        if (static_cast<int>(free_pick.size()) ==
                                            need) {
                                            std::vector<int> X = base;
                                            X.insert(X.end(), free_pick.begin(),
                                                     free_pick.end());
                                            std::sort(X.begin(), X.end());
                                            // covered cycle edges == the run
                                            std::set<int> covered;
                                            for (int i = 0; i < L; ++i) {
                                                auto e = edge_of(i);
                                                if (std::binary_search(X.begin(),
                                                                       X.end(), e[0]) &&
                                                    std::binary_search(X.begin(),
                                                                       X.end(), e[1]))
                                                    covered.insert(i);
                                            }
                                            std::set<int> want(runs[ri].begin(),
                                                               runs[ri].end());
                                            if (covered != want) return;
                                            for (int v : free_pick) used.insert(v);
                                            chosen[ri] = X;
                                            rec(ri + 1);
                                            for (int v : free_pick) used.erase(v);
                                            return;
                                        }
                                        for (std::size_t i = start; i < cands.size();
                                             ++i) {
                                            free_pick.push_back(cands[i]);
                                            pick_free(i + 1);
                                            free_pick.pop_back();
                                        }
                                    };
                                pick_free(0);
                            };
                            rec(0);
                        }
                    }
                    for (const auto& opts : options)
                        if (opts.empty()) return;

                    // --- combine realizations, assign colours, emit
                    std::vector<int> pick(classes.size(), 0);
                    std::vector<int> alpha(classes.size(), -1);
                    std::vector<int> beta(classes.size(), -1);

                    auto emit = [&]() {
                        std::vector<int> ids;
                        int j2 = 0;
                        for (std::size_t i = 0; i < classes.size(); ++i) {
                            const Realization& r = options[i][pick[i]];
                            if (r.clique_colour) {
                                for (const auto& X : r.cliques)
                                    ids.push_back(inst.h1_edge_id(
                                        inst.clique_rank.at(X), alpha[i]));
                            } else {
                                for (int p : classes[i]) {
                                    ids.push_back(inst.h2_edge_id(
                                        inst.ksub_rank.at(edge_of(p)), beta[i]));
                                    ++j2;
                                }
                            }
                        }
                        std::sort(ids.begin(), ids.end());
                        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
                            return;
                        if (!edges_form_matching(inst.h, ids)) return;
                        if (!seen.insert(ids).second) return;
                        if (seen.size() > limit)
                            throw std::runtime_error(
                                "cycle conflict enumeration exceeds the limit; "
                                "use the implicit guard at this scale");
                        (j2 == 0 ? out.c : out.d).push_back(ids);
                    };

                    std::vector<int> t1c, t2c;
                    std::function<void(std::size_t)> colour_t2 = [&](std::size_t j) {
                        if (j == t2c.size()) {
                            emit();
                            return;
                        }
                        for (int b = 0; b < inst.t2; ++b) {
                            bool dup = false;
                            for (std::size_t p = 0; p < j; ++p)
                                if (beta[t2c[p]] == b) dup = true;
                            if (dup) continue;
                            beta[t2c[j]] = b;
                            colour_t2(j + 1);
                            beta[t2c[j]] = -1;
                        }
                    };
                    std::function<void(std::size_t)> colour_t1 = [&](std::size_t i) {
                        if (i == t1c.size()) {
                            colour_t2(0);
                            return;
                        }
                        for (int a = 0; a < inst.t1; ++a) {
                            bool dup = false;
                            for (std::size_t p = 0; p < i; ++p)
                                if (alpha[t1c[p]] == a) dup = true;
                            if (dup) continue;
                            alpha[t1c[i]] = a;
                            colour_t1(i + 1);
                            alpha[t1c[i]] = -1;
                        }
                    };
                    std::function<void(std::size_t)> combine = [&](std::size_t ci) {
                        if (ci == classes.size()) {
                            t1c.clear();
                            t2c.clear();
                            for (std::size_t i = 0; i < classes.size(); ++i)
                                (options[i][pick[i]].clique_colour ? t1c : t2c)
                                    .push_back(static_cast<int>(i));
                            colour_t1(0);
                            return;
                        }
                        for (std::size_t o = 0; o < options[ci].size(); ++o) {
                            pick[ci] = static_cast<int>(o);
                            combine(ci + 1);
                        }
                    };
                    combine(0);
                    return;
                }
                // index-based: the recursion grows and shrinks `classes`
                for (std::size_t ci = 0; ci < classes.size(); ++ci) {
                    classes[ci].push_back(fpos[idx]);
                    part(idx + 1);
                    classes[ci].pop_back();
                }
                if (static_cast<int>(classes.size()) < max_classes) {
                    classes.push_back({fpos[idx]});
                    part(idx + 1);
                    classes.pop_back();
                }
            };
            part(0);
        }
    });
    for (auto& v : out.c) std::sort(v.begin(), v.end());
    for (auto& v : out.d) std::sort(v.begin(), v.end());
    std::sort(out.c.begin(), out.c.end());
    std::sort(out.d.begin(), out.d.end());
    return out;
}

// ---------------------------------------------------------------------------
// Implicit pipeline hooks (k = 2, cycle length 4)
// ---------------------------------------------------------------------------

inline PairColouringHooks cycles_guard_hooks(const RamseyCyclesInstance& inst) {
    if (inst.k != 2 || inst.ell_cycle != 4)
        throw std::invalid_argument(
            "the pattern guard covers k = 2 with cycle length 4");
    PairColouringHooks hooks;
    hooks.n = inst.n;
    const RamseyCyclesInstance* ip = &inst;
    hooks.coloured_pairs = [ip](int edge, std::vector<std::array<int, 3>>& out) {
        if (ip->h.edge(edge).dummy) return;
        auto [ci, alpha] = ip->h1_parts(edge);
        const auto& X = ip->cliques[ci];
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t j = i + 1; j < X.size(); ++j)
                out.push_back({X[i], X[j], alpha});
    };
    hooks.killers = [ip](int u, int v, int colour, std::vector<int>& kill) {
        if (colour < 0 || colour >= ip->t1) return;
        for (int w = 0; w < ip->n; ++w) {
            if (w == u || w == v) continue;
            std::vector<int> X = {u, v, w};
            std::sort(X.begin(), X.end());
            kill.push_back(ip->h1_edge_id(ip->clique_rank.at(X), colour));
        }
    };
    return hooks;
}

inline std::vector<Stage2Event> cycles_stage2_events(
    const RamseyCyclesInstance& inst, const Matching& m1) {
    if (inst.k != 2 || inst.ell_cycle != 4)
        throw std::invalid_argument(
            "pattern events cover k = 2 with cycle length 4");
    // stage-1 colouring of pairs
    std::map<std::vector<int>, int> col = decode_cycles_coloring(
        inst, Matching{m1.m1, {}, {}});
    std::vector<int> uncovered = uncovered_p_vertices(inst.h, Matching{m1.m1, {}, {}});
    const RamseyCyclesInstance* ip = &inst;
    auto pair_of = [ip](int pv) {
        const auto& e = ip->ksubs[pv];
        return std::pair<int, int>{e[0], e[1]};
    };
    auto t1_colour = [col = std::move(col)](int u, int v) {
        auto it = col.find({std::min(u, v), std::max(u, v)});
        return it == col.end() ? -1 : it->second;
    };
    auto beta_of = [ip](int h2_edge) { return ip->h2_parts(h2_edge).second; };
    return pair_pattern_events(inst.n, uncovered, pair_of, t1_colour, beta_of);
}

}  // namespace cfhm::apps

#endif  // CFHM_APPS_RAMSEY_CYCLES_HPP
