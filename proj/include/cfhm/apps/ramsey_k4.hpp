#ifndef CFHM_APPS_RAMSEY_K4_HPP
#define CFHM_APPS_RAMSEY_K4_HPP

// K4 Ramsey construction: colour E(K_n) so that every K4 receives at least
// five distinct colours. An H1 edge packs a triangle with two main colours:
// the apex pair gets colour alpha on both its edges and the opposite edge
// gets beta; the pattern requires the apex's beta-copy to be deleted from Q.
// H2 edges colour one graph edge with a reserve colour.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfhm/apps/pair_patterns.hpp"
#include "cfhm/apps/util.hpp"
#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"
#include "cfhm/rng.hpp"

namespace cfhm::apps {

struct K4Aux {
    std::array<int, 3> tri;  // sorted triangle vertices
    int apex;                // vertex whose two edges get alpha
    int alpha;
    int beta;
};

struct RamseyK4Instance {
    int n = 0;
    double delta = 0.25;
    double rho = 0.0;
    std::uint64_t seed = 0;
    int t1 = 0, t2 = 0;
    double d_declared = 0.0;  // measured max H1 degree over P
    TripartiteHypergraph h{0, 0, 0};
    std::vector<std::vector<int>> pairs;  // P vertex -> pair
    std::map<std::vector<int>, int> pair_rank;
    std::vector<char> q_alive;  // alpha * n + v -> survived the deletion
    std::vector<int> q_id;      // alpha * n + v -> dense Q id or -1
    std::vector<K4Aux> h1_aux;  // aligned with H1 edge ids
    std::map<std::array<int, 6>, int> h1_lookup;  // (tri, apex, alpha, beta) -> id
    int h1_count = 0;

    int h2_edge_id(int pair, int beta) const { return h1_count + pair * t2 + beta; }
    std::pair<int, int> h2_parts(int id) const {
        int rel = id - h1_count;
        return {rel / t2, rel % t2};
    }

    nlohmann::json meta_json() const {
        return nlohmann::json{{"app", "ramsey-k4"}, {"n", n},   {"delta", delta},
                              {"rho", rho},         {"seed", seed},
                              {"t1", t1},           {"t2", t2},
                              {"d", d_declared}};
    }
};

// rho < 0 selects the default n^{-delta}; rho = 0 keeps every copy.
inline RamseyK4Instance build_ramsey_k4(int n, double delta, std::uint64_t seed,
                                        double rho = -1.0) {
    if (n < 4) throw std::invalid_argument("need n >= 4");
    RamseyK4Instance inst;
    inst.n = n;
    inst.delta = delta;
    inst.seed = seed;
    inst.rho = rho < 0 ? std::pow(n, -delta) : rho;
    inst.t1 = std::max(
        1, static_cast<int>(std::llround((1.0 + inst.rho) * 5.0 * n / 6.0)));
    inst.t2 = std::max(1, static_cast<int>(std::llround(std::pow(n, 1.0 - delta))));

    inst.pairs = all_subsets_of_size(n, 2);
    for (int i = 0; i < static_cast<int>(inst.pairs.size()); ++i)
        inst.pair_rank[inst.pairs[i]] = i;

    // seeded independent deletions with probability rho / (1 + rho)
    const double p_del = inst.rho / (1.0 + inst.rho);
    CounterRng rng(seed);
    inst.q_alive.assign(static_cast<std::size_t>(inst.t1) * n, 1);
    for (auto& a : inst.q_alive) a = rng.unit() >= p_del ? 1 : 0;
    inst.q_id.assign(inst.q_alive.size(), -1);
    int nq = 0;
    for (std::size_t i = 0; i < inst.q_alive.size(); ++i)
        if (inst.q_alive[i]) inst.q_id[i] = nq++;

    const int np = static_cast<int>(inst.pairs.size());
    inst.h = TripartiteHypergraph(np, nq, inst.t2 * n);
    const int q0 = inst.h.q_begin();
    const int r0 = inst.h.r_begin();

    auto alive = [&](int alpha, int v) { return inst.q_alive[alpha * n + v] != 0; };
    auto qid = [&](int alpha, int v) { return q0 + inst.q_id[alpha * n + v]; };

    // H1: triangles x apex x (alpha, beta)
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            for (int w = v + 1; w < n; ++w) {
                const std::array<int, 3> tri = {u, v, w};
                for (int apex : tri) {
                    int o1 = -1, o2 = -1;  // the non-apex vertices
                    for (int x : tri)
                        if (x != apex) (o1 < 0 ? o1 : o2) = x;
                    for (int alpha = 0; alpha < inst.t1; ++alpha) {
                        if (!alive(alpha, u) || !alive(alpha, v) || !alive(alpha, w))
                            continue;
                        for (int beta = 0; beta < inst.t1; ++beta) {
                            if (beta == alpha) continue;
                            if (alive(beta, apex)) continue;   // apex copy deleted
                            if (!alive(beta, o1) || !alive(beta, o2)) continue;
                            std::vector<int> verts = {
                                inst.pair_rank.at({u, v}), inst.pair_rank.at({u, w}),
                                inst.pair_rank.at({v, w}), qid(alpha, u),
                                qid(alpha, v),              qid(alpha, w),
                                qid(beta, o1),              qid(beta, o2)};
                            int id = inst.h.add_edge(EdgeClass::H1, std::move(verts));
                            inst.h1_aux.push_back(K4Aux{tri, apex, alpha, beta});
                            inst.h1_lookup[{u, v, w, apex, alpha, beta}] = id;
                        }
                    }
                }
            }
    inst.h1_count = inst.h.edge_count();

    // H2: (pair, beta) with both endpoint copies in U_beta
    for (int ei = 0; ei < np; ++ei) {
        const auto& e = inst.pairs[ei];
        for (int beta = 0; beta < inst.t2; ++beta) {
            std::vector<int> verts = {ei, r0 + beta * n + e[0], r0 + beta * n + e[1]};
            int id = inst.h.add_edge(EdgeClass::H2, std::move(verts));
            if (id != inst.h2_edge_id(ei, beta))
                throw std::logic_error("H2 id scheme out of sync");
        }
    }

    for (int x = 0; x < np; ++x)
        inst.d_declared =
            std::max(inst.d_declared,
                     static_cast<double>(inst.h.degree1(x, EdgeClass::H1)));
    return inst;
}

// Decoded colouring: alpha on the two apex edges, beta on the opposite one;
// reserve colours t1 + beta for H2 picks.
inline std::map<std::vector<int>, int> decode_k4_coloring(
    const RamseyK4Instance& inst, const Matching& m) {
    std::map<std::vector<int>, int> colouring;
    auto assign = [&](std::vector<int> edge, int colour) {
        std::sort(edge.begin(), edge.end());
        auto [it, fresh] = colouring.emplace(edge, colour);
        if (!fresh && it->second != colour)
            throw std::invalid_argument("matching colours an edge twice");
    };
    for (int id : m.m1) {
        if (inst.h.edge(id).dummy) continue;
        const K4Aux& aux = inst.h1_aux.at(id);
        int o1 = -1, o2 = -1;
        for (int x : aux.tri)
            if (x != aux.apex) (o1 < 0 ? o1 : o2) = x;
        assign({aux.apex, o1}, aux.alpha);
        assign({aux.apex, o2}, aux.alpha);
        assign({o1, o2}, aux.beta);
    }
    for (int id : m.m2) {
        auto [ei, beta] = inst.h2_parts(id);
        assign(inst.pairs[ei], inst.t1 + beta);
    }
    return colouring;
}

inline PairColouringHooks k4_guard_hooks(const RamseyK4Instance& inst) {
    PairColouringHooks hooks;
    hooks.n = inst.n;
    const RamseyK4Instance* ip = &inst;
    hooks.coloured_pairs = [ip](int edge, std::vector<std::array<int, 3>>& out) {
        if (edge >= ip->h1_count || ip->h.edge(edge).dummy) return;
        const K4Aux& aux = ip->h1_aux[edge];
        int o1 = -1, o2 = -1;
        for (int x : aux.tri)
            if (x != aux.apex) (o1 < 0 ? o1 : o2) = x;
        out.push_back({std::min(aux.apex, o1), std::max(aux.apex, o1), aux.alpha});
        out.push_back({std::min(aux.apex, o2), std::max(aux.apex, o2), aux.alpha});
        out.push_back({std::min(o1, o2), std::max(o1, o2), aux.beta});
    };
    hooks.killers = [ip](int u, int v, int colour, std::vector<int>& kill) {
        if (colour < 0 || colour >= ip->t1) return;
        const int n = ip->n;
        for (int w = 0; w < n; ++w) {
            if (w == u || w == v) continue;
            std::array<int, 3> tri = {u, v, w};
            std::sort(tri.begin(), tri.end());
            // colour as alpha: apex is u or v
            for (int apex : {u, v}) {
                for (int beta = 0; beta < ip->t1; ++beta) {
                    if (beta == colour) continue;
                    auto it = ip->h1_lookup.find(
                        {tri[0], tri[1], tri[2], apex, colour, beta});
                    if (it != ip->h1_lookup.end()) kill.push_back(it->second);
                }
            }
            // colour as beta: apex is w
            for (int alpha = 0; alpha < ip->t1; ++alpha) {
                if (alpha == colour) continue;
                auto it =
                    ip->h1_lookup.find({tri[0], tri[1], tri[2], w, alpha, colour});
                if (it != ip->h1_lookup.end()) kill.push_back(it->second);
            }
        }
    };
    return hooks;
}

inline std::vector<Stage2Event> k4_stage2_events(const RamseyK4Instance& inst,
                                                 const Matching& m1) {
    std::map<std::vector<int>, int> col =
        decode_k4_coloring(inst, Matching{m1.m1, {}, {}});
    std::vector<int> uncovered =
        uncovered_p_vertices(inst.h, Matching{m1.m1, {}, {}});
    const RamseyK4Instance* ip = &inst;
    auto pair_of = [ip](int pv) {
        const auto& e = ip->pairs[pv];
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

#endif  // CFHM_APPS_RAMSEY_K4_HPP
