#ifndef CFHM_TEST_GENERATORS_HPP
#define CFHM_TEST_GENERATORS_HPP

// Random instance generators shared by the unit tests and the acceptance
// suite: near-regular 3-graphs on P, extension with an H2 layer, and
// planted conflict families that respect the boundedness conditions.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"
#include "cfhm/rng.hpp"

namespace gen {

// Near-regular 3-uniform hypergraph on P: samples random triples, rejecting
// vertices already at the degree target, then favours deficient vertices so
// the minimum degree climbs close to d.
inline cfhm::TripartiteHypergraph near_regular_3graph(int n, int d,
                                                      std::uint64_t seed,
                                                      int nr = 0) {
    cfhm::TripartiteHypergraph h(n, 0, nr);
    cfhm::CounterRng rng(seed);
    std::vector<int> deg(n, 0);
    long long want = static_cast<long long>(n) * d / 3;
    int stall = 0;
    while (want > 0 && stall < 1000000) {
        int a = static_cast<int>(rng.below(n));
        int b = static_cast<int>(rng.below(n));
        int c = static_cast<int>(rng.below(n));
        if (a == b || b == c || a == c ||
            deg[a] >= d || deg[b] >= d || deg[c] >= d) {
            ++stall;
            continue;
        }
        try {
            h.add_edge(cfhm::EdgeClass::H1, {a, b, c});
        } catch (const std::invalid_argument&) {
            ++stall;
            continue;
        }
        ++deg[a]; ++deg[b]; ++deg[c];
        --want;
        stall = 0;
    }
    // top up deficient vertices
    std::vector<int> low;
    for (int pass = 0; pass < 3; ++pass) {
        low.clear();
        for (int v = 0; v < n; ++v)
            if (deg[v] + 2 < d) low.push_back(v);
        if (low.empty()) break;
        int guard = 0;
        for (std::size_t i = 0; i + 1 < low.size() && guard < 200000; ++i) {
            int a = low[i];
            if (deg[a] >= d) continue;
            int b = low[rng.below(low.size())];
            int c = static_cast<int>(rng.below(n));
            if (a == b || b == c || a == c || deg[b] >= d || deg[c] >= d) {
                --i;
                ++guard;
                continue;
            }
            try {
                h.add_edge(cfhm::EdgeClass::H1, {a, b, c});
                ++deg[a]; ++deg[b]; ++deg[c];
            } catch (const std::invalid_argument&) {
                ++guard;
                --i;
            }
        }
    }
    return h;
}

// Rebuilds `base` (3-graph on P) with an R part and a uniform H2 layer:
// every P-vertex receives exactly dx edges {x, r1, r2}, R spread evenly.
inline cfhm::TripartiteHypergraph with_h2_layer(const cfhm::TripartiteHypergraph& base,
                                                int nr, int dx, std::uint64_t seed) {
    cfhm::TripartiteHypergraph h(base.p_size(), 0, nr);
    for (const auto& e : base.edges()) h.add_edge(e.klass, e.vertices, e.dummy);
    cfhm::CounterRng rng(seed);
    const int r0 = h.r_begin();
    for (int x = 0; x < h.p_size(); ++x) {
        int added = 0, guard = 0;
        while (added < dx && guard < 10000) {
            int u = r0 + static_cast<int>(rng.below(nr));
            int v = r0 + static_cast<int>(rng.below(nr));
            if (u == v) { ++guard; continue; }
            try {
                h.add_edge(cfhm::EdgeClass::H2, {x, std::min(u, v), std::max(u, v)});
                ++added;
            } catch (const std::invalid_argument&) {
                ++guard;
            }
        }
    }
    return h;
}

// Plants `count` C-conflicts of sizes within [3, max_size], each a set of
// pairwise vertex-disjoint H1 edges. Degrees stay far below the (C2)/(C3)
// ceilings because conflicts are spread uniformly.
inline std::vector<std::vector<int>> plant_c_conflicts(
    const cfhm::TripartiteHypergraph& h, int count, int max_size,
    std::uint64_t seed) {
    cfhm::CounterRng rng(seed);
    std::vector<int> h1_ids;
    for (int id = 0; id < h.edge_count(); ++id)
        if (h.edge(id).klass == cfhm::EdgeClass::H1 && !h.edge(id).dummy)
            h1_ids.push_back(id);
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> out;
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard < 50 * count + 1000) {
        int sz = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                         std::max(1, max_size - 2))));
        std::vector<int> ids;
        std::vector<int> used;
        bool ok = true;
        for (int i = 0; i < sz; ++i) {
            int id = h1_ids[rng.below(h1_ids.size())];
            const auto& vs = h.edge(id).vertices;
            bool clash = std::find(ids.begin(), ids.end(), id) != ids.end();
            for (int v : vs)
                if (std::find(used.begin(), used.end(), v) != used.end()) clash = true;
            if (clash) { ok = false; break; }
            ids.push_back(id);
            used.insert(used.end(), vs.begin(), vs.end());
        }
        if (!ok) { ++guard; continue; }
        std::sort(ids.begin(), ids.end());
        if (!seen.insert(ids).second) { ++guard; continue; }
        out.push_back(ids);
    }
    return out;
}

// Plants mixed conflicts: (0,2) pairs of H2 edges at distinct vertices,
// (1,2) triples with one H1 edge, and (j1,1) conflicts that exercise the
// safe-edge machinery. All families stay sparse per edge and per vertex.
inline std::vector<std::vector<int>> plant_d_conflicts(
    const cfhm::TripartiteHypergraph& h, int count02, int count12, int count11,
    int count21, std::uint64_t seed) {
    cfhm::CounterRng rng(seed);
    std::vector<int> h1_ids, h2_ids;
    for (int id = 0; id < h.edge_count(); ++id) {
        if (h.edge(id).dummy) continue;
        (h.edge(id).klass == cfhm::EdgeClass::H1 ? h1_ids : h2_ids).push_back(id);
    }
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> out;
    auto disjoint = [&](const std::vector<int>& ids) {
        std::vector<int> used;
        for (int id : ids)
            for (int v : h.edge(id).vertices) used.push_back(v);
        std::sort(used.begin(), used.end());
        return std::adjacent_find(used.begin(), used.end()) == used.end();
    };
    auto emit = [&](std::vector<int> ids) {
        std::sort(ids.begin(), ids.end());
        if (!disjoint(ids)) return false;
        if (!seen.insert(ids).second) return false;
        out.push_back(std::move(ids));
        return true;
    };
    int guard = 0;
    const int cap = 60 * (count02 + count12 + count11 + count21) + 2000;
    int n02 = 0, n12 = 0, n11 = 0, n21 = 0;
    while ((n02 < count02 || n12 < count12 || n11 < count11 || n21 < count21) &&
           guard < cap) {
        ++guard;
        if (n02 < count02 && !h2_ids.empty()) {
            int e = h2_ids[rng.below(h2_ids.size())];
            int f = h2_ids[rng.below(h2_ids.size())];
            if (e != f && emit({e, f})) { ++n02; continue; }
        }
        if (n12 < count12 && !h1_ids.empty() && !h2_ids.empty()) {
            int c = h1_ids[rng.below(h1_ids.size())];
            int e = h2_ids[rng.below(h2_ids.size())];
            int f = h2_ids[rng.below(h2_ids.size())];
            if (e != f && emit({c, e, f})) { ++n12; continue; }
        }
        if (n11 < count11 && !h1_ids.empty() && !h2_ids.empty()) {
            int c = h1_ids[rng.below(h1_ids.size())];
            int e = h2_ids[rng.below(h2_ids.size())];
            if (emit({c, e})) { ++n11; continue; }
        }
        if (n21 < count21 && h1_ids.size() > 1 && !h2_ids.empty()) {
            int c1 = h1_ids[rng.below(h1_ids.size())];
            int c2 = h1_ids[rng.below(h1_ids.size())];
            int e = h2_ids[rng.below(h2_ids.size())];
            if (c1 != c2 && emit({c1, c2, e})) { ++n21; continue; }
        }
    }
    return out;
}

}  // namespace gen

#endif  // CFHM_TEST_GENERATORS_HPP
