#ifndef CFHM_APPS_COVERING_HPP
#define CFHM_APPS_COVERING_HPP

// Covering reduction: duplicate each edge of a k-graph H into one H1 copy
// (all vertices in P) and k designated H2 copies (one vertex in P, the rest
// as R copies). A P-perfect matching of the reduction decodes to a covering
// of H in which no vertex appears more than twice.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"

namespace cfhm::apps {

struct CoveringInstance {
    TripartiteHypergraph h;
    ConflictSystem cs;
    int n = 0;  // source vertex count
    std::vector<std::vector<int>> source_edges;
    // h edge id -> (source edge id, designated vertex; -1 for the H1 copy)
    std::vector<std::pair<int, int>> edge_source;
    double d = 0.0;
    double eps = 0.0;
};

// Validates the degree hypotheses of the source k-graph for the given
// (d, eps): (1 - d^-eps) d <= delta(H) <= Delta(H) <= d and
// Delta_2(H) <= d^{1-eps}.
inline void validate_covering_source(int n,
                                     const std::vector<std::vector<int>>& edges,
                                     double d, double eps) {
    if (edges.empty()) throw std::invalid_argument("source graph has no edges");
    std::vector<int> deg(n, 0);
    std::map<std::pair<int, int>, int> pair_deg;
    for (const auto& e : edges) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 0 || e[i] >= n)
                throw std::invalid_argument("source edge vertex out of range");
            ++deg[e[i]];
            for (std::size_t j = i + 1; j < e.size(); ++j)
                ++pair_deg[{std::min(e[i], e[j]), std::max(e[i], e[j])}];
        }
    }
    int dmin = deg[0], dmax = deg[0];
    for (int v : deg) { dmin = std::min(dmin, v); dmax = std::max(dmax, v); }
    if (dmax > d)
        throw std::invalid_argument("max degree " + std::to_string(dmax) +
                                    " exceeds d");
    if (dmin < (1.0 - std::pow(d, -eps)) * d)
        throw std::invalid_argument("min degree " + std::to_string(dmin) +
                                    " below (1 - d^-eps) d");
    int cmax = 0;
    for (const auto& [pr, c] : pair_deg) cmax = std::max(cmax, c);
    if (cmax > std::pow(d, 1.0 - eps))
        throw std::invalid_argument("pair degree " + std::to_string(cmax) +
                                    " exceeds d^{1-eps}");
}

inline CoveringInstance build_covering_reduction(
    int n, std::vector<std::vector<int>> edges,
    const std::vector<std::vector<int>>& conflicts, double d, double eps,
    int ell = 0) {
    for (auto& e : edges) std::sort(e.begin(), e.end());
    validate_covering_source(n, edges, d, eps);

    CoveringInstance out{TripartiteHypergraph(n, 0, n), ConflictSystem(), n,
                         edges, {}, d, eps};
    // H1 copies first: edge ids equal source ids
    for (const auto& e : edges) {
        out.h.add_edge(EdgeClass::H1, e);
        out.edge_source.emplace_back(static_cast<int>(out.edge_source.size()), -1);
    }
    // H2 copies: for each source edge and each designated vertex
    std::map<std::pair<int, int>, int> dup_id;  // (source, designated) -> h2 id
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        for (int v : edges[i]) {
            std::vector<int> verts = {v};
            for (int u : edges[i])
                if (u != v) verts.push_back(n + u);  // R copy of u
            int id = out.h.add_edge(EdgeClass::H2, std::move(verts));
            out.edge_source.emplace_back(i, v);
            dup_id[{i, v}] = id;
        }
    }

    // C' = the source conflicts on the H1 copies; D = every variant with at
    // least one H2 duplicate
    std::vector<std::vector<int>> dl;
    int max_size = 3;
    for (const auto& cf : conflicts) {
        max_size = std::max(max_size, static_cast<int>(cf.size()));
        // roles per member: -1 = H1 copy, otherwise index of the designated
        // vertex within the member edge
        const int j = static_cast<int>(cf.size());
        std::vector<int> role(j, -1);
        std::function<void(int)> rec = [&](int depth) {
            if (depth == j) {
                bool any_h2 = false;
                for (int r : role)
                    if (r >= 0) any_h2 = true;
                if (!any_h2) return;
                std::vector<int> ids;
                for (int t = 0; t < j; ++t) {
                    int src = cf[t];
                    if (role[t] < 0) ids.push_back(src);
                    else ids.push_back(dup_id.at({src, edges[src][role[t]]}));
                }
                std::sort(ids.begin(), ids.end());
                dl.push_back(std::move(ids));
                return;
            }
            const int k = static_cast<int>(edges[cf[depth]].size());
            for (int r = -1; r < k; ++r) {
                role[depth] = r;
                rec(depth + 1);
            }
        };
        rec(0);
    }
    out.cs = ConflictSystem(out.h, conflicts, dl, ell > 0 ? ell : max_size, eps);
    return out;
}

// Decodes a P-perfect matching of the reduction into a covering of the
// source graph: the source edge of every matched copy, m1 first, then m2.
inline std::vector<int> decode_covering(const CoveringInstance& inst,
                                        const Matching& m) {
    std::vector<int> cover;
    for (const auto* ids : {&m.m1, &m.m2}) {
        std::vector<int> sorted = *ids;
        std::sort(sorted.begin(), sorted.end());
        for (int id : sorted) {
            if (inst.h.edge(id).dummy) continue;
            cover.push_back(inst.edge_source[id].first);
        }
    }
    return cover;
}

}  // namespace cfhm::apps

#endif  // CFHM_APPS_COVERING_HPP
