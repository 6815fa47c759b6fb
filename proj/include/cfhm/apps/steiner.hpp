#ifndef CFHM_APPS_STEINER_HPP
#define CFHM_APPS_STEINER_HPP

// Steiner-type covering generator: the binom(s,t)-graph on the t-subsets of
// [m] with one edge per candidate s-set, plus the minimal bad
// j-configuration conflicts (matchings of j s-sets spanning at most
// (s-t) j + t points, containing no smaller bad configuration).

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfhm/apps/covering.hpp"
#include "cfhm/apps/util.hpp"
#include "cfhm/stage2.hpp"

namespace cfhm::apps {

struct SteinerInstance {
    int m = 0, s = 0, t = 0, ell = 0;
    std::vector<std::vector<int>> kappa;       // candidate s-sets, sorted
    std::vector<std::vector<int>> tsets;       // vertex id -> t-subset
    std::vector<std::vector<int>> h_edges;     // edge i = t-subsets of kappa[i]
    std::vector<std::vector<int>> bad_configs; // conflicts as kappa indices
};

namespace detail {

inline bool sets_sparse(const std::vector<int>& a, const std::vector<int>& b, int t) {
    int common = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) { ++common; ++i; ++j; }
        else if (a[i] < b[j]) ++i;
        else ++j;
    }
    return common <= t - 1;  // matching in the t-subset hypergraph
}

inline int union_size(const std::vector<std::vector<int>>& kappa,
                      const std::vector<int>& config) {
    std::set<int> pts;
    for (int i : config) pts.insert(kappa[i].begin(), kappa[i].end());
    return static_cast<int>(pts.size());
}

inline bool is_bad_config(const std::vector<std::vector<int>>& kappa,
                          const std::vector<int>& config, int s, int t) {
    for (std::size_t i = 0; i < config.size(); ++i)
        for (std::size_t j = i + 1; j < config.size(); ++j)
            if (!sets_sparse(kappa[config[i]], kappa[config[j]], t)) return false;
    const int j = static_cast<int>(config.size());
    return union_size(kappa, config) <= (s - t) * j + t;
}

inline bool contains_smaller_bad(const std::vector<std::vector<int>>& kappa,
                                 const std::vector<int>& config, int s, int t) {
    const int j = static_cast<int>(config.size());
    for (int jp = 2; jp < j; ++jp) {
        std::vector<int> pick;
        bool found = false;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (found) return;
            if (static_cast<int>(pick.size()) == jp) {
                if (is_bad_config(kappa, pick, s, t)) found = true;
                return;
            }
            for (std::size_t i = start; i < config.size(); ++i) {
                pick.push_back(config[i]);
                rec(i + 1);
                pick.pop_back();
            }
        };
        rec(0);
        if (found) return true;
    }
    return false;
}

}  // namespace detail

// Enumerates minimal bad j-configurations support-first: for every point set
// of size exactly |support|, all j-subsets of the candidates inside it whose
// union is the whole support. Each configuration has one exact support, so
// nothing is produced twice.
inline std::vector<std::vector<int>> enumerate_bad_configs(
    int m, int s, int t, const std::vector<std::vector<int>>& kappa, int j) {
    std::vector<std::vector<int>> out;
    const int max_span = (s - t) * j + t;
    if (max_span > m || j < 2) return out;
    // candidates grouped by support later; iterate supports of feasible sizes
    for (int span = s; span <= max_span; ++span) {
        for (const auto& support : all_subsets_of_size(m, span)) {
            std::vector<int> inside;
            for (int i = 0; i < static_cast<int>(kappa.size()); ++i) {
                bool in = true;
                for (int v : kappa[i])
                    if (!std::binary_search(support.begin(), support.end(), v)) {
                        in = false;
                        break;
                    }
                if (in) inside.push_back(i);
            }
            if (static_cast<int>(inside.size()) < j) continue;
            std::vector<int> pick;
            std::function<void(std::size_t)> rec = [&](std::size_t start) {
                if (static_cast<int>(pick.size()) == j) {
                    if (detail::union_size(kappa, pick) != span) return;
                    if (!detail::is_bad_config(kappa, pick, s, t)) return;
                    if (detail::contains_smaller_bad(kappa, pick, s, t)) return;
                    out.push_back(pick);
                    return;
                }
                for (std::size_t i = start; i < inside.size(); ++i) {
                    pick.push_back(inside[i]);
                    rec(i + 1);
                    pick.pop_back();
                }
            };
            rec(0);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Builds the t-subset hypergraph for a candidate family. Every t-subset of
// [m] must lie in some candidate; the first uncovered one is the error
// witness.
inline SteinerInstance build_steiner_covering(int m, int s, int t,
                                              std::vector<std::vector<int>> kappa,
                                              int ell) {
    if (!(s > t && t >= 1)) throw std::invalid_argument("need s > t >= 1");
    if (ell < 3) throw std::invalid_argument("need ell >= 3");
    SteinerInstance out;
    out.m = m;
    out.s = s;
    out.t = t;
    out.ell = ell;
    for (auto& S : kappa) {
        std::sort(S.begin(), S.end());
        if (static_cast<int>(S.size()) != s)
            throw std::invalid_argument("candidate of wrong size");
    }
    std::sort(kappa.begin(), kappa.end());
    kappa.erase(std::unique(kappa.begin(), kappa.end()), kappa.end());
    out.kappa = std::move(kappa);

    out.tsets = all_subsets_of_size(m, t);
    std::map<std::vector<int>, int> trank;
    for (int i = 0; i < static_cast<int>(out.tsets.size()); ++i)
        trank[out.tsets[i]] = i;

    std::vector<char> covered(out.tsets.size(), 0);
    for (const auto& S : out.kappa) {
        std::vector<int> edge;
        std::vector<int> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (static_cast<int>(pick.size()) == t) {
                edge.push_back(trank.at(pick));
                return;
            }
            for (std::size_t i = start; i < S.size(); ++i) {
                pick.push_back(S[i]);
                rec(i + 1);
                pick.pop_back();
            }
        };
        rec(0);
        std::sort(edge.begin(), edge.end());
        for (int v : edge) covered[v] = 1;
        out.h_edges.push_back(std::move(edge));
    }
    for (int i = 0; i < static_cast<int>(out.tsets.size()); ++i)
        if (!covered[i]) {
            std::string witness;
            for (int v : out.tsets[i]) witness += std::to_string(v) + " ";
            throw std::invalid_argument("t-subset { " + witness +
                                        "} lies in no candidate");
        }

    for (int j = 3; j <= ell; ++j) {
        auto found = enumerate_bad_configs(m, s, t, out.kappa, j);
        out.bad_configs.insert(out.bad_configs.end(), found.begin(), found.end());
    }
    return out;
}

// Runs the covering reduction over the Steiner hypergraph.
inline CoveringInstance steiner_to_covering(const SteinerInstance& st, double d,
                                            double eps) {
    const int nv = static_cast<int>(st.tsets.size());
    return build_covering_reduction(nv, st.h_edges, st.bad_configs, d, eps, st.ell);
}

// ---------------------------------------------------------------------------
// Implicit pipeline (dense configuration families)
// ---------------------------------------------------------------------------
//
// The explicit reduction materialises (k+1)^j - 1 role variants per source
// configuration, which is prohibitive when the girth family is dense (at
// (12,3,2) with ell = 4 that is seven million conflicts). The lazy path
// keeps only the source configurations: stage 1 avoids them on the H1
// copies, the safe filter drops duplicates whose source completes a
// configuration with three matched sources, and one stage-2 event per
// configuration forbids its full appearance in the decoded cover.

// Reduction instance without the variant family; C carries the source
// configurations directly (H1 copy ids equal source ids).
inline CoveringInstance steiner_to_covering_lazy(const SteinerInstance& st,
                                                 double d, double eps) {
    const int nv = static_cast<int>(st.tsets.size());
    CoveringInstance inst =
        build_covering_reduction(nv, st.h_edges, {}, d, eps, st.ell);
    inst.cs = ConflictSystem(inst.h, st.bad_configs, {}, st.ell, eps);
    return inst;
}

// Drops duplicates whose source edge completes a configuration whose other
// members are all in m1 (the (j-1, 1) role variants, realised lazily).
inline std::function<void(int, std::vector<int>&)> steiner_safe_filter(
    const SteinerInstance& st, const CoveringInstance& inst,
    const std::vector<int>& m1) {
    auto in_m1 = std::make_shared<std::vector<char>>(st.h_edges.size(), 0);
    for (int id : m1)
        if (id < static_cast<int>(st.h_edges.size())) (*in_m1)[id] = 1;
    auto cfg_at = std::make_shared<std::vector<std::vector<int>>>(st.h_edges.size());
    for (int ci = 0; ci < static_cast<int>(st.bad_configs.size()); ++ci)
        for (int s : st.bad_configs[ci]) (*cfg_at)[s].push_back(ci);
    const SteinerInstance* stp = &st;
    const CoveringInstance* ip = &inst;
    return [stp, ip, in_m1, cfg_at](int /*x*/, std::vector<int>& safe) {
        std::vector<int> keep;
        for (int id : safe) {
            const int src = ip->edge_source[id].first;
            bool unsafe = false;
            for (int ci : (*cfg_at)[src]) {
                int others = 0;
                for (int s : stp->bad_configs[ci])
                    if (s != src && (*in_m1)[s]) ++others;
                if (others == static_cast<int>(stp->bad_configs[ci].size()) - 1) {
                    unsafe = true;
                    break;
                }
            }
            if (!unsafe) keep.push_back(id);
        }
        safe.swap(keep);
    };
}

// One event per configuration that could still appear in the decoded cover:
// violated when every non-matched member has one of its duplicates chosen.
inline std::vector<Stage2Event> steiner_stage2_events(
    const SteinerInstance& st, const CoveringInstance& inst,
    const Matching& m1) {
    std::vector<char> in_m1(st.h_edges.size(), 0);
    for (int id : m1.m1)
        if (id < static_cast<int>(st.h_edges.size())) in_m1[id] = 1;
    std::vector<int> uncovered =
        uncovered_p_vertices(inst.h, Matching{m1.m1, {}, {}});
    std::vector<char> uncov(inst.h.p_size(), 0);
    for (int x : uncovered) uncov[x] = 1;
    // choice[x] -> source edge, or -1
    const CoveringInstance* ip = &inst;
    auto src_of = [ip](int h2_edge) { return ip->edge_source[h2_edge].first; };

    std::vector<Stage2Event> events;
    for (int ci = 0; ci < static_cast<int>(st.bad_configs.size()); ++ci) {
        const auto& cfg = st.bad_configs[ci];
        std::vector<int> need;  // sources that must come from m2
        std::vector<int> vps;
        bool possible = true;
        for (int s : cfg) {
            if (in_m1[s]) continue;
            bool coverable = false;
            for (int x : st.h_edges[s]) {
                if (uncov[x]) {
                    coverable = true;
                    vps.push_back(x);
                }
            }
            if (!coverable) { possible = false; break; }
            need.push_back(s);
        }
        if (!possible || need.empty()) continue;
        std::sort(vps.begin(), vps.end());
        vps.erase(std::unique(vps.begin(), vps.end()), vps.end());
        Stage2Event ev;
        ev.vps = vps;
        ev.tag = "config";
        auto st_edges = &st.h_edges;
        ev.violated = [need, src_of, st_edges, ip](const std::vector<int>& choice) {
            for (int s : need) {
                bool present = false;
                for (int x : (*st_edges)[s]) {
                    if (x < static_cast<int>(choice.size()) && choice[x] >= 0 &&
                        src_of(choice[x]) == s) {
                        present = true;
                        break;
                    }
                }
                if (!present) return false;
            }
            return true;
        };
        events.push_back(std::move(ev));
    }
    return events;
}

// Decodes a covering of the t-subset hypergraph back to the s-set family.
inline std::vector<std::vector<int>> decode_steiner(const SteinerInstance& st,
                                                    const std::vector<int>& cover) {
    std::set<int> ids(cover.begin(), cover.end());
    std::vector<std::vector<int>> out;
    for (int id : ids) out.push_back(st.kappa[id]);
    return out;
}

}  // namespace cfhm::apps

#endif  // CFHM_APPS_STEINER_HPP
