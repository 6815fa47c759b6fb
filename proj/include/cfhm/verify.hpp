#ifndef CFHM_VERIFY_HPP
#define CFHM_VERIFY_HPP

// Independent verifiers for end artifacts. Everything here rescans inputs
// exhaustively and never touches the matcher's indexes, so a verifier pass
// is meaningful evidence rather than an echo of the construction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"
#include "cfhm/rng.hpp"

namespace cfhm {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
    std::vector<int> witness;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    std::map<std::string, double> counts;
    std::map<std::string, double> fractions;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    const VerifyCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    nlohmann::json to_json() const {
        nlohmann::json cj = nlohmann::json::array();
        for (const auto& c : checks)
            cj.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"detail", c.detail},
                          {"witness", c.witness}});
        return nlohmann::json{{"checks", cj},
                              {"counts", counts},
                              {"fractions", fractions},
                              {"all_pass", all_pass()}};
    }
};

// ---------------------------------------------------------------------------
// Matching verification
// ---------------------------------------------------------------------------

// Checks P-perfectness, pairwise disjointness, and freedom from every listed
// conflict (C, D, and explicit overlap pairs) by direct rescans. Dummy
// padding edges in m1 are ignored. The m2-covered fraction is reported
// against d^{-eps^4} when d and eps are provided (report only).
inline VerifyReport verify_matching(const TripartiteHypergraph& h,
                                    const ConflictSystem& cs, const Matching& m,
                                    double d = 0.0, double eps = 0.0,
                                    bool reverse_scan = false) {
    VerifyReport rep;
    std::vector<int> m1_real;
    for (int id : m.m1)
        if (!h.edge(id).dummy) m1_real.push_back(id);
    std::sort(m1_real.begin(), m1_real.end());
    std::vector<int> m2 = m.m2;
    std::sort(m2.begin(), m2.end());

    // class sanity
    {
        VerifyCheck c{"edge-classes", true, "", {}};
        for (int id : m1_real)
            if (h.edge(id).klass != EdgeClass::H1) {
                c.pass = false;
                c.witness = {id};
                c.detail = "m1 entry is not an H1 edge";
            }
        for (int id : m2)
            if (h.edge(id).klass != EdgeClass::H2) {
                c.pass = false;
                c.witness = {id};
                c.detail = "m2 entry is not an H2 edge";
            }
        rep.checks.push_back(c);
    }

    // disjointness by exhaustive vertex scan
    {
        VerifyCheck c{"pairwise-disjoint", true, "", {}};
        std::set<int> used;
        auto scan = [&](const std::vector<int>& ids) {
            for (int id : ids)
                for (int v : h.edge(id).vertices)
                    if (!used.insert(v).second && c.pass) {
                        c.pass = false;
                        c.witness = {v, id};
                        c.detail = "vertex reused";
                    }
        };
        scan(m1_real);
        scan(m2);
        rep.checks.push_back(c);
    }

    // P-perfectness
    {
        VerifyCheck c{"p-perfect", true, "", {}};
        std::vector<char> covered(h.p_size(), 0);
        for (const auto* ids : {&m1_real, &m2})
            for (int id : *ids)
                for (int v : h.edge(id).vertices)
                    if (h.in_p(v)) covered[v] = 1;
        long long miss = 0;
        for (int v = 0; v < h.p_size(); ++v)
            if (!covered[v]) {
                if (c.pass) c.witness = {v};
                c.pass = false;
                ++miss;
            }
        if (!c.pass) c.detail = std::to_string(miss) + " P-vertices uncovered";
        rep.checks.push_back(c);
        rep.counts["uncovered_p"] = static_cast<double>(miss);
    }

    // conflict freedom: full scans over the conflict lists, no index
    std::vector<int> all = m1_real;
    all.insert(all.end(), m2.begin(), m2.end());
    std::sort(all.begin(), all.end());
    auto subset = [&](const std::vector<int>& ids) {
        for (int id : ids)
            if (!std::binary_search(all.begin(), all.end(), id)) return false;
        return true;
    };
    auto scan_family = [&](const std::vector<Conflict>& fam, const std::string& name) {
        VerifyCheck c{name, true, "", {}};
        long long hits = 0;
        if (!reverse_scan) {
            for (int i = 0; i < static_cast<int>(fam.size()); ++i)
                if (subset(fam[i].edges)) {
                    if (c.pass) c.witness = {i};
                    c.pass = false;
                    ++hits;
                }
        } else {
            for (int i = static_cast<int>(fam.size()) - 1; i >= 0; --i)
                if (subset(fam[i].edges)) {
                    c.witness = {i};  // lowest index wins either way
                    c.pass = false;
                    ++hits;
                }
        }
        if (!c.pass) c.detail = std::to_string(hits) + " conflicts inside the matching";
        rep.checks.push_back(c);
    };
    scan_family(cs.c(), "c-free");
    scan_family(cs.d(), "d-free");

    // overlap freedom: direct pairwise scan of m2 (subsumes generated pairs)
    {
        VerifyCheck c{"m2-overlap-free", true, "", {}};
        for (std::size_t i = 0; i < m2.size() && c.pass; ++i)
            for (std::size_t j = i + 1; j < m2.size() && c.pass; ++j)
                for (int v : h.edge(m2[i]).vertices)
                    if (h.in_r(v) && h.edge_contains(m2[j], v)) {
                        c.pass = false;
                        c.witness = {m2[i], m2[j], v};
                        c.detail = "m2 edges share an R vertex";
                        break;
                    }
        rep.checks.push_back(c);
    }

    rep.counts["m1_size"] = static_cast<double>(m1_real.size());
    rep.counts["m2_size"] = static_cast<double>(m2.size());
    if (h.p_size() > 0) {
        long long m2_p = 0;
        for (int id : m2)
            for (int v : h.edge(id).vertices)
                if (h.in_p(v)) ++m2_p;
        rep.fractions["m2_covered"] =
            static_cast<double>(m2_p) / static_cast<double>(h.p_size());
        if (d > 1.0 && eps > 0.0)
            rep.fractions["m2_covered_target"] = std::pow(d, -std::pow(eps, 4));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Generalised Ramsey colouring verification
// ---------------------------------------------------------------------------

struct RamseyPattern {
    enum class Kind { TightCycle, K4 };
    Kind kind = Kind::TightCycle;
    int ell = 4;  // cycle length when kind == TightCycle
};

namespace detail {

// Canonical tight-cycle enumeration from vertex sequences: the first vertex
// is the smallest and the successor is smaller than the predecessor, which
// quotients out the 2*ell rotations and reflections.
inline void for_each_tight_cycle_vertexseq(
    int n, int ell, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> seq;
    std::vector<char> used(n, 0);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(seq.size()) == ell) {
            if (seq[1] < seq[ell - 1]) fn(seq);
            return;
        }
        for (int v = seq[0] + 1; v < n; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            seq.push_back(v);
            rec();
            seq.pop_back();
            used[v] = 0;
        }
    };
    for (int v0 = 0; v0 + ell <= n; ++v0) {
        seq = {v0};
        std::fill(used.begin(), used.end(), 0);
        used[v0] = 1;
        rec();
    }
}

// Independent edge-sequence strategy: grows the cycle window by window,
// used as the cross-check enumeration.
inline void for_each_tight_cycle_edgeseq(
    int n, int k, int ell, const std::function<void(const std::vector<int>&)>& fn) {
    // choose the first window (k vertices), then extend one vertex at a time;
    // each extension forms the next edge with the last k-1 vertices
    std::vector<int> seq;
    std::vector<char> used(n, 0);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(seq.size()) == ell) {
            // canonical: smallest vertex first, successor < predecessor
            int mn = *std::min_element(seq.begin(), seq.end());
            if (seq[0] != mn) return;
            if (!(seq[1] < seq[ell - 1])) return;
            fn(seq);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            seq.push_back(v);
            rec();
            seq.pop_back();
            used[v] = 0;
        }
    };
    (void)k;
    for (int v0 = 0; v0 < n; ++v0) {
        seq = {v0};
        std::fill(used.begin(), used.end(), 0);
        used[v0] = 1;
        rec();
    }
}

}  // namespace detail

// Verifies that every copy of the pattern receives at least q distinct
// colours. The colouring must be total on E(K_n^k); missing edges are an
// input error listing the first few uncoloured edges.
inline VerifyReport verify_ramsey_coloring(
    int n, int k, const RamseyPattern& pattern, int q,
    const std::map<std::vector<int>, int>& coloring, int palette_target = -1) {
    // totality check
    {
        std::vector<int> missing_count{0};
        std::string missing_list;
        std::vector<int> pick(k);
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == k) {
                if (!coloring.count(pick)) {
                    ++missing_count[0];
                    if (missing_count[0] <= 5) {
                        missing_list += " {";
                        for (int v : pick) missing_list += std::to_string(v) + ",";
                        missing_list.back() = '}';
                    }
                }
                return;
            }
            for (int v = start; v < n; ++v) {
                pick[depth] = v;
                rec(v + 1, depth + 1);
            }
        };
        rec(0, 0);
        if (missing_count[0] > 0)
            throw std::invalid_argument("partial coloring: " +
                                        std::to_string(missing_count[0]) +
                                        " uncoloured edges, e.g." + missing_list);
    }

    VerifyReport rep;
    long long copies = 0, violations = 0;
    std::vector<int> first_witness;
    std::set<int> palette;
    for (const auto& [e, col] : coloring) palette.insert(col);

    auto check_copy = [&](const std::vector<int>& verts,
                          const std::vector<std::vector<int>>& edges) {
        ++copies;
        std::set<int> cols;
        for (const auto& e : edges) cols.insert(coloring.at(e));
        if (static_cast<int>(cols.size()) < q) {
            ++violations;
            if (first_witness.empty()) first_witness = verts;
        }
    };

    if (pattern.kind == RamseyPattern::Kind::K4) {
        if (k != 2) throw std::invalid_argument("K4 pattern needs k = 2");
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    for (int e4 = c + 1; e4 < n; ++e4) {
                        std::vector<int> vs = {a, b, c, e4};
                        std::vector<std::vector<int>> es;
                        for (int i = 0; i < 4; ++i)
                            for (int j = i + 1; j < 4; ++j)
                                es.push_back({vs[i], vs[j]});
                        check_copy(vs, es);
                    }
    } else {
        const int ell = pattern.ell;
        detail::for_each_tight_cycle_vertexseq(n, ell, [&](const std::vector<int>& seq) {
            std::vector<std::vector<int>> es;
            for (int i = 0; i < ell; ++i) {
                std::vector<int> e;
                for (int t = 0; t < k; ++t) e.push_back(seq[(i + t) % ell]);
                std::sort(e.begin(), e.end());
                es.push_back(std::move(e));
            }
            check_copy(seq, es);
        });
    }

    VerifyCheck c{"min-colours-per-copy", violations == 0,
                  violations ? std::to_string(violations) + " copies below q" : "",
                  first_witness};
    rep.checks.push_back(c);
    rep.counts["copies"] = static_cast<double>(copies);
    rep.counts["violations"] = static_cast<double>(violations);
    rep.counts["colours_used"] = static_cast<double>(palette.size());
    if (palette_target >= 0) {
        rep.counts["palette_target"] = palette_target;
        VerifyCheck pc{"palette-size", true, "", {}};
        // colours used may undershoot the palette; the target bounds it
        pc.pass = static_cast<int>(palette.size()) <= palette_target;
        if (!pc.pass) pc.detail = "more colours than the declared palette";
        rep.checks.push_back(pc);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Covering verification
// ---------------------------------------------------------------------------

struct SteinerCheckParams {
    int s = 0;
    int t = 0;
    int ell = 0;  // span condition checked for j in [2, ell]
};

// Checks a covering of a k-graph: every vertex covered once or twice, the
// doubly-covered fraction (reported against d^{-eps^5} when given), freedom
// from the source conflict family, and optionally the Steiner span
// condition on every j-subset of the output.
inline VerifyReport verify_covering(int n,
                                    const std::vector<std::vector<int>>& edges,
                                    const std::vector<std::vector<int>>& conflicts,
                                    const std::vector<int>& cover,
                                    double d = 0.0, double eps = 0.0,
                                    const SteinerCheckParams* steiner = nullptr) {
    VerifyReport rep;
    std::vector<int> mult(n, 0);
    for (int id : cover) {
        if (id < 0 || id >= static_cast<int>(edges.size()))
            throw std::invalid_argument("cover references unknown edge " +
                                        std::to_string(id));
        for (int v : edges[id]) ++mult[v];
    }
    long long uncovered = 0, twice = 0, over = 0;
    std::vector<int> w_un, w_over;
    for (int v = 0; v < n; ++v) {
        if (mult[v] == 0) {
            ++uncovered;
            if (w_un.empty()) w_un = {v};
        } else if (mult[v] == 2) {
            ++twice;
        } else if (mult[v] > 2) {
            ++over;
            if (w_over.empty()) w_over = {v};
        }
    }
    rep.checks.push_back(VerifyCheck{
        "all-covered", uncovered == 0,
        uncovered ? std::to_string(uncovered) + " vertices uncovered" : "", w_un});
    rep.checks.push_back(VerifyCheck{
        "max-twice", over == 0,
        over ? std::to_string(over) + " vertices covered 3+ times" : "", w_over});
    rep.counts["doubly_covered"] = static_cast<double>(twice);
    rep.fractions["doubly_covered"] =
        n > 0 ? static_cast<double>(twice) / n : 0.0;
    if (d > 1.0 && eps > 0.0)
        rep.fractions["doubly_covered_target"] = std::pow(d, -std::pow(eps, 5));

    // conflict freedom over the source family (set semantics on edge ids)
    {
        std::set<int> inside(cover.begin(), cover.end());
        VerifyCheck c{"conflict-free", true, "", {}};
        long long hits = 0;
        for (int i = 0; i < static_cast<int>(conflicts.size()); ++i) {
            bool all = true;
            for (int id : conflicts[i])
                if (!inside.count(id)) { all = false; break; }
            if (all) {
                if (c.pass) c.witness = {i};
                c.pass = false;
                ++hits;
            }
        }
        if (!c.pass) c.detail = std::to_string(hits) + " conflicts inside the cover";
        rep.checks.push_back(c);
    }

    // Steiner span condition: every j-subset of the distinct cover elements
    // spans more than (s - t) j + t points, for j in [2, ell]
    if (steiner && steiner->ell >= 2) {
        std::vector<int> distinct(cover.begin(), cover.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        VerifyCheck c{"steiner-span", true, "", {}};
        std::vector<int> pick;
        std::set<int> span;
        std::function<void(std::size_t, int)> rec = [&](std::size_t start, int j) {
            if (!c.pass) return;
            if (j == 0) {
                std::set<int> pts;
                for (int id : pick)
                    pts.insert(edges[id].begin(), edges[id].end());
                int bound = (steiner->s - steiner->t) *
                                static_cast<int>(pick.size()) +
                            steiner->t;
                if (static_cast<int>(pts.size()) <= bound) {
                    c.pass = false;
                    c.witness = pick;
                    c.detail = "a " + std::to_string(pick.size()) +
                               "-subset spans only " + std::to_string(pts.size()) +
                               " points";
                }
                return;
            }
            for (std::size_t i = start; i < distinct.size(); ++i) {
                pick.push_back(distinct[i]);
                rec(i + 1, j - 1);
                pick.pop_back();
            }
        };
        for (int j = 2; j <= steiner->ell && c.pass; ++j) {
            pick.clear();
            rec(0, j);
        }
        (void)span;
        rep.checks.push_back(c);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Monte-Carlo unavoidability oracle
// ---------------------------------------------------------------------------

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long long samples = 0;
};

// Samples independent uniform per-P-vertex H2-edge choices and counts
// conflicts whose whole H2 part is selected; the mean estimates A(D).
inline McEstimate mc_unavoidability_oracle(const ConflictSystem& cs,
                                           const TripartiteHypergraph& h,
                                           long long samples, std::uint64_t seed) {
    // only vertices appearing in some H2 part can influence selection
    std::vector<int> relevant;
    for (const Conflict& cf : cs.d())
        relevant.insert(relevant.end(), cf.vp.begin(), cf.vp.end());
    std::sort(relevant.begin(), relevant.end());
    relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());
    for (int x : relevant)
        if (h.degree1(x, EdgeClass::H2) == 0)
            throw std::invalid_argument("P-vertex " + std::to_string(x) +
                                        " has H2-degree 0");
    CounterRng rng(seed);
    std::vector<int> choice(h.p_size(), -1);
    double sum = 0.0, sumsq = 0.0;
    for (long long s = 0; s < samples; ++s) {
        for (int x : relevant) {
            const auto& inc = h.incident(x, EdgeClass::H2);
            choice[x] = inc[rng.below(inc.size())];
        }
        long long count = 0;
        for (const Conflict& cf : cs.d()) {
            bool sel = true;
            for (int id : cf.h2_part)
                if (choice[h.h2_pvertex(id)] != id) { sel = false; break; }
            if (sel) ++count;
        }
        sum += static_cast<double>(count);
        sumsq += static_cast<double>(count) * count;
    }
    McEstimate out;
    out.samples = samples;
    out.mean = samples > 0 ? sum / samples : 0.0;
    if (samples > 1) {
        double var = (sumsq - sum * out.mean) / (samples - 1);
        out.stderr_ = std::sqrt(std::max(0.0, var) / samples);
    }
    return out;
}

}  // namespace cfhm

#endif  // CFHM_VERIFY_HPP
