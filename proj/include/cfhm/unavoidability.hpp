#ifndef CFHM_UNAVOIDABILITY_HPP
#define CFHM_UNAVOIDABILITY_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"
#include "cfhm/rational.hpp"

namespace cfhm {

// Arithmetic policy for unavoidability sums. Exact rationals are used at
// desk scale; beyond the stated bounds the double path applies and reports
// carry rel_tol instead of exactness.
struct ArithmeticMode {
    bool exact;
    double rel_tol = 1e-9;
};

inline ArithmeticMode arithmetic_mode_for(const TripartiteHypergraph& h, int ell) {
    bool ok = ell <= 12;
    if (ok) {
        for (int x = 0; x < h.p_size() && ok; ++x)
            if (h.degree1(x, EdgeClass::H2) > 1000000) ok = false;
    }
    return ArithmeticMode{ok};
}

namespace detail {
inline int checked_h2_degree(const TripartiteHypergraph& h, int y) {
    int deg = h.degree1(y, EdgeClass::H2);
    if (deg == 0)
        throw std::invalid_argument("P-vertex " + std::to_string(y) +
                                    " of an H2 part has H2-degree 0");
    return deg;
}
}  // namespace detail

// A(E) = prod over P-vertices y of E's H2 part of 1 / d_H2(y): the
// probability that E's H2 part is fully selected when each P-vertex picks
// one incident H2 edge independently and uniformly at random.
inline double unavoidability(const TripartiteHypergraph& h, const Conflict& cf) {
    double a = 1.0;
    for (int y : cf.vp) a /= detail::checked_h2_degree(h, y);
    return a;
}

inline Rational unavoidability_exact(const TripartiteHypergraph& h,
                                     const Conflict& cf) {
    Rational a(1);
    for (int y : cf.vp)
        a = a * Rational::reciprocal(detail::checked_h2_degree(h, y));
    return a;
}

inline double unavoidability(const TripartiteHypergraph& h,
                             const std::vector<int>& conflict_edges) {
    return unavoidability(h, ConflictSystem::classify(h, conflict_edges));
}

inline Rational unavoidability_exact(const TripartiteHypergraph& h,
                                     const std::vector<int>& conflict_edges) {
    return unavoidability_exact(h, ConflictSystem::classify(h, conflict_edges));
}

// A(D) = sum of A(E) over the conflicts of a family.
inline double family_unavoidability(const TripartiteHypergraph& h,
                                    const std::vector<Conflict>& family) {
    double s = 0.0;
    for (const Conflict& cf : family) s += unavoidability(h, cf);
    return s;
}

inline Rational family_unavoidability_exact(const TripartiteHypergraph& h,
                                            const std::vector<Conflict>& family) {
    Rational s;
    for (const Conflict& cf : family) s += unavoidability_exact(h, cf);
    return s;
}

// A(v) for v in R: sum over x in P of d_H2(x, v) / d_H2(x). Computed via
// v's H2 incidence, so x with no common edge contribute nothing; an x with
// a common edge necessarily has positive degree.
inline double vertex_unavoidability(const TripartiteHypergraph& h, int v) {
    if (!h.in_r(v)) throw std::invalid_argument("vertex is not in R");
    double a = 0.0;
    for (int id : h.incident(v, EdgeClass::H2))
        a += 1.0 / detail::checked_h2_degree(h, h.h2_pvertex(id));
    return a;
}

inline Rational vertex_unavoidability_exact(const TripartiteHypergraph& h, int v) {
    if (!h.in_r(v)) throw std::invalid_argument("vertex is not in R");
    Rational a;
    for (int id : h.incident(v, EdgeClass::H2))
        a += Rational::reciprocal(detail::checked_h2_degree(h, h.h2_pvertex(id)));
    return a;
}

struct WeightedDegree {
    double value = 0.0;
    std::vector<int> witness_h1;  // the C side of the maximising pair
    std::vector<int> witness_h2;  // the D side
};

namespace detail {
inline void subsets_of(const std::vector<int>& items, int j,
                       std::vector<std::vector<int>>& out) {
    const int m = static_cast<int>(items.size());
    if (j > m) return;
    if (j == 0) { out.push_back({}); return; }
    std::vector<int> idx(j);
    for (int i = 0; i < j; ++i) idx[i] = i;
    for (;;) {
        std::vector<int> s(j);
        for (int i = 0; i < j; ++i) s[i] = items[idx[i]];
        out.push_back(std::move(s));
        int i = j - 1;
        while (i >= 0 && idx[i] == m - j + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int t = i + 1; t < j; ++t) idx[t] = idx[t - 1] + 1;
    }
}
}  // namespace detail

// Unavoidability-weighted maximum degree: the largest A-mass of
// { E in family : C ⊆ E and D ⊆ E } over pairs (C, D) of j1p H1 edges and
// j2p H2 edges that co-occur inside at least one conflict. Pairs inside no
// conflict carry mass 0 and never win.
inline WeightedDegree weighted_max_degree(const TripartiteHypergraph& h,
                                          const std::vector<Conflict>& family,
                                          int j1p, int j2p) {
    if (j1p < 0 || j2p < 0 || j1p + j2p < 1)
        throw std::invalid_argument("need j1' + j2' >= 1");
    // Key: C ids, then -1, then D ids (all ids non-negative, so -1 separates).
    std::map<std::vector<int>, double> mass;
    std::vector<std::vector<int>> cs, ds;
    for (const Conflict& cf : family) {
        if (cf.j1() < j1p || cf.j2() < j2p) continue;
        const double a = unavoidability(h, cf);
        cs.clear();
        ds.clear();
        detail::subsets_of(cf.h1_part, j1p, cs);
        detail::subsets_of(cf.h2_part, j2p, ds);
        for (const auto& cpart : cs) {
            for (const auto& dpart : ds) {
                std::vector<int> key;
                key.reserve(cpart.size() + dpart.size() + 1);
                key.insert(key.end(), cpart.begin(), cpart.end());
                key.push_back(-1);
                key.insert(key.end(), dpart.begin(), dpart.end());
                mass[key] += a;
            }
        }
    }
    WeightedDegree out;
    for (const auto& [key, val] : mass) {
        if (val > out.value) {
            out.value = val;
            auto sep = std::find(key.begin(), key.end(), -1);
            out.witness_h1.assign(key.begin(), sep);
            out.witness_h2.assign(sep + 1, key.end());
        }
    }
    return out;
}

}  // namespace cfhm

#endif  // CFHM_UNAVOIDABILITY_HPP
