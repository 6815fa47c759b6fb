#ifndef CFHM_CONFLICTS_HPP
#define CFHM_CONFLICTS_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cfhm/hypergraph.hpp"

namespace cfhm {

struct Conflict {
    std::vector<int> edges;    // all edge ids, sorted
    std::vector<int> h1_part;  // sorted
    std::vector<int> h2_part;  // sorted
    std::vector<int> vp;       // distinct P-vertices of the H2 part, sorted
    bool selectable;           // H2-part P-vertices all distinct
    int j1() const { return static_cast<int>(h1_part.size()); }
    int j2() const { return static_cast<int>(h2_part.size()); }
};

// Three conflict families over the edges of a tripartite hypergraph:
// C-conflicts (H1 edges only), mixed D-conflicts (at least one H2 edge),
// and generated overlap pairs of H2 edges meeting only in R. Conflicts are
// canonical sorted id sets; duplicates within a family are rejected.
class ConflictSystem {
public:
    ConflictSystem() = default;

    ConflictSystem(const TripartiteHypergraph& h,
                   const std::vector<std::vector<int>>& c_lists,
                   const std::vector<std::vector<int>>& d_lists,
                   int ell = 0, double eps = 0.0)
        : eps_(eps) {
        c_by_edge_.resize(h.edge_count());
        d_by_edge_.resize(h.edge_count());
        d_by_pvertex_.resize(h.p_size());
        int max_size = 2;
        for (const auto& ids : c_lists) {
            Conflict cf = classify(h, ids);
            if (!cf.h2_part.empty())
                throw std::invalid_argument("C-conflict contains an H2 edge");
            max_size = std::max(max_size, static_cast<int>(cf.edges.size()));
            push_c(std::move(cf));
        }
        for (const auto& ids : d_lists) {
            Conflict cf = classify(h, ids);
            if (cf.h2_part.empty())
                throw std::invalid_argument(
                    "D-conflict needs at least one H2 edge (E1)");
            max_size = std::max(max_size, static_cast<int>(cf.edges.size()));
            push_d(std::move(cf));
        }
        ell_ = ell > 0 ? ell : max_size;
        for (const Conflict& cf : c_)
            if (static_cast<int>(cf.edges.size()) > ell_)
                throw std::invalid_argument("conflict larger than ell");
        for (const Conflict& cf : d_)
            if (static_cast<int>(cf.edges.size()) > ell_)
                throw std::invalid_argument("conflict larger than ell");
    }

    int ell() const { return ell_; }
    double eps() const { return eps_; }
    void set_eps(double eps) { eps_ = eps; }

    const std::vector<Conflict>& c() const { return c_; }
    const std::vector<Conflict>& d() const { return d_; }
    const std::vector<std::pair<int, int>>& overlap_pairs() const { return overlap_; }

    void set_overlap_pairs(std::vector<std::pair<int, int>> pairs) {
        overlap_ = std::move(pairs);
    }

    // Edge ids beyond the indexed range (padding appended after construction)
    // have no conflicts by definition.
    const std::vector<int>& c_at_edge(int edge) const {
        return edge < static_cast<int>(c_by_edge_.size()) ? c_by_edge_[edge] : empty_;
    }
    const std::vector<int>& d_at_edge(int edge) const {
        return edge < static_cast<int>(d_by_edge_.size()) ? d_by_edge_[edge] : empty_;
    }
    const std::vector<int>& d_at_pvertex(int x) const { return d_by_pvertex_[x]; }

    // D_{x,y}: mixed conflicts whose H2-part touches both P-vertices.
    std::vector<int> d_at_pvertex_pair(int x, int y) const {
        std::vector<int> out;
        for (int i : d_by_pvertex_[x]) {
            const auto& vp = d_[i].vp;
            if (std::binary_search(vp.begin(), vp.end(), y)) out.push_back(i);
        }
        return out;
    }

    // Rebuilds every index from the conflict lists and compares; used by the
    // invariant tests.
    bool index_round_trips(const TripartiteHypergraph& h) const {
        ConflictSystem fresh;
        std::vector<std::vector<int>> cl, dl;
        for (const Conflict& cf : c_) cl.push_back(cf.edges);
        for (const Conflict& cf : d_) dl.push_back(cf.edges);
        fresh = ConflictSystem(h, cl, dl, ell_, eps_);
        return fresh.c_by_edge_ == c_by_edge_ && fresh.d_by_edge_ == d_by_edge_ &&
               fresh.d_by_pvertex_ == d_by_pvertex_;
    }

    static Conflict classify(const TripartiteHypergraph& h, std::vector<int> ids) {
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw std::invalid_argument("conflict repeats an edge");
        if (ids.size() < 2)
            throw std::invalid_argument("conflict needs at least 2 edges");
        Conflict cf;
        cf.edges = std::move(ids);
        std::vector<int> pverts;
        for (int id : cf.edges) {
            const Edge& e = h.edge(id);
            if (e.dummy)
                throw std::invalid_argument("conflict references a dummy edge");
            if (e.klass == EdgeClass::H1) {
                cf.h1_part.push_back(id);
            } else {
                cf.h2_part.push_back(id);
                pverts.push_back(h.h2_pvertex(id));
            }
        }
        std::sort(pverts.begin(), pverts.end());
        cf.selectable =
            std::adjacent_find(pverts.begin(), pverts.end()) == pverts.end();
        pverts.erase(std::unique(pverts.begin(), pverts.end()), pverts.end());
        cf.vp = std::move(pverts);
        return cf;
    }

private:
    void push_c(Conflict cf) {
        if (!seen_c_.insert(cf.edges).second)
            throw std::invalid_argument("duplicate C-conflict");
        const int idx = static_cast<int>(c_.size());
        for (int id : cf.edges) c_by_edge_[id].push_back(idx);
        c_.push_back(std::move(cf));
    }

    void push_d(Conflict cf) {
        if (!seen_d_.insert(cf.edges).second)
            throw std::invalid_argument("duplicate D-conflict");
        const int idx = static_cast<int>(d_.size());
        for (int id : cf.edges) d_by_edge_[id].push_back(idx);
        for (int x : cf.vp) d_by_pvertex_[x].push_back(idx);
        d_.push_back(std::move(cf));
    }

    std::vector<Conflict> c_;
    std::vector<Conflict> d_;
    std::vector<std::pair<int, int>> overlap_;
    int ell_ = 2;
    double eps_ = 0.0;
    std::vector<std::vector<int>> c_by_edge_;
    std::vector<std::vector<int>> d_by_edge_;
    std::vector<std::vector<int>> d_by_pvertex_;
    std::vector<int> empty_;
    std::unordered_set<std::vector<int>, VecHash> seen_c_;
    std::unordered_set<std::vector<int>, VecHash> seen_d_;
};

}  // namespace cfhm

#endif  // CFHM_CONFLICTS_HPP
