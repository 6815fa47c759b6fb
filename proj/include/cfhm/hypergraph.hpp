#ifndef CFHM_HYPERGRAPH_HPP
#define CFHM_HYPERGRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cfhm {

enum class Part : std::uint8_t { P, Q, R };
enum class EdgeClass : std::uint8_t { H1, H2 };

struct Vertex {
    int id;
    Part part;
};

struct Edge {
    EdgeClass klass;
    std::vector<int> vertices;  // strictly increasing global ids
    bool dummy = false;         // padding edge; stripped from all results
};

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// Tripartite hypergraph over vertex parts P, Q, R with two edge classes:
// H1 edges use p vertices of P and q of Q, H2 edges use one vertex of P and
// r of R. Global vertex ids are dense, P block first, then Q, then R.
// Edge ids are dense across both classes in insertion order.
class TripartiteHypergraph {
public:
    TripartiteHypergraph(int np, int nq, int nr) : np_(np), nq_(nq), nr_(nr) {
        if (np < 0 || nq < 0 || nr < 0)
            throw std::invalid_argument("negative part size");
        inc_h1_.resize(vertex_count());
        inc_h2_.resize(vertex_count());
    }

    int vertex_count() const { return np_ + nq_ + nr_; }
    int p_size() const { return np_; }
    int q_size() const { return nq_; }
    int r_size() const { return nr_; }
    int q_begin() const { return np_; }
    int r_begin() const { return np_ + nq_; }

    Part part_of(int v) const {
        check_vertex(v);
        if (v < np_) return Part::P;
        if (v < np_ + nq_) return Part::Q;
        return Part::R;
    }

    bool in_p(int v) const { return v >= 0 && v < np_; }
    bool in_q(int v) const { return v >= np_ && v < np_ + nq_; }
    bool in_r(int v) const { return v >= np_ + nq_ && v < vertex_count(); }

    // Shape parameters; -1 until the first edge of the class fixes them.
    int p_param() const { return p_; }
    int q_param() const { return q_; }
    int r_param() const { return r_; }
    int k_param() const { return p_ < 0 ? -1 : p_ + q_; }

    int add_edge(EdgeClass klass, std::vector<int> verts, bool dummy = false) {
        std::sort(verts.begin(), verts.end());
        if (std::adjacent_find(verts.begin(), verts.end()) != verts.end())
            throw std::invalid_argument("edge repeats a vertex");
        for (int v : verts) check_vertex(v);
        validate_shape(klass, verts, dummy);
        auto key = verts;
        auto& seen = (klass == EdgeClass::H1) ? seen_h1_ : seen_h2_;
        if (!seen.emplace(std::move(key)).second)
            throw std::invalid_argument("duplicate edge within class");
        const int id = static_cast<int>(edges_.size());
        for (int v : verts)
            (klass == EdgeClass::H1 ? inc_h1_ : inc_h2_)[v].push_back(id);
        edges_.push_back(Edge{klass, std::move(verts), dummy});
        return id;
    }

    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int id) const {
        if (id < 0 || id >= edge_count()) throw std::invalid_argument("bad edge id");
        return edges_[id];
    }
    const std::vector<Edge>& edges() const { return edges_; }

    bool edge_contains(int id, int v) const {
        const auto& ev = edges_[id].vertices;
        return std::binary_search(ev.begin(), ev.end(), v);
    }

    // The single P-vertex of an H2 edge.
    int h2_pvertex(int id) const {
        const Edge& e = edge(id);
        if (e.klass != EdgeClass::H2) throw std::invalid_argument("not an H2 edge");
        return e.vertices.front();  // P block sorts first
    }

    const std::vector<int>& incident(int v, EdgeClass klass) const {
        check_vertex(v);
        return klass == EdgeClass::H1 ? inc_h1_[v] : inc_h2_[v];
    }

    int degree1(int v, std::optional<EdgeClass> filter = std::nullopt) const {
        check_vertex(v);
        if (!filter)
            return static_cast<int>(inc_h1_[v].size() + inc_h2_[v].size());
        return static_cast<int>(
            (*filter == EdgeClass::H1 ? inc_h1_ : inc_h2_)[v].size());
    }

    // Number of edges containing every vertex of u, optionally class-filtered.
    long long degree(const std::vector<int>& u,
                     std::optional<EdgeClass> filter = std::nullopt) const {
        if (u.empty()) throw std::invalid_argument("degree of empty vertex set");
        for (int v : u) check_vertex(v);
        // Scan the shortest incidence list among the vertices.
        int best = u[0];
        auto list_len = [&](int v) {
            long long n = 0;
            if (!filter || *filter == EdgeClass::H1) n += inc_h1_[v].size();
            if (!filter || *filter == EdgeClass::H2) n += inc_h2_[v].size();
            return n;
        };
        for (int v : u)
            if (list_len(v) < list_len(best)) best = v;
        long long count = 0;
        auto scan = [&](const std::vector<int>& ids) {
            for (int id : ids) {
                bool all = true;
                for (int v : u)
                    if (!edge_contains(id, v)) { all = false; break; }
                if (all) ++count;
            }
        };
        if (!filter || *filter == EdgeClass::H1) scan(inc_h1_[best]);
        if (!filter || *filter == EdgeClass::H2) scan(inc_h2_[best]);
        return count;
    }

    // Maximum degree over all j-subsets of vertices that occur inside at
    // least one (filtered) edge, with a witness subset. Subsets inside no
    // edge have degree 0 and cannot exceed any occurring subset.
    std::pair<long long, std::vector<int>> max_degree(
        int j, std::optional<EdgeClass> filter = std::nullopt) const {
        if (j < 1) throw std::invalid_argument("subset size must be >= 1");
        std::unordered_map<std::vector<int>, long long, VecHash> counts;
        std::vector<int> subset(j);
        for (const Edge& e : edges_) {
            if (filter && e.klass != *filter) continue;
            const int m = static_cast<int>(e.vertices.size());
            if (m < j) continue;
            // enumerate j-subsets of e.vertices
            std::vector<int> idx(j);
            for (int i = 0; i < j; ++i) idx[i] = i;
            for (;;) {
                for (int i = 0; i < j; ++i) subset[i] = e.vertices[idx[i]];
                ++counts[subset];
                int i = j - 1;
                while (i >= 0 && idx[i] == m - j + i) --i;
                if (i < 0) break;
                ++idx[i];
                for (int t = i + 1; t < j; ++t) idx[t] = idx[t - 1] + 1;
            }
        }
        long long best = 0;
        std::vector<int> witness;
        for (const auto& [key, cnt] : counts) {
            if (cnt > best || (cnt == best && (witness.empty() || key < witness))) {
                best = cnt;
                witness = key;
            }
        }
        return {best, witness};
    }

    // All partial edges completed by v: { e \ {v} : v in e }.
    std::vector<std::vector<int>> link(int v) const {
        check_vertex(v);
        std::vector<std::vector<int>> out;
        for (const auto* inc : {&inc_h1_[v], &inc_h2_[v]}) {
            for (int id : *inc) {
                std::vector<int> part;
                part.reserve(edges_[id].vertices.size() - 1);
                for (int u : edges_[id].vertices)
                    if (u != v) part.push_back(u);
                out.push_back(std::move(part));
            }
        }
        return out;
    }

    bool has_dummies() const { return dummy_count_ > 0; }
    int dummy_count() const { return dummy_count_; }

private:
    void check_vertex(int v) const {
        if (v < 0 || v >= vertex_count())
            throw std::invalid_argument("unknown vertex id " + std::to_string(v));
    }

    void validate_shape(EdgeClass klass, const std::vector<int>& verts, bool dummy) {
        int cp = 0, cq = 0, cr = 0;
        for (int v : verts) {
            if (in_p(v)) ++cp;
            else if (in_q(v)) ++cq;
            else ++cr;
        }
        if (klass == EdgeClass::H1) {
            if (cr != 0) throw std::invalid_argument("H1 edge touches R");
            if (dummy) {
                // Padding edges live entirely in Q and match the class size.
                if (cp != 0) throw std::invalid_argument("dummy edge touches P");
                if (p_ >= 0 && cq != p_ + q_)
                    throw std::invalid_argument("dummy edge has wrong size");
                ++dummy_count_;
                return;
            }
            if (cp < 1) throw std::invalid_argument("H1 edge needs a P vertex");
            if (p_ < 0) {
                if (cp + cq < 2)
                    throw std::invalid_argument("H1 edges need size k >= 2");
                p_ = cp;
                q_ = cq;
            } else if (cp != p_ || cq != q_) {
                throw std::invalid_argument("H1 edge shape differs from (p, q)");
            }
        } else {
            if (cq != 0) throw std::invalid_argument("H2 edge touches Q");
            if (cp != 1) throw std::invalid_argument("H2 edge needs exactly one P vertex");
            if (cr < 1) throw std::invalid_argument("H2 edge needs an R vertex");
            if (r_ < 0) r_ = cr;
            else if (cr != r_)
                throw std::invalid_argument("H2 edge shape differs from r");
        }
    }

    int np_, nq_, nr_;
    int p_ = -1, q_ = -1, r_ = -1;
    int dummy_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> inc_h1_;
    std::vector<std::vector<int>> inc_h2_;
    std::unordered_set<std::vector<int>, VecHash> seen_h1_;
    std::unordered_set<std::vector<int>, VecHash> seen_h2_;
};

struct Matching {
    std::vector<int> m1;        // H1 edge ids, sorted
    std::vector<int> m2;        // H2 edge ids, sorted
    std::vector<int> uncovered; // P vertices untouched by m1 ∪ m2, sorted
};

inline std::vector<int> covered_p_vertices(const TripartiteHypergraph& h,
                                           const Matching& m) {
    std::vector<int> out;
    for (const auto* ids : {&m.m1, &m.m2}) {
        for (int id : *ids) {
            for (int v : h.edge(id).vertices)
                if (h.in_p(v)) out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<int> uncovered_p_vertices(const TripartiteHypergraph& h,
                                             const Matching& m) {
    std::vector<int> covered = covered_p_vertices(h, m);
    std::vector<int> out;
    std::size_t j = 0;
    for (int v = 0; v < h.p_size(); ++v) {
        while (j < covered.size() && covered[j] < v) ++j;
        if (j == covered.size() || covered[j] != v) out.push_back(v);
    }
    return out;
}

// Exact set checks for the matching invariants: pairwise vertex-disjoint
// within m1, within m2, and across; uncovered consistent with membership.
inline bool matching_invariants_hold(const TripartiteHypergraph& h,
                                     const Matching& m,
                                     std::string* why = nullptr) {
    std::unordered_set<int> used;
    for (const auto* ids : {&m.m1, &m.m2}) {
        for (int id : *ids) {
            for (int v : h.edge(id).vertices) {
                if (!used.insert(v).second) {
                    if (why) *why = "vertex " + std::to_string(v) + " reused";
                    return false;
                }
            }
        }
    }
    for (int id : m.m1)
        if (h.edge(id).klass != EdgeClass::H1) {
            if (why) *why = "m1 contains a non-H1 edge";
            return false;
        }
    for (int id : m.m2)
        if (h.edge(id).klass != EdgeClass::H2) {
            if (why) *why = "m2 contains a non-H2 edge";
            return false;
        }
    std::vector<int> expect = uncovered_p_vertices(h, m);
    std::vector<int> got = m.uncovered;
    std::sort(got.begin(), got.end());
    if (expect != got) {
        if (why) *why = "uncovered set inconsistent";
        return false;
    }
    return true;
}

// Padding result: the padded hypergraph plus the id ranges that tell real
// content apart from padding. Real edge ids are unchanged; R vertex ids are
// shifted up by the number of fresh dummy Q vertices.
struct PaddedHypergraph {
    TripartiteHypergraph h;
    int real_edge_count;   // ids below this are the original edges
    int fresh_q_vertices;  // R ids shift by this amount
};

// Removes padding edges from a matching computed on a padded instance.
// Real edge ids agree between the padded and the original hypergraph, so
// the result is valid against the original.
inline Matching strip_dummy_edges(const TripartiteHypergraph& padded,
                                  const Matching& m) {
    Matching out;
    for (int id : m.m1)
        if (!padded.edge(id).dummy) out.m1.push_back(id);
    out.m2 = m.m2;
    out.uncovered = m.uncovered;
    return out;
}

// Raises every Q-vertex degree to exactly d by adding flagged H1-class
// edges, each holding the deficient vertex plus k-1 fresh Q vertices that
// appear in no other edge. Original edges keep their ids.
inline PaddedHypergraph add_dummy_padding(const TripartiteHypergraph& h, int d) {
    if (d < 0) throw std::invalid_argument("padding target must be >= 0");
    const int k = h.k_param();
    std::vector<int> deficit(h.q_size(), 0);
    long long fresh_needed = 0;
    for (int i = 0; i < h.q_size(); ++i) {
        int v = h.q_begin() + i;
        int dv = h.degree1(v, EdgeClass::H1);
        if (dv > d)
            throw std::invalid_argument("Q-vertex " + std::to_string(v) +
                                        " has degree " + std::to_string(dv) +
                                        " above the padding target");
        deficit[i] = d - dv;
        fresh_needed += static_cast<long long>(deficit[i]) * (k - 1);
    }
    if (h.q_size() > 0 && k < 2 && fresh_needed > 0)
        throw std::invalid_argument("cannot pad before H1 fixes k");
    TripartiteHypergraph out(h.p_size(),
                             h.q_size() + static_cast<int>(fresh_needed),
                             h.r_size());
    const int shift = static_cast<int>(fresh_needed);
    for (const Edge& e : h.edges()) {
        std::vector<int> verts = e.vertices;
        for (int& v : verts)
            if (h.in_r(v)) v += shift;
        out.add_edge(e.klass, std::move(verts), e.dummy);
    }
    int next_fresh = h.q_begin() + h.q_size();
    for (int i = 0; i < h.q_size(); ++i) {
        for (int t = 0; t < deficit[i]; ++t) {
            std::vector<int> verts;
            verts.push_back(h.q_begin() + i);
            for (int j = 0; j < k - 1; ++j) verts.push_back(next_fresh++);
            out.add_edge(EdgeClass::H1, std::move(verts), /*dummy=*/true);
        }
    }
    return PaddedHypergraph{std::move(out), h.edge_count(), shift};
}

}  // namespace cfhm

#endif  // CFHM_HYPERGRAPH_HPP
