#ifndef CFHM_STAGE2_HPP
#define CFHM_STAGE2_HPP

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
#include "cfhm/unavoidability.hpp"

namespace cfhm {

// -------------------------------------------------------------------------
// Overlap conflicts
// -------------------------------------------------------------------------

// All pairs {e, f} of H2 edges meeting only in R. Pairs sharing a P-vertex
// never co-occur (one edge is chosen per uncovered P-vertex), so the
// condition e ∩ f ⊆ R excludes them by construction.
inline std::vector<std::pair<int, int>> generate_overlap_conflicts(
    const TripartiteHypergraph& h) {
    std::set<std::pair<int, int>> found;
    for (int v = h.r_begin(); v < h.vertex_count(); ++v) {
        const auto& inc = h.incident(v, EdgeClass::H2);
        for (std::size_t i = 0; i < inc.size(); ++i) {
            for (std::size_t j = i + 1; j < inc.size(); ++j) {
                int e = std::min(inc[i], inc[j]);
                int f = std::max(inc[i], inc[j]);
                if (h.h2_pvertex(e) == h.h2_pvertex(f)) continue;
                found.emplace(e, f);
            }
        }
    }
    return {found.begin(), found.end()};
}

// -------------------------------------------------------------------------
// Truncated exponential series and the i* default
// -------------------------------------------------------------------------

// S(x) = sum_{m=0}^{i*} (-x)^m / m!
inline double truncated_exp_series(double x, int i_star) {
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= i_star; ++m) {
        term *= -x / m;
        sum += term;
    }
    return sum;
}

// Smallest odd i* with sup_{x in [0, ell^2]} |S(x) - e^{-x}| <= e^{-ell^2}/3,
// checked numerically on a fine grid. Capped at 63.
inline int min_odd_istar(int ell) {
    const double hi = static_cast<double>(ell) * ell;
    const double tol = std::exp(-hi) / 3.0;
    for (int i = 1; i <= 63; i += 2) {
        double worst = 0.0;
        const int steps = 2000;
        for (int s = 0; s <= steps; ++s) {
            double x = hi * s / steps;
            worst = std::max(worst,
                             std::abs(truncated_exp_series(x, i) - std::exp(-x)));
        }
        if (worst <= tol) return i;
    }
    return 63;
}

// -------------------------------------------------------------------------
// Safe edges
// -------------------------------------------------------------------------

struct SafeEdgeEntry {
    int x = -1;
    std::vector<int> n_x;       // incident H2 edges, ascending
    std::vector<int> n_x_safe;  // subset completing no (j1,1)-conflict with m1
    // per-edge gamma values, aligned with n_x: gamma_by_j[i][j-1] and totals
    std::vector<std::vector<double>> gamma_by_j;
    std::vector<double> gamma;
    std::vector<double> a;      // a[m-1] = a_m for m in [i_star]
    double incl_excl_lower = 0.0;  // d_x - a_1 + a_2 - ... - a_{i*}
    double s_series = 0.0;         // sum over N_x of S(gamma_e)
    double lambda_bound = 0.0;     // e^{-ell^2}/3 * d_x
    bool lambda_ok = false;
    int i_star = 0;

    nlohmann::json to_json() const {
        return nlohmann::json{{"x", x},
                              {"d_x", n_x.size()},
                              {"safe", n_x_safe.size()},
                              {"a", a},
                              {"incl_excl_lower", incl_excl_lower},
                              {"s_series", s_series},
                              {"lambda_bound", lambda_bound},
                              {"lambda_ok", lambda_ok},
                              {"i_star", i_star}};
    }
};

// N_x^s: edges at x completing no (j1,1)-conflict whose H1 part lies inside
// m1, plus the gamma values and the Bonferroni diagnostics.
inline SafeEdgeEntry safe_edges(const ConflictSystem& cs,
                                const TripartiteHypergraph& h,
                                const std::vector<int>& m1_sorted, int x, double d,
                                int i_star) {
    if (!h.in_p(x)) throw std::invalid_argument("safe_edges needs x in P");
    SafeEdgeEntry out;
    out.x = x;
    out.i_star = i_star;
    out.n_x = h.incident(x, EdgeClass::H2);
    std::sort(out.n_x.begin(), out.n_x.end());
    const int dx = static_cast<int>(out.n_x.size());
    if (dx == 0)
        throw std::invalid_argument("P-vertex " + std::to_string(x) +
                                    " has no H2 edges; instance invalid");

    out.a.assign(i_star, 0.0);
    for (int e : out.n_x) {
        long long bad_parts = 0;  // H1 parts inside m1 forming a conflict with e
        std::vector<double> gj(cs.ell(), 0.0);
        for (int di : cs.d_at_edge(e)) {
            const Conflict& cf = cs.d()[di];
            if (cf.j2() != 1 || cf.h2_part[0] != e) continue;
            const int j = cf.j1();
            if (j >= 1 && j <= cs.ell()) gj[j - 1] += 1.0;
            bool inside = true;
            for (int id : cf.h1_part)
                if (!std::binary_search(m1_sorted.begin(), m1_sorted.end(), id)) {
                    inside = false;
                    break;
                }
            if (inside) ++bad_parts;
        }
        std::vector<double> gamma_row(cs.ell(), 0.0);
        double gamma_total = 0.0;
        for (int j = 1; j <= cs.ell(); ++j) {
            gamma_row[j - 1] = gj[j - 1] * std::pow(d, -j);
            gamma_total += gamma_row[j - 1];
        }
        out.gamma_by_j.push_back(std::move(gamma_row));
        out.gamma.push_back(gamma_total);
        out.s_series += truncated_exp_series(gamma_total, i_star);
        if (bad_parts == 0) out.n_x_safe.push_back(e);
        // a_m += binom(bad_parts, m)
        double binom = 1.0;
        for (int m = 1; m <= i_star; ++m) {
            binom *= static_cast<double>(bad_parts - (m - 1)) / m;
            if (bad_parts < m) { binom = 0.0; break; }
            out.a[m - 1] += binom;
        }
    }
    out.incl_excl_lower = dx;
    double sign = -1.0;
    for (int m = 1; m <= i_star; ++m) {
        out.incl_excl_lower += sign * out.a[m - 1];
        sign = -sign;
    }
    const double ell2 = static_cast<double>(cs.ell()) * cs.ell();
    out.lambda_bound = std::exp(-ell2) / 3.0 * dx;
    out.lambda_ok = static_cast<double>(out.n_x_safe.size()) >= out.lambda_bound;
    return out;
}

// -------------------------------------------------------------------------
// Blocked / unblocked conflicts
// -------------------------------------------------------------------------

struct BlockedPartition {
    std::vector<int> unblocked;  // d-conflict indices
    std::vector<int> blocked;
    double a_unblocked = 0.0;
    double a_blocked = 0.0;
};

// Among (j1, j2)-conflicts with H1 part inside m1 and x in the H2 part:
// blocked means some H2-part vertex is already covered by m1.
inline BlockedPartition blocked_partition(const ConflictSystem& cs,
                                          const TripartiteHypergraph& h,
                                          const std::vector<int>& m1_sorted, int x,
                                          int j1, int j2) {
    if (j2 < 2) throw std::invalid_argument("blocked partition needs j2 >= 2");
    std::vector<char> covered(h.p_size(), 0);
    for (int id : m1_sorted)
        for (int v : h.edge(id).vertices)
            if (h.in_p(v)) covered[v] = 1;
    BlockedPartition out;
    for (int di : cs.d_at_pvertex(x)) {
        const Conflict& cf = cs.d()[di];
        if (cf.j1() != j1 || cf.j2() != j2) continue;
        bool inside = true;
        for (int id : cf.h1_part)
            if (!std::binary_search(m1_sorted.begin(), m1_sorted.end(), id)) {
                inside = false;
                break;
            }
        if (!inside) continue;
        bool blocked = false;
        for (int y : cf.vp)
            if (covered[y]) { blocked = true; break; }
        double a = unavoidability(h, cf);
        if (blocked) {
            out.blocked.push_back(di);
            out.a_blocked += a;
        } else {
            out.unblocked.push_back(di);
            out.a_unblocked += a;
        }
    }
    return out;
}

// -------------------------------------------------------------------------
// Resampling completer
// -------------------------------------------------------------------------

struct LocalUnsatError : std::runtime_error {
    LocalUnsatError(int x)
        : std::runtime_error("no safe H2 edge at uncovered vertex " +
                             std::to_string(x)),
          witness(x) {}
    int witness;
};

// An event the completer must avoid. It depends only on the edge choices at
// its P-vertices; `violated` reads the current choice (edge id per P-vertex,
// -1 where undefined).
struct Stage2Event {
    std::vector<int> vps;  // sorted P-vertices
    std::function<bool(const std::vector<int>&)> violated;
    std::string tag;  // "d", "overlap", or application-defined
};

struct ResampleRound {
    int event;
    std::vector<int> vertices;
    std::vector<int> new_edges;
};

struct ResampleLog {
    std::vector<ResampleRound> rounds;
    int cap = 0;
    std::string outcome;  // "success" or "cap-exceeded"

    nlohmann::json to_json() const {
        nlohmann::json rs = nlohmann::json::array();
        for (const auto& r : rounds)
            rs.push_back({{"event", r.event},
                          {"vertices", r.vertices},
                          {"new_edges", r.new_edges}});
        return nlohmann::json{
            {"cap", cap}, {"outcome", outcome}, {"rounds", rs}};
    }
};

struct Stage2Result {
    Matching matching;  // m1 plus the chosen m2 on success
    ResampleLog log;
    std::vector<SafeEdgeEntry> safe_profiles;  // per uncovered vertex
    bool success = false;
    std::size_t event_count = 0;
    double max_event_prob = 0.0;       // max product of 1/|N_x^s| over an event
    double max_neighborhood_sum = 0.0; // max over events of the B(D) prob sum
};

// Extends m1 to a P-perfect matching: one uniform safe edge per uncovered
// vertex, then resampling of the lowest-indexed violated event until clean.
// Events: mixed conflicts with j2 >= 2 whose H1 part lies in m1 and whose
// H2-part vertices are all uncovered, overlap pairs within H2[P' ∪ R], and
// any caller-supplied events (implicit application families). A safe_filter
// lets applications with implicit (j1,1) families prune the safe sets.
inline Stage2Result run_stage2(
    const ConflictSystem& cs, const TripartiteHypergraph& h,
    const Matching& stage1, std::uint64_t seed, int max_rounds, int i_star = 0,
    double d = 0.0, const std::vector<Stage2Event>& extra_events = {},
    const std::function<void(int, std::vector<int>&)>* safe_filter = nullptr) {
    Stage2Result res;
    res.log.cap = max_rounds;
    if (i_star <= 0) i_star = min_odd_istar(cs.ell());
    if (d <= 0.0) {
        for (int x = 0; x < h.p_size(); ++x)
            d = std::max(d, static_cast<double>(h.degree1(x, EdgeClass::H1)));
        d = std::max(d, 2.0);
    }

    std::vector<int> m1 = stage1.m1;
    std::sort(m1.begin(), m1.end());
    Matching base{m1, {}, {}};
    std::vector<int> uncovered = uncovered_p_vertices(h, base);

    // safe sets per uncovered vertex
    std::vector<int> safe_index(h.p_size(), -1);
    std::vector<std::vector<int>> safe_sets;
    for (int x : uncovered) {
        SafeEdgeEntry entry = safe_edges(cs, h, m1, x, d, i_star);
        if (safe_filter && *safe_filter) {
            (*safe_filter)(x, entry.n_x_safe);
            std::sort(entry.n_x_safe.begin(), entry.n_x_safe.end());
        }
        if (entry.n_x_safe.empty()) throw LocalUnsatError(x);
        safe_index[x] = static_cast<int>(safe_sets.size());
        safe_sets.push_back(entry.n_x_safe);
        res.safe_profiles.push_back(std::move(entry));
    }
    std::vector<char> is_uncovered(h.p_size(), 0);
    for (int x : uncovered) is_uncovered[x] = 1;

    // ---- event construction (deterministic order) ----
    std::vector<Stage2Event> events;
    // mixed conflicts, j2 >= 2, selectable, H1 part in m1, H2 vertices uncovered
    for (int di = 0; di < static_cast<int>(cs.d().size()); ++di) {
        const Conflict& cf = cs.d()[di];
        if (cf.j2() < 2 || !cf.selectable) continue;
        bool inside = true;
        for (int id : cf.h1_part)
            if (!std::binary_search(m1.begin(), m1.end(), id)) { inside = false; break; }
        if (!inside) continue;
        bool live = true;
        for (int y : cf.vp)
            if (!is_uncovered[y]) { live = false; break; }
        if (!live) continue;
        Stage2Event ev;
        ev.vps = cf.vp;
        ev.tag = "d";
        std::vector<std::pair<int, int>> need;  // (vertex, edge)
        for (int id : cf.h2_part) need.emplace_back(h.h2_pvertex(id), id);
        ev.violated = [need](const std::vector<int>& choice) {
            for (const auto& [x, e] : need)
                if (choice[x] != e) return false;
            return true;
        };
        events.push_back(std::move(ev));
    }
    // overlap pairs within H2[P' ∪ R] (pruned to uncovered endpoints first)
    {
        std::set<std::pair<int, int>> pairs;
        for (int v = h.r_begin(); v < h.vertex_count(); ++v) {
            const auto& inc = h.incident(v, EdgeClass::H2);
            for (std::size_t i = 0; i < inc.size(); ++i) {
                if (!is_uncovered[h.h2_pvertex(inc[i])]) continue;
                for (std::size_t j = i + 1; j < inc.size(); ++j) {
                    if (!is_uncovered[h.h2_pvertex(inc[j])]) continue;
                    int e = std::min(inc[i], inc[j]);
                    int f = std::max(inc[i], inc[j]);
                    if (h.h2_pvertex(e) == h.h2_pvertex(f)) continue;
                    pairs.emplace(e, f);
                }
            }
        }
        for (const auto& [e, f] : pairs) {
            Stage2Event ev;
            int xe = h.h2_pvertex(e), xf = h.h2_pvertex(f);
            ev.vps = {std::min(xe, xf), std::max(xe, xf)};
            ev.tag = "overlap";
            ev.violated = [xe, e, xf, f](const std::vector<int>& choice) {
                return choice[xe] == e && choice[xf] == f;
            };
            events.push_back(std::move(ev));
        }
    }
    for (const auto& ev : extra_events) events.push_back(ev);
    res.event_count = events.size();

    // probability diagnostics
    {
        std::vector<double> probs(events.size(), 1.0);
        std::vector<std::vector<int>> by_vertex(h.p_size());
        for (std::size_t i = 0; i < events.size(); ++i) {
            for (int x : events[i].vps) {
                if (safe_index[x] >= 0)
                    probs[i] /= static_cast<double>(safe_sets[safe_index[x]].size());
                by_vertex[x].push_back(static_cast<int>(i));
            }
            res.max_event_prob = std::max(res.max_event_prob, probs[i]);
        }
        for (std::size_t i = 0; i < events.size(); ++i) {
            std::set<int> nb;
            for (int x : events[i].vps)
                nb.insert(by_vertex[x].begin(), by_vertex[x].end());
            double s = 0.0;
            for (int j : nb) s += probs[j];
            res.max_neighborhood_sum = std::max(res.max_neighborhood_sum, s);
        }
    }

    // ---- initial draw and violation tracking ----
    CounterRng rng(seed);
    std::vector<int> choice(h.p_size(), -1);
    for (int x : uncovered) {
        const auto& pool = safe_sets[safe_index[x]];
        choice[x] = pool[rng.below(pool.size())];
    }
    std::vector<std::vector<int>> events_at(h.p_size());
    for (std::size_t i = 0; i < events.size(); ++i)
        for (int x : events[i].vps) events_at[x].push_back(static_cast<int>(i));

    std::set<int> violated;
    for (std::size_t i = 0; i < events.size(); ++i)
        if (events[i].violated(choice)) violated.insert(static_cast<int>(i));

    int rounds = 0;
    while (!violated.empty() && rounds < max_rounds) {
        ++rounds;
        const int ev_id = *violated.begin();
        const Stage2Event& ev = events[ev_id];
        ResampleRound round;
        round.event = ev_id;
        round.vertices = ev.vps;
        for (int x : ev.vps) {
            const auto& pool = safe_sets[safe_index[x]];
            choice[x] = pool[rng.below(pool.size())];
            round.new_edges.push_back(choice[x]);
        }
        res.log.rounds.push_back(std::move(round));
        // recheck every event touching a redrawn vertex
        std::set<int> affected;
        for (int x : ev.vps)
            affected.insert(events_at[x].begin(), events_at[x].end());
        for (int i : affected) {
            if (events[i].violated(choice)) violated.insert(i);
            else violated.erase(i);
        }
    }

    res.success = violated.empty();
    res.log.outcome = res.success ? "success" : "cap-exceeded";
    res.matching.m1 = m1;
    if (res.success) {
        for (int x : uncovered) res.matching.m2.push_back(choice[x]);
        std::sort(res.matching.m2.begin(), res.matching.m2.end());
    }
    res.matching.uncovered = uncovered_p_vertices(h, res.matching);
    return res;
}

}  // namespace cfhm

#endif  // CFHM_STAGE2_HPP
