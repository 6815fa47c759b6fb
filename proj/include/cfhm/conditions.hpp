#ifndef CFHM_CONDITIONS_HPP
#define CFHM_CONDITIONS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfhm/conflicts.hpp"
#include "cfhm/hypergraph.hpp"
#include "cfhm/unavoidability.hpp"

namespace cfhm {

// One evaluated inequality lhs <= rhs (within float slack). sup_eps records
// where the condition flips as epsilon moves:
//   dir '<' holds for eps below sup_eps, '>' holds above, '*' everywhere in
//   (0,1), '!' nowhere.
struct ConditionEntry {
    std::string label;
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    std::vector<int> witness;
    double sup_eps = 0.0;
    char sup_dir = '*';
};

struct ConditionReport {
    std::vector<ConditionEntry> entries;
    double d = 0.0;
    double eps = 0.0;
    double delta = 0.0;  // mixed-boundedness slack exponent
    int ell = 0;
    double delta_p_h2 = 0.0;
    double delta_r_h2 = 0.0;  // max H2-degree over R
    bool exact_arithmetic = true;
    double rel_tol = 1e-9;

    bool all_hold() const {
        for (const auto& e : entries)
            if (!e.holds) return false;
        return true;
    }

    const ConditionEntry* find(const std::string& label) const {
        for (const auto& e : entries)
            if (e.label == label) return &e;
        return nullptr;
    }

    nlohmann::json to_json() const {
        nlohmann::json conds = nlohmann::json::array();
        for (const auto& e : entries) {
            conds.push_back({{"label", e.label},
                             {"holds", e.holds},
                             {"lhs", e.lhs},
                             {"rhs", e.rhs},
                             {"witness", e.witness},
                             {"sup_eps", e.sup_eps},
                             {"sup_dir", std::string(1, e.sup_dir)}});
        }
        return nlohmann::json{{"params",
                               {{"d", d},
                                {"eps", eps},
                                {"delta", delta},
                                {"ell", ell},
                                {"delta_P_H2", delta_p_h2},
                                {"Delta_R_H2", delta_r_h2},
                                {"exact_arithmetic", exact_arithmetic},
                                {"rel_tol", rel_tol}}},
                              {"all_hold", all_hold()},
                              {"conditions", conds}};
    }
};

namespace detail {

constexpr double kCondSlack = 1e-12;

inline bool cond_holds(double lhs, double rhs) {
    return lhs <= rhs * (1.0 + kCondSlack) + std::numeric_limits<double>::min();
}

// Evaluates a condition at the requested eps and locates the flip point by
// monotone bisection on (0, 1).
inline ConditionEntry make_entry(const std::string& label,
                                 std::vector<int> witness, double eps,
                                 const std::function<double(double)>& lhs_of,
                                 const std::function<double(double)>& rhs_of) {
    ConditionEntry e;
    e.label = label;
    e.witness = std::move(witness);
    e.lhs = lhs_of(eps);
    e.rhs = rhs_of(eps);
    e.holds = cond_holds(e.lhs, e.rhs);
    auto at = [&](double x) { return cond_holds(lhs_of(x), rhs_of(x)); };
    const double lo = 1e-9, hi = 1.0 - 1e-9;
    bool at_lo = at(lo), at_hi = at(hi);
    if (at_lo && at_hi) {
        e.sup_dir = '*';
        e.sup_eps = 1.0;
    } else if (!at_lo && !at_hi) {
        e.sup_dir = '!';
        e.sup_eps = 0.0;
    } else {
        e.sup_dir = at_lo ? '<' : '>';
        double a = lo, b = hi;
        for (int it = 0; it < 80; ++it) {
            double m = 0.5 * (a + b);
            if (at(m) == at_lo) a = m; else b = m;
        }
        e.sup_eps = 0.5 * (a + b);
    }
    return e;
}

// Max j-subset degree restricted to non-dummy edges of one class.
inline std::pair<long long, std::vector<int>> max_jdegree_real(
    const TripartiteHypergraph& h, int j, EdgeClass klass) {
    std::map<std::vector<int>, long long> counts;
    std::vector<int> subset(j);
    for (const Edge& e : h.edges()) {
        if (e.klass != klass || e.dummy) continue;
        const int m = static_cast<int>(e.vertices.size());
        if (m < j) continue;
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
    std::vector<int> wit;
    for (const auto& [key, cnt] : counts)
        if (cnt > best) { best = cnt; wit = key; }
    return {best, wit};
}

}  // namespace detail

// Degree of one vertex counting only non-dummy edges of the class.
inline int real_degree(const TripartiteHypergraph& h, int v, EdgeClass klass) {
    int n = 0;
    for (int id : h.incident(v, klass))
        if (!h.edge(id).dummy) ++n;
    return n;
}

inline double delta_p_h2_value(const TripartiteHypergraph& h) {
    if (h.p_size() == 0) return 0.0;
    int best = std::numeric_limits<int>::max();
    for (int x = 0; x < h.p_size(); ++x)
        best = std::min(best, real_degree(h, x, EdgeClass::H2));
    return static_cast<double>(best);
}

// Degree and size conditions on H = H1 ∪ H2: essential P-regularity of H1,
// small H1 codegrees, both the strong and the weak H2 degree pair, and the
// part-size window for |P| and |P ∪ Q|.
inline ConditionReport check_h_conditions(const TripartiteHypergraph& h, double d,
                                          double eps) {
    if (d < 2) throw std::invalid_argument("need d >= 2");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("need 0 < eps < 1");
    ConditionReport rep;
    rep.d = d;
    rep.eps = eps;
    ArithmeticMode mode = arithmetic_mode_for(h, 12);
    rep.exact_arithmetic = mode.exact;
    rep.rel_tol = mode.rel_tol;

    long long n_h1 = 0, n_h2 = 0;
    for (const Edge& e : h.edges()) {
        if (e.dummy) continue;
        (e.klass == EdgeClass::H1 ? n_h1 : n_h2)++;
    }
    const double inf = std::numeric_limits<double>::infinity();

    rep.entries.push_back(detail::make_entry(
        "H0.nonempty", {}, eps, [](double) { return 1.0; },
        [&](double) { return static_cast<double>(std::min(n_h1, n_h2)); }));

    // H1: (1 - d^-eps) d <= delta_P(H1) <= Delta(H1) <= d
    double min_p_deg = inf;
    int min_p_wit = -1;
    for (int x = 0; x < h.p_size(); ++x) {
        int dx = real_degree(h, x, EdgeClass::H1);
        if (dx < min_p_deg) { min_p_deg = dx; min_p_wit = x; }
    }
    double max_deg = 0.0;
    int max_wit = -1;
    for (int v = 0; v < h.r_begin(); ++v) {  // H1 lives on P ∪ Q
        int dv = real_degree(h, v, EdgeClass::H1);
        if (dv > max_deg) { max_deg = dv; max_wit = v; }
    }
    rep.entries.push_back(detail::make_entry(
        "H1.min-degree", min_p_wit >= 0 ? std::vector<int>{min_p_wit} : std::vector<int>{},
        eps, [&](double e) { return (1.0 - std::pow(d, -e)) * d; },
        [&](double) { return min_p_deg; }));
    rep.entries.push_back(detail::make_entry(
        "H1.max-degree", max_wit >= 0 ? std::vector<int>{max_wit} : std::vector<int>{},
        eps, [&](double) { return max_deg; }, [&](double) { return d; }));

    // H2 (codegree of H1): Delta_2(H1) <= d^{1-eps}
    auto [codeg, codeg_wit] = detail::max_jdegree_real(h, 2, EdgeClass::H1);
    rep.entries.push_back(detail::make_entry(
        "H2.codegree", codeg_wit, eps,
        [&, c = codeg](double) { return static_cast<double>(c); },
        [&](double e) { return std::pow(d, 1.0 - e); }));

    // H2-side degrees
    rep.delta_p_h2 = delta_p_h2_value(h);
    double max_r_deg = 0.0;
    int max_r_wit = -1;
    for (int v = h.r_begin(); v < h.vertex_count(); ++v) {
        int dv = real_degree(h, v, EdgeClass::H2);
        if (dv > max_r_deg) { max_r_deg = dv; max_r_wit = v; }
    }
    rep.delta_r_h2 = max_r_deg;

    rep.entries.push_back(detail::make_entry(
        "H3.strong", max_r_wit >= 0 ? std::vector<int>{max_r_wit} : std::vector<int>{},
        eps, [&](double) { return max_r_deg; },
        [&](double e) { return std::pow(d, std::pow(e, 4)) * rep.delta_p_h2; }));

    // max codegree d_H2(x, v) over x in P, v in R
    double max_xv = 0.0;
    double max_xv_ratio = 0.0;
    std::vector<int> xv_wit, xv_ratio_wit;
    for (int x = 0; x < h.p_size(); ++x) {
        std::map<int, int> per_v;
        for (int id : h.incident(x, EdgeClass::H2)) {
            if (h.edge(id).dummy) continue;
            for (int v : h.edge(id).vertices)
                if (h.in_r(v)) ++per_v[v];
        }
        int dx = real_degree(h, x, EdgeClass::H2);
        for (const auto& [v, cnt] : per_v) {
            if (cnt > max_xv) { max_xv = cnt; xv_wit = {x, v}; }
            if (dx > 0 && static_cast<double>(cnt) / dx > max_xv_ratio) {
                max_xv_ratio = static_cast<double>(cnt) / dx;
                xv_ratio_wit = {x, v};
            }
        }
    }
    rep.entries.push_back(detail::make_entry(
        "H4.strong", xv_wit, eps, [&](double) { return max_xv; },
        [&](double e) { return std::pow(d, -e) * rep.delta_p_h2; }));

    // weak pair: A(v) <= d^{eps^4} and d(x, v) <= d^{-eps} d(x)
    double max_av = 0.0;
    int av_wit = -1;
    for (int v = h.r_begin(); v < h.vertex_count(); ++v) {
        if (h.degree1(v, EdgeClass::H2) == 0) continue;
        double av = mode.exact ? vertex_unavoidability_exact(h, v).to_double()
                               : vertex_unavoidability(h, v);
        if (av > max_av) { max_av = av; av_wit = v; }
    }
    rep.entries.push_back(detail::make_entry(
        "H3p.vertex-unavoidability",
        av_wit >= 0 ? std::vector<int>{av_wit} : std::vector<int>{}, eps,
        [&](double) { return max_av; },
        [&](double e) { return std::pow(d, std::pow(e, 4)); }));
    rep.entries.push_back(detail::make_entry(
        "H3p.positive-degrees", {}, eps, [](double) { return 1.0; },
        [&](double) { return rep.delta_p_h2; }));
    rep.entries.push_back(detail::make_entry(
        "H4p.codegree-ratio", xv_ratio_wit, eps,
        [&](double) { return max_xv_ratio; },
        [&](double e) { return std::pow(d, -e); }));

    // part sizes: d^eps <= |P| <= |P ∪ Q| <= exp(d^{eps^3})
    rep.entries.push_back(detail::make_entry(
        "size.P-lower", {}, eps, [&](double e) { return std::pow(d, e); },
        [&](double) { return static_cast<double>(h.p_size()); }));
    rep.entries.push_back(detail::make_entry(
        "size.PQ-upper", {}, eps,
        [&](double) { return static_cast<double>(h.p_size()) + h.q_size(); },
        [&](double e) { return std::exp(std::pow(d, std::pow(e, 3))); }));

    std::sort(rep.entries.begin(), rep.entries.end(),
              [](const ConditionEntry& a, const ConditionEntry& b) {
                  return a.label != b.label ? a.label < b.label : a.witness < b.witness;
              });
    return rep;
}

// Boundedness of the H1-only conflict family: sizes in [3, ell], per-edge
// counts, and codegrees for every size pair.
inline ConditionReport check_c_conditions(const ConflictSystem& cs,
                                          const TripartiteHypergraph& h, double d,
                                          double eps) {
    ConditionReport rep;
    rep.d = d;
    rep.eps = eps;
    rep.ell = cs.ell();
    const int ell = cs.ell();
    const double inf = std::numeric_limits<double>::infinity();

    int min_size = std::numeric_limits<int>::max(), max_size = 0;
    for (const Conflict& cf : cs.c()) {
        min_size = std::min(min_size, static_cast<int>(cf.edges.size()));
        max_size = std::max(max_size, static_cast<int>(cf.edges.size()));
    }
    rep.entries.push_back(detail::make_entry(
        "C1.min-size", {}, eps, [](double) { return 3.0; },
        [&](double) { return cs.c().empty() ? inf : min_size; }));
    rep.entries.push_back(detail::make_entry(
        "C1.max-size", {}, eps, [&](double) { return static_cast<double>(max_size); },
        [&](double) { return static_cast<double>(ell); }));

    for (int j = 3; j <= ell; ++j) {
        // C2: Delta(C^{(j)}) <= ell d^{j-1}
        long long best = 0;
        int wit = -1;
        for (int id = 0; id < h.edge_count(); ++id) {
            if (h.edge(id).klass != EdgeClass::H1) continue;
            long long cnt = 0;
            for (int ci : cs.c_at_edge(id))
                if (static_cast<int>(cs.c()[ci].edges.size()) == j) ++cnt;
            if (cnt > best) { best = cnt; wit = id; }
        }
        rep.entries.push_back(detail::make_entry(
            "C2[j=" + std::to_string(j) + "]",
            wit >= 0 ? std::vector<int>{wit} : std::vector<int>{}, eps,
            [best](double) { return static_cast<double>(best); },
            [&, j](double) { return ell * std::pow(d, j - 1); }));

        // C3: Delta_{j'}(C^{(j)}) <= d^{j - j' - eps} for j' in [2, j-1]
        for (int jp = 2; jp <= j - 1; ++jp) {
            std::map<std::vector<int>, long long> counts;
            std::vector<std::vector<int>> subs;
            for (const Conflict& cf : cs.c()) {
                if (static_cast<int>(cf.edges.size()) != j) continue;
                subs.clear();
                detail::subsets_of(cf.edges, jp, subs);
                for (auto& s : subs) ++counts[s];
            }
            long long mx = 0;
            std::vector<int> mwit;
            for (const auto& [key, cnt] : counts)
                if (cnt > mx) { mx = cnt; mwit = key; }
            rep.entries.push_back(detail::make_entry(
                "C3[j=" + std::to_string(j) + ",j'=" + std::to_string(jp) + "]", mwit,
                eps, [mx](double) { return static_cast<double>(mx); },
                [&, j, jp](double e) { return std::pow(d, j - jp - e); }));
        }
    }

    std::sort(rep.entries.begin(), rep.entries.end(),
              [](const ConditionEntry& a, const ConditionEntry& b) {
                  return a.label != b.label ? a.label < b.label : a.witness < b.witness;
              });
    return rep;
}

enum class DMode { Simple, Mixed, Both };

// Boundedness of the mixed conflict family, in the plain-count form
// (D1)-(D4) or the unavoidability-weighted form (E1)-(E6). Running both
// modes adds a cross-validation entry: plain boundedness must imply the
// weighted form with slack exponent eps^4.
inline ConditionReport check_d_conditions(const ConflictSystem& cs,
                                          const TripartiteHypergraph& h, double d,
                                          double eps, DMode mode,
                                          double delta = -1.0) {
    ConditionReport rep;
    rep.d = d;
    rep.eps = eps;
    rep.ell = cs.ell();
    rep.delta = delta > 0 ? delta : std::pow(eps, 4);
    rep.delta_p_h2 = delta_p_h2_value(h);
    ArithmeticMode am = arithmetic_mode_for(h, cs.ell());
    rep.exact_arithmetic = am.exact;
    rep.rel_tol = am.rel_tol;
    const int ell = cs.ell();
    const double inf = std::numeric_limits<double>::infinity();
    const double dp2 = rep.delta_p_h2;

    // group conflicts by (j1, j2)
    std::map<std::pair<int, int>, std::vector<int>> groups;
    for (int i = 0; i < static_cast<int>(cs.d().size()); ++i)
        groups[{cs.d()[i].j1(), cs.d()[i].j2()}].push_back(i);

    auto a_of = [&](const Conflict& cf) { return unavoidability(h, cf); };

    auto add_simple = [&]() {
        int min_h2 = std::numeric_limits<int>::max(), max_sz = 0;
        for (const Conflict& cf : cs.d()) {
            min_h2 = std::min(min_h2, cf.j2());
            max_sz = std::max(max_sz, static_cast<int>(cf.edges.size()));
        }
        rep.entries.push_back(detail::make_entry(
            "D1.min-H2", {}, eps, [](double) { return 2.0; },
            [&](double) { return cs.d().empty() ? inf : min_h2; }));
        rep.entries.push_back(detail::make_entry(
            "D1.max-size", {}, eps, [&](double) { return static_cast<double>(max_sz); },
            [&](double) { return static_cast<double>(ell); }));

        for (const auto& [jj, idxs] : groups) {
            const int j1 = jj.first, j2 = jj.second;
            if (j2 < 2) continue;  // simple boundedness covers j2 >= 2 only
            const std::string suffix =
                "[j1=" + std::to_string(j1) + ",j2=" + std::to_string(j2) + "]";
            // D2: counts per x
            std::map<int, long long> per_x;
            for (int i : idxs)
                for (int x : cs.d()[i].vp) ++per_x[x];
            long long mx = 0;
            int xwit = -1;
            for (const auto& [x, cnt] : per_x)
                if (cnt > mx) { mx = cnt; xwit = x; }
            rep.entries.push_back(detail::make_entry(
                "D2" + suffix, xwit >= 0 ? std::vector<int>{xwit} : std::vector<int>{},
                eps, [mx](double) { return static_cast<double>(mx); },
                [&, j1, j2](double e) {
                    return std::pow(d, j1 + std::pow(e, 4)) * std::pow(dp2, j2);
                }));
            // D3: counts per (x, j'-subset of the H1 part)
            for (int jp = 1; jp <= j1; ++jp) {
                std::map<std::vector<int>, long long> counts;
                std::vector<std::vector<int>> subs;
                for (int i : idxs) {
                    const Conflict& cf = cs.d()[i];
                    subs.clear();
                    detail::subsets_of(cf.h1_part, jp, subs);
                    for (int x : cf.vp)
                        for (const auto& s : subs) {
                            std::vector<int> key;
                            key.push_back(x);
                            key.insert(key.end(), s.begin(), s.end());
                            ++counts[key];
                        }
                }
                long long best = 0;
                std::vector<int> wit;
                for (const auto& [key, cnt] : counts)
                    if (cnt > best) { best = cnt; wit = key; }
                rep.entries.push_back(detail::make_entry(
                    "D3" + suffix + "[j'=" + std::to_string(jp) + "]", wit, eps,
                    [best](double) { return static_cast<double>(best); },
                    [&, j1, j2, jp](double e) {
                        return std::pow(d, j1 - jp - e) * std::pow(dp2, j2);
                    }));
            }
            // D4: counts per pair x != y
            std::map<std::pair<int, int>, long long> per_xy;
            for (int i : idxs) {
                const auto& vp = cs.d()[i].vp;
                for (std::size_t a = 0; a < vp.size(); ++a)
                    for (std::size_t b = a + 1; b < vp.size(); ++b)
                        ++per_xy[{vp[a], vp[b]}];
            }
            long long best_xy = 0;
            std::vector<int> wit_xy;
            for (const auto& [key, cnt] : per_xy)
                if (cnt > best_xy) { best_xy = cnt; wit_xy = {key.first, key.second}; }
            rep.entries.push_back(detail::make_entry(
                "D4" + suffix, wit_xy, eps,
                [best_xy](double) { return static_cast<double>(best_xy); },
                [&, j1, j2](double e) {
                    return std::pow(d, j1 - e) * std::pow(dp2, j2);
                }));
        }
    };

    const bool delta_fixed = delta > 0;
    auto add_mixed = [&]() {
        int min_h2 = std::numeric_limits<int>::max(), max_sz = 0;
        for (const Conflict& cf : cs.d()) {
            min_h2 = std::min(min_h2, cf.j2());
            max_sz = std::max(max_sz, static_cast<int>(cf.edges.size()));
        }
        rep.entries.push_back(detail::make_entry(
            "E1.min-H2", {}, eps, [](double) { return 1.0; },
            [&](double) { return cs.d().empty() ? inf : min_h2; }));
        rep.entries.push_back(detail::make_entry(
            "E1.size-range", {}, eps,
            [&](double) { return cs.d().empty() ? 0.0 : static_cast<double>(max_sz); },
            [&](double) { return static_cast<double>(ell); }));

        for (const auto& [jj, idxs] : groups) {
            const int j1 = jj.first, j2 = jj.second;
            const std::string suffix =
                "[j1=" + std::to_string(j1) + ",j2=" + std::to_string(j2) + "]";
            // E2: A-mass per x
            std::map<int, double> amass;
            std::map<int, Rational> amass_x;
            for (int i : idxs) {
                const Conflict& cf = cs.d()[i];
                for (int x : cf.vp) {
                    if (am.exact) {
                        auto it = amass_x.find(x);
                        Rational a = unavoidability_exact(h, cf);
                        if (it == amass_x.end()) amass_x.emplace(x, a);
                        else it->second += a;
                    } else {
                        amass[x] += a_of(cf);
                    }
                }
            }
            double best_a = 0.0;
            int xwit = -1;
            if (am.exact) {
                for (const auto& [x, a] : amass_x) {
                    double v = a.to_double();
                    if (v > best_a) { best_a = v; xwit = x; }
                }
            } else {
                for (const auto& [x, a] : amass)
                    if (a > best_a) { best_a = a; xwit = x; }
            }
            rep.entries.push_back(detail::make_entry(
                "E2" + suffix, xwit >= 0 ? std::vector<int>{xwit} : std::vector<int>{},
                eps, [best_a](double) { return best_a; },
                [&, j1](double e) {
                    double slack = delta_fixed ? rep.delta : std::pow(e, 4);
                    return std::pow(d, j1 + slack);
                }));

            // E3: A-weighted codegrees per (x, j'-subset)
            for (int jp = 1; jp <= j1; ++jp) {
                std::map<std::vector<int>, double> wmass;
                std::vector<std::vector<int>> subs;
                for (int i : idxs) {
                    const Conflict& cf = cs.d()[i];
                    double a = a_of(cf);
                    subs.clear();
                    detail::subsets_of(cf.h1_part, jp, subs);
                    for (int x : cf.vp)
                        for (const auto& s : subs) {
                            std::vector<int> key;
                            key.push_back(x);
                            key.insert(key.end(), s.begin(), s.end());
                            wmass[key] += a;
                        }
                }
                double best = 0.0;
                std::vector<int> wit;
                for (const auto& [key, v] : wmass)
                    if (v > best) { best = v; wit = key; }
                rep.entries.push_back(detail::make_entry(
                    "E3" + suffix + "[j'=" + std::to_string(jp) + "]", wit, eps,
                    [best](double) { return best; },
                    [&, j1, jp](double e) { return std::pow(d, j1 - jp - e); }));
            }

            if (j2 >= 2) {
                // E4: A-mass per pair
                std::map<std::pair<int, int>, double> per_xy;
                for (int i : idxs) {
                    const Conflict& cf = cs.d()[i];
                    double a = a_of(cf);
                    for (std::size_t x = 0; x < cf.vp.size(); ++x)
                        for (std::size_t y = x + 1; y < cf.vp.size(); ++y)
                            per_xy[{cf.vp[x], cf.vp[y]}] += a;
                }
                double best = 0.0;
                std::vector<int> wit;
                for (const auto& [key, v] : per_xy)
                    if (v > best) { best = v; wit = {key.first, key.second}; }
                rep.entries.push_back(detail::make_entry(
                    "E4" + suffix, wit, eps, [best](double) { return best; },
                    [&, j1](double e) { return std::pow(d, j1 - e); }));
            } else {
                // E5: per-H2-edge counts
                std::map<int, long long> per_e;
                for (int i : idxs) ++per_e[cs.d()[i].h2_part[0]];
                long long best = 0;
                int ewit = -1;
                for (const auto& [e, cnt] : per_e)
                    if (cnt > best) { best = cnt; ewit = e; }
                rep.entries.push_back(detail::make_entry(
                    "E5[j1=" + std::to_string(j1) + "]",
                    ewit >= 0 ? std::vector<int>{ewit} : std::vector<int>{}, eps,
                    [best](double) { return static_cast<double>(best); },
                    [&, j1](double) { return ell * std::pow(d, j1); }));
                // E6: per (H2 edge, j'-subset) for j' in [j1 - 1]
                for (int jp = 1; jp <= j1 - 1; ++jp) {
                    std::map<std::vector<int>, long long> counts;
                    std::vector<std::vector<int>> subs;
                    for (int i : idxs) {
                        const Conflict& cf = cs.d()[i];
                        subs.clear();
                        detail::subsets_of(cf.h1_part, jp, subs);
                        for (const auto& s : subs) {
                            std::vector<int> key;
                            key.push_back(cf.h2_part[0]);
                            key.insert(key.end(), s.begin(), s.end());
                            ++counts[key];
                        }
                    }
                    long long best6 = 0;
                    std::vector<int> wit;
                    for (const auto& [key, cnt] : counts)
                        if (cnt > best6) { best6 = cnt; wit = key; }
                    rep.entries.push_back(detail::make_entry(
                        "E6[j1=" + std::to_string(j1) + ",j'=" + std::to_string(jp) + "]",
                        wit, eps, [best6](double) { return static_cast<double>(best6); },
                        [&, j1, jp](double e) { return std::pow(d, j1 - jp - e); }));
                }
            }
        }
    };

    bool simple_all = true, mixed_all = true;
    if (mode == DMode::Simple || mode == DMode::Both) {
        add_simple();
        simple_all = rep.all_hold();
    }
    std::size_t before = rep.entries.size();
    if (mode == DMode::Mixed || mode == DMode::Both) {
        add_mixed();
        mixed_all = true;
        for (std::size_t i = before; i < rep.entries.size(); ++i)
            if (!rep.entries[i].holds) mixed_all = false;
    }
    if (mode == DMode::Both) {
        // Plain boundedness must imply weighted boundedness with delta=eps^4.
        bool implied_ok = !(simple_all && !mixed_all);
        ConditionEntry e;
        e.label = "X.simple-implies-mixed";
        e.holds = implied_ok;
        e.lhs = simple_all ? 1.0 : 0.0;
        e.rhs = mixed_all ? 1.0 : 0.0;
        e.sup_dir = implied_ok ? '*' : '!';
        e.sup_eps = implied_ok ? 1.0 : 0.0;
        rep.entries.push_back(e);
    }

    std::sort(rep.entries.begin(), rep.entries.end(),
              [](const ConditionEntry& a, const ConditionEntry& b) {
                  return a.label != b.label ? a.label < b.label : a.witness < b.witness;
              });
    return rep;
}

}  // namespace cfhm

#endif  // CFHM_CONDITIONS_HPP
