#ifndef CFHM_APPS_PAIR_PATTERNS_HPP
#define CFHM_APPS_PAIR_PATTERNS_HPP

// Shared machinery for the graph-colouring applications (k = 2). Both
// constructions forbid the same structural pattern: a 4-cycle whose two
// opposite edge pairs are each monochromatic. Stage 1 excludes candidates
// that would complete such a pattern inside the evolving partial colouring;
// stage 2 resamples the analogous events among the H2 colour choices.
//
// At the scale the pipelines run, these families are far too large to list
// explicitly (the free clique vertices and colour choices multiply into
// billions of conflicts), so the guard realises the same family implicitly.

#include <algorithm>
#include <array>
#include <functional>
#include <vector>

#include "cfhm/stage1.hpp"
#include "cfhm/stage2.hpp"

namespace cfhm::apps {

// How an application exposes its colouring structure to the guard.
struct PairColouringHooks {
    int n = 0;  // underlying vertex count
    // pairs coloured by an H1 edge: push (u, v, colour)
    std::function<void(int edge, std::vector<std::array<int, 3>>&)> coloured_pairs;
    // every H1 edge that would colour pair {u, v} with `colour`: push ids
    std::function<void(int u, int v, int colour, std::vector<int>&)> killers;
};

// Forbids two-mono-opposite-pair 4-cycles in the partial colouring built by
// stage 1. Complete by induction: a pattern can only finish when its fourth
// pair gets coloured, and the moment a third pair lands every candidate
// colouring the fourth is excluded.
class PairPatternGuard : public Stage1Guard {
public:
    PairPatternGuard(PairColouringHooks hooks)
        : hooks_(std::move(hooks)), n_(hooks_.n), colour_(n_ * n_, -1) {}

    int colour_of(int u, int v) const { return colour_[pidx(u, v)]; }

    void on_add(int edge, std::vector<int>& kill) override {
        fresh_.clear();
        hooks_.coloured_pairs(edge, fresh_);
        // commit the new colours first so sibling pairs see each other
        for (const auto& [u, v, c] : fresh_) {
            colour_[pidx(u, v)] = c;
            if (c >= static_cast<int>(by_colour_.size()))
                by_colour_.resize(c + 1);
            by_colour_[c].emplace_back(u, v);
        }
        for (const auto& [a, b, gamma] : fresh_) {
            // (i) partner scan: the new pair and a same-coloured disjoint pair
            // as one mono class; exclude colourers of the missing
            // perpendicular edge
            for (const auto& [c, d] : by_colour_[gamma]) {
                if (c == a || c == b || d == a || d == b) continue;
                if (c == a && d == b) continue;
                scan_pairing(a, b, c, d, gamma, kill);
            }
            // (ii) perpendicular scan: the new pair sits in one class, a fully
            // coloured mono pair crosses it; exclude colourers of the new
            // pair's partner
            for (int w = 0; w < n_; ++w) {
                if (w == a || w == b) continue;
                int dwa = colour_[pidx(w, a)];
                if (dwa < 0) continue;
                for (int z = 0; z < n_; ++z) {
                    if (z == a || z == b || z == w) continue;
                    if (colour_[pidx(b, z)] != dwa) continue;
                    // cycle w-a-b-z: perpendicular {wa, bz} mono; partner zw
                    int partner = colour_[pidx(z, w)];
                    if (partner == gamma) continue;  // guarded invariant
                    if (partner >= 0) continue;      // differently coloured, dead
                    hooks_.killers(std::min(z, w), std::max(z, w), gamma, kill);
                }
            }
        }
    }

private:
    int pidx(int u, int v) const {
        return u < v ? u * n_ + v : v * n_ + u;
    }

    // q = {a, b} and partner = {c, d} form one mono class (colour gamma);
    // check both cycle pairings and exclude the missing perpendicular edge.
    void scan_pairing(int a, int b, int c, int d, int /*gamma*/,
                      std::vector<int>& kill) {
        // pairings: perpendicular pairs {ac, bd} or {ad, bc}
        const int combos[2][4] = {{a, c, b, d}, {a, d, b, c}};
        for (const auto& m : combos) {
            int r1 = colour_[pidx(m[0], m[1])];
            int r2 = colour_[pidx(m[2], m[3])];
            if (r1 >= 0 && r2 >= 0) continue;  // same colour impossible here
            if (r1 >= 0 && r2 < 0)
                hooks_.killers(std::min(m[2], m[3]), std::max(m[2], m[3]), r1, kill);
            else if (r2 >= 0 && r1 < 0)
                hooks_.killers(std::min(m[0], m[1]), std::max(m[0], m[1]), r2, kill);
        }
    }

    PairColouringHooks hooks_;
    int n_;
    std::vector<int> colour_;  // pair -> colour, -1 uncoloured
    std::vector<std::vector<std::pair<int, int>>> by_colour_;
    std::vector<std::array<int, 3>> fresh_;
};

// Stage-2 pattern events over the uncovered pairs. `pair_of` decodes an
// uncovered P-vertex to its two endpoints, `t1_colour` reads the stage-1
// colour of a pair (-1 if uncoloured), and `beta_of` maps a chosen H2 edge
// to its colour index.
inline std::vector<Stage2Event> pair_pattern_events(
    int n, const std::vector<int>& uncovered,
    const std::function<std::pair<int, int>(int)>& pair_of,
    const std::function<int(int, int)>& t1_colour,
    const std::function<int(int)>& beta_of) {
    std::vector<Stage2Event> events;
    const int m = static_cast<int>(uncovered.size());

    auto same_beta = [beta_of](int x1, int x2) {
        return [beta_of, x1, x2](const std::vector<int>& choice) {
            return choice[x1] >= 0 && choice[x2] >= 0 &&
                   beta_of(choice[x1]) == beta_of(choice[x2]);
        };
    };

    // adjacency among uncovered pairs (shared endpoint => overlap event)
    for (int i = 0; i < m; ++i) {
        auto [a, b] = pair_of(uncovered[i]);
        for (int j = i + 1; j < m; ++j) {
            auto [c, d] = pair_of(uncovered[j]);
            bool share = (a == c || a == d || b == c || b == d);
            if (share) {
                Stage2Event ev;
                ev.vps = {uncovered[i], uncovered[j]};
                ev.tag = "overlap";
                ev.violated = same_beta(uncovered[i], uncovered[j]);
                events.push_back(std::move(ev));
                continue;
            }
            // disjoint pairs: a T1-mono perpendicular class makes a same-beta
            // assignment complete a two-colour 4-cycle
            bool t1t2 = false;
            const int combos[2][4] = {{a, c, b, d}, {a, d, b, c}};
            for (const auto& p : combos) {
                int r1 = t1_colour(p[0], p[1]);
                if (r1 >= 0 && r1 == t1_colour(p[2], p[3])) t1t2 = true;
            }
            if (t1t2) {
                Stage2Event ev;
                ev.vps = {uncovered[i], uncovered[j]};
                ev.tag = "t1t2";
                ev.violated = same_beta(uncovered[i], uncovered[j]);
                events.push_back(std::move(ev));
            }
        }
    }

    // pure T2 4-cycles: all four boundary pairs uncovered
    std::vector<std::vector<int>> vertex_at(n);  // endpoint -> uncovered idxs
    std::vector<int> pvertex_of_pair(n * n, -1);
    for (int i = 0; i < m; ++i) {
        auto [a, b] = pair_of(uncovered[i]);
        vertex_at[a].push_back(i);
        vertex_at[b].push_back(i);
        pvertex_of_pair[std::min(a, b) * n + std::max(a, b)] = uncovered[i];
    }
    auto uncovered_pair = [&](int u, int v) {
        return pvertex_of_pair[std::min(u, v) * n + std::max(u, v)];
    };
    // enumerate each 4-cycle once: v1 is the smallest corner and v2 < v4
    // fixes the reflection; v3 is the corner opposite v1
    for (int v1 = 0; v1 < n; ++v1)
        for (int v2 = v1 + 1; v2 < n; ++v2) {
            if (uncovered_pair(v1, v2) < 0) continue;
            for (int v4 = v2 + 1; v4 < n; ++v4) {
                if (uncovered_pair(v4, v1) < 0) continue;
                for (int v3 = v1 + 1; v3 < n; ++v3) {
                    if (v3 == v2 || v3 == v4) continue;
                    if (uncovered_pair(v2, v3) < 0) continue;
                    if (uncovered_pair(v3, v4) < 0) continue;
                    int e12 = uncovered_pair(v1, v2), e23 = uncovered_pair(v2, v3);
                    int e34 = uncovered_pair(v3, v4), e41 = uncovered_pair(v4, v1);
                    Stage2Event ev;
                    ev.vps = {e12, e23, e34, e41};
                    std::sort(ev.vps.begin(), ev.vps.end());
                    ev.vps.erase(std::unique(ev.vps.begin(), ev.vps.end()),
                                 ev.vps.end());
                    ev.tag = "t2t2";
                    ev.violated = [beta_of, e12, e23, e34, e41](
                                      const std::vector<int>& ch) {
                        return ch[e12] >= 0 && ch[e23] >= 0 && ch[e34] >= 0 &&
                               ch[e41] >= 0 &&
                               beta_of(ch[e12]) == beta_of(ch[e34]) &&
                               beta_of(ch[e23]) == beta_of(ch[e41]);
                    };
                    events.push_back(std::move(ev));
                }
            }
        }
    return events;
}

}  // namespace cfhm::apps

#endif  // CFHM_APPS_PAIR_PATTERNS_HPP
