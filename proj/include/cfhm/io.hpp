#ifndef CFHM_IO_HPP
#define CFHM_IO_HPP

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfhm/hypergraph.hpp"

namespace cfhm {

struct ParseError : std::runtime_error {
    ParseError(int line_arg, const std::string& what_arg)
        : std::runtime_error("line " + std::to_string(line_arg) + ": " + what_arg),
          line(line_arg) {}
    int line;
};

namespace detail {
inline bool skippable(const std::string& s) {
    for (char c : s) {
        if (c == '#') return true;
        if (!isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}
}  // namespace detail

// Hypergraph interchange: one header line
//   hg <|P|> <|Q|> <|R|> <p> <q> <r>
// then one line per edge, `e1 <v...>` or `e2 <v...>`, with global vertex ids
// (P block first, then Q, then R). Blank lines and `#` comments are ignored.

inline void write_hypergraph(const TripartiteHypergraph& h, std::ostream& os) {
    if (h.has_dummies())
        throw std::invalid_argument("refusing to serialize a dummy-padded hypergraph");
    os << "hg " << h.p_size() << ' ' << h.q_size() << ' ' << h.r_size() << ' '
       << std::max(h.p_param(), 0) << ' ' << std::max(h.q_param(), 0) << ' '
       << std::max(h.r_param(), 0) << '\n';
    for (const Edge& e : h.edges()) {
        os << (e.klass == EdgeClass::H1 ? "e1" : "e2");
        for (int v : e.vertices) os << ' ' << v;
        os << '\n';
    }
}

inline std::string hypergraph_to_string(const TripartiteHypergraph& h) {
    std::ostringstream os;
    write_hypergraph(h, os);
    return os.str();
}

inline TripartiteHypergraph parse_hypergraph(std::istream& is) {
    std::string line;
    int lineno = 0;
    int np = -1, nq = -1, nr = -1, dp = 0, dq = 0, dr = 0;
    bool have_header = false;
    TripartiteHypergraph h(0, 0, 0);
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::skippable(line)) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (!have_header) {
            if (tag != "hg") throw ParseError(lineno, "expected `hg` header");
            if (!(ls >> np >> nq >> nr >> dp >> dq >> dr))
                throw ParseError(lineno, "malformed `hg` header");
            if (np < 0 || nq < 0 || nr < 0)
                throw ParseError(lineno, "negative part size");
            h = TripartiteHypergraph(np, nq, nr);
            have_header = true;
            continue;
        }
        EdgeClass klass;
        if (tag == "e1") klass = EdgeClass::H1;
        else if (tag == "e2") klass = EdgeClass::H2;
        else throw ParseError(lineno, "unknown record `" + tag + "`");
        std::vector<int> verts;
        int v;
        while (ls >> v) verts.push_back(v);
        if (!ls.eof()) throw ParseError(lineno, "bad vertex id");
        if (verts.empty()) throw ParseError(lineno, "empty edge");
        try {
            h.add_edge(klass, std::move(verts));
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
    }
    if (!have_header) throw ParseError(lineno, "missing `hg` header");
    if (h.p_param() >= 0 && (h.p_param() != dp || h.q_param() != dq))
        throw ParseError(lineno, "H1 edges disagree with declared (p, q)");
    if (h.r_param() >= 0 && h.r_param() != dr)
        throw ParseError(lineno, "H2 edges disagree with declared r");
    return h;
}

inline TripartiteHypergraph parse_hypergraph(const std::string& s) {
    std::istringstream is(s);
    return parse_hypergraph(is);
}

// Conflict interchange: `c <edge-ids>` for H1-only conflicts, `d <edge-ids>`
// for mixed conflicts. An optional `ell <n>` line pins the maximum conflict
// size; an optional `app <name>` line marks an application-defined implicit
// family (the explicit lists then hold only what is enumerable at scale).
struct ConflictFileData {
    std::vector<std::vector<int>> c;
    std::vector<std::vector<int>> d;
    int ell = 0;       // 0 = derive from the largest conflict present
    std::string app;   // empty = fully explicit
};

inline void write_conflicts(const ConflictFileData& data, std::ostream& os) {
    if (!data.app.empty()) os << "app " << data.app << '\n';
    if (data.ell > 0) os << "ell " << data.ell << '\n';
    for (const auto& ids : data.c) {
        os << 'c';
        for (int id : ids) os << ' ' << id;
        os << '\n';
    }
    for (const auto& ids : data.d) {
        os << 'd';
        for (int id : ids) os << ' ' << id;
        os << '\n';
    }
}

inline ConflictFileData parse_conflicts(std::istream& is) {
    ConflictFileData out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::skippable(line)) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "app") {
            if (!(ls >> out.app)) throw ParseError(lineno, "missing app name");
            continue;
        }
        if (tag == "ell") {
            if (!(ls >> out.ell) || out.ell < 2)
                throw ParseError(lineno, "bad ell value");
            continue;
        }
        if (tag != "c" && tag != "d")
            throw ParseError(lineno, "unknown record `" + tag + "`");
        std::vector<int> ids;
        int id;
        while (ls >> id) ids.push_back(id);
        if (!ls.eof()) throw ParseError(lineno, "bad edge id");
        if (ids.size() < 2) throw ParseError(lineno, "conflict needs >= 2 edges");
        (tag == "c" ? out.c : out.d).push_back(std::move(ids));
    }
    return out;
}

inline ConflictFileData parse_conflicts(const std::string& s) {
    std::istringstream is(s);
    return parse_conflicts(is);
}

// Matching output: `m1 <edge-id>` / `m2 <edge-id>` lines, ascending ids.
inline void write_matching(const Matching& m, std::ostream& os) {
    for (int id : m.m1) os << "m1 " << id << '\n';
    for (int id : m.m2) os << "m2 " << id << '\n';
}

inline Matching parse_matching(std::istream& is) {
    Matching m;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::skippable(line)) continue;
        std::istringstream ls(line);
        std::string tag;
        int id;
        if (!(ls >> tag >> id)) throw ParseError(lineno, "malformed matching line");
        if (tag == "m1") m.m1.push_back(id);
        else if (tag == "m2") m.m2.push_back(id);
        else throw ParseError(lineno, "unknown record `" + tag + "`");
    }
    std::sort(m.m1.begin(), m.m1.end());
    std::sort(m.m2.begin(), m.m2.end());
    return m;
}

inline Matching parse_matching(const std::string& s) {
    std::istringstream is(s);
    return parse_matching(is);
}

// Edge colouring of a complete k-graph: `col <v1> ... <vk> <colour>` lines.
struct ColoredEdge {
    std::vector<int> vertices;  // sorted, from [0, n)
    int colour;
};

inline void write_coloring(const std::vector<ColoredEdge>& cols, std::ostream& os) {
    for (const auto& ce : cols) {
        os << "col";
        for (int v : ce.vertices) os << ' ' << v;
        os << ' ' << ce.colour << '\n';
    }
}

inline std::vector<ColoredEdge> parse_coloring(std::istream& is, int k) {
    std::vector<ColoredEdge> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::skippable(line)) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag != "col") throw ParseError(lineno, "unknown record `" + tag + "`");
        std::vector<int> nums;
        int v;
        while (ls >> v) nums.push_back(v);
        if (static_cast<int>(nums.size()) != k + 1)
            throw ParseError(lineno, "expected k vertices and a colour");
        ColoredEdge ce;
        ce.colour = nums.back();
        nums.pop_back();
        std::sort(nums.begin(), nums.end());
        ce.vertices = std::move(nums);
        out.push_back(std::move(ce));
    }
    return out;
}

// Covering output: `cov <source-edge-id>` lines, in emission order
// (repetition encodes multiplicity).
inline void write_cover(const std::vector<int>& cover, std::ostream& os) {
    for (int id : cover) os << "cov " << id << '\n';
}

inline std::vector<int> parse_cover(std::istream& is) {
    std::vector<int> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::skippable(line)) continue;
        std::istringstream ls(line);
        std::string tag;
        int id;
        if (!(ls >> tag >> id) || tag != "cov")
            throw ParseError(lineno, "malformed cover line");
        out.push_back(id);
    }
    return out;
}

}  // namespace cfhm

#endif  // CFHM_IO_HPP
