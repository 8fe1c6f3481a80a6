#pragma once

#include "dimerlab/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dimerlab {

// Permutations on arrow ids are stored as vectors of size E+1; slot 0 is unused.
using Perm = std::vector<int>;

inline Perm inverse(const Perm& p) {
    Perm q(p.size(), 0);
    for (std::size_t a = 1; a < p.size(); ++a) q[p[a]] = static_cast<int>(a);
    return q;
}

// (p*q)(a) = p(q(a))
inline Perm compose(const Perm& p, const Perm& q) {
    Perm r(p.size(), 0);
    for (std::size_t a = 1; a < p.size(); ++a) r[a] = p[q[a]];
    return r;
}

// Cycles listed from their smallest element, sorted by that element.
inline std::vector<std::vector<int>> cycles(const Perm& p) {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t a = 1; a < p.size(); ++a) {
        if (seen[a]) continue;
        std::vector<int> c;
        for (int b = static_cast<int>(a); !seen[b]; b = p[b]) {
            seen[b] = 1;
            c.push_back(b);
        }
        out.push_back(std::move(c));
    }
    return out;
}

struct ValidationError : Error {
    using Error::Error;
};

// A quiver embedded in a closed oriented surface.
//
// sp(a) is the arrow walked right after a in its positive face, sm(a) the same for
// the negative face. Faces are kept in walking order; the text format lists them in
// composition order (t(a_i) = h(a_{i+1})), which is the reverse.
struct Dimer {
    std::string name;
    int vertex_count = 0;
    std::vector<int> head, tail;
    Perm sp, sm;

    std::vector<std::vector<int>> faces;  // positive faces first, then negative
    int pos_count = 0;
    std::vector<int> pos_face, neg_face;  // arrow -> face id

    int arrow_count() const { return static_cast<int>(head.size()) - 1; }
    int face_count() const { return static_cast<int>(faces.size()); }
    bool positive(int f) const { return f < pos_count; }
    // arrow walked after a inside face f
    int next_in(int f, int a) const { return positive(f) ? sp[a] : sm[a]; }
    int prev_in(int f, int a) const {
        const auto& fc = faces[f];
        auto it = std::find(fc.begin(), fc.end(), a);
        return it == fc.begin() ? fc.back() : *(it - 1);
    }
    int other_face(int f, int a) const { return positive(f) ? neg_face[a] : pos_face[a]; }

    void rebuild_faces() {
        int E = arrow_count();
        faces.clear();
        pos_face.assign(E + 1, -1);
        neg_face.assign(E + 1, -1);
        for (auto& c : cycles(sp)) faces.push_back(c);
        pos_count = static_cast<int>(faces.size());
        for (auto& c : cycles(sm)) faces.push_back(c);
        for (int f = 0; f < face_count(); ++f)
            for (int a : faces[f]) (positive(f) ? pos_face : neg_face)[a] = f;
    }

    bool operator==(const Dimer& o) const {
        return vertex_count == o.vertex_count && head == o.head && tail == o.tail && sp == o.sp && sm == o.sm;
    }
};

// Head-stars of a permutation pair: cycles of sm^-1 o sp.
inline std::vector<std::vector<int>> head_stars(const Perm& sp, const Perm& sm) {
    return cycles(compose(inverse(sm), sp));
}

// Builds a dimer from a permutation pair, numbering vertices by the smallest arrow of their head-star.
inline Dimer from_permutations(std::string name, const Perm& sp, const Perm& sm) {
    Dimer d;
    d.name = std::move(name);
    d.sp = sp;
    d.sm = sm;
    int E = static_cast<int>(sp.size()) - 1;
    d.head.assign(E + 1, 0);
    d.tail.assign(E + 1, 0);
    auto stars = head_stars(sp, sm);
    d.vertex_count = static_cast<int>(stars.size());
    for (std::size_t v = 0; v < stars.size(); ++v)
        for (int a : stars[v]) d.head[a] = static_cast<int>(v) + 1;
    Perm spi = inverse(sp);
    for (int a = 1; a <= E; ++a) d.tail[a] = d.head[spi[a]];
    d.rebuild_faces();
    return d;
}

inline Dimer normal_form(const Dimer& d) { return from_permutations(d.name, d.sp, d.sm); }

// Specular dual: keep sp, invert sm.
inline Dimer mirror(const Dimer& d) { return from_permutations(d.name, d.sp, inverse(d.sm)); }

struct SurfaceInvariants {
    int chi = 0;
    int genus = 0;
};

inline SurfaceInvariants surface_invariants(const Dimer& d) {
    int chi = d.vertex_count - d.arrow_count() + d.face_count();
    if (chi % 2 != 0) throw ValidationError("odd Euler characteristic " + std::to_string(chi));
    return {chi, (2 - chi) / 2};
}

namespace detail {

inline void check_faces(const Dimer& d, const std::vector<std::vector<int>>& pos,
                        const std::vector<std::vector<int>>& neg) {
    int E = d.arrow_count();
    for (const auto* fs : {&pos, &neg}) {
        std::vector<int> count(E + 1, 0);
        const char* sign = fs == &pos ? "positive" : "negative";
        for (const auto& f : *fs) {
            if (f.empty()) throw ValidationError(std::string("empty ") + sign + " face");
            for (std::size_t i = 0; i < f.size(); ++i) {
                int a = f[i], b = f[(i + 1) % f.size()];
                if (a < 1 || a > E) throw ValidationError("unknown arrow " + std::to_string(a) + " in face");
                ++count[a];
                if (d.tail[a] != d.head[b])
                    throw ValidationError(std::string("non-composable ") + sign + " face at arrows " +
                                          std::to_string(a) + "," + std::to_string(b));
            }
        }
        for (int a = 1; a <= E; ++a)
            if (count[a] != 1)
                throw ValidationError("arrow in " + std::to_string(count[a]) + " " + sign + " faces (arrow " +
                                      std::to_string(a) + ")");
    }
}

}  // namespace detail

// Builds and validates a dimer from explicit head/tail maps and faces in composition order.
inline Dimer make_dimer(std::string name, int vertex_count, std::vector<int> head, std::vector<int> tail,
                        const std::vector<std::vector<int>>& pos, const std::vector<std::vector<int>>& neg) {
    Dimer d;
    d.name = std::move(name);
    d.vertex_count = vertex_count;
    d.head = std::move(head);
    d.tail = std::move(tail);
    int E = d.arrow_count();
    if (E < 1) throw ValidationError("dimer has no arrows");
    for (int a = 1; a <= E; ++a)
        if (d.head[a] < 1 || d.head[a] > vertex_count || d.tail[a] < 1 || d.tail[a] > vertex_count)
            throw ValidationError("arrow " + std::to_string(a) + " has an endpoint outside 1.." +
                                  std::to_string(vertex_count));
    detail::check_faces(d, pos, neg);
    d.sp.assign(E + 1, 0);
    d.sm.assign(E + 1, 0);
    // composition order a_0 a_1 ... : a_{i+1} is walked first, then a_i
    for (const auto* fs : {&pos, &neg})
        for (const auto& f : *fs)
            for (std::size_t i = 0; i < f.size(); ++i)
                (fs == &pos ? d.sp : d.sm)[f[(i + 1) % f.size()]] = f[i];
    std::vector<int> star_of_vertex(vertex_count + 1, 0);
    auto stars = head_stars(d.sp, d.sm);
    for (std::size_t s = 0; s < stars.size(); ++s) {
        int v = d.head[stars[s].front()];
        for (int a : stars[s])
            if (d.head[a] != v)
                throw ValidationError("head-star mismatch: arrows " + std::to_string(stars[s].front()) + " and " +
                                      std::to_string(a) + " share a corner cycle but not a head");
        if (star_of_vertex[v] != 0)
            throw ValidationError("head-star mismatch: vertex " + std::to_string(v) +
                                  " has more than one corner cycle (not a surface embedding)");
        star_of_vertex[v] = static_cast<int>(s) + 1;
    }
    for (int v = 1; v <= vertex_count; ++v)
        if (star_of_vertex[v] == 0)
            throw ValidationError("head-star mismatch: vertex " + std::to_string(v) + " is the head of no arrow");
    d.rebuild_faces();
    return d;
}

inline Dimer parse_dimer(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::string name;
    int V = -1;
    std::map<int, std::pair<int, int>> arrows;
    std::vector<std::vector<int>> pos, neg;
    bool ended = false;
    auto fail = [&](const std::string& msg, std::size_t col) {
        throw ValidationError("line " + std::to_string(lineno) + " column " + std::to_string(col) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::vector<std::pair<std::string, std::size_t>> tok;
        for (std::size_t i = 0; i < line.size();) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) { ++i; continue; }
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            tok.emplace_back(line.substr(i, j - i), i + 1);
            i = j;
        }
        if (tok.empty()) continue;
        if (ended) fail("content after 'end'", tok[0].second);
        auto num = [&](std::size_t k) {
            if (k >= tok.size()) fail("missing integer", line.size() + 1);
            const auto& [s, col] = tok[k];
            if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail("expected integer, got '" + s + "'", col);
            if (s.size() > 9) fail("integer too large", col);
            return std::stoi(s);
        };
        const std::string& kw = tok[0].first;
        if (kw == "dimer") {
            if (tok.size() < 2) fail("missing dimer name", line.size() + 1);
            name = tok[1].first;
            for (std::size_t k = 2; k < tok.size(); ++k) name += " " + tok[k].first;
        } else if (kw == "vertices") {
            V = num(1);
            if (tok.size() > 2) fail("trailing tokens", tok[2].second);
        } else if (kw == "arrow") {
            int id = num(1), h = num(2), t = num(3);
            if (tok.size() > 4) fail("trailing tokens", tok[4].second);
            if (!arrows.emplace(id, std::make_pair(h, t)).second) fail("duplicate arrow " + std::to_string(id), tok[1].second);
        } else if (kw == "face") {
            if (tok.size() < 3) fail("face needs a sign and at least one arrow", line.size() + 1);
            if (tok[1].first != "+" && tok[1].first != "-") fail("face sign must be + or -", tok[1].second);
            std::vector<int> f;
            for (std::size_t k = 2; k < tok.size(); ++k) f.push_back(num(k));
            (tok[1].first == "+" ? pos : neg).push_back(std::move(f));
        } else if (kw == "end") {
            ended = true;
        } else {
            fail("unknown keyword '" + kw + "'", tok[0].second);
        }
    }
    if (!ended) throw ValidationError("missing 'end'");
    if (V < 1) throw ValidationError("missing or zero 'vertices'");
    int E = static_cast<int>(arrows.size());
    std::vector<int> head(E + 1, 0), tail(E + 1, 0);
    int expect = 1;
    for (auto& [id, ht] : arrows) {
        if (id != expect) throw ValidationError("arrow ids must be 1.." + std::to_string(E));
        head[id] = ht.first;
        tail[id] = ht.second;
        ++expect;
    }
    return make_dimer(name.empty() ? "unnamed" : name, V, head, tail, pos, neg);
}

// Normal-form text: vertices renumbered by head-stars, faces from their smallest arrow.
inline std::string print_dimer(const Dimer& src) {
    Dimer d = normal_form(src);
    std::ostringstream out;
    out << "dimer " << d.name << "\n";
    out << "vertices " << d.vertex_count << "\n";
    for (int a = 1; a <= d.arrow_count(); ++a) out << "arrow " << a << " " << d.head[a] << " " << d.tail[a] << "\n";
    for (int f = 0; f < d.face_count(); ++f) {
        out << "face " << (d.positive(f) ? "+" : "-");
        const auto& w = d.faces[f];
        // composition order is reverse walking order, started at the smallest arrow
        out << " " << w[0];
        for (std::size_t i = w.size() - 1; i >= 1; --i) out << " " << w[i];
        out << "\n";
    }
    out << "end\n";
    return out.str();
}

// Arrow bijection phi with phi(sp(a)) = sp'(phi(a)) and phi(sm(a)) = sm'(phi(a)), if any.
// Vertices and faces follow from the arrows.
inline std::optional<std::vector<int>> isomorphism(const Dimer& x, const Dimer& y) {
    int E = x.arrow_count();
    if (E != y.arrow_count() || x.vertex_count != y.vertex_count || x.face_count() != y.face_count()) return std::nullopt;
    for (int target = 1; target <= E; ++target) {
        std::vector<int> phi(E + 1, 0), used(E + 1, 0);
        std::vector<int> stack{1};
        phi[1] = target;
        used[target] = 1;
        bool ok = true;
        while (ok && !stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            for (auto [p, q] : {std::pair{&x.sp, &y.sp}, std::pair{&x.sm, &y.sm}}) {
                int b = (*p)[a], c = (*q)[phi[a]];
                if (phi[b] == 0 && !used[c]) {
                    phi[b] = c;
                    used[c] = 1;
                    stack.push_back(b);
                } else if (phi[b] != c) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok && std::count(phi.begin() + 1, phi.end(), 0) == 0) return phi;
    }
    return std::nullopt;
}

// "weight <id> <q>" or "rep <id> <q>" lines; absent ids are 0.
inline std::vector<Rational> parse_arrow_values(const std::string& text, int arrow_count, const std::string& keyword) {
    std::vector<Rational> vals(arrow_count + 1, Rational(0));
    std::vector<char> seen(arrow_count + 1, 0);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string kw, id, val, extra;
        if (!(ls >> kw)) continue;
        auto where = "line " + std::to_string(lineno) + ": ";
        if (kw != keyword) throw ValidationError(where + "expected '" + keyword + "'");
        if (!(ls >> id >> val) || (ls >> extra)) throw ValidationError(where + "expected '" + keyword + " <arrow> <rational>'");
        if (id.find_first_not_of("0123456789") != std::string::npos || id.size() > 9)
            throw ValidationError(where + "bad arrow id '" + id + "'");
        int a = std::stoi(id);
        if (a < 1 || a > arrow_count) throw ValidationError(where + "arrow " + id + " out of range");
        if (seen[a]) throw ValidationError(where + "arrow " + id + " given twice");
        seen[a] = 1;
        try {
            vals[a] = parse_rational(val);
        } catch (const Error& e) {
            throw ValidationError(where + e.what());
        }
    }
    return vals;
}

}  // namespace dimerlab
