#pragma once

#include "dimerlab/matching.hpp"

namespace dimerlab {

// A letter of a path word: arrow id with exponent +1 or -1. Words are in composition
// order: the first letter is traversed last.
using Letter = std::pair<int, int>;

// Torus-mode context for canonical forms in the weak Jacobi algebra.
struct Jacobi {
    Dimer dimer;
    Homology H;
    std::vector<PerfectMatching> matchings;
    int reference = 0;  // index of P0
    Chain p0;

    static Jacobi make(const Dimer& d, int reference = 0) {
        Jacobi J{d, homology(d), {}, reference, {}};
        J.H.require_torus();
        J.matchings = enumerate_matchings(d);
        if (J.matchings.empty()) throw Error("no perfect matchings");
        if (reference < 0 || reference >= static_cast<int>(J.matchings.size()))
            throw Error("reference matching index out of range");
        attach_points(d, J.H, J.matchings);
        J.p0 = J.matchings[reference].chain(d);
        return J;
    }
};

// Monomial X^i Y^j Z^k E_{h t}: endpoints, homology class, degree under P0.
struct Monomial {
    int head = 0, tail = 0;
    Pt hclass;
    std::int64_t refdeg = 0;
    auto operator<=>(const Monomial&) const = default;
};

inline std::string to_string(const Monomial& m) {
    return "[" + std::to_string(m.head) + "," + std::to_string(m.tail) + "," + to_string(m.hclass) + "," +
           std::to_string(m.refdeg) + "]";
}

struct PathElement {
    Monomial mono;
    Rational coeff = 0;

    bool zero() const { return coeff == 0; }
    int head() const { return mono.head; }
    int tail() const { return mono.tail; }
    bool operator==(const PathElement& o) const {
        if (zero() || o.zero()) return zero() && o.zero();
        return mono == o.mono && coeff == o.coeff;
    }
};

inline std::string to_string(const PathElement& e) {
    if (e.zero()) return "0";
    return to_string(e.coeff) + " * " + to_string(e.mono);
}

inline PathElement vertex_element(int v) { return {{v, v, {}, 0}, 1}; }
inline PathElement ell(int v) { return {{v, v, {}, 1}, 1}; }

inline PathElement path_element(const Jacobi& J, const std::vector<Letter>& word, int empty_vertex = 0) {
    const Dimer& d = J.dimer;
    if (word.empty()) {
        if (empty_vertex < 1 || empty_vertex > d.vertex_count) throw Error("empty word needs a vertex");
        return vertex_element(empty_vertex);
    }
    auto hd = [&](const Letter& l) { return l.second > 0 ? d.head[l.first] : d.tail[l.first]; };
    auto tl = [&](const Letter& l) { return l.second > 0 ? d.tail[l.first] : d.head[l.first]; };
    Chain c = zero_chain(d);
    for (std::size_t i = 0; i < word.size(); ++i) {
        auto [a, e] = word[i];
        if (a < 1 || a > d.arrow_count() || (e != 1 && e != -1)) throw Error("bad letter in word");
        if (i + 1 < word.size() && tl(word[i]) != hd(word[i + 1]))
            throw Error("word not composable at position " + std::to_string(i + 1));
        c[a] += e;
    }
    Monomial m{hd(word.front()), tl(word.back()), {}, 0};
    m.hclass = J.H.class_of(c + J.H.tree_chain(m.head, m.tail));
    m.refdeg = pairing(J.p0, c);
    return {m, 1};
}

// Parses "3 4^-1 -5" style words (exponent by suffix ^-1 or leading minus).
inline std::vector<Letter> parse_word(const std::string& text) {
    std::vector<Letter> w;
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::replace(s.begin(), s.end(), '.', ' ');
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        int e = 1;
        if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
            e = -1;
            tok.resize(tok.size() - 3);
        } else if (tok[0] == '-') {
            e = -1;
            tok.erase(0, 1);
        }
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9)
            throw Error("bad word token '" + tok + "'");
        w.emplace_back(std::stoi(tok), e);
    }
    return w;
}

inline Monomial operator*(const Monomial& x, const Monomial& y) {
    return {x.head, y.tail, x.hclass + y.hclass, x.refdeg + y.refdeg};
}

inline PathElement multiply(const PathElement& x, const PathElement& y) {
    if (x.zero() || y.zero() || x.tail() != y.head()) return {};
    return {x.mono * y.mono, x.coeff * y.coeff};
}

inline PathElement inverse(const PathElement& e) {
    if (e.zero()) throw Error("zero element has no inverse");
    return {{e.tail(), e.head(), -e.mono.hclass, -e.mono.refdeg}, 1 / e.coeff};
}

// Word for the rest of a's face: r with r*a the face cycle, in composition order.
inline std::vector<Letter> face_rest_word(const Dimer& d, int a, bool positive) {
    std::vector<Letter> w;
    const Perm& s = positive ? d.sp : d.sm;
    for (int b = s[a]; b != a; b = s[b]) w.emplace_back(b, 1);
    std::reverse(w.begin(), w.end());
    return w;
}

inline PathElement r_plus(const Jacobi& J, int a) { return path_element(J, face_rest_word(J.dimer, a, true)); }
inline PathElement r_minus(const Jacobi& J, int a) { return path_element(J, face_rest_word(J.dimer, a, false)); }
inline PathElement arrow_element(const Jacobi& J, int a) { return path_element(J, {{a, 1}}); }

inline std::int64_t degree(const Jacobi& J, const Monomial& m, std::size_t matching) {
    Chain rep = J.H.cycle_of(m.hclass) + J.H.tree_chain(m.tail, m.head);
    return m.refdeg + pairing(J.matchings[matching].chain(J.dimer) - J.p0, rep);
}

inline bool in_jacobi(const Jacobi& J, const PathElement& e) {
    if (e.zero()) return true;
    for (std::size_t i = 0; i < J.matchings.size(); ++i)
        if (degree(J, e.mono, i) < 0) return false;
    return true;
}

// Finite sums of monomials; used as matrix entries.
struct Polynomial {
    std::map<Monomial, Rational> terms;

    Polynomial() = default;
    Polynomial(const PathElement& e) {
        if (!e.zero()) terms[e.mono] = e.coeff;
    }
    bool zero() const { return terms.empty(); }
    bool monomial() const { return terms.size() == 1; }
    PathElement single() const {
        if (!monomial()) throw Error("entry is not a single monomial");
        return {terms.begin()->first, terms.begin()->second};
    }
    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms) {
            auto& v = terms[m];
            v += c;
            if (v == 0) terms.erase(m);
        }
        return *this;
    }
    Polynomial operator+(const Polynomial& o) const {
        Polynomial r = *this;
        return r += o;
    }
    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& [m, c] : r.terms) c = -c;
        return r;
    }
    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
    Polynomial& operator-=(const Polynomial& o) { return *this += -o; }
    Polynomial operator*(const Polynomial& o) const {
        Polynomial r;
        for (const auto& [m1, c1] : terms)
            for (const auto& [m2, c2] : o.terms) {
                if (m1.tail != m2.head) continue;
                r += Polynomial(PathElement{m1 * m2, c1 * c2});
            }
        return r;
    }
    Polynomial scaled(const Rational& q) const {
        Polynomial r;
        if (q == 0) return r;
        r.terms = terms;
        for (auto& [m, c] : r.terms) c *= q;
        return r;
    }
    bool operator==(const Polynomial&) const = default;
};

inline std::string to_string(const Polynomial& p) {
    if (p.zero()) return "0";
    std::string s;
    for (const auto& [m, c] : p.terms) {
        if (!s.empty()) s += " + ";
        s += to_string(PathElement{m, c});
    }
    return s;
}

// ---- angle quiver and Gtl ----

struct Angle {
    int id = 0;
    int src = 0, dst = 0;  // arrows of the dimer
    int face = 0;
    bool positive = true;
};

// One angle per face corner. The angle leaving arrow a inside its positive face has id a-1,
// inside its negative face id E+a-1.
struct AngleQuiver {
    int arrow_count = 0;
    std::vector<Angle> angles;
    std::vector<std::pair<int, int>> relations;  // (x, y) with x*y = 0, composition order

    int out_angle(int a, bool positive) const { return positive ? a - 1 : arrow_count + a - 1; }
};

inline AngleQuiver angle_quiver(const Dimer& d) {
    AngleQuiver q;
    int E = q.arrow_count = d.arrow_count();
    Perm spi = inverse(d.sp), smi = inverse(d.sm);
    for (int a = 1; a <= E; ++a) q.angles.push_back({a - 1, a, spi[a], d.pos_face[a], true});
    for (int a = 1; a <= E; ++a) q.angles.push_back({E + a - 1, a, d.sm[a], d.neg_face[a], false});
    for (const auto& x : q.angles) {
        // y is walked first and arrives at x.src inside the same face
        int before = x.positive ? d.sp[x.src] : smi[x.src];
        q.relations.emplace_back(x.id, q.out_angle(before, x.positive));
    }
    return q;
}

// Path of angles in composition order; an empty angle list is the idempotent at `vertex`.
struct AnglePath {
    std::vector<int> angles;
    int vertex = 0;
    Rational coeff = 1;

    bool zero() const { return coeff == 0; }
    bool idempotent() const { return angles.empty(); }
    bool operator==(const AnglePath& o) const {
        if (zero() || o.zero()) return zero() && o.zero();
        return angles == o.angles && vertex == o.vertex && coeff == o.coeff;
    }
};

inline int path_head(const AngleQuiver& q, const AnglePath& p) {
    return p.idempotent() ? p.vertex : q.angles[p.angles.front()].dst;
}
inline int path_tail(const AngleQuiver& q, const AnglePath& p) {
    return p.idempotent() ? p.vertex : q.angles[p.angles.back()].src;
}

inline AnglePath make_angle_path(const AngleQuiver& q, std::vector<int> angles, Rational coeff = 1) {
    AnglePath p{std::move(angles), 0, coeff};
    if (p.angles.empty()) throw Error("use an idempotent for the empty angle path");
    for (std::size_t i = 0; i + 1 < p.angles.size(); ++i) {
        const auto &x = q.angles[p.angles[i]], &y = q.angles[p.angles[i + 1]];
        if (x.src != y.dst) throw Error("angle path not composable");
        if (x.positive == y.positive) p.coeff = 0;  // consecutive angles in one face
    }
    p.vertex = q.angles[p.angles.front()].dst;
    return p;
}

inline AnglePath idempotent_path(int arrow) { return {{}, arrow, 1}; }

// Z2 degree
inline int parity(const AnglePath& p) { return static_cast<int>(p.angles.size() % 2); }

// Z degree under a perfect matching: -1 for angles arriving in a matched arrow.
inline std::int64_t angle_degree(const AngleQuiver& q, const AnglePath& p, const PerfectMatching& m) {
    std::int64_t s = 0;
    for (int g : p.angles) s += m.contains(q.angles[g].dst) ? -1 : 1;
    return s;
}

inline AnglePath gtl_product(const AngleQuiver& q, const AnglePath& x, const AnglePath& y) {
    if (path_tail(q, x) != path_head(q, y)) throw Error("angle paths not composable");
    if (x.zero() || y.zero()) return {{}, 0, 0};
    if (x.idempotent()) return AnglePath{y.angles, y.vertex, x.coeff * y.coeff};
    if (y.idempotent()) return AnglePath{x.angles, x.vertex, x.coeff * y.coeff};
    std::vector<int> all = x.angles;
    all.insert(all.end(), y.angles.begin(), y.angles.end());
    return make_angle_path(q, std::move(all), x.coeff * y.coeff);
}

// Higher products. Sequence in composition order: seq[i] * seq[i+1] composable.
inline AnglePath gtl_mu(const AngleQuiver& q, const Dimer& d, std::vector<AnglePath> seq) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (path_tail(q, seq[i]) != path_head(q, seq[i + 1])) throw Error("sequence not composable");
    Rational sign = 1;
    for (;;) {
        for (const auto& p : seq)
            if (p.zero()) return {{}, 0, 0};
        if (seq.size() == 1) return seq[0];
        if (seq.size() == 2) {
            auto r = gtl_product(q, seq[0], seq[1]);
            r.coeff *= sign;
            return r;
        }
        for (const auto& p : seq)
            if (p.idempotent()) return {{}, 0, 0};
        bool reduced = false;
        for (std::size_t i = 0; i < seq.size() && !reduced; ++i) {
            const Angle& b1 = q.angles[seq[i].angles.back()];
            std::size_t l = d.faces[b1.face].size();
            if (l < 2 || i + l > seq.size()) continue;
            bool ok = true;
            for (std::size_t j = 1; j + 1 < l && ok; ++j)
                ok = seq[i + j].angles.size() == 1 && q.angles[seq[i + j].angles[0]].face == b1.face &&
                     q.angles[seq[i + j].angles[0]].positive == b1.positive;
            const Angle& bl = q.angles[seq[i + l - 1].angles.front()];
            ok = ok && bl.face == b1.face && bl.positive == b1.positive;
            if (!ok) continue;
            AnglePath left{{seq[i].angles.begin(), seq[i].angles.end() - 1}, b1.dst, seq[i].coeff};
            AnglePath right{{seq[i + l - 1].angles.begin() + 1, seq[i + l - 1].angles.end()}, bl.src,
                            seq[i + l - 1].coeff};
            for (AnglePath* p : {&left, &right})
                if (!p->idempotent()) p->vertex = q.angles[p->angles.front()].dst;
            for (std::size_t j = 1; j + 1 < l; ++j) sign *= seq[i + j].coeff;
            // sign convention: only the final collapse onto a lone path carries (-1)^|path|
            if ((left.idempotent() || right.idempotent()) && (parity(left) + parity(right)) % 2) sign = -sign;
            std::vector<AnglePath> next(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i));
            next.push_back(left);
            next.push_back(right);
            next.insert(next.end(), seq.begin() + static_cast<std::ptrdiff_t>(i + l), seq.end());
            seq = std::move(next);
            reduced = true;
        }
        if (!reduced) return {{}, 0, 0};
    }
}

}  // namespace dimerlab
