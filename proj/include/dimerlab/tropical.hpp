#pragma once

#include "dimerlab/matching.hpp"

#include <deque>
#include <optional>

namespace dimerlab {

// theta_W(v) = sum of weights of arrows into v minus arrows out of v. Index 0 unused.
inline std::vector<Rational> theta(const Dimer& d, const std::vector<Rational>& W) {
    if (static_cast<int>(W.size()) != d.arrow_count() + 1) throw Error("weight vector has the wrong length");
    std::vector<Rational> th(d.vertex_count + 1, Rational(0));
    for (int a = 1; a <= d.arrow_count(); ++a) {
        th[d.head[a]] += W[a];
        th[d.tail[a]] -= W[a];
    }
    return th;
}

inline Rational matching_weight(const PerfectMatching& P, const std::vector<Rational>& W) {
    Rational s = 0;
    for (int a : P.arrows) s += W[a];
    return s;
}

// ---- tropical polynomial ----

struct Term {
    Pt point;
    Rational c;                // minimal lift over the matchings at this point
    std::vector<int> owners;   // all matchings at the point
    std::vector<int> minimal;  // owners attaining c
};

struct TropicalPolynomial {
    std::vector<Term> terms;  // sorted by point

    int index_of(const Pt& p) const {
        auto it = std::lower_bound(terms.begin(), terms.end(), p, [](const Term& t, const Pt& q) { return t.point < q; });
        return it != terms.end() && it->point == p ? static_cast<int>(it - terms.begin()) : -1;
    }

    Rational value(const Rational& X, const Rational& Y) const {
        Rational best = 0;
        bool first = true;
        for (const auto& t : terms) {
            Rational v = t.point.x * X + t.point.y * Y + t.c;
            if (first || v < best) best = v;
            first = false;
        }
        return best;
    }
};

inline TropicalPolynomial tropical_polynomial(const std::vector<PerfectMatching>& ms, const std::vector<Rational>& W) {
    std::map<Pt, Term> by_point;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        Rational c = matching_weight(ms[i], W);
        auto [it, fresh] = by_point.try_emplace(ms[i].point, Term{ms[i].point, c, {}, {}});
        Term& t = it->second;
        t.owners.push_back(static_cast<int>(i));
        if (fresh || c < t.c) {
            t.c = c;
            t.minimal.assign(1, static_cast<int>(i));
        } else if (c == t.c) {
            t.minimal.push_back(static_cast<int>(i));
        }
    }
    TropicalPolynomial f;
    for (auto& [p, t] : by_point) f.terms.push_back(std::move(t));
    return f;
}

// a*u + b*v + w >= -r*c for every term
inline bool polytope_contains(const TropicalPolynomial& f, std::int64_t u, std::int64_t v, std::int64_t w, const Rational& r) {
    if (r < 0) throw Error("polytope_contains: r must be nonnegative");
    for (const auto& t : f.terms)
        if (Rational(t.point.x * u + t.point.y * v + w) < -r * t.c) return false;
    return true;
}

// ---- regular subdivision ----

struct Cell {
    std::vector<int> corners;  // term indices, counter-clockwise
    std::vector<int> points;   // every term whose lift lies on the face plane
    Rational alpha, beta, gamma;  // face plane z = alpha x + beta y + gamma
    std::int64_t interior = 0;
};

struct SubdivisionEdge {
    int from = -1, to = -1;  // corner terms; `left` cell lies to the left of from -> to
    std::int64_t length = 0;
    int left = -1, right = -1;  // right = -1 on the polygon boundary

    bool boundary() const { return right < 0; }
};

struct Subdivision {
    std::vector<Cell> cells;
    std::vector<SubdivisionEdge> edges;
    std::vector<char> on_hull;  // per term: lift lies on the lower hull
    std::vector<char> vertex;   // per term: lift is a vertex of the lower hull
};

namespace detail {

inline Rational affine_along(const TropicalPolynomial& f, int p, int q, const Pt& r) {
    const Term& P = f.terms[p];
    Pt v = f.terms[q].point - P.point;
    return P.c + (f.terms[q].c - P.c) * Rational(dot(r - P.point, v)) / dot(v, v);
}

// Lower face on the left of the lifted segment p -> q, if there is one.
inline std::optional<Cell> lower_face(const TropicalPolynomial& f, int p, int q) {
    Pt P = f.terms[p].point, v = f.terms[q].point - P;
    std::optional<Rational> s;
    for (const auto& t : f.terms) {
        auto h = cross(v, t.point - P);
        if (h <= 0) continue;
        Rational sr = (t.c - affine_along(f, p, q, t.point)) / h;
        if (!s || sr < *s) s = sr;
    }
    if (!s) return std::nullopt;
    Cell cell;
    std::vector<Pt> pts;
    for (std::size_t i = 0; i < f.terms.size(); ++i) {
        const auto& t = f.terms[i];
        auto h = cross(v, t.point - P);
        if (h < 0) continue;
        if (t.c - affine_along(f, p, q, t.point) == *s * h) {
            cell.points.push_back(static_cast<int>(i));
            pts.push_back(t.point);
        }
    }
    Rational k = (f.terms[q].c - f.terms[p].c) / dot(v, v);
    cell.alpha = k * v.x - *s * v.y;
    cell.beta = k * v.y + *s * v.x;
    cell.gamma = f.terms[p].c - cell.alpha * P.x - cell.beta * P.y;
    auto hull = convex_hull(pts);
    for (const auto& c : hull) cell.corners.push_back(f.index_of(c));
    cell.interior = interior_points(hull);
    return cell;
}

}  // namespace detail

inline Subdivision regular_subdivision(const TropicalPolynomial& f) {
    std::vector<Pt> pts;
    for (const auto& t : f.terms) pts.push_back(t.point);
    auto hull = convex_hull(pts);
    if (hull.size() < 3) throw Error("Newton polygon is not two-dimensional");

    // first segment of the lower chain over the polygon edge hull[0] -> hull[1]
    int p = f.index_of(hull[0]), q = -1;
    Pt v = hull[1] - hull[0];
    Rational best;
    for (std::size_t i = 0; i < f.terms.size(); ++i) {
        Pt r = f.terms[i].point - hull[0];
        if (static_cast<int>(i) == p || cross(v, r) != 0 || dot(v, r) <= 0) continue;
        Rational slope = (f.terms[i].c - f.terms[p].c) / dot(v, r);
        if (q < 0 || slope < best || (slope == best && dot(v, r) > dot(v, f.terms[q].point - hull[0]))) {
            q = static_cast<int>(i);
            best = slope;
        }
    }

    Subdivision S;
    std::map<std::vector<int>, int> cell_id;
    std::map<std::pair<int, int>, int> edge_id;
    std::deque<int> todo;
    auto add_cell = [&](Cell c) {
        auto key = c.points;
        std::sort(key.begin(), key.end());
        auto [it, fresh] = cell_id.try_emplace(key, static_cast<int>(S.cells.size()));
        if (fresh) {
            S.cells.push_back(std::move(c));
            todo.push_back(it->second);
        }
        return it->second;
    };
    auto first = detail::lower_face(f, p, q);
    if (!first) throw Error("lower hull: no face above the first boundary segment");
    add_cell(std::move(*first));
    while (!todo.empty()) {
        int ci = todo.front();
        todo.pop_front();
        auto corners = S.cells[ci].corners;
        for (std::size_t i = 0; i < corners.size(); ++i) {
            int u = corners[i], w = corners[(i + 1) % corners.size()];
            auto key = std::minmax(u, w);
            if (edge_id.count(key)) continue;
            int e = static_cast<int>(S.edges.size());
            edge_id[key] = e;
            S.edges.push_back({u, w, lattice_length(f.terms[w].point - f.terms[u].point), ci, -1});
            if (auto nb = detail::lower_face(f, w, u)) S.edges[e].right = add_cell(std::move(*nb));
        }
    }

    std::int64_t area = 0;
    S.on_hull.assign(f.terms.size(), 0);
    S.vertex.assign(f.terms.size(), 0);
    for (const auto& c : S.cells) {
        std::vector<Pt> cp;
        for (int t : c.corners) {
            cp.push_back(f.terms[t].point);
            S.vertex[t] = 1;
        }
        for (int t : c.points) S.on_hull[t] = 1;
        area += twice_area(cp);
    }
    if (area != twice_area(hull)) throw Error("lower hull cells do not tile the Newton polygon");
    return S;
}

// ---- tropical curve and spider graph ----

struct TropEdge {
    int edge = -1;  // dual subdivision edge
    int from = -1, to = -1;  // nodes (cells)
    Pt direction;  // primitive, from -> to
    std::int64_t multiplicity = 0;
    Rational length;  // affine length
};

struct TropLeg {
    int edge = -1;
    int node = -1;
    Pt direction;  // primitive; points away from the node
    std::int64_t multiplicity = 0;
};

struct TropCurve {
    std::vector<QPt> nodes;  // one per cell
    std::vector<TropEdge> edges;
    std::vector<TropLeg> legs;
};

struct SpiderGraph {
    std::vector<std::int64_t> genus;  // per node
    std::vector<std::pair<int, int>> edges;  // k-fold tropical edges appear k times
    std::vector<Rational> weights;
    std::vector<int> legs;  // node of each leg

    std::int64_t total_genus() const {
        std::int64_t g = 0;
        for (auto x : genus) g += x;
        return g + static_cast<std::int64_t>(edges.size()) - static_cast<std::int64_t>(genus.size()) + 1;
    }
};

inline TropCurve tropical_curve(const TropicalPolynomial& f, const Subdivision& S) {
    TropCurve T;
    for (const auto& c : S.cells) {
        QPt node{-c.alpha, -c.beta};
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
            const auto& t = f.terms[i];
            Rational val = t.point.x * node.x + t.point.y * node.y + t.c;
            bool active = std::find(c.points.begin(), c.points.end(), static_cast<int>(i)) != c.points.end();
            if (active ? val != c.gamma : val <= c.gamma)
                throw ValidationError("tropical node " + to_string(node) + " does not solve its cell's equalities");
        }
        T.nodes.push_back(node);
    }
    for (std::size_t e = 0; e < S.edges.size(); ++e) {
        const auto& E = S.edges[e];
        Pt v = f.terms[E.to].point - f.terms[E.from].point;
        Pt inward = primitive(Pt{-v.y, v.x});
        if (E.boundary()) {
            T.legs.push_back({static_cast<int>(e), E.left, inward, E.length});
            continue;
        }
        const QPt &a = T.nodes[E.left], &b = T.nodes[E.right];
        Rational dx = b.x - a.x, dy = b.y - a.y;
        if (dx * v.x + dy * v.y != 0) throw ValidationError("tropical edge is not dual to its subdivision edge");
        Rational t = inward.x != 0 ? dx / inward.x : dy / inward.y;
        Pt dir = inward;
        if (t < 0) {
            t = -t;
            dir = -inward;
        }
        if (t == 0) throw ValidationError("adjacent cells share a tropical node");
        T.edges.push_back({static_cast<int>(e), E.left, E.right, dir, E.length, t});
    }
    return T;
}

inline SpiderGraph spider_graph(const Subdivision& S, const TropCurve& T) {
    SpiderGraph G;
    for (const auto& c : S.cells) G.genus.push_back(c.interior);
    for (const auto& e : T.edges)
        for (std::int64_t k = 0; k < e.multiplicity; ++k) {
            G.edges.push_back({e.from, e.to});
            G.weights.push_back(e.length);
        }
    for (const auto& l : T.legs)
        for (std::int64_t k = 0; k < l.multiplicity; ++k) G.legs.push_back(l.node);
    return G;
}

// ---- stability ----

struct Stability {
    bool semistable = false, stable = false;
};

struct Degeneracy {
    bool nondegenerate = false, generic_character = false, generic = false;
};

struct TropicalModel {
    std::vector<Rational> weights;
    std::vector<PerfectMatching> matchings;
    MatchingPolygon polygon;
    TropicalPolynomial f;
    Subdivision subdivision;
    TropCurve curve;
    SpiderGraph spider;
    std::vector<Stability> stability;  // per matching
    std::vector<int> stable_at;        // per term: the stable matching there, or -1
    std::vector<Rational> theta;
    Degeneracy degeneracy;

    std::vector<int> stable_matchings() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < stability.size(); ++i)
            if (stability[i].stable) out.push_back(static_cast<int>(i));
        return out;
    }
};

// theta.beta != 0 for every proper nonempty vertex subset
inline bool generic_character(const std::vector<Rational>& th) {
    int V = static_cast<int>(th.size()) - 1;
    if (V > 24) throw Error("generic_character: too many vertices for subset enumeration");
    for (std::uint32_t mask = 1; mask + 1 < (1u << V); ++mask) {
        Rational s = 0;
        for (int v = 0; v < V; ++v)
            if (mask >> v & 1u) s += th[v + 1];
        if (s == 0) return false;
    }
    return true;
}

inline TropicalModel tropical_model(const Dimer& d, const Homology& H, const std::vector<Rational>& W) {
    if (static_cast<int>(W.size()) != d.arrow_count() + 1) throw Error("weight vector has the wrong length");
    TropicalModel M;
    M.weights = W;
    auto md = matching_data(d, H);
    M.matchings = std::move(md.matchings);
    M.polygon = std::move(md.polygon);
    M.f = tropical_polynomial(M.matchings, W);
    M.subdivision = regular_subdivision(M.f);
    M.curve = tropical_curve(M.f, M.subdivision);
    M.spider = spider_graph(M.subdivision, M.curve);

    M.stability.assign(M.matchings.size(), {});
    M.stable_at.assign(M.f.terms.size(), -1);
    for (std::size_t t = 0; t < M.f.terms.size(); ++t) {
        const auto& term = M.f.terms[t];
        if (!M.subdivision.vertex[t]) continue;
        for (int m : term.minimal) {
            M.stability[m].semistable = true;
            M.stability[m].stable = term.minimal.size() == 1;
        }
        if (term.minimal.size() == 1) M.stable_at[t] = term.minimal[0];
    }

    M.theta = theta(d, W);
    auto& D = M.degeneracy;
    D.nondegenerate = true;
    for (const auto& s : M.stability)
        if (s.semistable && !s.stable) D.nondegenerate = false;
    D.generic_character = generic_character(M.theta);
    bool unit_edges = true;
    for (const auto& e : M.subdivision.edges)
        if (!e.boundary() && e.length != 1) unit_edges = false;
    D.generic = D.nondegenerate && unit_edges && D.generic_character;
    return M;
}

inline std::vector<Stability> classify_matchings(const Dimer& d, const Homology& H, const std::vector<Rational>& W) {
    return tropical_model(d, H, W).stability;
}

inline Degeneracy degeneracy(const Dimer& d, const Homology& H, const std::vector<Rational>& W) {
    return tropical_model(d, H, W).degeneracy;
}

// ---- lines, trees and strips ----

namespace detail {

inline void require_nondegenerate(const TropicalModel& M) {
    if (!M.degeneracy.nondegenerate) throw ValidationError("weight is degenerate: a semistable matching is not stable");
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

struct ComplexReport {
    bool connected = false;
    std::int64_t euler = 0;
    bool contractible() const { return connected && euler == 1; }
};

// subcomplex spanned by the subdivision vertices with side[t] == want
inline ComplexReport subcomplex(const TropicalModel& M, const std::vector<int>& side, int want) {
    const auto& S = M.subdivision;
    ComplexReport r;
    UnionFind uf(side.size());
    std::int64_t V = 0, E = 0, F = 0;
    for (std::size_t t = 0; t < side.size(); ++t) V += S.vertex[t] && side[t] == want;
    std::int64_t components = V;
    for (const auto& e : S.edges)
        if (side[e.from] == want && side[e.to] == want) {
            ++E;
            components -= uf.unite(e.from, e.to);
        }
    for (const auto& c : S.cells)
        if (std::all_of(c.corners.begin(), c.corners.end(), [&](int t) { return side[t] == want; })) ++F;
    r.connected = components == 1;
    r.euler = V - E + F;
    return r;
}

}  // namespace detail

struct LineReport {
    int arrow = 0;
    std::vector<int> marked;  // terms whose stable matching contains the arrow
    bool contractible_a = false, contractible_rest = false;
    std::vector<int> line;  // subdivision edges, in order; the ends are legs
    bool leg_to_leg = false;
};

inline LineReport line_of_arrow(const TropicalModel& M, int a) {
    detail::require_nondegenerate(M);
    const auto& S = M.subdivision;
    LineReport R;
    R.arrow = a;
    std::vector<int> side(M.f.terms.size(), -1);
    int in = 0, out = 0;
    for (std::size_t t = 0; t < side.size(); ++t) {
        if (!S.vertex[t]) continue;
        side[t] = M.matchings[M.stable_at[t]].contains(a) ? 1 : 0;
        if (side[t]) {
            R.marked.push_back(static_cast<int>(t));
            ++in;
        } else {
            ++out;
        }
    }
    if (in == 0 || out == 0)
        throw ValidationError("arrow " + std::to_string(a) + " lies in " + (in ? "every" : "no") + " stable matching");
    R.contractible_a = detail::subcomplex(M, side, 1).contractible();
    R.contractible_rest = detail::subcomplex(M, side, 0).contractible();

    std::vector<std::vector<int>> crossing_in(S.cells.size());
    std::vector<int> legs;
    int crossing = 0;
    for (std::size_t e = 0; e < S.edges.size(); ++e) {
        const auto& E = S.edges[e];
        if (side[E.from] == side[E.to]) continue;
        ++crossing;
        crossing_in[E.left].push_back(static_cast<int>(e));
        if (E.boundary())
            legs.push_back(static_cast<int>(e));
        else
            crossing_in[E.right].push_back(static_cast<int>(e));
    }
    bool shaped = legs.size() == 2;
    for (const auto& c : crossing_in) shaped = shaped && (c.empty() || c.size() == 2);
    if (legs.empty()) return R;
    int e = legs[0], cell = S.edges[e].left;
    R.line.push_back(e);
    while (static_cast<int>(R.line.size()) <= crossing) {
        const auto& here = crossing_in[cell];
        if (here.size() != 2) break;
        e = here[0] == e ? here[1] : here[0];
        R.line.push_back(e);
        if (S.edges[e].boundary()) break;
        cell = S.edges[e].left == cell ? S.edges[e].right : S.edges[e].left;
    }
    R.leg_to_leg = shaped && S.edges[R.line.back()].boundary() && static_cast<int>(R.line.size()) == crossing;
    return R;
}

struct TreeReport {
    int face = -1;
    std::vector<int> edges;  // internal subdivision edges joining different classes
    std::vector<int> legs;   // boundary subdivision edges joining different classes
    std::vector<int> nodes;  // cells touched
    std::map<int, int> valency;  // node -> tree edges and legs at it
    std::map<int, std::pair<int, int>> sides;  // tree edge or leg -> the two arrows of the face it separates
    bool acyclic = false, connected = false;

    bool is_tree() const { return acyclic && connected; }
};

inline TreeReport face_tree(const TropicalModel& M, const Dimer& d, int c) {
    detail::require_nondegenerate(M);
    if (c < 0 || c >= d.face_count()) throw Error("face out of range");
    const auto& S = M.subdivision;
    TreeReport R;
    R.face = c;
    std::vector<int> arrow_at(M.f.terms.size(), 0);
    for (std::size_t t = 0; t < arrow_at.size(); ++t) {
        if (!S.vertex[t]) continue;
        for (int a : d.faces[c])
            if (M.matchings[M.stable_at[t]].contains(a)) arrow_at[t] = a;
    }
    std::set<int> nodes;
    for (std::size_t e = 0; e < S.edges.size(); ++e) {
        const auto& E = S.edges[e];
        if (arrow_at[E.from] == arrow_at[E.to]) continue;
        R.sides[static_cast<int>(e)] = std::minmax(arrow_at[E.from], arrow_at[E.to]);
        nodes.insert(E.left);
        ++R.valency[E.left];
        if (E.boundary()) {
            R.legs.push_back(static_cast<int>(e));
        } else {
            R.edges.push_back(static_cast<int>(e));
            nodes.insert(E.right);
            ++R.valency[E.right];
        }
    }
    R.nodes.assign(nodes.begin(), nodes.end());
    detail::UnionFind uf(S.cells.size());
    std::size_t merges = 0;
    R.acyclic = true;
    for (int e : R.edges) {
        if (uf.unite(S.edges[e].left, S.edges[e].right))
            ++merges;
        else
            R.acyclic = false;
    }
    R.connected = !R.nodes.empty() && merges + 1 == R.nodes.size();
    return R;
}

struct Strip {
    int arrow = 0;
    int edge = -1;                  // subdivision edge dual to the crossed tropical edge or leg
    std::optional<Rational> length;  // affine length; none for legs
    Rational width;                 // B_a
};

struct StripGluing {
    int face = -1;
    int edge = -1;
    int arrow1 = 0, arrow2 = 0;
};

struct ZeroOrder {
    int face = -1;
    int node = -1;
    int order = 0;
};

struct StripComplex {
    std::vector<Strip> strips;
    std::vector<StripGluing> gluings;
    std::vector<ZeroOrder> zeros;
    int genus = 0, punctures = 0;  // of the mirror surface

    int zero_total() const {
        int s = 0;
        for (const auto& z : zeros) s += z.order;
        return s;
    }
    Rational area() const {
        Rational s = 0;
        for (const auto& st : strips)
            if (st.length) s += *st.length * st.width;
        return s;
    }
};

inline StripComplex strebel_strips(const TropicalModel& M, const Dimer& d, const std::vector<Rational>& B) {
    detail::require_nondegenerate(M);
    if (static_cast<int>(B.size()) != d.arrow_count() + 1) throw Error("width vector has the wrong length");
    std::map<int, Rational> affine;
    for (const auto& e : M.curve.edges) affine[e.edge] = e.length;
    StripComplex X;
    for (int a = 1; a <= d.arrow_count(); ++a) {
        if (B[a] <= 0) throw ValidationError("strip width of arrow " + std::to_string(a) + " is not positive");
        auto L = line_of_arrow(M, a);
        if (!L.contractible_a || !L.contractible_rest || !L.leg_to_leg)
            throw ValidationError("arrow " + std::to_string(a) + " has no leg-to-leg line between contractible complexes");
        for (int e : L.line) {
            std::optional<Rational> len;
            if (auto it = affine.find(e); it != affine.end()) len = it->second;
            X.strips.push_back({a, e, len, B[a]});
        }
    }
    for (int c = 0; c < d.face_count(); ++c) {
        auto T = face_tree(M, d, c);
        if (!T.is_tree()) throw ValidationError("tree of face " + std::to_string(c) + " is not a tree");
        for (const auto& [e, ab] : T.sides) X.gluings.push_back({c, e, ab.first, ab.second});
        for (const auto& [node, k] : T.valency) X.zeros.push_back({c, node, k - 2});
    }
    auto inv = surface_invariants(mirror(d));
    X.genus = inv.genus;
    X.punctures = mirror(d).vertex_count;
    return X;
}

}  // namespace dimerlab
