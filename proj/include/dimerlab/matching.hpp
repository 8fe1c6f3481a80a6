#pragma once

#include "dimerlab/homology.hpp"

#include <map>
#include <set>

namespace dimerlab {

struct PerfectMatching {
    std::vector<int> arrows;  // sorted
    Pt point;

    bool contains(int a) const { return std::binary_search(arrows.begin(), arrows.end(), a); }
    Chain chain(const Dimer& d) const { return chain_of_arrows(d, arrows); }
};

// Exact cover over faces; each arrow covers its positive and its negative face.
inline std::vector<PerfectMatching> enumerate_matchings(const Dimer& d) {
    int E = d.arrow_count(), F = d.face_count();
    std::vector<char> covered(F, 0);
    std::vector<int> chosen;
    std::vector<std::vector<int>> found;
    auto usable = [&](int a) { return !covered[d.pos_face[a]] && !covered[d.neg_face[a]]; };
    auto search = [&](auto&& self) -> void {
        int best = -1, best_count = E + 1;
        for (int f = 0; f < F; ++f) {
            if (covered[f]) continue;
            int n = 0;
            for (int a : d.faces[f]) n += usable(a);
            if (n < best_count) {
                best = f;
                best_count = n;
            }
        }
        if (best < 0) {
            auto s = chosen;
            std::sort(s.begin(), s.end());
            found.push_back(std::move(s));
            return;
        }
        if (best_count == 0) return;
        auto options = d.faces[best];
        std::sort(options.begin(), options.end());
        for (int a : options) {
            if (!usable(a)) continue;
            covered[d.pos_face[a]] = covered[d.neg_face[a]] = 1;
            chosen.push_back(a);
            self(self);
            chosen.pop_back();
            covered[d.pos_face[a]] = covered[d.neg_face[a]] = 0;
        }
    };
    search(search);
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    std::vector<PerfectMatching> out;
    for (auto& s : found) out.push_back({std::move(s), {}});
    return out;
}

inline void attach_points(const Dimer& d, const Homology& H, std::vector<PerfectMatching>& ms) {
    H.require_torus();
    for (auto& m : ms) m.point = {pairing(m.chain(d), H.basis[0]), pairing(m.chain(d), H.basis[1])};
}

// ---- lattice polygons ----

// Strict corners of the convex hull, counter-clockwise, starting at the lexicographically smallest.
inline std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Pt> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

struct HullEdge {
    Pt from, to;
    Pt normal;  // primitive outward normal
    std::int64_t length = 0;
};

// Edges of a hull; a segment gets two opposite edges, a point none.
inline std::vector<HullEdge> hull_edges(const std::vector<Pt>& hull) {
    std::vector<HullEdge> out;
    if (hull.size() < 2) return out;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        Pt a = hull[i], b = hull[(i + 1) % hull.size()];
        Pt v = b - a;
        out.push_back({a, b, primitive(Pt{v.y, -v.x}), lattice_length(v)});
    }
    return out;
}

inline std::int64_t twice_area(const std::vector<Pt>& hull) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) s += cross(hull[i], hull[(i + 1) % hull.size()]);
    return s;
}

inline std::int64_t boundary_points(const std::vector<Pt>& hull) {
    if (hull.size() == 1) return 1;
    if (hull.size() == 2) return lattice_length(hull[1] - hull[0]) + 1;
    std::int64_t b = 0;
    for (const auto& e : hull_edges(hull)) b += e.length;
    return b;
}

inline std::int64_t interior_points(const std::vector<Pt>& hull) {
    if (hull.size() < 3) return 0;
    return (twice_area(hull) - boundary_points(hull) + 2) / 2;
}

// 1 inside, 0 on the boundary, -1 outside
inline int locate(const std::vector<Pt>& hull, const Pt& p) {
    if (hull.size() == 1) return p == hull[0] ? 0 : -1;
    if (hull.size() == 2) {
        Pt v = hull[1] - hull[0], w = p - hull[0];
        if (cross(v, w) != 0) return -1;
        return dot(v, w) >= 0 && dot(v, w) <= dot(v, v) ? 0 : -1;
    }
    bool on = false;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        auto c = cross(hull[(i + 1) % hull.size()] - hull[i], p - hull[i]);
        if (c < 0) return -1;
        if (c == 0) on = true;
    }
    return on ? 0 : 1;
}

inline std::vector<Pt> lattice_points_in(const std::vector<Pt>& hull) {
    std::vector<Pt> out;
    if (hull.empty()) return out;
    auto [xmin, xmax] = std::minmax_element(hull.begin(), hull.end(), [](auto& a, auto& b) { return a.x < b.x; });
    auto [ymin, ymax] = std::minmax_element(hull.begin(), hull.end(), [](auto& a, auto& b) { return a.y < b.y; });
    for (auto x = xmin->x; x <= xmax->x; ++x)
        for (auto y = ymin->y; y <= ymax->y; ++y)
            if (locate(hull, {x, y}) >= 0) out.push_back({x, y});
    return out;
}

// Basis-independent summary of a lattice polygon.
struct PolygonShape {
    std::size_t corners = 0;
    std::int64_t boundary = 0, interior = 0;
    std::vector<std::int64_t> edge_lengths;  // sorted
    auto operator<=>(const PolygonShape&) const = default;
};

inline PolygonShape shape_of(const std::vector<Pt>& hull) {
    PolygonShape s{hull.size(), boundary_points(hull), interior_points(hull), {}};
    for (const auto& e : hull_edges(hull)) s.edge_lengths.push_back(e.length);
    std::sort(s.edge_lengths.begin(), s.edge_lengths.end());
    return s;
}

// 2x2 integer matrix acting on column vectors.
struct Mat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    Pt operator()(const Pt& p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
    std::int64_t det() const { return a * d - b * c; }
};

// Finds M in GL2(Z) and t with M(A) + t = B as point sets of hull corners.
inline std::optional<std::pair<Mat2, Pt>> unimodular_map(const std::vector<Pt>& A, const std::vector<Pt>& B) {
    if (A.size() != B.size() || A.empty()) return std::nullopt;
    std::set<Pt> target(B.begin(), B.end());
    auto check = [&](const Mat2& M, const Pt& t) {
        if (M.det() != 1 && M.det() != -1) return false;
        for (const auto& p : A)
            if (!target.count(M(p) + t)) return false;
        return true;
    };
    std::size_t n = A.size();
    if (n == 1) return std::make_pair(Mat2{}, B[0] - A[0]);
    if (n == 2) {
        if (lattice_length(A[1] - A[0]) != lattice_length(B[1] - B[0])) return std::nullopt;
        // send primitive u of A to primitive w of B; complete both to bases
        Pt u = primitive(A[1] - A[0]), w = primitive(B[1] - B[0]);
        auto complete = [](Pt v) {  // integer vector with det(v, c) = 1
            std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1, a = v.x, b = v.y;
            while (b != 0) {
                std::int64_t q = a / b;
                std::tie(a, b) = std::make_pair(b, a - q * b);
                std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
                std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
            }
            // x0*v.x + y0*v.y = a = +-1
            return a == 1 ? Pt{-y0, x0} : Pt{y0, -x0};
        };
        Pt cu = complete(u), cw = complete(w);
        // M = [w cw] [u cu]^-1, det [u cu] = 1
        Mat2 Uinv{cu.y, -cu.x, -u.y, u.x};
        Mat2 W{w.x, cw.x, w.y, cw.y};
        Mat2 M{W.a * Uinv.a + W.b * Uinv.c, W.a * Uinv.b + W.b * Uinv.d, W.c * Uinv.a + W.d * Uinv.c,
               W.c * Uinv.b + W.d * Uinv.d};
        return std::make_pair(M, B[0] - M(A[0]));
    }
    Pt e1 = A[1] - A[0], e2 = A[n - 1] - A[0];
    std::int64_t det = cross(e1, e2);
    for (std::size_t j = 0; j < n; ++j)
        for (int dir : {1, -1}) {
            Pt f1 = B[(j + n + dir) % n] - B[j], f2 = B[(j + n - dir) % n] - B[j];
            // M [e1 e2] = [f1 f2]  =>  M = [f1 f2] adj([e1 e2]) / det
            std::int64_t ma = f1.x * e2.y - f2.x * e1.y, mb = -f1.x * e2.x + f2.x * e1.x;
            std::int64_t mc = f1.y * e2.y - f2.y * e1.y, md = -f1.y * e2.x + f2.y * e1.x;
            if (ma % det || mb % det || mc % det || md % det) continue;
            Mat2 M{ma / det, mb / det, mc / det, md / det};
            Pt t = B[j] - M(A[0]);
            if (check(M, t)) return std::make_pair(M, t);
        }
    return std::nullopt;
}

struct MatchingPolygon {
    std::map<Pt, std::vector<int>> points;  // lattice point -> matching indices
    std::vector<Pt> hull;
    std::int64_t boundary_count = 0, interior_count = 0;
    std::vector<HullEdge> edges;

    bool is_corner(const Pt& p) const { return std::find(hull.begin(), hull.end(), p) != hull.end(); }
    PolygonShape shape() const { return shape_of(hull); }
};

inline MatchingPolygon matching_polygon(const std::vector<PerfectMatching>& ms) {
    if (ms.empty()) throw Error("no perfect matchings");
    MatchingPolygon mp;
    std::vector<Pt> pts;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        mp.points[ms[i].point].push_back(static_cast<int>(i));
        pts.push_back(ms[i].point);
    }
    mp.hull = convex_hull(pts);
    mp.boundary_count = boundary_points(mp.hull);
    mp.interior_count = interior_points(mp.hull);
    mp.edges = hull_edges(mp.hull);
    return mp;
}

// Matchings with homology points attached, plus the polygon. Torus mode only.
struct MatchingData {
    std::vector<PerfectMatching> matchings;
    MatchingPolygon polygon;
};

inline MatchingData matching_data(const Dimer& d, const Homology& H) {
    MatchingData md{enumerate_matchings(d), {}};
    attach_points(d, H, md.matchings);
    md.polygon = matching_polygon(md.matchings);
    return md;
}

}  // namespace dimerlab
