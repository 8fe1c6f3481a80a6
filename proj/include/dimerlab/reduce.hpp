#pragma once

#include "dimerlab/tropical.hpp"
#include "dimerlab/zigzag.hpp"

namespace dimerlab {

struct Reduction {
    Dimer source;
    std::vector<int> zero_arrows, nonzero_arrows;
    std::vector<std::vector<int>> vertex_classes;
    int orbit_dimension = -1;  // of the torus orbit of the representation: 0, 1 or 2
    std::string morita;        // description of the local algebra
    std::optional<Dimer> result;  // only for 0-dimensional orbits
    std::vector<int> origin;      // result arrow -> source arrow
    std::vector<int> removed_loops;
    std::vector<std::pair<int, int>> removed_digons;  // source arrow ids
    std::vector<std::string> log;
    bool well_ordered = false;
};

namespace detail {

// Face permutations restricted to the surviving arrows.
struct FacePerms {
    Perm sp, sm;
    std::vector<char> alive;

    int pred(const Perm& p, int x) const {
        for (std::size_t q = 1; q < p.size(); ++q)
            if (alive[q] && p[q] == x) return static_cast<int>(q);
        throw Error("face permutation is broken");
    }

    std::vector<int> cycle_after(const Perm& p, int x) const {
        std::vector<int> out;
        for (int y = p[x]; y != x; y = p[y]) out.push_back(y);
        return out;
    }

    void splice(Perm& p, int x) {
        int q = pred(p, x);
        p[q] = p[x];
        p[x] = x;
    }

    void remove(int x) {
        splice(sp, x);
        splice(sm, x);
        alive[x] = 0;
    }

    bool loop_face(int x) const { return sp[x] == x || sm[x] == x; }
};

inline std::string arrow_list(const std::vector<int>& as) {
    std::string s = "{";
    for (std::size_t i = 0; i < as.size(); ++i) s += (i ? "," : "") + std::to_string(as[i]);
    return s + "}";
}

}  // namespace detail

// Matchings contained in the zero set of rho.
inline std::vector<int> supported_matchings(const std::vector<PerfectMatching>& ms, const std::vector<Rational>& rho) {
    std::vector<int> out;
    for (std::size_t i = 0; i < ms.size(); ++i)
        if (std::all_of(ms[i].arrows.begin(), ms[i].arrows.end(), [&](int a) { return rho[a] == 0; }))
            out.push_back(static_cast<int>(i));
    return out;
}

inline Reduction reduce_dimer(const Dimer& d, const Homology& H, const std::vector<Rational>& rho,
                              bool remove_two_cycles = true) {
    int E = d.arrow_count();
    if (static_cast<int>(rho.size()) != E + 1) throw Error("representation vector has the wrong length");
    Reduction R;
    R.source = d;
    for (int a = 1; a <= E; ++a) (rho[a] == 0 ? R.zero_arrows : R.nonzero_arrows).push_back(a);

    auto md = matching_data(d, H);
    auto support = supported_matchings(md.matchings, rho);
    std::vector<char> covered(E + 1, 0);
    std::vector<Pt> pts;
    for (int m : support) {
        for (int a : md.matchings[m].arrows) covered[a] = 1;
        pts.push_back(md.matchings[m].point);
    }
    for (int a : R.zero_arrows)
        if (!covered[a])
            throw ValidationError("zero set is not a union of perfect matchings (arrow " + std::to_string(a) +
                                  " is in no supported matching)");
    if (support.empty()) throw ValidationError("representation vanishes on no perfect matching");

    // vertex classes: connected by nonzero arrows
    detail::UnionFind uf(d.vertex_count + 1);
    int closing = 0;  // first nonzero arrow closing a cycle
    for (int a : R.nonzero_arrows)
        if (!uf.unite(d.head[a], d.tail[a]) && closing == 0) closing = a;
    std::map<int, std::vector<int>> classes;
    for (int v = 1; v <= d.vertex_count; ++v) classes[uf.find(v)].push_back(v);
    for (auto& [root, vs] : classes) R.vertex_classes.push_back(vs);

    auto hull = convex_hull(pts);
    R.orbit_dimension = 2 - static_cast<int>(std::min<std::size_t>(hull.size(), 3) - 1);
    if (R.orbit_dimension == 2) {
        R.morita = "C[C* x C* x C]";
        R.log.push_back("one supported matching: 2-dimensional orbit, no dimer built");
        return R;
    }
    if (R.orbit_dimension == 1) {
        auto k = lattice_length(hull[1] - hull[0]);
        R.morita = "C[C*] x C[X,Y]*Z_" + std::to_string(k);
        R.log.push_back("supported matchings on a segment of length " + std::to_string(k) +
                        ": 1-dimensional orbit, no dimer built");
        return R;
    }
    R.morita = "Jacobi algebra of the reduced dimer";

    // for a 0-dimensional orbit the nonzero arrows must form a forest
    if (int a = closing) {
        // closing a cycle: its class decides between an essential and a contractible loop
        Chain c = zero_chain(d);
        c[a] = 1;
        std::vector<std::vector<std::pair<int, int>>> adj(d.vertex_count + 1);
        for (int b : R.nonzero_arrows) {
            if (b == a) break;
            adj[d.tail[b]].push_back({b, d.head[b]});
            adj[d.head[b]].push_back({-b, d.tail[b]});
        }
        // path from head(a) back to tail(a) inside the forest built so far
        std::vector<int> via(d.vertex_count + 1, 0);
        std::vector<char> seen(d.vertex_count + 1, 0);
        std::deque<int> q{d.head[a]};
        seen[d.head[a]] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (auto [b, w] : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    via[w] = b;
                    q.push_back(w);
                }
        }
        for (int v = d.tail[a]; v != d.head[a];) {
            int b = via[v];
            c[std::abs(b)] += b > 0 ? 1 : -1;
            v = b > 0 ? d.tail[b] : d.head[-b];
        }
        if (H.class_of(c) != Pt{})
            throw ValidationError("nonzero arrows contain an essential cycle through arrow " + std::to_string(a));
        throw ValidationError("nonzero arrows contain a contractible cycle through arrow " + std::to_string(a) +
                              "; contraction needs a forest");
    }

    detail::FacePerms fp{d.sp, d.sm, std::vector<char>(E + 1, 1)};
    fp.alive[0] = 0;
    for (int a : R.nonzero_arrows) fp.remove(a);
    R.log.push_back("contracted " + detail::arrow_list(R.nonzero_arrows));

    // loops bounding a one-arrow face are contractible and carry no information
    for (int a = 1; a <= E; ++a)
        if (fp.alive[a] && uf.find(d.head[a]) == uf.find(d.tail[a]) && fp.loop_face(a)) {
            fp.remove(a);
            R.removed_loops.push_back(a);
        }
    if (!R.removed_loops.empty()) R.log.push_back("removed loops " + detail::arrow_list(R.removed_loops));

    // integrate out 2-cycles, lowest arrow first, until none is left
    for (bool changed = remove_two_cycles; changed;) {
        changed = false;
        for (int a = 1; a <= E && !changed; ++a) {
            if (!fp.alive[a]) continue;
            for (bool positive : {true, false}) {
                Perm& own = positive ? fp.sp : fp.sm;
                Perm& other = positive ? fp.sm : fp.sp;
                int b = own[a];
                if (b == a || own[b] != a) continue;
                auto g = fp.cycle_after(other, a), h = fp.cycle_after(other, b);
                if (std::find(g.begin(), g.end(), b) != g.end()) continue;  // same opposite face
                if (g.empty() && h.empty()) continue;
                std::vector<int> merged = g;
                merged.insert(merged.end(), h.begin(), h.end());
                for (std::size_t i = 0; i < merged.size(); ++i) other[merged[i]] = merged[(i + 1) % merged.size()];
                other[a] = a;
                other[b] = b;
                own[a] = a;
                own[b] = b;
                fp.alive[a] = fp.alive[b] = 0;
                R.removed_digons.push_back(std::minmax(a, b));
                R.log.push_back("removed 2-cycle " + detail::arrow_list({std::min(a, b), std::max(a, b)}));
                changed = true;
                break;
            }
        }
    }

    // renumber the surviving arrows
    std::vector<int> new_id(E + 1, 0);
    R.origin.push_back(0);
    for (int a = 1; a <= E; ++a)
        if (fp.alive[a]) {
            new_id[a] = static_cast<int>(R.origin.size());
            R.origin.push_back(a);
        }
    int E2 = static_cast<int>(R.origin.size()) - 1;
    if (E2 == 0) throw ValidationError("reduction removed every arrow");
    Perm sp(E2 + 1, 0), sm(E2 + 1, 0);
    for (int i = 1; i <= E2; ++i) {
        sp[i] = new_id[fp.sp[R.origin[i]]];
        sm[i] = new_id[fp.sm[R.origin[i]]];
    }
    Dimer Q = from_permutations(d.name + "-reduced", sp, sm);
    auto inv = surface_invariants(Q);
    if (inv.chi != 0) throw ValidationError("reduced dimer is not on a torus (chi = " + std::to_string(inv.chi) + ")");
    auto HQ = homology(Q);
    R.well_ordered = HQ.torus() && is_consistent(Q, HQ).well_ordered;
    R.log.push_back("result: " + std::to_string(Q.vertex_count) + " vertices, " + std::to_string(E2) + " arrows, " +
                    std::to_string(Q.face_count()) + " faces" + (R.well_ordered ? ", well-ordered" : ", not well-ordered"));
    R.result = std::move(Q);
    return R;
}

// rho = 1 on the given arrows, 0 elsewhere
inline std::vector<Rational> contraction_rep(const Dimer& d, const std::vector<int>& arrows) {
    std::vector<Rational> rho(d.arrow_count() + 1, Rational(0));
    for (int a : arrows) {
        if (a < 1 || a > d.arrow_count()) throw Error("arrow " + std::to_string(a) + " out of range");
        rho[a] = 1;
    }
    return rho;
}

// rho = 0 exactly on the given matchings
inline std::vector<Rational> rep_vanishing_on(const Dimer& d, const std::vector<const PerfectMatching*>& ms) {
    std::vector<Rational> rho(d.arrow_count() + 1, Rational(1));
    rho[0] = 0;
    for (auto* m : ms)
        for (int a : m->arrows) rho[a] = 0;
    return rho;
}

struct CellCheck {
    int node = -1;
    Reduction reduction;
    PolygonShape cell, reduced;
    bool matches = false;
    std::size_t zigzags = 0, spider_valency = 0;
};

// Reduces at the representation vanishing on the stable matchings of a cell and compares polygons.
inline CellCheck cell_polygon_check(const Dimer& d, const Homology& H, const TropicalModel& M, int node) {
    if (!M.degeneracy.nondegenerate) throw ValidationError("weight is degenerate: a semistable matching is not stable");
    if (node < 0 || node >= static_cast<int>(M.subdivision.cells.size())) throw Error("spider node out of range");
    CellCheck C;
    C.node = node;
    const auto& cell = M.subdivision.cells[node];
    std::vector<const PerfectMatching*> ms;
    std::vector<Pt> corners;
    for (int t : cell.corners) {
        ms.push_back(&M.matchings[M.stable_at[t]]);
        corners.push_back(M.f.terms[t].point);
    }
    C.reduction = reduce_dimer(d, H, rep_vanishing_on(d, ms));
    const Dimer& Q = *C.reduction.result;
    auto HQ = homology(Q);
    auto mq = matching_data(Q, HQ);
    C.cell = shape_of(corners);
    C.reduced = mq.polygon.shape();
    C.matches = C.cell == C.reduced && unimodular_map(mq.polygon.hull, convex_hull(corners)).has_value();
    C.zigzags = zigzag_cycles(Q).size();
    for (const auto& e : M.curve.edges)
        if (e.from == node || e.to == node) C.spider_valency += e.multiplicity;
    for (const auto& l : M.curve.legs)
        if (l.node == node) C.spider_valency += l.multiplicity;
    return C;
}

}  // namespace dimerlab
