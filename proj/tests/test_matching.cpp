#include "corpus.hpp"
#include "dimerlab/matching.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dimerlab;

namespace {

// every arrow subset meeting each face exactly once
std::vector<std::vector<int>> brute_matchings(const Dimer& d) {
    int E = d.arrow_count();
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (1u << E); ++mask) {
        std::vector<int> hits(d.face_count(), 0);
        std::vector<int> set;
        for (int a = 1; a <= E; ++a)
            if (mask >> (a - 1) & 1) {
                set.push_back(a);
                ++hits[d.pos_face[a]];
                ++hits[d.neg_face[a]];
            }
        if (std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; })) out.push_back(set);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<std::string> tori{"torus1", "spp", "gallery1", "gallery2", "g2hex"};

}  // namespace

TEST(Matchings, AgreeWithBruteForce) {
    for (const auto& name : corpus_names()) {
        auto d = load(name);
        auto ms = enumerate_matchings(d);
        std::vector<std::vector<int>> got;
        for (const auto& m : ms) got.push_back(m.arrows);
        EXPECT_EQ(got, brute_matchings(d)) << name;
    }
}

TEST(Matchings, SuspendedPinchpoint) {
    auto d = load("spp");
    auto md = matching_data(d, homology(d));
    EXPECT_EQ(md.matchings.size(), 6u);
    EXPECT_EQ(md.polygon.hull.size(), 4u);
    EXPECT_EQ(md.polygon.boundary_count, 5);
    EXPECT_EQ(md.polygon.interior_count, 0);
    int non_corner = 0;
    for (const auto& [p, idx] : md.polygon.points)
        if (!md.polygon.is_corner(p)) {
            ++non_corner;
            EXPECT_EQ(idx.size(), 2u);
        }
    EXPECT_EQ(non_corner, 1);
}

TEST(Matchings, MirrorKeepsMatchings) {
    for (const auto& name : corpus_names()) {
        auto d = load(name);
        auto a = enumerate_matchings(d), b = enumerate_matchings(mirror(d));
        ASSERT_EQ(a.size(), b.size()) << name;
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].arrows, b[i].arrows) << name;
    }
}

TEST(Matchings, MeetEveryFaceBoundaryOnce) {
    for (const auto& name : corpus_names()) {
        auto d = load(name);
        for (const auto& m : enumerate_matchings(d)) {
            Chain c = m.chain(d);
            for (int f = 0; f < d.face_count(); ++f) EXPECT_EQ(pairing(c, face_boundary(d, f)), 1) << name;
        }
    }
}

TEST(Matchings, PointsShiftWithReferenceClass) {
    // the point of a matching is its pairing with the basis cycles; shifting a cycle by a face boundary
    // changes nothing because every matching meets every face once
    for (const auto& name : tori) {
        auto d = load(name);
        auto H = homology(d);
        auto md = matching_data(d, H);
        for (const auto& m : md.matchings)
            for (int f = 0; f < d.face_count(); ++f) {
                Chain b0 = H.basis[0] + face_boundary(d, f) - face_boundary(d, (f + 1) % d.face_count());
                EXPECT_EQ(pairing(m.chain(d), b0), m.point.x) << name;
            }
    }
}

TEST(Polygon, HullContainsEveryPointAndPick) {
    for (const auto& name : tori) {
        auto d = load(name);
        auto md = matching_data(d, homology(d));
        const auto& P = md.polygon;
        for (const auto& [p, idx] : P.points) EXPECT_GE(locate(P.hull, p), 0) << name;
        for (const auto& c : P.hull) EXPECT_TRUE(P.points.count(c)) << name;
        // lattice count against Pick
        auto pts = lattice_points_in(P.hull);
        std::int64_t inside = 0;
        for (const auto& p : pts) inside += locate(P.hull, p) == 1;
        EXPECT_EQ(inside, P.interior_count) << name;
        EXPECT_EQ(static_cast<std::int64_t>(pts.size()) - inside, P.boundary_count) << name;
        EXPECT_GT(twice_area(P.hull), 0) << name;
    }
}

TEST(Polygon, ConvexHullAgainstOracle) {
    std::mt19937 rng(20261019);
    std::uniform_int_distribution<int> coord(-4, 4);
    for (int round = 0; round < 200; ++round) {
        std::vector<Pt> pts;
        int n = 1 + round % 9;
        for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
        auto h = convex_hull(pts);
        std::set<Pt> uniq(pts.begin(), pts.end());
        std::set<Pt> corners;
        for (const auto& p : uniq) {
            bool extreme = false;
            // p is a strict corner iff some direction has p as the unique maximizer
            for (int ux = -9; ux <= 9 && !extreme; ++ux)
                for (int uy = -9; uy <= 9 && !extreme; ++uy) {
                    if (ux == 0 && uy == 0) continue;
                    Pt u{ux, uy};
                    bool unique = true;
                    for (const auto& r : uniq)
                        if (r != p && dot(r, u) >= dot(p, u)) unique = false;
                    extreme = unique;
                }
            if (extreme) corners.insert(p);
        }
        EXPECT_EQ(std::set<Pt>(h.begin(), h.end()), corners);
        if (h.size() >= 3) {
            for (std::size_t i = 0; i < h.size(); ++i)
                EXPECT_GT(cross(h[(i + 1) % h.size()] - h[i], h[(i + 2) % h.size()] - h[i]), 0);
        }
    }
}

TEST(Polygon, UnimodularMap) {
    std::vector<Pt> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    std::vector<Pt> skew{{2, 1}, {3, 1}, {4, 2}, {3, 2}};  // sheared and moved
    auto m = unimodular_map(square, skew);
    ASSERT_TRUE(m);
    for (const auto& p : square) EXPECT_GE(locate(skew, m->first(p) + m->second), 0);
    std::vector<Pt> big{{0, 0}, {2, 0}, {2, 1}, {0, 1}};
    EXPECT_FALSE(unimodular_map(square, big));
    std::vector<Pt> tri{{0, 0}, {1, 0}, {0, 1}};
    EXPECT_FALSE(unimodular_map(square, tri));
    std::vector<Pt> seg{{0, 0}, {3, 0}}, seg2{{1, 1}, {4, 4}};
    EXPECT_TRUE(unimodular_map(seg, seg2));
    EXPECT_FALSE(unimodular_map(seg, std::vector<Pt>{{0, 0}, {2, 0}}));
}

TEST(Polygon, ShapeIsBasisFree) {
    auto d = load("g2hex");
    auto P = matching_data(d, homology(d)).polygon;
    Mat2 M{2, 1, 1, 1};
    std::vector<Pt> moved;
    for (const auto& p : P.hull) moved.push_back(M(p) + Pt{5, -3});
    EXPECT_EQ(shape_of(convex_hull(moved)), P.shape());
    EXPECT_TRUE(unimodular_map(P.hull, convex_hull(moved)));
}

TEST(Polygon, NotATorus) {
    auto d = load("gallery3");
    EXPECT_THROW(matching_data(d, homology(d)), Error);
}
