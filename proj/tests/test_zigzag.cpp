#include "corpus.hpp"
#include "dimerlab/zigzag.hpp"

#include <gtest/gtest.h>

using namespace dimerlab;

namespace {

const std::vector<std::string> consistent_tori{"torus1", "spp", "gallery1", "g2hex"};

}  // namespace

TEST(Zigzag, EveryArrowOnceEvenOnceOdd) {
    for (const auto& name : corpus_names()) {
        auto d = load(name);
        auto zs = zigzag_cycles(d);
        std::vector<int> even(d.arrow_count() + 1, 0), odd(d.arrow_count() + 1, 0);
        for (const auto& z : zs)
            for (std::size_t i = 0; i < z.arrows.size(); ++i) ++(i % 2 ? odd : even)[z.arrows[i]];
        for (int a = 1; a <= d.arrow_count(); ++a) {
            EXPECT_EQ(even[a], 1) << name << " " << a;
            EXPECT_EQ(odd[a], 1) << name << " " << a;
        }
        // zigzag cycles are the vertices of the mirror
        EXPECT_EQ(static_cast<int>(zs.size()), mirror(d).vertex_count) << name;
    }
}

TEST(Zigzag, ZigOfAIsZagOfNext) {
    for (const auto& name : corpus_names()) {
        auto d = load(name);
        auto zs = zigzag_cycles(d);
        auto own = zig_owner(d, zs);
        for (int a = 1; a <= d.arrow_count(); ++a) {
            // zag ray from sp(a): sp(a), sm(sp(a)), ... walks the same cycle as the zig ray from a
            const auto& z = zs[own[a]].arrows;
            std::size_t i = 0;
            while (i < z.size() && z[i] != a) i += 2;
            ASSERT_LT(i, z.size());
            int b = d.sp[a];
            for (std::size_t s = 1; s <= z.size(); ++s) {
                EXPECT_EQ(z[(i + s) % z.size()], b);
                b = s % 2 ? d.sm[b] : d.sp[b];
            }
        }
    }
}

TEST(Zigzag, SuspendedPinchpointHasFive) {
    auto d = load("spp");
    EXPECT_EQ(zigzag_cycles(d).size(), 5u);
    auto m = mirror(d);
    EXPECT_EQ(surface_invariants(m).genus, 0);
    EXPECT_EQ(m.vertex_count, 5);
}

TEST(Zigzag, ClassesSumToZero) {
    for (const auto& name : {"torus1", "spp", "gallery1", "gallery2", "g2hex"}) {
        auto d = load(name);
        auto H = homology(d);
        Pt sum{};
        for (const auto& z : zigzag_cycles(d, &H)) sum = sum + z.hclass;
        EXPECT_EQ(sum, Pt{}) << name;
    }
}

TEST(Zigzag, ClassesAreOutwardNormals) {
    for (const auto& name : consistent_tori) {
        auto d = load(name);
        auto H = homology(d);
        std::multiset<Pt> classes, normals;
        for (const auto& z : zigzag_cycles(d, &H)) classes.insert(z.hclass);
        for (const auto& e : matching_data(d, H).polygon.edges)
            for (std::int64_t k = 0; k < e.length; ++k) normals.insert(e.normal);
        EXPECT_EQ(classes, normals) << name;
    }
}

TEST(Consistency, Gallery) {
    std::vector<std::pair<std::string, bool>> expect{{"gallery1", true}, {"gallery2", false}, {"gallery3", true}};
    for (const auto& [name, ok] : expect) {
        auto d = load(name);
        auto r = is_consistent(d, homology(d));
        EXPECT_EQ(r.consistent, ok) << name;
        EXPECT_EQ(r.ray_check, ok) << name;
    }
    std::vector<int> genus;
    for (const auto& name : {"gallery1", "gallery2", "gallery3", "gallery4"}) {
        genus.push_back(surface_invariants(load(name)).genus);
        EXPECT_EQ(surface_invariants(mirror(load(name))).genus, 1) << name;
    }
    EXPECT_EQ(genus, (std::vector<int>{1, 1, 2, 0}));
}

TEST(Consistency, GallerySecondWitness) {
    // arrows 3 and 5 are x and z in the corpus file
    auto d = load("gallery2");
    auto r = is_consistent(d, homology(d));
    EXPECT_FALSE(r.well_ordered);
    EXPECT_FALSE(r.order_failures.empty());
    bool found = std::any_of(r.overlaps.begin(), r.overlaps.end(), [](const RayOverlap& o) { return o.start == 3 && o.shared == 5; });
    EXPECT_TRUE(found);
}

TEST(Consistency, RayCheckAgreesWithWellOrdered) {
    for (const auto& name : corpus_names()) {
        auto d = load(name);
        auto H = homology(d);
        auto r = is_consistent(d, H);
        if (H.torus()) {
            EXPECT_EQ(r.ray_check, r.well_ordered) << name;
            EXPECT_EQ(r.consistent, r.well_ordered && r.zero_class.empty()) << name;
        } else {
            EXPECT_EQ(r.consistent, r.ray_check) << name;
        }
    }
    for (const auto& name : consistent_tori) {
        auto d = load(name);
        EXPECT_TRUE(is_consistent(d, homology(d)).consistent) << name;
    }
}

TEST(Consistency, ReducedDimersAreWellOrdered) {
    auto d = load("g2hex-right");
    auto r = is_consistent(d, homology(d));
    EXPECT_TRUE(r.well_ordered);
    EXPECT_TRUE(r.ray_check);
}

TEST(WordProblem, SurfaceGroupOnGenusTwo) {
    auto d = load("gallery3");
    auto H = homology(d);
    SurfaceGroup G(d, H);
    EXPECT_EQ(G.genus(), 2);
    // face boundaries are trivial, a single non-tree arrow is not
    for (const auto& f : d.faces) {
        std::vector<std::pair<int, int>> loop;
        for (int a : f) loop.emplace_back(a, 1);
        EXPECT_TRUE(G.trivial_loop(loop));
    }
    for (int a = 1; a <= d.arrow_count(); ++a)
        if (!H.in_tree[a]) {
            EXPECT_FALSE(G.trivial_loop({{a, 1}})) << a;
        }
}
