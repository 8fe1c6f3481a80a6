#include "corpus.hpp"
#include "dimerlab/reduce.hpp"

#include <gtest/gtest.h>

using namespace dimerlab;

namespace {

std::vector<Rational> g2hex_weights(const Dimer& d) {
    return parse_arrow_values(read_corpus_file("g2hex.w"), d.arrow_count(), "weight");
}

const PolygonShape unit_square{4, 4, 0, {1, 1, 1, 1}};

}  // namespace

TEST(Reduce, UpperLeftNodeIsConifold) {
    auto d = load("g2hex");
    auto R = reduce_dimer(d, homology(d), contraction_rep(d, {1, 3, 5, 7, 10, 11}));
    ASSERT_TRUE(R.result);
    const auto& Q = *R.result;
    EXPECT_EQ(R.orbit_dimension, 0);
    EXPECT_EQ(Q.vertex_count, 2);
    EXPECT_EQ(Q.arrow_count(), 4);
    EXPECT_EQ(surface_invariants(Q).chi, 0);
    EXPECT_TRUE(R.well_ordered);
    // g2hex-right keeps arrows 6, 12, 15, 16
    EXPECT_EQ(R.origin, (std::vector<int>{0, 6, 12, 15, 16}));
    EXPECT_EQ(R.removed_digons.size(), 3u);
    auto HQ = homology(Q);
    EXPECT_EQ(matching_data(Q, HQ).polygon.shape(), unit_square);
}

TEST(Reduce, LowerLeftNodeIsConifold) {
    auto d = load("g2hex");
    auto R = reduce_dimer(d, homology(d), contraction_rep(d, {2, 5, 8, 10, 12, 16}));
    ASSERT_TRUE(R.result);
    const auto& Q = *R.result;
    EXPECT_EQ(Q.vertex_count, 2);
    EXPECT_EQ(Q.arrow_count(), 4);
    EXPECT_EQ(surface_invariants(Q).chi, 0);
    EXPECT_TRUE(R.well_ordered);
    auto HQ = homology(Q);
    EXPECT_EQ(matching_data(Q, HQ).polygon.shape(), unit_square);
    // both conifolds are the same dimer
    auto first = reduce_dimer(d, homology(d), contraction_rep(d, {1, 3, 5, 7, 10, 11}));
    EXPECT_TRUE(isomorphism(Q, *first.result));
}

TEST(Reduce, RightNodeMatchesCorpusFile) {
    auto d = load("g2hex");
    auto R = reduce_dimer(d, homology(d), contraction_rep(d, {1, 4, 6, 16}));
    ASSERT_TRUE(R.result);
    const auto& Q = *R.result;
    EXPECT_EQ(Q.vertex_count, 4);
    EXPECT_EQ(Q.arrow_count(), 8);
    EXPECT_TRUE(R.well_ordered);
    auto expected = load("g2hex-right");
    EXPECT_TRUE(isomorphism(Q, expected));
    auto HQ = homology(Q);
    auto shape = matching_data(Q, HQ).polygon.shape();
    EXPECT_EQ(shape.corners, 4u);
    EXPECT_EQ(shape.interior, 1);
}

TEST(Reduce, ListedRightNodeSetIsNotAMatchingUnion) {
    auto d = load("g2hex");
    EXPECT_THROW(reduce_dimer(d, homology(d), contraction_rep(d, {1, 4, 12, 16})), ValidationError);
}

TEST(Reduce, LowerOrbitsReportMoritaType) {
    auto d = load("g2hex");
    auto H = homology(d);
    auto M = tropical_model(d, H, g2hex_weights(d));
    auto st = M.stable_matchings();
    auto one = reduce_dimer(d, H, rep_vanishing_on(d, {&M.matchings[st[0]]}));
    EXPECT_EQ(one.orbit_dimension, 2);
    EXPECT_FALSE(one.result);
    EXPECT_EQ(one.vertex_classes.size(), 1u);
    const auto& e = M.subdivision.edges[0];
    auto two = reduce_dimer(d, H, rep_vanishing_on(d, {&M.matchings[M.stable_at[e.from]], &M.matchings[M.stable_at[e.to]]}));
    EXPECT_EQ(two.orbit_dimension, 1);
    EXPECT_FALSE(two.result);
    EXPECT_EQ(two.morita, "C[C*] x C[X,Y]*Z_" + std::to_string(e.length));
}

TEST(Reduce, VertexClassesAreConnectedByNonzeroArrows) {
    auto d = load("g2hex");
    auto R = reduce_dimer(d, homology(d), contraction_rep(d, {1, 3, 5, 7, 10, 11}));
    std::size_t total = 0;
    for (const auto& cls : R.vertex_classes) {
        total += cls.size();
        if (cls.size() < 2) continue;
        for (int v : cls) {
            bool linked = false;
            for (int a : R.nonzero_arrows)
                if ((d.head[a] == v || d.tail[a] == v) &&
                    std::count(cls.begin(), cls.end(), d.head[a] + d.tail[a] - v))
                    linked = true;
            EXPECT_TRUE(linked);
        }
    }
    EXPECT_EQ(total, static_cast<std::size_t>(d.vertex_count));
    EXPECT_EQ(R.vertex_classes.size(), static_cast<std::size_t>(R.result->vertex_count));
}

TEST(Reduce, EssentialLoopsOnlyOnLowerOrbits) {
    // torus1 has one vertex, so the nonzero arrow is an essential loop; the orbit is 1-dimensional
    auto d = load("torus1");
    auto R = reduce_dimer(d, homology(d), contraction_rep(d, {1}));
    EXPECT_EQ(R.orbit_dimension, 1);
    EXPECT_FALSE(R.result);
    EXPECT_EQ(R.morita, "C[C*] x C[X,Y]*Z_1");
}

TEST(Reduce, RejectsNonMatchingZeroSet) {
    auto d = load("spp");
    std::vector<Rational> rho(d.arrow_count() + 1, Rational(1));
    rho[1] = 0;
    EXPECT_THROW(reduce_dimer(d, homology(d), rho), ValidationError);
    rho.assign(d.arrow_count() + 1, Rational(1));
    EXPECT_THROW(reduce_dimer(d, homology(d), rho), ValidationError);
}

TEST(Reduce, ZeroEverywhereKeepsDimer) {
    auto d = load("g2hex");
    auto R = reduce_dimer(d, homology(d), std::vector<Rational>(d.arrow_count() + 1, Rational(0)));
    ASSERT_TRUE(R.result);
    EXPECT_TRUE(isomorphism(*R.result, d));
    EXPECT_TRUE(R.removed_digons.empty());
}

TEST(CellCheck, EveryNodeOfG2Hex) {
    auto d = load("g2hex");
    auto H = homology(d);
    auto M = tropical_model(d, H, g2hex_weights(d));
    std::multiset<std::int64_t> interiors;
    for (int n = 0; n < static_cast<int>(M.subdivision.cells.size()); ++n) {
        auto C = cell_polygon_check(d, H, M, n);
        EXPECT_TRUE(C.matches) << n;
        EXPECT_TRUE(C.reduction.well_ordered) << n;
        EXPECT_EQ(surface_invariants(*C.reduction.result).chi, 0);
        // zigzags of the reduced dimer match the spider edges and legs at the node
        EXPECT_EQ(C.zigzags, C.spider_valency) << n;
        interiors.insert(C.cell.interior);
    }
    EXPECT_EQ(interiors, (std::multiset<std::int64_t>{0, 0, 1}));
}

TEST(CellCheck, NodesMatchListedContractions) {
    auto d = load("g2hex");
    auto H = homology(d);
    auto M = tropical_model(d, H, g2hex_weights(d));
    std::set<std::vector<int>> contracted;
    for (int n = 0; n < 3; ++n) contracted.insert(cell_polygon_check(d, H, M, n).reduction.nonzero_arrows);
    EXPECT_EQ(contracted, (std::set<std::vector<int>>{{1, 3, 5, 7, 10, 11}, {2, 5, 8, 10, 12, 16}, {1, 4, 6, 16}}));
}

TEST(CellCheck, ZeroWeightNodeIsWholeDimer) {
    for (const auto& name : {"spp", "gallery1", "g2hex"}) {
        auto d = load(name);
        auto H = homology(d);
        auto M = tropical_model(d, H, std::vector<Rational>(d.arrow_count() + 1, Rational(0)));
        auto C = cell_polygon_check(d, H, M, 0);
        EXPECT_TRUE(C.matches) << name;
        EXPECT_EQ(C.cell, M.polygon.shape()) << name;
    }
}

TEST(Digons, PreserveMatchingPolygon) {
    auto d = load("g2hex");
    auto H = homology(d);
    for (const auto& set : std::vector<std::vector<int>>{{1, 3, 5, 7, 10, 11}, {2, 5, 8, 10, 12, 16}, {1, 4, 6, 16}}) {
        auto with = reduce_dimer(d, H, contraction_rep(d, set));
        auto without = reduce_dimer(d, H, contraction_rep(d, set), false);
        EXPECT_FALSE(with.removed_digons.empty());
        EXPECT_TRUE(without.removed_digons.empty());
        EXPECT_EQ(without.result->arrow_count(), with.result->arrow_count() + 2 * static_cast<int>(with.removed_digons.size()));
        auto a = matching_data(*with.result, homology(*with.result)).polygon;
        auto b = matching_data(*without.result, homology(*without.result)).polygon;
        EXPECT_EQ(a.shape(), b.shape());
        EXPECT_TRUE(unimodular_map(a.hull, b.hull));
    }
}

TEST(Isomorphism, DetectsDifferences) {
    auto a = load("g2hex"), b = load("g2hex-right");
    EXPECT_FALSE(isomorphism(a, b));
    auto phi = isomorphism(a, normal_form(a));
    ASSERT_TRUE(phi);
    EXPECT_EQ((*phi)[1], 1);
    EXPECT_TRUE(isomorphism(b, mirror(mirror(b))));
}
