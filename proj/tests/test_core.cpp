#include "corpus.hpp"
#include "dimerlab/homology.hpp"

#include <gtest/gtest.h>

using namespace dimerlab;

TEST(Parse, Torus1Counts) {
    auto d = load("torus1");
    EXPECT_EQ(d.arrow_count(), 3);
    EXPECT_EQ(d.vertex_count, 1);
    EXPECT_EQ(d.face_count(), 2);
}

TEST(Parse, G2HexCounts) {
    auto d = load("g2hex");
    EXPECT_EQ(d.arrow_count(), 16);
    EXPECT_EQ(d.vertex_count, 8);
    EXPECT_EQ(d.face_count(), 8);
}

TEST(Parse, CorpusShapes) {
    std::vector<std::tuple<int, int, int>> expect{{3, 1, 2}, {7, 3, 4},  {8, 4, 4},  {9, 3, 6},
                                                  {5, 1, 2}, {12, 6, 8}, {16, 8, 8}};
    for (std::size_t i = 0; i < corpus_names().size(); ++i) {
        auto d = load(corpus_names()[i]);
        EXPECT_EQ(std::make_tuple(d.arrow_count(), d.vertex_count, d.face_count()), expect[i]) << corpus_names()[i];
    }
}

TEST(Parse, EmptyFaceListRejected) {
    try {
        parse_dimer("dimer x\nvertices 1\narrow 1 1 1\nend\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("arrow in 0 positive faces"), std::string::npos) << e.what();
    }
}

TEST(Parse, SyntaxErrorHasPosition) {
    try {
        parse_dimer("dimer x\nvertices one\nend\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2 column 10"), std::string::npos) << e.what();
    }
}

TEST(Parse, NonComposableFace) {
    EXPECT_THROW(parse_dimer("dimer x\nvertices 2\narrow 1 1 2\narrow 2 1 2\nface + 1 2\nface - 2 1\nend\n"),
                 ValidationError);
}

TEST(Parse, HeadStarMismatch) {
    // one vertex, two loops, each a face of its own: two corner cycles at one vertex
    EXPECT_THROW(parse_dimer("dimer x\nvertices 1\narrow 1 1 1\narrow 2 1 1\nface + 1\nface + 2\nface - 1\nface - 2\nend\n"),
                 ValidationError);
}

TEST(Parse, RoundTrip) {
    for (const auto& n : corpus_names()) {
        auto d = load(n);
        auto again = parse_dimer(print_dimer(d));
        EXPECT_EQ(normal_form(d), again) << n;
        EXPECT_EQ(print_dimer(again), print_dimer(d)) << n;
    }
}

TEST(Permutations, CycleCountsMatchCells) {
    for (const auto& n : corpus_names()) {
        auto d = load(n);
        EXPECT_EQ(static_cast<int>(head_stars(d.sp, d.sm).size()), d.vertex_count) << n;
        EXPECT_EQ(static_cast<int>(cycles(d.sp).size()), d.pos_count) << n;
        EXPECT_EQ(static_cast<int>(cycles(d.sm).size()), d.face_count() - d.pos_count) << n;
    }
}

TEST(Surface, Invariants) {
    std::map<std::string, std::pair<int, int>> expect{
        {"torus1", {0, 1}},   {"spp", {0, 1}},       {"gallery1", {0, 1}}, {"gallery2", {0, 1}},
        {"gallery3", {-2, 2}}, {"gallery4", {2, 0}}, {"g2hex", {0, 1}}};
    for (auto& [n, cg] : expect) {
        auto s = surface_invariants(load(n));
        EXPECT_EQ(s.chi, cg.first) << n;
        EXPECT_EQ(s.genus, cg.second) << n;
    }
}

TEST(Mirror, Involution) {
    for (const auto& n : corpus_names()) {
        auto d = load(n);
        EXPECT_EQ(mirror(mirror(d)), normal_form(d)) << n;
    }
}

TEST(Mirror, HeadStarsAreZigzagSupports) {
    for (const auto& n : corpus_names()) {
        auto d = load(n);
        auto m = mirror(d);
        auto supports = cycles(compose(d.sm, d.sp));
        std::vector<std::vector<int>> stars;
        for (int v = 1; v <= m.vertex_count; ++v) {
            std::vector<int> s;
            for (int a = 1; a <= m.arrow_count(); ++a)
                if (m.head[a] == v) s.push_back(a);
            stars.push_back(s);
        }
        for (auto& s : supports) std::sort(s.begin(), s.end());
        std::sort(supports.begin(), supports.end());
        std::sort(stars.begin(), stars.end());
        EXPECT_EQ(stars, supports) << n;
    }
}

TEST(Mirror, KnownGenera) {
    EXPECT_EQ(surface_invariants(mirror(load("gallery3"))).genus, 1);
    auto m = mirror(load("spp"));
    EXPECT_EQ(surface_invariants(m).genus, 0);
    EXPECT_EQ(m.vertex_count, 5);
}

TEST(Homology, Ranks) {
    std::map<std::string, int> expect{{"torus1", 2},   {"spp", 2},      {"gallery1", 2}, {"gallery2", 2},
                                      {"gallery3", 4}, {"gallery4", 0}, {"g2hex", 2}};
    for (auto& [n, r] : expect) {
        auto H = homology(load(n));
        EXPECT_EQ(H.rank, r) << n;
        EXPECT_TRUE(H.torsion.empty()) << n;
    }
}

TEST(Homology, BasisAndBoundaries) {
    for (const auto& n : corpus_names()) {
        auto d = load(n);
        auto H = homology(d);
        for (int f = 0; f < d.face_count(); ++f)
            for (auto v : H.class_vector(face_boundary(d, f))) EXPECT_EQ(v, 0) << n;
        for (int k = 0; k < H.rank; ++k) {
            EXPECT_TRUE(is_closed(d, H.basis[k])) << n;
            auto c = H.class_vector(H.basis[k]);
            for (int j = 0; j < H.rank; ++j) EXPECT_EQ(c[j], j == k ? 1 : 0) << n;
        }
    }
}

TEST(Homology, NotATorus) {
    auto H = homology(load("gallery4"));
    EXPECT_THROW(H.class_of(Chain(13, 0)), Error);
}

// Independent check: a closed chain is null-homologous iff it lies in the rational span of
// face boundaries, and classes are additive.
TEST(Homology, ClassAdditive) {
    auto d = load("g2hex");
    auto H = homology(d);
    auto z = H.basis[0] + H.basis[1] + face_boundary(d, 3);
    EXPECT_EQ(H.class_of(z), (Pt{1, 1}));
    EXPECT_EQ(H.class_of(3 * H.basis[0] - H.basis[1]), (Pt{3, -1}));
}
