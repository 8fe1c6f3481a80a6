#pragma once

#include "dimerlab/tropical.hpp"

#include <random>
#include <set>

namespace oracle {

using dimerlab::Dimer;
using dimerlab::Pt;
using dimerlab::Rational;

inline std::vector<Rational> zero_weights(const Dimer& d) { return std::vector<Rational>(d.arrow_count() + 1, Rational(0)); }

// W = 0, five random small integer weights, and one half-integer pattern
inline std::vector<std::vector<Rational>> weight_family(const Dimer& d) {
    std::vector<std::vector<Rational>> out{zero_weights(d)};
    std::mt19937 rng(20261019);
    std::uniform_int_distribution<int> dist(-2, 3);
    for (int k = 0; k < 5; ++k) {
        auto W = zero_weights(d);
        for (int a = 1; a <= d.arrow_count(); ++a) W[a] = dist(rng);
        out.push_back(W);
    }
    auto W = zero_weights(d);
    for (int a = 1; a <= d.arrow_count(); ++a) W[a] = Rational(a % 3, 2);
    out.push_back(W);
    return out;
}

// Lower hull by brute force: every plane through three lifted points that has no point below it.
struct HullOracle {
    std::set<std::vector<int>> facets;
    std::set<int> vertices;
};

inline HullOracle brute_force_hull(const dimerlab::TropicalPolynomial& f) {
    HullOracle O;
    int n = static_cast<int>(f.terms.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const auto &A = f.terms[i], &B = f.terms[j], &C = f.terms[k];
                Pt u = B.point - A.point, v = C.point - A.point;
                auto det = dimerlab::cross(u, v);
                if (det == 0) continue;
                // z = A.c + s*u' + t*v' in the basis (u, v)
                Rational du = B.c - A.c, dv = C.c - A.c;
                auto lift = [&](const Pt& p) -> Rational {
                    Pt w = p - A.point;
                    Rational s = Rational(dimerlab::cross(w, v)) / det, t = Rational(dimerlab::cross(u, w)) / det;
                    return A.c + s * du + t * dv;
                };
                std::vector<int> tight;
                bool support = true;
                for (int m = 0; m < n && support; ++m) {
                    Rational z = lift(f.terms[m].point);
                    if (f.terms[m].c < z) support = false;
                    if (f.terms[m].c == z) tight.push_back(m);
                }
                if (!support || !O.facets.insert(tight).second) continue;
                std::vector<Pt> pts;
                for (int m : tight) pts.push_back(f.terms[m].point);
                for (const auto& c : dimerlab::convex_hull(pts)) O.vertices.insert(f.index_of(c));
            }
    return O;
}

}  // namespace oracle
