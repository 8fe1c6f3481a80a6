#pragma once

#include <functional>
#include <optional>
#include <set>

#include "dimerlab/algebra.hpp"

namespace dimerlab {

struct Summand {
    int vertex = 0;
    int parity = 0;
    std::optional<std::int64_t> shift;
};

using PolyMatrix = std::vector<std::vector<Polynomial>>;

// Entry d[i][j] goes from summand j to summand i.
struct MatrixFactorization {
    std::vector<Summand> summands;
    PolyMatrix d;

    std::size_t size() const { return summands.size(); }
};

inline PolyMatrix zero_matrix(std::size_t rows, std::size_t cols) {
    return PolyMatrix(rows, std::vector<Polynomial>(cols));
}

inline PolyMatrix identity_matrix(const std::vector<Summand>& s) {
    auto m = zero_matrix(s.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) m[i][i] = vertex_element(s[i].vertex);
    return m;
}

inline PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    auto r = zero_matrix(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[l][j].zero()) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

inline PolyMatrix scaled(PolyMatrix a, const Rational& q) {
    for (auto& row : a)
        for (auto& e : row) e = e.scaled(q);
    return a;
}

struct CheckResult {
    bool ok = true;
    std::string failure;

    void fail(std::string msg) {
        if (ok) failure = std::move(msg);
        ok = false;
    }
};

// Endpoint, parity and membership checks plus d^2 = l*id.
inline CheckResult mf_check(const Jacobi& J, const MatrixFactorization& m) {
    CheckResult r;
    std::size_t n = m.size();
    if (m.d.size() != n) {
        r.fail("matrix size does not match summands");
        return r;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& e = m.d[i][j];
            if (e.zero()) continue;
            std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (m.summands[i].parity == m.summands[j].parity) r.fail("even entry at " + at);
            for (const auto& [mono, c] : e.terms) {
                if (mono.head != m.summands[i].vertex || mono.tail != m.summands[j].vertex)
                    r.fail("endpoint mismatch at " + at);
                if (!in_jacobi(J, {mono, c})) r.fail("entry outside the Jacobi algebra at " + at);
            }
        }
    if (!r.ok) return r;
    auto sq = m.d * m.d;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Polynomial want = i == j ? Polynomial(ell(m.summands[i].vertex)) : Polynomial();
            if (!(sq[i][j] == want))
                r.fail("d^2 differs from l at (" + std::to_string(i) + "," + std::to_string(j) + "): " +
                       to_string(sq[i][j]));
        }
    return r;
}

inline void require_mf(const Jacobi& J, const MatrixFactorization& m, const std::string& what) {
    auto r = mf_check(J, m);
    if (!r.ok) throw Error(what + ": " + r.failure);
}

// Rows index target summands, columns source summands.
struct MFMorphism {
    MatrixFactorization source, target;
    PolyMatrix f;
    int parity = 0;
};

inline CheckResult morphism_check(const MFMorphism& m) {
    CheckResult r;
    for (std::size_t i = 0; i < m.target.size(); ++i)
        for (std::size_t j = 0; j < m.source.size(); ++j) {
            if (m.f[i][j].zero()) continue;
            if ((m.target.summands[i].parity + m.parity + m.source.summands[j].parity) % 2)
                r.fail("component of wrong parity");
            for (const auto& [mono, c] : m.f[i][j].terms)
                if (mono.head != m.target.summands[i].vertex || mono.tail != m.source.summands[j].vertex)
                    r.fail("component endpoint mismatch");
        }
    if (!r.ok) return r;
    auto lhs = m.target.d * m.f;
    auto rhs = m.f * m.source.d;
    if (m.parity) rhs = scaled(rhs, -1);
    if (lhs != rhs) r.fail("not a chain map");
    return r;
}

inline MatrixFactorization shift(const MatrixFactorization& m) {
    MatrixFactorization r{m.summands, scaled(m.d, -1)};
    for (auto& s : r.summands) {
        s.parity ^= 1;
        if (s.shift) *s.shift += 1;
    }
    return r;
}

// Cone of an even morphism X -> Y: Y + X[1] with d = [[dY, f], [0, -dX]].
inline MatrixFactorization cone(const MFMorphism& m) {
    if (m.parity != 0) throw Error("cone needs an even morphism");
    const auto& Y = m.target;
    auto X1 = shift(m.source);
    std::size_t ny = Y.size(), nx = X1.size();
    MatrixFactorization c;
    c.summands = Y.summands;
    c.summands.insert(c.summands.end(), X1.summands.begin(), X1.summands.end());
    c.d = zero_matrix(ny + nx, ny + nx);
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < ny; ++j) c.d[i][j] = Y.d[i][j];
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nx; ++j) c.d[ny + i][ny + j] = X1.d[i][j];
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < nx; ++j) c.d[i][ny + j] = m.f[i][j];
    return c;
}

// ---- factorizations of face subpaths ----

// Checks that the word (composition order) is a proper subpath of a positive face.
inline void require_positive_subpath(const Dimer& d, const std::vector<Letter>& p) {
    if (p.empty()) throw Error("empty path");
    for (auto [a, e] : p)
        if (a < 1 || a > d.arrow_count() || e != 1) throw Error("path must use arrows with exponent 1");
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (d.sp[p[i + 1].first] != p[i].first)
            throw Error("arrows " + std::to_string(p[i + 1].first) + "," + std::to_string(p[i].first) +
                        " are not consecutive in a positive face");
    if (p.size() >= d.faces[d.pos_face[p[0].first]].size()) throw Error("path covers a whole face");
}

// Rest of the positive face after the subpath p (walked after p, before it again).
inline std::vector<Letter> positive_rest(const Dimer& d, const std::vector<Letter>& p) {
    std::vector<Letter> w;
    for (int b = d.sp[p.front().first]; b != p.back().first; b = d.sp[b]) w.emplace_back(b, 1);
    std::reverse(w.begin(), w.end());
    return w;
}

inline MatrixFactorization mf_path(const Jacobi& J, const std::vector<Letter>& p) {
    const Dimer& d = J.dimer;
    require_positive_subpath(d, p);
    auto pe = path_element(J, p);
    auto rest = path_element(J, positive_rest(d, p));
    MatrixFactorization m;
    m.summands = {{pe.head(), 1, {}}, {pe.tail(), 0, {}}};
    m.d = zero_matrix(2, 2);
    m.d[0][1] = pe;
    m.d[1][0] = rest;
    require_mf(J, m, "arrow factorization");
    return m;
}

inline MatrixFactorization mf_arrow(const Jacobi& J, int a) {
    if (a < 1 || a > J.dimer.arrow_count()) throw Error("arrow id out of range");
    return mf_path(J, {{a, 1}});
}

// M_p -> M_q[1] for pq a subpath of a positive face: components -id and l(pq)^-1.
inline MFMorphism hat_morphism(const Jacobi& J, const std::vector<Letter>& p, const std::vector<Letter>& q) {
    std::vector<Letter> pq = p;
    pq.insert(pq.end(), q.begin(), q.end());
    require_positive_subpath(J.dimer, pq);
    MFMorphism m{mf_path(J, p), shift(mf_path(J, q)), zero_matrix(2, 2), 0};
    m.f[0][1] = PathElement{vertex_element(m.target.summands[0].vertex).mono, -1};
    m.f[1][0] = path_element(J, positive_rest(J.dimer, pq));
    auto r = morphism_check(m);
    if (!r.ok) throw Error("hat morphism: " + r.failure);
    return m;
}

inline MFMorphism hat_morphism(const Jacobi& J, int a, int b) { return hat_morphism(J, {{a, 1}}, {{b, 1}}); }

// ---- shortening ----

struct ShortenWitness {
    PolyMatrix psi;      // P_red -> P
    PolyMatrix psi_inv;  // P -> P_red
};

inline bool invertible_entry(const Polynomial& e) {
    if (!e.monomial()) return false;
    auto x = e.single();
    return x.head() == x.tail() && x.mono.hclass == Pt{} && x.mono.refdeg == 0 && x.coeff != 0;
}

// Removes summands a and b using the invertible component d[b][a].
inline std::pair<MatrixFactorization, ShortenWitness> shorten(const Jacobi& J, const MatrixFactorization& m,
                                                              std::size_t a, std::size_t b) {
    std::size_t n = m.size();
    if (a >= n || b >= n || a == b) throw Error("bad summand indices for shortening");
    if (!invertible_entry(m.d[b][a]))
        throw Error("entry (" + std::to_string(b) + "," + std::to_string(a) + ") is not invertible");
    Polynomial phi_inv = inverse(m.d[b][a].single());
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (i != a && i != b) keep.push_back(i);
    std::size_t r = keep.size();

    MatrixFactorization red;
    for (auto i : keep) red.summands.push_back(m.summands[i]);
    red.d = zero_matrix(r, r);
    for (std::size_t x = 0; x < r; ++x)
        for (std::size_t y = 0; y < r; ++y) {
            auto i = keep[x], j = keep[y];
            red.d[x][y] = m.d[i][j] - m.d[i][a] * phi_inv * m.d[b][j];
        }

    ShortenWitness w{zero_matrix(n, r), zero_matrix(r, n)};
    for (std::size_t y = 0; y < r; ++y) {
        auto j = keep[y];
        w.psi[j][y] = vertex_element(m.summands[j].vertex);
        w.psi[a][y] = -(phi_inv * m.d[b][j]);
        w.psi_inv[y][j] = vertex_element(m.summands[j].vertex);
        w.psi_inv[y][b] = -(m.d[j][a] * phi_inv);
    }

    require_mf(J, red, "shortened factorization");
    if (m.d * w.psi != w.psi * red.d) throw Error("shortening witness is not a chain map");
    if (w.psi_inv * m.d != red.d * w.psi_inv) throw Error("shortening inverse is not a chain map");
    if (w.psi_inv * w.psi != identity_matrix(red.summands)) throw Error("shortening witness is not split");
    return {red, w};
}

// Finds the first invertible entry, scanning rows then columns.
inline std::optional<std::pair<std::size_t, std::size_t>> find_invertible(const MatrixFactorization& m) {
    for (std::size_t b = 0; b < m.size(); ++b)
        for (std::size_t a = 0; a < m.size(); ++a)
            if (invertible_entry(m.d[b][a])) return std::make_pair(a, b);
    return std::nullopt;
}

// Same factorization up to reordering summands, rescaling them and a global parity flip.
inline bool equivalent(const MatrixFactorization& x, const MatrixFactorization& y) {
    std::size_t n = x.size();
    if (y.size() != n) return false;
    for (int flip = 0; flip < 2; ++flip) {
        std::vector<int> perm(n, -1);
        std::vector<char> used(n, 0);
        std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
            if (i == n) {
                // proportional entries, then solve for the rescaling
                std::vector<std::optional<Rational>> lambda(n);
                std::vector<std::vector<std::pair<std::size_t, Rational>>> adj(n);
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t q = 0; q < n; ++q) {
                        const auto &e = x.d[p][q], &f = y.d[perm[p]][perm[q]];
                        if (e.zero() != f.zero() || e.terms.size() != f.terms.size()) return false;
                        if (e.zero()) continue;
                        std::optional<Rational> ratio;
                        for (auto it = e.terms.begin(), jt = f.terms.begin(); it != e.terms.end(); ++it, ++jt) {
                            if (it->first != jt->first) return false;
                            Rational c = jt->second / it->second;
                            if (ratio && *ratio != c) return false;
                            ratio = c;
                        }
                        // y = lambda_p / lambda_q * x
                        adj[p].emplace_back(q, *ratio);
                        adj[q].emplace_back(p, 1 / *ratio);
                    }
                for (std::size_t s = 0; s < n; ++s) {
                    if (lambda[s]) continue;
                    lambda[s] = Rational(1);
                    std::vector<std::size_t> stack{s};
                    while (!stack.empty()) {
                        auto p = stack.back();
                        stack.pop_back();
                        for (auto [q, c] : adj[p]) {
                            Rational want = *lambda[p] / c;
                            if (!lambda[q]) {
                                lambda[q] = want;
                                stack.push_back(q);
                            } else if (*lambda[q] != want) {
                                return false;
                            }
                        }
                    }
                }
                return true;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (used[j] || y.summands[j].vertex != x.summands[i].vertex ||
                    y.summands[j].parity != (x.summands[i].parity ^ flip))
                    continue;
                used[j] = 1;
                perm[i] = static_cast<int>(j);
                if (go(i + 1)) return true;
                used[j] = 0;
            }
            return false;
        };
        if (go(0)) return true;
    }
    return false;
}

struct IteratedCone {
    std::vector<MatrixFactorization> steps;  // shortened cone after each step
    bool matches_direct = true;
};

// Builds M_{a1..al} by successive cones over hat morphisms, shortening each time.
inline IteratedCone iterated_cone(const Jacobi& J, const std::vector<Letter>& path) {
    require_positive_subpath(J.dimer, path);
    IteratedCone out;
    for (std::size_t i = 1; i < path.size(); ++i) {
        std::vector<Letter> p(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i));
        auto c = cone(hat_morphism(J, p, {path[i]}));
        auto at = find_invertible(c);
        if (!at) throw Error("cone has no invertible entry");
        auto red = shorten(J, c, at->first, at->second).first;
        p.push_back(path[i]);
        if (!equivalent(red, mf_path(J, p))) out.matches_direct = false;
        out.steps.push_back(std::move(red));
    }
    return out;
}

// ---- garlands ----

struct Garland {
    std::vector<int> entries;  // even: arrows, odd: faces
    bool primitive = true;

    std::size_t length() const { return entries.size() / 2; }
    int arrow(std::size_t i) const { return entries[(2 * i) % entries.size()]; }
    int face(std::size_t i) const { return entries[(2 * i + 1) % entries.size()]; }
};

inline std::vector<int> rotate_entries(const std::vector<int>& g, std::size_t by) {
    std::vector<int> r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = g[(i + by) % g.size()];
    return r;
}

inline std::vector<int> reverse_entries(const std::vector<int>& g) {
    std::vector<int> r{g[0]};
    for (std::size_t i = g.size() - 1; i > 0; --i) r.push_back(g[i]);
    return r;
}

inline std::vector<int> canonical_rotation(const std::vector<int>& g) {
    auto best = g;
    for (std::size_t s = 2; s < g.size(); s += 2) best = std::min(best, rotate_entries(g, s));
    return best;
}

// Identifies a garland with its opposite.
inline std::vector<int> unoriented_key(const std::vector<int>& g) {
    return std::min(canonical_rotation(g), canonical_rotation(reverse_entries(g)));
}

inline Garland make_garland(const Dimer& d, std::vector<int> entries) {
    std::size_t n = entries.size();
    if (n < 2 || n % 2) throw ValidationError("garland needs an even positive number of entries");
    for (std::size_t i = 0; i < n; i += 2) {
        if (entries[i] < 1 || entries[i] > d.arrow_count())
            throw ValidationError("garland entry " + std::to_string(i) + " is not an arrow");
        if (entries[i + 1] < 0 || entries[i + 1] >= d.face_count())
            throw ValidationError("garland entry " + std::to_string(i + 1) + " is not a face");
    }
    auto on = [&](int a, int f) { return d.pos_face[a] == f || d.neg_face[a] == f; };
    for (std::size_t i = 0; i < n; i += 2)
        if (!on(entries[i], entries[(i + 1) % n]) || !on(entries[i], entries[(i + n - 1) % n]))
            throw ValidationError("B1 fails: arrow " + std::to_string(entries[i]) + " not on its neighbouring faces");
    for (std::size_t i = 0; i < n; ++i)
        if (entries[i] == entries[(i + 2) % n])
            throw ValidationError("B2 fails at entry " + std::to_string(i));
    Garland g{std::move(entries), true};
    for (std::size_t s = 2; s < n; s += 2)
        if (n % s == 0 && rotate_entries(g.entries, s) == g.entries) {
            g.primitive = false;
            break;
        }
    return g;
}

// All primitive garlands with at most max_entries entries, one per rotation class.
inline std::vector<Garland> enumerate_garlands(const Dimer& d, std::size_t max_entries) {
    std::set<std::vector<int>> seen;
    std::vector<Garland> out;
    std::vector<int> cur;
    std::function<void()> grow = [&]() {
        int a = cur[cur.size() - 2], f = cur.back();
        // close up: the last face must be the other face of the first arrow
        if (cur.size() >= 4 && f == d.other_face(cur[1], cur[0]) && a != cur[0]) {
            try {
                auto g = make_garland(d, cur);
                if (g.primitive && seen.insert(canonical_rotation(g.entries)).second) {
                    g.entries = canonical_rotation(g.entries);
                    out.push_back(std::move(g));
                }
            } catch (const ValidationError&) {
            }
        }
        if (cur.size() + 2 > max_entries) return;
        for (int b : d.faces[f]) {
            if (b == a) continue;
            int nf = d.other_face(f, b);
            cur.push_back(b);
            cur.push_back(nf);
            grow();
            cur.pop_back();
            cur.pop_back();
        }
    };
    for (int a = 1; a <= d.arrow_count(); ++a)
        for (int f : {d.pos_face[a], d.neg_face[a]}) {
            cur = {a, f};
            grow();
        }
    std::sort(out.begin(), out.end(), [](const Garland& x, const Garland& y) {
        return std::make_pair(x.entries.size(), x.entries) < std::make_pair(y.entries.size(), y.entries);
    });
    return out;
}

// Arrows walked strictly after u and strictly before w inside face f, composition order.
inline std::vector<Letter> face_between(const Dimer& d, int f, int u, int w) {
    std::vector<Letter> r;
    for (int b = d.next_in(f, u); b != w; b = d.next_in(f, b)) {
        if (b == u) throw Error("arrow not on face");
        r.emplace_back(b, 1);
    }
    std::reverse(r.begin(), r.end());
    return r;
}

inline std::vector<Letter> concat(std::vector<Letter> x, const std::vector<Letter>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
}

using RationalMatrix = std::vector<std::vector<Rational>>;

inline Rational determinant(RationalMatrix m) {
    std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            Rational k = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[r][j] -= k * m[c][j];
        }
    }
    return det;
}

struct BandFactorization {
    Garland garland;  // rotated so that its first face is positive
    MatrixFactorization full;
    MatrixFactorization face_part;  // d_a only
};

// Band factorization on 2k*n summands; the two arcs crossing the seam carry alpha.
inline BandFactorization mf_band_parts(const Jacobi& J, const Garland& g0, const RationalMatrix& alpha) {
    const Dimer& d = J.dimer;
    Garland g = make_garland(d, g0.entries);
    std::size_t n = alpha.size();
    if (n == 0) throw Error("empty decoration");
    for (const auto& row : alpha)
        if (row.size() != n) throw Error("decoration is not square");
    if (determinant(alpha) == 0) throw Error("decoration is singular");
    if (!d.positive(g.face(0))) g.entries = rotate_entries(g.entries, 2);
    std::size_t k = g.length();
    for (std::size_t i = 0; i < k; ++i)
        if (d.positive(g.face(i)) != (i % 2 == 0)) throw Error("garland faces do not alternate");

    std::size_t m2 = 2 * k;
    std::vector<std::size_t> st(k), sh(k);
    for (std::size_t j = 0; j < k; ++j) {
        if (j % 2 == 0) {
            st[j] = 2 * j;
            sh[j] = (2 * j + m2 - 2) % m2;
        } else {
            st[j] = 2 * j - 1;
            sh[j] = 2 * j + 1;
        }
    }
    std::vector<Summand> base(m2);
    for (std::size_t j = 0; j < k; ++j) {
        int x = g.arrow(j);
        base[st[j]] = {d.tail[x], static_cast<int>(st[j] % 2), {}};
        base[sh[j]] = {d.head[x], static_cast<int>(sh[j] % 2), {}};
    }
    auto da = zero_matrix(m2, m2), db = zero_matrix(m2, m2);
    std::vector<std::vector<char>> seam(m2, std::vector<char>(m2, 0));
    for (std::size_t i = 0; i < k; ++i) {
        int f = g.face(i), x = g.arrow(i), y = g.arrow(i + 1);
        std::size_t j = (i + 1) % k;
        auto xy = face_between(d, f, x, y), yx = face_between(d, f, y, x);
        auto ex = path_element(J, xy, d.head[x]), ey = path_element(J, yx, d.head[y]);
        if (d.positive(f)) {
            // bottom arc h(x)->t(y), top arc h(y)->t(x)
            da[st[j]][st[i]] += path_element(J, concat(xy, {{x, 1}}));
            da[st[i]][st[j]] += path_element(J, concat(yx, {{y, 1}}));
            db[st[i]][sh[j]] += ey;
            db[st[j]][sh[i]] -= ex;
            if (i == 0) seam[st[j]][sh[i]] = 1;
        } else {
            // top arc h(x)->t(y), bottom arc h(y)->t(x)
            da[sh[j]][sh[i]] += path_element(J, concat({{y, 1}}, xy));
            da[sh[i]][sh[j]] += path_element(J, concat({{x, 1}}, yx));
            db[st[j]][sh[i]] += ex;
            db[st[i]][sh[j]] -= ey;
            if (i == k - 1) seam[st[j]][sh[i]] = 1;
        }
    }
    BandFactorization out{g, {}, {}};
    for (std::size_t s = 0; s < m2; ++s)
        for (std::size_t r = 0; r < n; ++r) out.full.summands.push_back(base[s]);
    out.face_part.summands = out.full.summands;
    std::size_t N = m2 * n;
    out.full.d = zero_matrix(N, N);
    out.face_part.d = zero_matrix(N, N);
    for (std::size_t s = 0; s < m2; ++s)
        for (std::size_t t = 0; t < m2; ++t)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    Rational w = seam[s][t] ? alpha[r][c] : Rational(r == c ? 1 : 0);
                    if (r == c) out.face_part.d[s * n + r][t * n + c] = da[s][t];
                    out.full.d[s * n + r][t * n + c] = (r == c ? da[s][t] : Polynomial()) + db[s][t].scaled(w);
                }
    require_mf(J, out.face_part, "band face part");
    require_mf(J, out.full, "band factorization");
    return out;
}

inline MatrixFactorization mf_band(const Jacobi& J, const Garland& g, const RationalMatrix& alpha) {
    return mf_band_parts(J, g, alpha).full;
}

// Snake path in the dimer d (the mirror, for the A-model picture), listed p0, p1, ... with t(p_i) = h(p_{i+1}).
inline std::vector<int> snake_path(const Dimer& d, const Garland& g0) {
    Garland g = make_garland(d, g0.entries);
    std::vector<int> p;
    for (std::size_t j = 0; j < g.length(); ++j) {
        int f = g.face(j), x = g.arrow(j), y = g.arrow(j + 1);
        int stop = d.next_in(f, y);
        for (int b = x;; b = d.prev_in(f, b)) {
            p.push_back(b);
            if (b == stop) break;
        }
    }
    return p;
}

// Face holding the consecutive pair (a walked right after b), or -1.
inline int pair_face(const Dimer& d, int a, int b, bool prefer_positive) {
    bool pos = d.sp[b] == a, neg = d.sm[b] == a;
    if (pos && (prefer_positive || !neg)) return d.pos_face[b];
    if (neg) return d.neg_face[b];
    return -1;
}

struct TwistedEntry {
    std::size_t from = 0, to = 0;  // summand positions in the snake path
    int face = 0;
    int exponent = 1;  // +1 in positive faces, -1 in negative faces
    AnglePath angle;
};

struct TwistedObjectReport {
    std::vector<int> snake;
    std::vector<TwistedEntry> entries;
    bool delta_squared_zero = true;
    bool no_full_face = true;
    std::optional<std::int64_t> degree_sum;  // sum of exponent * degree
    std::optional<std::int64_t> winding;     // obstruction to solving for the shifts
    std::optional<bool> gradable;
    std::vector<std::int64_t> shifts;
};

inline TwistedObjectReport band_twisted(const Dimer& m, const Garland& g0, const Rational& alpha,
                                        const PerfectMatching* P = nullptr) {
    if (alpha == 0) throw Error("decoration is singular");
    Garland g = make_garland(m, g0.entries);
    TwistedObjectReport r;
    r.snake = snake_path(m, g);
    AngleQuiver q = angle_quiver(m);
    std::size_t u = r.snake.size();
    // face of each consecutive pair follows the garland segments
    std::vector<int> seg_face;
    for (std::size_t j = 0; j < g.length(); ++j) {
        int f = g.face(j), x = g.arrow(j), y = g.arrow(j + 1);
        int stop = m.next_in(f, y);
        for (int b = x;; b = m.prev_in(f, b)) {
            seg_face.push_back(f);
            if (b == stop) break;
        }
    }
    for (std::size_t i = 0; i < u; ++i) {
        std::size_t j = (i + 1) % u;
        // the pair (p_i, p_{i+1}) lies in the face of p_i's segment
        int f = seg_face[i];
        int a = r.snake[i], b = r.snake[j];
        if (m.next_in(f, b) != a) throw Error("snake path leaves its face");
        TwistedEntry e;
        e.face = f;
        if (m.positive(f)) {
            e.exponent = 1;
            e.from = i;
            e.to = j;
            e.angle = make_angle_path(q, {q.out_angle(a, true)});
        } else {
            e.exponent = -1;
            e.from = j;
            e.to = i;
            e.angle = make_angle_path(q, {q.out_angle(b, false)});
        }
        if (j == 0) e.angle.coeff = alpha;
        r.entries.push_back(e);
    }
    for (const auto& e1 : r.entries)
        for (const auto& e2 : r.entries)
            if (e1.to == e2.from && !gtl_product(q, e2.angle, e1.angle).zero()) r.delta_squared_zero = false;
    // a higher product needs a composable run of entries going once around one face
    for (std::size_t i = 0; i < u; ++i) {
        if (r.entries[(i + u - 1) % u].face == r.entries[i].face && u > 1) continue;
        std::size_t run = 1;
        while (run < u && r.entries[(i + run) % u].face == r.entries[i].face) ++run;
        if (run >= m.faces[r.entries[i].face].size()) r.no_full_face = false;
    }
    if (P) {
        std::int64_t sum = 0, wind = 0;
        std::vector<std::optional<std::int64_t>> sh(u);
        sh[0] = 0;
        bool ok = true;
        for (std::size_t i = 0; i < u; ++i) {
            const auto& e = r.entries[i];
            std::int64_t deg = angle_degree(q, e.angle, *P);
            sum += e.exponent * deg;
            wind += e.exponent * (deg - 1);
            // degree of a component p_s[u_s] -> p_t[u_t] is deg - u_t + u_s
            std::size_t next = (i + 1) % u;
            std::int64_t val = e.from == i ? *sh[i] + deg - 1 : *sh[i] - deg + 1;
            if (!sh[next]) sh[next] = val;
            else if (*sh[next] != val) ok = false;
        }
        r.degree_sum = sum;
        r.winding = wind;
        r.gradable = ok;
        if (ok != (wind == 0)) throw Error("shift solution disagrees with the winding count");
        if (ok)
            for (auto& s : sh) r.shifts.push_back(*s);
    }
    return r;
}

// ---- bands of a toric representation ----

struct DecoratedBand {
    Garland garland;
    Rational decoration;
    Pt hclass;
};

struct RepBands {
    std::vector<DecoratedBand> bands;  // unoriented, distinct
    std::size_t traces = 0;
    std::size_t dropped = 0;
    std::map<int, int> crossings;  // zero arrow -> strand crossings over all traces
};

inline std::vector<int> zero_arrows(const std::vector<Rational>& rho) {
    std::vector<int> z;
    for (std::size_t a = 1; a < rho.size(); ++a)
        if (rho[a] == 0) z.push_back(static_cast<int>(a));
    return z;
}

// Strands through the faces of the mirror dimer: each runs forward along a face from one zero
// arrow to the next and crosses into the other face there.
inline RepBands rep_bands(const Dimer& d, const Homology& H, const std::vector<Rational>& rho) {
    int E = d.arrow_count();
    if (static_cast<int>(rho.size()) != E + 1) throw Error("representation has the wrong size");
    auto zero = zero_arrows(rho);
    std::set<int> covered;
    for (const auto& P : enumerate_matchings(d))
        if (std::all_of(P.arrows.begin(), P.arrows.end(), [&](int a) { return rho[a] == 0; }))
            covered.insert(P.arrows.begin(), P.arrows.end());
    if (zero.empty() || covered.size() != zero.size())
        throw ValidationError("not a toric degeneration: zero set is not a union of perfect matchings");

    Dimer m = mirror(d);
    auto next_zero = [&](int f, int z) {
        int b = m.next_in(f, z);
        while (rho[b] != 0) b = m.next_in(f, b);
        return b;
    };
    std::set<std::pair<int, int>> used;
    RepBands out;
    std::set<std::vector<int>> keys;
    for (int f = 0; f < m.face_count(); ++f)
        for (int z0 : m.faces[f]) {
            if (rho[z0] != 0 || used.count({f, z0})) continue;
            std::vector<int> entries;
            Rational deco = 1;
            bool contractible = false;
            Chain c = zero_chain(d);
            int cf = f, cz = z0;
            while (!used.count({cf, cz})) {
                used.insert({cf, cz});
                int nz = next_zero(cf, cz);
                if (nz == cz) contractible = true;
                // in the dimer itself the strand follows positive faces forward, negative ones backward
                for (int b = m.next_in(cf, cz); b != nz; b = m.next_in(cf, b)) {
                    deco *= m.positive(cf) ? 1 / rho[b] : rho[b];
                    c[b] += m.positive(cf) ? 1 : -1;
                }
                entries.push_back(cz);
                entries.push_back(cf);
                ++out.crossings[nz];
                cf = m.other_face(cf, nz);
                cz = nz;
            }
            ++out.traces;
            if (contractible) {
                ++out.dropped;
                continue;
            }
            Garland g = make_garland(m, entries);
            std::size_t k = g.length();
            if (k % 4 == 2) deco = -deco;
            if (!is_closed(d, c)) throw Error("band chain is not closed");
            auto key = unoriented_key(g.entries);
            if (!keys.insert(key).second) continue;
            out.bands.push_back({g, deco, H.class_of(c)});
        }
    return out;
}

}  // namespace dimerlab
