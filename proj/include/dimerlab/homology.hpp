#pragma once

#include "dimerlab/dimer.hpp"

#include <deque>

namespace dimerlab {

// Integer 1-chain indexed by arrow id (slot 0 unused).
using Chain = std::vector<std::int64_t>;

inline Chain zero_chain(const Dimer& d) { return Chain(d.arrow_count() + 1, 0); }

inline Chain face_boundary(const Dimer& d, int f) {
    Chain c = zero_chain(d);
    for (int a : d.faces[f]) ++c[a];
    return c;
}

inline Chain chain_of_arrows(const Dimer& d, const std::vector<int>& arrows) {
    Chain c = zero_chain(d);
    for (int a : arrows) ++c[a];
    return c;
}

inline std::int64_t pairing(const Chain& x, const Chain& y) {
    std::int64_t s = 0;
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline Chain& operator+=(Chain& x, const Chain& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
}
inline Chain operator+(Chain x, const Chain& y) { return x += y; }
inline Chain operator-(Chain x, const Chain& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
}
inline Chain operator*(std::int64_t k, Chain x) {
    for (auto& v : x) v *= k;
    return x;
}

inline bool is_closed(const Dimer& d, const Chain& c) {
    std::vector<std::int64_t> bd(d.vertex_count + 1, 0);
    for (int a = 1; a <= d.arrow_count(); ++a) {
        bd[d.head[a]] += c[a];
        bd[d.tail[a]] -= c[a];
    }
    return std::all_of(bd.begin(), bd.end(), [](auto v) { return v == 0; });
}

struct SmithResult {
    std::vector<std::vector<Integer>> U, Uinv;  // U * B * V = D
    std::vector<Integer> diagonal;             // nonzero invariant factors in order
};

// Smith normal form tracking the row transformation. Pivot: smallest nonzero |entry|,
// ties broken by lowest row then lowest column.
inline SmithResult smith_rows(std::vector<std::vector<Integer>> B, std::size_t rows, std::size_t cols) {
    SmithResult r;
    r.U.assign(rows, std::vector<Integer>(rows, 0));
    r.Uinv = r.U;
    for (std::size_t i = 0; i < rows; ++i) r.U[i][i] = r.Uinv[i][i] = 1;
    auto row_add = [&](std::size_t dst, std::size_t src, const Integer& q) {  // row_dst += q row_src
        if (q == 0) return;
        for (std::size_t j = 0; j < cols; ++j) B[dst][j] += q * B[src][j];
        for (std::size_t j = 0; j < rows; ++j) r.U[dst][j] += q * r.U[src][j];
        for (std::size_t i = 0; i < rows; ++i) r.Uinv[i][src] -= q * r.Uinv[i][dst];
    };
    auto row_swap = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap(B[a], B[b]);
        std::swap(r.U[a], r.U[b]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(r.Uinv[i][a], r.Uinv[i][b]);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const Integer& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < rows; ++i) B[i][dst] += q * B[i][src];
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows; ++i) std::swap(B[i][a], B[i][b]);
    };
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            bool found = false;
            std::size_t pr = 0, pc = 0;
            Integer best;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j) {
                    if (B[i][j] == 0) continue;
                    Integer v = abs(B[i][j]);
                    if (!found || v < best) {
                        found = true;
                        best = v;
                        pr = i;
                        pc = j;
                    }
                }
            if (!found) break;
            row_swap(t, pr);
            col_swap(t, pc);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (B[i][t] == 0) continue;
                row_add(i, t, -(B[i][t] / B[t][t]));
                if (B[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (B[t][j] == 0) continue;
                col_add(j, t, -(B[t][j] / B[t][t]));
                if (B[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (B[i][j] % B[t][t] != 0) {
                        row_add(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (B[t][t] == 0) break;
        r.diagonal.push_back(abs(B[t][t]));
    }
    return r;
}

// First homology of the surface with deterministic chain representatives.
struct Homology {
    int rank = 0;
    std::vector<Integer> torsion;
    std::vector<char> in_tree;
    std::vector<Chain> root_path;  // chain of the tree path from vertex 1 to v
    std::vector<Chain> cochains;   // dual coordinates; class_of(c)_k = <cochains[k], c>
    std::vector<Chain> basis;      // closed chains with class_of = unit vectors

    bool torus() const { return rank == 2 && torsion.empty(); }

    void require_torus() const {
        if (!torus()) throw Error("not a torus: first homology has rank " + std::to_string(rank) +
                                  (torsion.empty() ? "" : " with torsion"));
    }

    // tree path walked from vertex v to vertex w
    Chain tree_chain(int v, int w) const { return root_path[w] - root_path[v]; }

    std::vector<std::int64_t> class_vector(const Chain& c) const {
        std::vector<std::int64_t> out;
        for (const auto& x : cochains) out.push_back(pairing(x, c));
        return out;
    }

    // class of a closed chain on a torus
    Pt class_of(const Chain& c) const {
        require_torus();
        return {pairing(cochains[0], c), pairing(cochains[1], c)};
    }

    Chain cycle_of(const Pt& p) const {
        require_torus();
        return p.x * basis[0] + p.y * basis[1];
    }
};

inline Homology homology(const Dimer& d) {
    int E = d.arrow_count(), V = d.vertex_count;
    Homology H;
    H.in_tree.assign(E + 1, 0);
    H.root_path.assign(V + 1, zero_chain(d));
    std::vector<std::vector<int>> incident(V + 1);
    for (int a = 1; a <= E; ++a) {
        incident[d.head[a]].push_back(a);
        if (d.tail[a] != d.head[a]) incident[d.tail[a]].push_back(a);
    }
    std::vector<char> seen(V + 1, 0);
    std::deque<int> queue{1};
    seen[1] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int a : incident[v]) {  // already in increasing id order
            int w = d.tail[a] == v ? d.head[a] : d.tail[a];
            if (seen[w]) continue;
            seen[w] = 1;
            H.in_tree[a] = 1;
            H.root_path[w] = H.root_path[v];
            H.root_path[w][a] += d.tail[a] == v ? 1 : -1;
            queue.push_back(w);
        }
    }
    for (int v = 1; v <= V; ++v)
        if (!seen[v]) throw ValidationError("dimer is not connected (vertex " + std::to_string(v) + ")");

    std::vector<int> nontree;
    for (int a = 1; a <= E; ++a)
        if (!H.in_tree[a]) nontree.push_back(a);
    std::size_t n = nontree.size(), F = static_cast<std::size_t>(d.face_count());
    std::vector<std::vector<Integer>> B(n, std::vector<Integer>(F, 0));
    for (std::size_t f = 0; f < F; ++f)
        for (int a : d.faces[f]) {
            auto it = std::lower_bound(nontree.begin(), nontree.end(), a);
            if (it != nontree.end() && *it == a) B[it - nontree.begin()][f] += 1;
        }
    auto snf = smith_rows(B, n, F);
    std::size_t r = snf.diagonal.size();
    for (const auto& q : snf.diagonal)
        if (q != 1) H.torsion.push_back(q);
    H.rank = static_cast<int>(n - r);
    for (std::size_t k = r; k < n; ++k) {
        Chain xi = zero_chain(d), z = zero_chain(d);
        for (std::size_t i = 0; i < n; ++i) {
            int a = nontree[i];
            xi[a] = narrow(snf.U[k][i]);
            std::int64_t coeff = narrow(snf.Uinv[i][k]);
            if (coeff == 0) continue;
            Chain cyc = H.tree_chain(d.head[a], d.tail[a]);
            cyc[a] += 1;
            z += coeff * cyc;
        }
        H.cochains.push_back(std::move(xi));
        H.basis.push_back(std::move(z));
    }
    return H;
}

}  // namespace dimerlab
