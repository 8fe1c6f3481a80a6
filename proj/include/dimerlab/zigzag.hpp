#pragma once

#include "dimerlab/matching.hpp"

namespace dimerlab {

struct ZigzagCycle {
    std::vector<int> arrows;        // a0, sp(a0), sm(sp(a0)), ...
    std::vector<int> even_support;  // sorted arrows at even positions
    Pt hclass;                      // set only in torus mode
};

inline std::vector<ZigzagCycle> zigzag_cycles(const Dimer& d, const Homology* H = nullptr) {
    std::vector<ZigzagCycle> out;
    for (const auto& c : cycles(compose(d.sm, d.sp))) {
        ZigzagCycle z;
        for (int a : c) {
            z.arrows.push_back(a);
            z.arrows.push_back(d.sp[a]);
        }
        z.even_support = c;
        std::sort(z.even_support.begin(), z.even_support.end());
        if (H && H->torus()) z.hclass = H->class_of(chain_of_arrows(d, z.arrows));
        out.push_back(std::move(z));
    }
    return out;
}

// arrow -> index of the zigzag cycle holding it at an even position
inline std::vector<int> zig_owner(const Dimer& d, const std::vector<ZigzagCycle>& zs) {
    std::vector<int> own(d.arrow_count() + 1, -1);
    for (std::size_t i = 0; i < zs.size(); ++i)
        for (int a : zs[i].even_support) own[a] = static_cast<int>(i);
    return own;
}

// ---- word problem in the fundamental group of the surface ----

using Word = std::vector<int>;  // letters are +-(generator + 1)

inline void free_reduce(Word& w) {
    Word out;
    for (int x : w) {
        if (!out.empty() && out.back() == -x) out.pop_back();
        else out.push_back(x);
    }
    w = std::move(out);
}

inline Word invert(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& x : r) x = -x;
    return r;
}

// Presentation with the spanning tree collapsed: generators are non-tree arrows, one relator
// per face. Faces are merged along shared generators until a single relator remains.
class SurfaceGroup {
public:
    SurfaceGroup(const Dimer& d, const Homology& H) : genus_(surface_invariants(d).genus) {
        gen_.assign(d.arrow_count() + 1, 0);
        int n = 0;
        for (int a = 1; a <= d.arrow_count(); ++a)
            if (!H.in_tree[a]) gen_[a] = ++n;
        if (genus_ < 2) return;
        std::vector<Word> rel;
        for (const auto& f : d.faces) {
            Word w;
            for (int a : f)
                if (gen_[a]) w.push_back(gen_[a]);
            rel.push_back(w);
        }
        std::vector<Word> subst(n + 1);  // generator -> replacement word, empty when kept
        std::vector<char> eliminated(n + 1, 0);
        while (rel.size() > 1) {
            bool progress = false;
            for (std::size_t i = 0; i < rel.size() && !progress; ++i) {
                std::map<int, int> count;
                for (int x : rel[i]) ++count[std::abs(x)];
                for (auto [g, c] : count) {
                    if (c != 1) continue;
                    bool elsewhere = false;
                    for (std::size_t j = 0; j < rel.size(); ++j)
                        if (j != i && std::any_of(rel[j].begin(), rel[j].end(), [&](int x) { return std::abs(x) == g; }))
                            elsewhere = true;
                    if (!elsewhere) continue;
                    Word r = rel[i];
                    auto pos = std::find_if(r.begin(), r.end(), [&](int x) { return std::abs(x) == g; });
                    std::rotate(r.begin(), pos, r.end());
                    int e = r[0] > 0 ? 1 : -1;
                    Word rest(r.begin() + 1, r.end());
                    Word value = e > 0 ? invert(rest) : rest;  // g = value
                    auto apply = [&](Word& w) {
                        Word out;
                        for (int x : w) {
                            if (std::abs(x) != g) {
                                out.push_back(x);
                                continue;
                            }
                            const Word& v = x > 0 ? value : invert(value);
                            out.insert(out.end(), v.begin(), v.end());
                        }
                        free_reduce(out);
                        w = std::move(out);
                    };
                    for (std::size_t j = 0; j < rel.size(); ++j)
                        if (j != i) apply(rel[j]);
                    for (int h = 1; h <= n; ++h)
                        if (eliminated[h]) apply(subst[h]);
                    subst[g] = value;
                    eliminated[g] = 1;
                    rel.erase(rel.begin() + static_cast<std::ptrdiff_t>(i));
                    progress = true;
                    break;
                }
            }
            if (!progress) throw Error("surface presentation did not reduce to one relator");
        }
        relator_ = rel.front();
        subst_ = std::move(subst);
        eliminated_ = std::move(eliminated);
    }

    int genus() const { return genus_; }

    // Is the loop given by signed arrows (walking order) trivial? Genus >= 2 only.
    bool trivial_loop(const std::vector<std::pair<int, int>>& arrows) const {
        if (genus_ == 0) return true;
        if (genus_ == 1) throw Error("use homology on the torus");
        Word w;
        for (auto [a, e] : arrows) {
            int g = gen_[a];
            if (!g) continue;
            Word piece = eliminated_[g] ? subst_[g] : Word{g};
            if (e < 0) piece = invert(piece);
            w.insert(w.end(), piece.begin(), piece.end());
        }
        return dehn_trivial(w);
    }

private:
    bool dehn_trivial(Word w) const {
        std::vector<Word> variants;
        for (const Word& r : {relator_, invert(relator_)})
            for (std::size_t s = 0; s < r.size(); ++s) {
                Word v(r.begin() + static_cast<std::ptrdiff_t>(s), r.end());
                v.insert(v.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(s));
                variants.push_back(std::move(v));
            }
        std::size_t R = relator_.size();
        for (;;) {
            free_reduce(w);
            if (w.empty()) return true;
            bool changed = false;
            for (const auto& v : variants) {
                for (std::size_t L = R; L > R / 2 && !changed; --L) {
                    auto it = std::search(w.begin(), w.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(L));
                    if (it == w.end()) continue;
                    Word repl = invert(Word(v.begin() + static_cast<std::ptrdiff_t>(L), v.end()));
                    auto at = it - w.begin();
                    w.erase(it, it + static_cast<std::ptrdiff_t>(L));
                    w.insert(w.begin() + at, repl.begin(), repl.end());
                    changed = true;
                }
                if (changed) break;
            }
            if (!changed) return false;
        }
    }

    int genus_;
    std::vector<int> gen_;
    Word relator_;
    std::vector<Word> subst_;
    std::vector<char> eliminated_;
};

// ---- consistency ----

struct RayOverlap {
    int start = 0;      // arrow whose rays overlap
    int shared = 0;     // arrow met by both rays on the same lift
    int zig_step = 0, zag_step = 0;
};

struct FaceWitness {
    int face = 0;
    std::vector<Pt> classes;  // zig-turn classes around the face in walking order
};

struct ConsistencyReport {
    bool torus = false;
    bool well_ordered = false;  // meaningful in torus mode only
    std::vector<FaceWitness> order_failures;
    bool ray_check = false;
    std::vector<RayOverlap> overlaps;
    std::vector<int> zero_class;           // zigzag cycle indices with class (0,0)
    std::vector<std::pair<int, int>> double_turns;  // (face, zigzag cycle) met twice in one face
    bool consistent = false;
};

// Angle order on nonzero vectors: half-plane first, then orientation.
inline bool angle_less(const Pt& a, const Pt& b) {
    auto half = [](const Pt& p) { return p.y > 0 || (p.y == 0 && p.x > 0) ? 0 : 1; };
    if (half(a) != half(b)) return half(a) < half(b);
    return cross(a, b) > 0;
}

// The cyclic sequence of directions turns exactly once, weakly (repeats allowed).
inline bool winds_once(const std::vector<Pt>& cs, bool clockwise) {
    std::size_t k = cs.size();
    if (std::find(cs.begin(), cs.end(), Pt{}) != cs.end()) return false;
    std::vector<Pt> seq = cs;
    if (clockwise) std::reverse(seq.begin(), seq.end());
    auto is_min = [&](std::size_t i) {
        return std::none_of(seq.begin(), seq.end(), [&](const Pt& p) { return angle_less(p, seq[i]); });
    };
    std::size_t start = k;
    for (std::size_t i = 0; i < k && start == k; ++i)
        if (is_min(i) && !is_min((i + k - 1) % k)) start = i;
    if (start == k) return false;
    for (std::size_t s = 0; s + 1 < k; ++s)
        if (angle_less(seq[(start + s + 1) % k], seq[(start + s) % k])) return false;
    return true;
}

// Orientation of the homology basis relative to the surface, read off from zigzag crossings.
// Drawn through arrow midpoints, two zigzag curves cross transversally at each shared arrow
// with a sign given by which one turns there; the signed count equals det of their classes
// up to the orientation sign. Returns 0 when all classes are parallel.
inline int basis_orientation(const Dimer& d, const std::vector<ZigzagCycle>& zs) {
    std::vector<int> even = zig_owner(d, zs), odd(d.arrow_count() + 1, -1);
    for (std::size_t i = 0; i < zs.size(); ++i)
        for (std::size_t k = 1; k < zs[i].arrows.size(); k += 2) odd[zs[i].arrows[k]] = static_cast<int>(i);
    std::size_t n = zs.size();
    std::vector<std::vector<std::int64_t>> crossing(n, std::vector<std::int64_t>(n, 0));
    for (int a = 1; a <= d.arrow_count(); ++a) {
        crossing[even[a]][odd[a]] += 1;
        crossing[odd[a]][even[a]] -= 1;
    }
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto det = cross(zs[i].hclass, zs[j].hclass);
            if (det == 0) continue;
            if (crossing[i][j] % det != 0 || (crossing[i][j] / det != 1 && crossing[i][j] / det != -1))
                throw Error("zigzag crossing count disagrees with homology");
            int s = crossing[i][j] / det > 0 ? 1 : -1;
            if (sign != 0 && s != sign) throw Error("zigzag crossing count disagrees with homology");
            sign = s;
        }
    return sign;
}

inline ConsistencyReport is_consistent(const Dimer& d, const Homology& H) {
    ConsistencyReport rep;
    rep.torus = H.torus();
    auto zs = zigzag_cycles(d, &H);
    auto own = zig_owner(d, zs);

    for (int f = 0; f < d.pos_count; ++f) {
        std::map<int, int> seen;
        for (int a : d.faces[f])
            if (++seen[own[a]] == 2) rep.double_turns.emplace_back(f, own[a]);
    }

    if (rep.torus) {
        for (std::size_t i = 0; i < zs.size(); ++i)
            if (zs[i].hclass == Pt{}) rep.zero_class.push_back(static_cast<int>(i));
        rep.well_ordered = true;
        int orient = basis_orientation(d, zs);
        for (int f = 0; f < d.pos_count; ++f) {
            FaceWitness w{f, {}};
            for (int a : d.faces[f]) w.classes.push_back(zs[own[a]].hclass);
            // equal classes may tie only when they belong to different cycles
            bool repeated = std::any_of(rep.double_turns.begin(), rep.double_turns.end(),
                                        [&](const auto& t) { return t.first == f; });
            bool ordered = (orient <= 0 && winds_once(w.classes, false)) || (orient >= 0 && winds_once(w.classes, true));
            if (repeated || !ordered) {
                rep.well_ordered = false;
                rep.order_failures.push_back(std::move(w));
            }
        }
    }

    std::optional<SurfaceGroup> group;
    if (!rep.torus) group.emplace(d, H);
    int F = d.face_count();
    rep.ray_check = true;
    for (int a = 1; a <= d.arrow_count(); ++a) {
        auto ray = [&](bool zig) {
            std::size_t period = zs[own[a]].arrows.size();
            std::size_t len = std::max<std::size_t>(4 * F, 2 * period);
            std::vector<int> r{a};
            bool plus = zig;
            while (r.size() < len) {
                r.push_back(plus ? d.sp[r.back()] : d.sm[r.back()]);
                plus = !plus;
            }
            return r;
        };
        auto zig = ray(true), zag = ray(false);
        Chain zig_prefix = zero_chain(d);
        for (std::size_t i = 0; i < zig.size(); ++i) {
            if (i > 0) zig_prefix[zig[i - 1]] += 1;
            Chain zag_prefix = zero_chain(d);
            for (std::size_t j = 0; j < zag.size(); ++j) {
                if (j > 0) zag_prefix[zag[j - 1]] += 1;
                if (i == 0 && j == 0) continue;
                if (zig[i] != zag[j]) continue;
                bool same;
                if (rep.torus) {
                    same = H.class_of(zig_prefix - zag_prefix) == Pt{};
                } else {
                    std::vector<std::pair<int, int>> loop;
                    for (std::size_t k = 0; k < i; ++k) loop.emplace_back(zig[k], 1);
                    for (std::size_t k = j; k-- > 0;) loop.emplace_back(zag[k], -1);
                    same = group->trivial_loop(loop);
                }
                if (same) {
                    rep.ray_check = false;
                    rep.overlaps.push_back({a, zig[i], static_cast<int>(i), static_cast<int>(j)});
                }
            }
        }
    }
    rep.consistent = rep.torus ? rep.well_ordered && rep.zero_class.empty() : rep.ray_check;
    return rep;
}

}  // namespace dimerlab
