#pragma once

#include "dimerlab/algebra.hpp"

#include <set>

// Disks built from faces glued along arrows in a tree pattern (immersed, no interior vertex),
// stored as the inner angle loop in walking order. side[i] is true when angle i ends at a
// boundary side of the disk.
struct FaceDisk {
    std::vector<int> loop;
    std::vector<char> side;

    std::size_t boundary_length() const { return static_cast<std::size_t>(std::count(side.begin(), side.end(), 1)); }
};

inline std::vector<int> face_angles_from(const dimerlab::AngleQuiver& q, int a, bool positive) {
    std::vector<int> out;
    int b = a;
    do {
        out.push_back(q.out_angle(b, positive));
        b = q.angles[out.back()].dst;
    } while (b != a);
    return out;
}

inline std::vector<FaceDisk> enumerate_disks(const dimerlab::Dimer& d, const dimerlab::AngleQuiver& q,
                                             std::size_t max_boundary) {
    std::vector<FaceDisk> out, frontier;
    for (int f = 0; f < d.face_count(); ++f) {
        FaceDisk disk;
        disk.loop = face_angles_from(q, d.faces[f][0], d.positive(f));
        disk.side.assign(disk.loop.size(), 1);
        if (disk.boundary_length() <= max_boundary) frontier.push_back(disk);
    }
    std::set<std::vector<std::pair<int, char>>> seen;
    while (!frontier.empty()) {
        std::vector<FaceDisk> next;
        for (auto& disk : frontier) {
            std::vector<std::pair<int, char>> key;
            for (std::size_t i = 0; i < disk.loop.size(); ++i) key.emplace_back(disk.loop[i], disk.side[i]);
            auto best = key;
            for (std::size_t r = 1; r < key.size(); ++r) {
                std::rotate(key.begin(), key.begin() + 1, key.end());
                best = std::min(best, key);
            }
            if (!seen.insert(best).second) continue;
            out.push_back(disk);
            for (std::size_t i = 0; i < disk.loop.size(); ++i) {
                if (!disk.side[i]) continue;
                const auto& g = q.angles[disk.loop[i]];
                auto glued = face_angles_from(q, g.dst, !g.positive);
                FaceDisk grown = disk;
                grown.side[i] = 0;
                std::vector<char> marks(glued.size(), 1);
                marks.back() = 0;
                grown.loop.insert(grown.loop.begin() + static_cast<std::ptrdiff_t>(i) + 1, glued.begin(), glued.end());
                grown.side.insert(grown.side.begin() + static_cast<std::ptrdiff_t>(i) + 1, marks.begin(), marks.end());
                if (grown.boundary_length() <= max_boundary) next.push_back(std::move(grown));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

// rho_1..rho_k in composition order, the walk starting right after the `start`-th boundary side.
inline std::vector<dimerlab::AnglePath> disk_sequence(const dimerlab::AngleQuiver& q, const FaceDisk& disk,
                                                      std::size_t start) {
    std::size_t n = disk.loop.size(), first = 0, seen = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (disk.side[i] && seen++ == start) first = (i + 1) % n;
    std::vector<dimerlab::AnglePath> walked;
    std::vector<int> cur;
    for (std::size_t s = 0; s < n; ++s) {
        std::size_t i = (first + s) % n;
        cur.push_back(disk.loop[i]);
        if (disk.side[i]) {
            std::reverse(cur.begin(), cur.end());
            walked.push_back(dimerlab::make_angle_path(q, cur));
            cur.clear();
        }
    }
    std::reverse(walked.begin(), walked.end());
    return walked;
}
