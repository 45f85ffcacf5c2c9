#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cstdint>

#include "corrector/errors.hpp"

namespace corrector {

// Uniform node-centered grid on [-radius, radius]^d, d <= 3, odd n per axis
// so the origin is a node. Flat indices are row-major in axis order.
struct Grid {
    int d = 0;
    int n = 0;
    double radius = 0.0;
    double h = 0.0;

    Grid() = default;
    Grid(int d_, int n_, double radius_) : d(d_), n(n_), radius(radius_) {
        if (d < 1 || d > 3)
            throw Error(Errc::UnsupportedDimension, "grid dimension must be 1, 2 or 3");
        if (n < 3 || n % 2 == 0)
            throw Error(Errc::DegenerateInput, "grid needs an odd node count >= 3 per axis");
        if (!(radius > 0.0))
            throw Error(Errc::DegenerateInput, "grid radius must be positive");
        h = 2.0 * radius / (n - 1);
    }

    std::int64_t size() const {
        std::int64_t s = 1;
        for (int a = 0; a < d; ++a) s *= n;
        return s;
    }

    std::array<int, 3> unpack(std::int64_t k) const {
        std::array<int, 3> c{0, 0, 0};
        for (int a = d - 1; a >= 0; --a) {
            c[a] = static_cast<int>(k % n);
            k /= n;
        }
        return c;
    }

    std::int64_t pack(const std::array<int, 3>& c) const {
        std::int64_t k = 0;
        for (int a = 0; a < d; ++a) k = k * n + c[a];
        return k;
    }

    std::int64_t origin() const {
        std::array<int, 3> c{0, 0, 0};
        for (int a = 0; a < d; ++a) c[a] = (n - 1) / 2;
        return pack(c);
    }

    Eigen::VectorXd rho(std::int64_t k) const {
        auto c = unpack(k);
        Eigen::VectorXd r(d);
        for (int a = 0; a < d; ++a) r[a] = -radius + h * c[a];
        return r;
    }

    // Target node after moving by dir (entries in {-1,0,1}), or -1 if it
    // would leave the grid.
    std::int64_t shift(std::int64_t k, const std::array<int, 3>& dir) const {
        auto c = unpack(k);
        for (int a = 0; a < d; ++a) {
            c[a] += dir[a];
            if (c[a] < 0 || c[a] >= n) return -1;
        }
        return pack(c);
    }

    // Full second-order stencil (axis and corner neighbours) available.
    bool diffusible(std::int64_t k) const {
        auto c = unpack(k);
        for (int a = 0; a < d; ++a)
            if (c[a] < 1 || c[a] > n - 2) return false;
        return true;
    }

    int extreme_count(std::int64_t k) const {
        auto c = unpack(k);
        int count = 0;
        for (int a = 0; a < d; ++a)
            if (c[a] == 0 || c[a] == n - 1) ++count;
        return count;
    }

    // Steps to the nearest face, in nodes.
    int boundary_depth(std::int64_t k) const {
        auto c = unpack(k);
        int depth = n;
        for (int a = 0; a < d; ++a) {
            depth = std::min(depth, c[a]);
            depth = std::min(depth, n - 1 - c[a]);
        }
        return depth;
    }
};

// Transfer actions move mass between positions i and j of the extended
// portfolio vector, position 0 being the cash account. In rho coordinates a
// transfer from i to j moves the state by h * (e_j - e_i) with e_0 = 0.
struct TransferPair {
    int from = 0;
    int to = 0;
};

inline int pair_id(int d, int i, int j) {
    (void)d;
    return i * 4 + j;
}

inline TransferPair pair_from_id(int id) { return TransferPair{id / 4, id % 4}; }

inline std::array<int, 3> pair_direction(int i, int j) {
    std::array<int, 3> dir{0, 0, 0};
    if (i > 0) dir[i - 1] -= 1;
    if (j > 0) dir[j - 1] += 1;
    return dir;
}

// Unordered pair slot used for binding-set bitmasks, pairs listed as
// (0,1), (0,2), ..., (0,d), (1,2), ... in lexicographic order.
inline int unordered_pair_slot(int d, int i, int j) {
    if (i > j) std::swap(i, j);
    int slot = 0;
    for (int a = 0; a <= d; ++a) {
        for (int b = a + 1; b <= d; ++b) {
            if (a == i && b == j) return slot;
            ++slot;
        }
    }
    return -1;
}

inline int unordered_pair_count(int d) { return (d + 1) * d / 2; }

}  // namespace corrector
