#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "mfd/mdrg.hpp"
#include "mfd/mesh_io.hpp"
#include "mfd/union_find.hpp"

namespace fixtures {

using mfd::MultiFieldMesh;
using mfd::Vec3;

/// Planar triangulated rectangle [0,w]x[0,h] with nx by ny cells.
inline MultiFieldMesh grid_surface(int nx, int ny, double w = 1.0, double h = 1.0) {
    std::vector<Vec3> v;
    std::vector<int> t;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) v.push_back({w * i / nx, h * j / ny, 0.0});
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            t.insert(t.end(), {id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            t.insert(t.end(), {id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return MultiFieldMesh(v, t, 3);
}

/// Unit sphere: subdivided icosahedron. level 4 has 2562 vertices.
inline MultiFieldMesh icosphere(int level) {
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                           {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
    std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    auto normalize = [](Vec3 a) {
        double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
        return Vec3{a[0] / n, a[1] / n, a[2] / n};
    };
    for (auto& x : v) x = normalize(x);
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back(normalize({(v[a][0] + v[b][0]) / 2, (v[a][1] + v[b][1]) / 2, (v[a][2] + v[b][2]) / 2}));
            return mid[key] = static_cast<int>(v.size()) - 1;
        };
        std::vector<std::array<int, 3>> next;
        for (auto [a, b, c] : f) {
            int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }
    std::vector<int> t;
    for (auto [a, b, c] : f) t.insert(t.end(), {a, b, c});
    return MultiFieldMesh(v, t, 3);
}

inline MultiFieldMesh torus(double R, double r, int nu, int nv) {
    std::vector<Vec3> v;
    std::vector<int> t;
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            double a = 2 * std::numbers::pi * i / nu, b = 2 * std::numbers::pi * j / nv;
            v.push_back({(R + r * std::cos(b)) * std::cos(a), (R + r * std::cos(b)) * std::sin(a), r * std::sin(b)});
        }
    auto id = [&](int i, int j) { return ((i + nu) % nu) * nv + (j + nv) % nv; };
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            t.insert(t.end(), {id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            t.insert(t.end(), {id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return MultiFieldMesh(v, t, 3);
}

/// Closed genus-2 surface: two copies of the rectangle [0,2]x[0,1] with holes over x in [0.3,0.9] and
/// [1.1,1.7] (y in [0.3,0.7]), glued along every boundary loop. Interior vertices are lifted to +-height.
inline MultiFieldMesh double_torus(int cells_per_unit = 10, double height = 0.15) {
    const int nx = 2 * cells_per_unit, ny = cells_per_unit;
    const double hx = 2.0 / nx, hy = 1.0 / ny;
    auto in_hole = [&](int i, int j) {  // cell (i, j)
        double cx = (i + 0.5) * hx, cy = (j + 0.5) * hy;
        bool hole_x = (cx > 0.3 && cx < 0.9) || (cx > 1.1 && cx < 1.7);
        return hole_x && cy > 0.3 && cy < 0.7;
    };
    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    const int nv = (nx + 1) * (ny + 1);
    // A vertex is on the boundary when some incident cell slot is a hole or outside.
    std::vector<char> boundary(nv, 0), used(nv, 0);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            for (int dj = -1; dj <= 0; ++dj)
                for (int di = -1; di <= 0; ++di) {
                    int ci = i + di, cj = j + dj;
                    bool solid = ci >= 0 && cj >= 0 && ci < nx && cj < ny && !in_hole(ci, cj);
                    if (!solid) boundary[vid(i, j)] = 1;
                    else used[vid(i, j)] = 1;
                }
        }
    // Graph distance to the boundary for a smooth-ish lift.
    std::vector<int> depth(nv, 1 << 20);
    std::vector<int> queue;
    for (int k = 0; k < nv; ++k)
        if (used[k] && boundary[k]) depth[k] = 0, queue.push_back(k);
    for (std::size_t q = 0; q < queue.size(); ++q) {
        int k = queue[q], i = k % (nx + 1), j = k / (nx + 1);
        const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int a = i + di[d], b = j + dj[d];
            if (a < 0 || b < 0 || a > nx || b > ny) continue;
            int w = vid(a, b);
            if (used[w] && depth[w] > depth[k] + 1) depth[w] = depth[k] + 1, queue.push_back(w);
        }
    }
    std::vector<Vec3> v;
    std::vector<int> top(nv, -1), bottom(nv, -1);
    for (int k = 0; k < nv; ++k) {
        if (!used[k]) continue;
        double x = (k % (nx + 1)) * hx, y = (k / (nx + 1)) * hy;
        double z = height * std::min(depth[k], 3) / 3.0;
        top[k] = static_cast<int>(v.size());
        v.push_back({x, y, z});
        if (boundary[k]) {
            bottom[k] = top[k];
        } else {
            bottom[k] = static_cast<int>(v.size());
            v.push_back({x, y, -z});
        }
    }
    std::vector<int> t;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (in_hole(i, j)) continue;
            int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            // a triangle with only boundary vertices would be shared by both sheets
            const bool flip = boundary[a] && boundary[c] && (boundary[b] || boundary[d]);
            if (flip) {
                t.insert(t.end(), {top[a], top[b], top[d], top[b], top[c], top[d]});
                t.insert(t.end(), {bottom[a], bottom[d], bottom[b], bottom[b], bottom[d], bottom[c]});
            } else {
                t.insert(t.end(), {top[a], top[b], top[c], top[a], top[c], top[d]});
                t.insert(t.end(), {bottom[a], bottom[c], bottom[b], bottom[a], bottom[d], bottom[c]});
            }
        }
    return MultiFieldMesh(v, t, 3);
}

inline std::vector<double> coordinate(const MultiFieldMesh& m, int axis) {
    std::vector<double> out;
    for (const auto& p : m.vertices()) out.push_back(p[axis]);
    return out;
}

/// Tetrahedral grid of n^3 points over [0,1]^3.
inline MultiFieldMesh tet_grid(int n) {
    mfd::RegularGrid g;
    g.dims = {n, n, n};
    g.spacing = {1.0 / (n - 1), 1.0 / (n - 1), 1.0 / (n - 1)};
    return mfd::grid_to_mesh(g);
}

/// Uniformly random rotation (via a random unit quaternion) plus translation.
inline void random_rigid_motion(MultiFieldMesh& m, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    double q[4];
    double n = 0;
    for (double& x : q) x = nd(rng), n += x * x;
    n = std::sqrt(n);
    for (double& x : q) x /= n;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    const double r[3][3] = {{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                            {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                            {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
    std::uniform_real_distribution<double> ud(-5, 5);
    const Vec3 shift{ud(rng), ud(rng), ud(rng)};
    for (auto& p : m.vertices()) {
        Vec3 o{};
        for (int i = 0; i < 3; ++i) o[i] = r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2] + shift[i];
        p = o;
    }
}

/// Moves each vertex by a uniform random offset of at most `fraction` of the bounding-box diagonal.
inline void add_vertex_noise(MultiFieldMesh& m, double fraction, std::mt19937_64& rng) {
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const auto& p : m.vertices())
        for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], p[k]), hi[k] = std::max(hi[k], p[k]);
    const double diag = std::sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) + (hi[1] - lo[1]) * (hi[1] - lo[1]) +
                                  (hi[2] - lo[2]) * (hi[2] - lo[2]));
    std::uniform_real_distribution<double> ud(-1, 1);
    const double a = fraction * diag / std::sqrt(3.0);
    for (auto& p : m.vertices())
        for (int k = 0; k < 3; ++k) p[k] += a * ud(rng);
}

/// Random connected graph with integer values in [0, value_range), duplicates allowed.
inline mfd::ReebGraph random_graph(int nodes, int extra_edges, int value_range, std::mt19937_64& rng) {
    mfd::ReebGraph g;
    std::uniform_int_distribution<int> val(0, value_range - 1);
    for (int i = 0; i < nodes; ++i) g.nodes.push_back({static_cast<double>(val(rng)), -1, {}});
    std::set<std::pair<int, int>> edges;
    for (int i = 1; i < nodes; ++i) {
        int p = std::uniform_int_distribution<int>(0, i - 1)(rng);
        edges.insert({p, i});
    }
    for (int k = 0; k < extra_edges && nodes > 1; ++k) {
        int a = std::uniform_int_distribution<int>(0, nodes - 1)(rng);
        int b = std::uniform_int_distribution<int>(0, nodes - 1)(rng);
        if (a != b) edges.insert(std::minmax(a, b));
    }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

/// Random Morse-ified graph with at most max_nodes nodes.
inline mfd::ReebGraph random_morse_graph(int max_nodes, std::mt19937_64& rng) {
    for (;;) {
        int n = std::uniform_int_distribution<int>(1, 8)(rng);
        int extra = std::uniform_int_distribution<int>(0, 4)(rng);
        auto g = mfd::morseify(random_graph(n, extra, 6, rng), 1e-3);
        if (static_cast<int>(g.nodes.size()) <= max_nodes) return g;
    }
}

}  // namespace fixtures
