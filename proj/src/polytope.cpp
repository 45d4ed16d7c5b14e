#include "polytope.hpp"

#include <algorithm>
#include <cmath>

namespace mfd::detail {

namespace {

constexpr double kFeasible = 1e-12;
constexpr double kActive = 1e-9;
constexpr double kMerge = 1e-10;

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Point cross(const Point& a, const Point& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Point& a) { return std::sqrt(dot(a, a)); }

/// Area of a convex planar polygon given by unordered vertices.
double convex_polygon_area(std::span<const Point> pts) {
    if (pts.size() < 3) return 0.0;
    Point ctr{0, 0, 0};
    for (const auto& p : pts)
        for (int k = 0; k < 3; ++k) ctr[k] += p[k] / pts.size();
    std::size_t far = 0;
    double best = -1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double d = norm(sub(pts[i], ctr));
        if (d > best) best = d, far = i;
    }
    if (best <= 0) return 0.0;
    Point e1 = sub(pts[far], ctr);
    Point normal{0, 0, 0};
    double nbest = 0;
    for (const auto& p : pts) {
        Point c = cross(e1, sub(p, ctr));
        double nc = norm(c);
        if (nc > nbest) nbest = nc, normal = c;
    }
    if (nbest <= 1e-14 * best * best) return 0.0;
    for (double& x : normal) x /= nbest;
    double l1 = norm(e1);
    for (double& x : e1) x /= l1;
    Point e2 = cross(normal, e1);
    std::vector<std::pair<double, std::pair<double, double>>> polar;
    polar.reserve(pts.size());
    for (const auto& p : pts) {
        Point d = sub(p, ctr);
        double u = dot(d, e1), v = dot(d, e2);
        polar.push_back({std::atan2(v, u), {u, v}});
    }
    std::sort(polar.begin(), polar.end());
    double area = 0;
    for (std::size_t i = 0; i < polar.size(); ++i) {
        auto [u0, v0] = polar[i].second;
        auto [u1, v1] = polar[(i + 1) % polar.size()].second;
        area += u0 * v1 - u1 * v0;
    }
    return 0.5 * std::abs(area);
}

}  // namespace

bool add_constraint(std::vector<HalfSpace>& out, Point a, double c, int m) {
    for (int k = m; k < 3; ++k) a[k] = 0;
    double n = norm(a);
    if (n == 0.0) return c >= 0;
    HalfSpace h;
    for (int k = 0; k < 3; ++k) h.a[k] = a[k] / n;
    h.c = c / n;
    for (const auto& e : out)
        if (std::abs(e.c - h.c) < 1e-13 && std::abs(e.a[0] - h.a[0]) < 1e-13 && std::abs(e.a[1] - h.a[1]) < 1e-13 &&
            std::abs(e.a[2] - h.a[2]) < 1e-13)
            return true;
    out.push_back(h);
    return true;
}

std::vector<Point> polytope_vertices(std::span<const HalfSpace> cons, int m) {
    std::vector<Point> verts;
    const std::size_t n = cons.size();
    auto try_point = [&](const Point& x) {
        for (const auto& h : cons)
            if (dot(h.a, x) + h.c < -kFeasible) return;
        for (const auto& v : verts)
            if (std::abs(v[0] - x[0]) < kMerge && std::abs(v[1] - x[1]) < kMerge && std::abs(v[2] - x[2]) < kMerge) return;
        verts.push_back(x);
    };
    if (m == 2) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const auto &p = cons[i], &q = cons[j];
                double det = p.a[0] * q.a[1] - p.a[1] * q.a[0];
                if (std::abs(det) < 1e-13) continue;
                // a x = -c
                double x = (-p.c * q.a[1] + q.c * p.a[1]) / det;
                double y = (-q.c * p.a[0] + p.c * q.a[0]) / det;
                try_point({x, y, 0});
            }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                Point cij = cross(cons[i].a, cons[j].a);
                for (std::size_t k = j + 1; k < n; ++k) {
                    double det = dot(cons[k].a, cij);
                    if (std::abs(det) < 1e-13) continue;
                    // Solve via the triple-product formula.
                    Point cjk = cross(cons[j].a, cons[k].a), cki = cross(cons[k].a, cons[i].a);
                    Point x;
                    for (int d = 0; d < 3; ++d) x[d] = -(cons[i].c * cjk[d] + cons[j].c * cki[d] + cons[k].c * cij[d]) / det;
                    try_point(x);
                }
            }
    }
    return verts;
}

double flat_measure(std::span<const Point> pts, int m) {
    if (m == 2) {
        double best = 0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, norm(sub(pts[i], pts[j])));
        return best;
    }
    return convex_polygon_area(pts);
}

double polytope_measure(std::span<const Point> verts, std::span<const HalfSpace> cons, int m) {
    if (verts.size() < static_cast<std::size_t>(m + 1)) return 0.0;
    if (m == 2) return convex_polygon_area(verts);
    Point ctr{0, 0, 0};
    for (const auto& p : verts)
        for (int k = 0; k < 3; ++k) ctr[k] += p[k] / verts.size();
    double vol = 0;
    std::vector<Point> face;
    for (const auto& h : cons) {
        face.clear();
        for (const auto& v : verts)
            if (std::abs(dot(h.a, v) + h.c) < kActive) face.push_back(v);
        if (face.size() < 3) continue;
        double height = dot(h.a, ctr) + h.c;
        if (height <= 0) continue;
        vol += convex_polygon_area(face) * height / 3.0;
    }
    return vol;
}

}  // namespace mfd::detail
