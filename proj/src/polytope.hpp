#pragma once

#include <array>
#include <span>
#include <vector>

namespace mfd::detail {

using Point = std::array<double, 3>;

/// a.x + c >= 0 over the first m coordinates.
struct HalfSpace {
    Point a{0, 0, 0};
    double c = 0;
};

/// Normalizes and appends; constant constraints are dropped when satisfied.
/// Returns false when the constraint is constant and violated (empty set).
bool add_constraint(std::vector<HalfSpace>& out, Point a, double c, int m);

/// Vertices of the bounded polytope {x : all constraints hold} in R^m, m in {2,3}; duplicates merged.
std::vector<Point> polytope_vertices(std::span<const HalfSpace> cons, int m);

/// m-dimensional measure of the polytope with the given vertices.
double polytope_measure(std::span<const Point> verts, std::span<const HalfSpace> cons, int m);

/// (m-1)-dimensional measure of a convex point set lying in a hyperplane of R^m.
double flat_measure(std::span<const Point> pts, int m);

}  // namespace mfd::detail
