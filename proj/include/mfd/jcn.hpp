#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mfd/mesh_io.hpp"

namespace mfd {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

Range field_range(std::span<const double> values);

/// Uniform slab grid over [lo, hi]; bin(v) = clamp(floor((v - lo) / w), 0, q - 1).
struct Quantization {
    double lo = 0.0;
    double hi = 1.0;
    int slabs = 1;
    double width = 1.0;  ///< (hi - lo) / slabs, or 1 for a constant range

    int bin(double v) const;
    double center(int b) const { return lo + (b + 0.5) * width; }
    double lower(int b) const { return lo + b * width; }
    double upper(int b) const { return lo + (b + 1) * width; }
    int mirror(int b) const { return slabs - 1 - b; }
    bool operator==(const Quantization&) const = default;
};

/// Grid covering the union of the given ranges. Throws InputError when slabs < 1.
Quantization make_quantization(std::span<const Range> ranges, int slabs);
Quantization make_quantization(Range a, int slabs);
Quantization make_quantization(Range a, Range b, int slabs);

enum class FragmentMode {
    Clip,           ///< slice simplices by slab iso-levels into convex single-bin fragments
    VertexBinning,  ///< one fragment per simplex, binned at its barycenter
};

struct Fragment {
    int simplex = 0;
    std::vector<int> bins;
    double measure = 0.0;  ///< length/area/volume in mesh units
};

struct JcnNode {
    std::vector<int> bins;
    std::vector<double> values;  ///< bin centers
    std::vector<int> fragments;  ///< ascending fragment ids
};

/// Joint Contour Net. Nodes are ordered by their smallest fragment id; edges are (a < b), sorted, unique.
struct JointContourNet {
    std::vector<Quantization> quantizations;
    std::vector<Fragment> fragments;
    std::vector<JcnNode> nodes;
    std::vector<std::pair<int, int>> edges;

    std::size_t field_count() const { return quantizations.size(); }
    std::vector<std::vector<int>> adjacency() const;
};

/// Builds the JCN of all mesh fields. Throws InputError when the field count exceeds the simplex dimension
/// or does not match the quantization count.
JointContourNet build_jcn(const MultiFieldMesh& mesh, std::span<const Quantization> quant,
                          FragmentMode mode = FragmentMode::Clip);

}  // namespace mfd
