#pragma once

#include <array>
#include <span>
#include <vector>

#include "mfd/distance.hpp"
#include "mfd/jcn.hpp"
#include "mfd/mesh_io.hpp"
#include "mfd/spectral.hpp"

namespace mfd {

struct PipelineOptions {
    std::vector<int> slabs{32};  ///< per field; the last entry repeats for further fields
    std::array<double, 3> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
    BijectionObjective objective = BijectionObjective::Minimax;
    FragmentMode mode = FragmentMode::Clip;
    double epsilon_factor = 1e-6;

    int slabs_for(std::size_t field) const;
};

/// Per-field quantization over the union of the field ranges of all meshes.
std::vector<Quantization> shared_quantizations(std::span<const MultiFieldMesh* const> meshes, const PipelineOptions& options);

/// JCN, MDRG and diagrams of all fields of the mesh.
MdrgDiagrams analyze(const MultiFieldMesh& mesh, std::span<const Quantization> quant, const PipelineOptions& options);

/// d_T (or d_{T,r}) between two multi-fields with the same field count, on their union-range quantization.
DistanceReport field_distance(const MultiFieldMesh& a, const MultiFieldMesh& b, const PipelineOptions& options);
/// As above with caller-supplied quantizations.
DistanceReport field_distance(const MultiFieldMesh& a, const MultiFieldMesh& b, std::span<const Quantization> quant,
                              const PipelineOptions& options);

struct ShapeDistance {
    double total = 0.0;
    std::vector<DistanceReport> terms;  ///< term i compares (|phi_i|, |phi_i+1|)
};

/// Sum over i = 1..E-1 of d_T on the bivariate descriptor fields (|phi_i|, |phi_i+1|).
ShapeDistance shape_distance(const MultiFieldMesh& m1, const EigenDescriptorSet& d1, const MultiFieldMesh& m2,
                             const EigenDescriptorSet& d2, int count, const PipelineOptions& options);

}  // namespace mfd
