#include "mfd/pipeline.hpp"

#include <string>

#include "mfd/mdrg.hpp"

namespace mfd {

int PipelineOptions::slabs_for(std::size_t field) const {
    if (slabs.empty()) throw InputError("no slab count configured");
    return slabs[std::min(field, slabs.size() - 1)];
}

std::vector<Quantization> shared_quantizations(std::span<const MultiFieldMesh* const> meshes, const PipelineOptions& options) {
    if (meshes.empty()) throw InputError("no meshes to quantize");
    const std::size_t r = meshes[0]->field_count();
    for (const auto* m : meshes)
        if (m->field_count() != r)
            throw InputError("field counts differ (" + std::to_string(r) + " vs " + std::to_string(m->field_count()) + ")");
    std::vector<Quantization> out;
    for (std::size_t k = 0; k < r; ++k) {
        std::vector<Range> ranges;
        for (const auto* m : meshes) ranges.push_back(field_range(m->field(k)));
        out.push_back(make_quantization(ranges, options.slabs_for(k)));
    }
    return out;
}

MdrgDiagrams analyze(const MultiFieldMesh& mesh, std::span<const Quantization> quant, const PipelineOptions& options) {
    JointContourNet jcn = build_jcn(mesh, quant, options.mode);
    return compute_diagrams(build_mdrg(jcn), options.epsilon_factor);
}

DistanceReport field_distance(const MultiFieldMesh& a, const MultiFieldMesh& b, std::span<const Quantization> quant,
                              const PipelineOptions& options) {
    if (a.field_count() != b.field_count())
        throw InputError("field counts differ (" + std::to_string(a.field_count()) + " vs " +
                         std::to_string(b.field_count()) + ")");
    MdrgDiagrams da = analyze(a, quant, options);
    MdrgDiagrams db = &a == &b ? da : analyze(b, quant, options);
    return total_distance(da, db, options.weights, options.objective);
}

DistanceReport field_distance(const MultiFieldMesh& a, const MultiFieldMesh& b, const PipelineOptions& options) {
    const MultiFieldMesh* both[2] = {&a, &b};
    auto quant = shared_quantizations(both, options);
    return field_distance(a, b, quant, options);
}

ShapeDistance shape_distance(const MultiFieldMesh& m1, const EigenDescriptorSet& d1, const MultiFieldMesh& m2,
                             const EigenDescriptorSet& d2, int count, const PipelineOptions& options) {
    if (count < 2) throw InputError("shape distance needs at least 2 eigenfunctions");
    if (static_cast<int>(d1.descriptors.size()) < count || static_cast<int>(d2.descriptors.size()) < count)
        throw InputError("requested " + std::to_string(count) + " eigenfunctions but descriptors hold " +
                         std::to_string(std::min(d1.descriptors.size(), d2.descriptors.size())));
    if (d1.descriptors[0].size() != m1.vertex_count() || d2.descriptors[0].size() != m2.vertex_count())
        throw InputError("descriptor length does not match the mesh vertex count");
    ShapeDistance out;
    for (int i = 0; i + 1 < count; ++i) {
        MultiFieldMesh a = m1.without_fields(), b = m2.without_fields();
        a.attach_field("phi" + std::to_string(i + 1), d1.descriptors[i]);
        a.attach_field("phi" + std::to_string(i + 2), d1.descriptors[i + 1]);
        b.attach_field("phi" + std::to_string(i + 1), d2.descriptors[i]);
        b.attach_field("phi" + std::to_string(i + 2), d2.descriptors[i + 1]);
        out.terms.push_back(field_distance(a, b, options));
        out.total += out.terms.back().total;
    }
    return out;
}

}  // namespace mfd
