#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfd {

using Vec3 = std::array<double, 3>;

/// Thrown for malformed or inconsistent input data.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Simplicial domain with r per-vertex scalar fields.
/// Simplices are stored flat; every simplex has simplex_size() vertex indices.
class MultiFieldMesh {
public:
    MultiFieldMesh() = default;
    /// @param simplex_size 3 for triangles, 4 for tetrahedra
    MultiFieldMesh(std::vector<Vec3> vertices, std::vector<int> simplex_indices, int simplex_size);

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t simplex_count() const { return simplex_size_ ? indices_.size() / simplex_size_ : 0; }
    int simplex_size() const { return simplex_size_; }
    int dimension() const { return simplex_size_ - 1; }

    const std::vector<Vec3>& vertices() const { return vertices_; }
    std::vector<Vec3>& vertices() { return vertices_; }
    std::span<const int> simplex(std::size_t s) const {
        return {indices_.data() + s * simplex_size_, static_cast<std::size_t>(simplex_size_)};
    }
    const std::vector<int>& simplex_indices() const { return indices_; }

    std::size_t field_count() const { return fields_.size(); }
    const std::vector<double>& field(std::size_t i) const { return fields_.at(i); }
    const std::vector<std::string>& field_names() const { return names_; }

    /// Appends a field. Throws InputError on length mismatch or duplicate name.
    void attach_field(const std::string& name, std::vector<double> values);
    /// Copy of the geometry carrying only the selected fields, in the given order.
    MultiFieldMesh with_fields(std::span<const std::size_t> which) const;
    MultiFieldMesh without_fields() const;

    /// Number of connected components of the 1-skeleton.
    int component_count() const;

private:
    std::vector<Vec3> vertices_;
    std::vector<int> indices_;
    int simplex_size_ = 0;
    std::vector<std::vector<double>> fields_;
    std::vector<std::string> names_;
};

/// Returns a new mesh with the field appended.
MultiFieldMesh attach_field(MultiFieldMesh mesh, const std::string& name, std::vector<double> values);

enum class MeshFormat { Off, Obj };

MultiFieldMesh load_mesh(const std::string& path, MeshFormat format);
/// Format chosen from the extension (.off / .obj).
MultiFieldMesh load_mesh(const std::string& path);
MultiFieldMesh parse_off(const std::string& text);
MultiFieldMesh parse_obj(const std::string& text);
void write_off(const MultiFieldMesh& mesh, const std::string& path);
std::string format_off(const MultiFieldMesh& mesh);

struct RegularGrid {
    std::array<int, 3> dims{2, 2, 2};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::vector<std::vector<double>> fields;
    std::vector<std::string> field_names;

    std::size_t point_count() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) + static_cast<std::size_t>(dims[0]) * (y + static_cast<std::size_t>(dims[1]) * z);
    }
};

/// Splits each hexahedral cell into 6 tetrahedra sharing the (0,0,0)-(1,1,1) diagonal.
/// All tetrahedra are positively oriented.
MultiFieldMesh grid_to_mesh(const RegularGrid& grid);

enum class VolumeFormat { RawF32, RawF64, Csv };

/// Values in x-fastest order. @param column csv column to read
std::vector<double> load_volume(const std::string& path, std::array<int, 3> dims, VolumeFormat format,
                                int column = 0);
/// One scalar per line (blank lines and '#' comments skipped).
std::vector<double> load_field_file(const std::string& path);
/// Reads one column of a csv file; a non-numeric first row is treated as a header.
std::vector<double> load_csv_column(const std::string& path, int column);

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace mfd
