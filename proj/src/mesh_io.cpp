#include "mfd/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "text_util.hpp"

namespace mfd {

using detail::parse_double;
using detail::parse_int;

MultiFieldMesh::MultiFieldMesh(std::vector<Vec3> vertices, std::vector<int> simplex_indices, int simplex_size)
    : vertices_(std::move(vertices)), indices_(std::move(simplex_indices)), simplex_size_(simplex_size) {
    if (simplex_size_ != 3 && simplex_size_ != 4) throw InputError("simplices must be triangles or tetrahedra");
    if (indices_.size() % simplex_size_ != 0) throw InputError("simplex index list is not a multiple of the simplex size");
    const int n = static_cast<int>(vertices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 0 || indices_[i] >= n)
            throw InputError("simplex " + std::to_string(i / simplex_size_) + " references vertex " +
                             std::to_string(indices_[i]) + " outside [0, " + std::to_string(n) + ")");
    }
}

void MultiFieldMesh::attach_field(const std::string& name, std::vector<double> values) {
    if (values.size() != vertices_.size())
        throw InputError("field '" + name + "' has " + std::to_string(values.size()) + " values, mesh has " +
                         std::to_string(vertices_.size()) + " vertices");
    if (std::find(names_.begin(), names_.end(), name) != names_.end())
        throw InputError("duplicate field name '" + name + "'");
    fields_.push_back(std::move(values));
    names_.push_back(name);
}

MultiFieldMesh MultiFieldMesh::with_fields(std::span<const std::size_t> which) const {
    MultiFieldMesh out = without_fields();
    for (std::size_t i : which) out.attach_field(names_.at(i), fields_.at(i));
    return out;
}

MultiFieldMesh MultiFieldMesh::without_fields() const {
    MultiFieldMesh out;
    out.vertices_ = vertices_;
    out.indices_ = indices_;
    out.simplex_size_ = simplex_size_;
    return out;
}

int MultiFieldMesh::component_count() const {
    std::vector<int> parent(vertices_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t s = 0; s < simplex_count(); ++s) {
        auto sx = simplex(s);
        for (int k = 1; k < simplex_size_; ++k) {
            int a = find(sx[0]), b = find(sx[k]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    int count = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) count += find(static_cast<int>(i)) == static_cast<int>(i);
    return count;
}

MultiFieldMesh attach_field(MultiFieldMesh mesh, const std::string& name, std::vector<double> values) {
    mesh.attach_field(name, std::move(values));
    return mesh;
}

namespace {

/// Tokens of the file with '#' comments removed.
std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    return tokens;
}

}  // namespace

MultiFieldMesh parse_off(const std::string& text) {
    auto tok = tokenize(text);
    std::size_t p = 0;
    auto next_int = [&](const char* what) {
        if (p >= tok.size()) throw InputError(std::string("OFF: unexpected end of file reading ") + what);
        auto v = parse_int(tok[p]);
        if (!v) throw InputError(std::string("OFF: expected integer for ") + what + ", got '" + tok[p] + "'");
        ++p;
        return *v;
    };
    auto next_real = [&]() {
        if (p >= tok.size()) throw InputError("OFF: unexpected end of file reading coordinates");
        auto v = parse_double(tok[p]);
        if (!v) throw InputError("OFF: expected number, got '" + tok[p] + "'");
        ++p;
        return *v;
    };
    if (p < tok.size() && tok[p] == "OFF") ++p;
    else if (p < tok.size() && tok[p].size() > 3 && tok[p].compare(0, 3, "OFF") == 0)
        throw InputError("OFF: unsupported header variant '" + tok[p] + "'");
    long long nv = next_int("vertex count");
    long long nf = next_int("face count");
    next_int("edge count");
    if (nv < 0 || nf < 0) throw InputError("OFF: negative counts");
    std::vector<Vec3> verts(nv);
    for (auto& v : verts)
        for (double& c : v) c = next_real();
    std::vector<int> idx;
    idx.reserve(3 * nf);
    for (long long f = 0; f < nf; ++f) {
        long long k = next_int("face size");
        if (k != 3) throw InputError("OFF: face " + std::to_string(f) + " has " + std::to_string(k) + " vertices; only triangles are supported");
        for (int j = 0; j < 3; ++j) {
            long long v = next_int("face index");
            if (v < 0 || v >= nv)
                throw InputError("OFF: face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                                 " of a " + std::to_string(nv) + "-vertex mesh");
            idx.push_back(static_cast<int>(v));
        }
    }
    if (p != tok.size()) throw InputError("OFF: trailing data after faces");
    return MultiFieldMesh(std::move(verts), std::move(idx), 3);
}

MultiFieldMesh parse_obj(const std::string& text) {
    std::vector<Vec3> verts;
    std::vector<std::array<long long, 3>> faces;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "v") {
            Vec3 v{};
            for (double& c : v) {
                std::string t;
                if (!(ls >> t)) throw InputError("OBJ line " + std::to_string(line_no) + ": vertex needs 3 coordinates");
                auto d = parse_double(t);
                if (!d) throw InputError("OBJ line " + std::to_string(line_no) + ": bad coordinate '" + t + "'");
                c = *d;
            }
            verts.push_back(v);
        } else if (key == "f") {
            std::vector<long long> ids;
            std::string t;
            while (ls >> t) {
                auto slash = t.find('/');
                auto id = parse_int(t.substr(0, slash));
                if (!id) throw InputError("OBJ line " + std::to_string(line_no) + ": bad face index '" + t + "'");
                ids.push_back(*id);
            }
            if (ids.size() != 3)
                throw InputError("OBJ line " + std::to_string(line_no) + ": face has " + std::to_string(ids.size()) +
                                 " vertices; only triangles are supported");
            faces.push_back({ids[0], ids[1], ids[2]});
        }
    }
    std::vector<int> idx;
    const long long n = static_cast<long long>(verts.size());
    for (auto& f : faces) {
        for (long long id : f) {
            long long z = id > 0 ? id - 1 : n + id;
            if (id == 0 || z < 0 || z >= n)
                throw InputError("OBJ: face references vertex " + std::to_string(id) + " of a " + std::to_string(n) + "-vertex mesh");
            idx.push_back(static_cast<int>(z));
        }
    }
    return MultiFieldMesh(std::move(verts), std::move(idx), 3);
}

MultiFieldMesh load_mesh(const std::string& path, MeshFormat format) {
    std::string text = detail::read_file(path);
    try {
        return format == MeshFormat::Off ? parse_off(text) : parse_obj(text);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

MultiFieldMesh load_mesh(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".off") return load_mesh(path, MeshFormat::Off);
    if (ext == ".obj") return load_mesh(path, MeshFormat::Obj);
    throw InputError("unknown mesh extension '" + ext + "' (expected .off or .obj): " + path);
}

std::string format_off(const MultiFieldMesh& mesh) {
    if (mesh.simplex_size() != 3) throw InputError("OFF export requires a triangle mesh");
    std::string out = "OFF\n" + std::to_string(mesh.vertex_count()) + " " + std::to_string(mesh.simplex_count()) + " 0\n";
    for (const auto& v : mesh.vertices())
        out += detail::format_double(v[0]) + " " + detail::format_double(v[1]) + " " + detail::format_double(v[2]) + "\n";
    for (std::size_t s = 0; s < mesh.simplex_count(); ++s) {
        auto sx = mesh.simplex(s);
        out += "3 " + std::to_string(sx[0]) + " " + std::to_string(sx[1]) + " " + std::to_string(sx[2]) + "\n";
    }
    return out;
}

void write_off(const MultiFieldMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << format_off(mesh);
}

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    double u[3], v[3], w[3];
    for (int k = 0; k < 3; ++k) {
        u[k] = b[k] - a[k];
        v[k] = c[k] - a[k];
        w[k] = d[k] - a[k];
    }
    return (u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0])) / 6.0;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    double u[3], v[3];
    for (int k = 0; k < 3; ++k) {
        u[k] = b[k] - a[k];
        v[k] = c[k] - a[k];
    }
    double x = u[1] * v[2] - u[2] * v[1], y = u[2] * v[0] - u[0] * v[2], z = u[0] * v[1] - u[1] * v[0];
    return 0.5 * std::sqrt(x * x + y * y + z * z);
}

MultiFieldMesh grid_to_mesh(const RegularGrid& grid) {
    for (int d : grid.dims)
        if (d < 2) throw InputError("grid dimensions must be at least 2");
    for (double s : grid.spacing)
        if (!(s > 0)) throw InputError("grid spacing must be positive");
    for (const auto& f : grid.fields)
        if (f.size() != grid.point_count()) throw InputError("grid field length does not match dims product");

    const auto [nx, ny, nz] = grid.dims;
    std::vector<Vec3> verts(grid.point_count());
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                verts[grid.index(x, y, z)] = {x * grid.spacing[0], y * grid.spacing[1], z * grid.spacing[2]};

    // Each tet follows a monotone lattice path 000 -> 111 along one axis permutation.
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(nx - 1) * (ny - 1) * (nz - 1) * 24);
    for (int z = 0; z + 1 < nz; ++z)
        for (int y = 0; y + 1 < ny; ++y)
            for (int x = 0; x + 1 < nx; ++x)
                for (const auto& perm : perms) {
                    int c[3] = {x, y, z};
                    int tet[4];
                    tet[0] = static_cast<int>(grid.index(c[0], c[1], c[2]));
                    for (int s = 0; s < 3; ++s) {
                        ++c[perm[s]];
                        tet[s + 1] = static_cast<int>(grid.index(c[0], c[1], c[2]));
                    }
                    if (signed_tet_volume(verts[tet[0]], verts[tet[1]], verts[tet[2]], verts[tet[3]]) < 0)
                        std::swap(tet[2], tet[3]);
                    idx.insert(idx.end(), tet, tet + 4);
                }
    MultiFieldMesh mesh(std::move(verts), std::move(idx), 4);
    for (std::size_t i = 0; i < grid.fields.size(); ++i) {
        std::string name = i < grid.field_names.size() ? grid.field_names[i] : "f" + std::to_string(i + 1);
        mesh.attach_field(name, grid.fields[i]);
    }
    return mesh;
}

std::vector<double> load_csv_column(const std::string& path, int column) {
    std::string text = detail::read_file(path);
    std::istringstream in(text);
    std::string line;
    std::vector<double> out;
    bool first = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split(line, ',');
        if (column < 0 || column >= static_cast<int>(cells.size()))
            throw InputError(path + " line " + std::to_string(line_no) + ": missing column " + std::to_string(column));
        auto v = parse_double(cells[column]);
        if (!v) {
            if (first) {
                first = false;
                continue;
            }
            throw InputError(path + " line " + std::to_string(line_no) + ": non-numeric cell '" + cells[column] + "'");
        }
        first = false;
        out.push_back(*v);
    }
    return out;
}

std::vector<double> load_volume(const std::string& path, std::array<int, 3> dims, VolumeFormat format, int column) {
    std::size_t count = 1;
    for (int d : dims) {
        if (d <= 0) throw InputError("volume dims must be positive");
        count *= static_cast<std::size_t>(d);
    }
    std::vector<double> out;
    if (format == VolumeFormat::Csv) {
        out = load_csv_column(path, column);
    } else {
        std::string bytes = detail::read_file(path);
        const std::size_t elem = format == VolumeFormat::RawF32 ? 4 : 8;
        if (bytes.size() != count * elem)
            throw InputError(path + ": size " + std::to_string(bytes.size()) + " bytes, expected " +
                             std::to_string(count * elem) + " for the given dims");
        out.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            unsigned char b[8];
            std::memcpy(b, bytes.data() + i * elem, elem);
            if (elem == 4) {
                std::uint32_t u = std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
                float f;
                std::memcpy(&f, &u, 4);
                out[i] = f;
            } else {
                std::uint64_t u = 0;
                for (int k = 7; k >= 0; --k) u = u << 8 | b[k];
                double d;
                std::memcpy(&d, &u, 8);
                out[i] = d;
            }
        }
    }
    if (out.size() != count)
        throw InputError(path + ": " + std::to_string(out.size()) + " values, expected " + std::to_string(count));
    return out;
}

std::vector<double> load_field_file(const std::string& path) {
    std::string text = detail::read_file(path);
    std::istringstream in(text);
    std::string line;
    std::vector<double> out;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (detail::trim(line).empty()) continue;
        auto v = parse_double(line);
        if (!v) throw InputError(path + " line " + std::to_string(line_no) + ": not a number");
        out.push_back(*v);
    }
    return out;
}

}  // namespace mfd
