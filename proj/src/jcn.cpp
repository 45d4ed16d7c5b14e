#include "mfd/jcn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mfd/union_find.hpp"
#include "polytope.hpp"

namespace mfd {

using detail::HalfSpace;
using detail::Point;

Range field_range(std::span<const double> values) {
    if (values.empty()) throw InputError("empty field");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

int Quantization::bin(double v) const {
    double t = std::floor((v - lo) / width);
    if (!(t > 0)) return 0;
    if (t >= slabs - 1) return slabs - 1;
    return static_cast<int>(t);
}

Quantization make_quantization(std::span<const Range> ranges, int slabs) {
    if (slabs < 1) throw InputError("slab count must be at least 1");
    if (ranges.empty()) throw InputError("no field range given");
    Quantization q;
    q.lo = ranges[0].lo;
    q.hi = ranges[0].hi;
    for (const auto& r : ranges) {
        if (!(r.lo <= r.hi)) throw InputError("invalid field range");
        q.lo = std::min(q.lo, r.lo);
        q.hi = std::max(q.hi, r.hi);
    }
    q.slabs = slabs;
    q.width = q.hi > q.lo ? (q.hi - q.lo) / slabs : 1.0;
    return q;
}

Quantization make_quantization(Range a, int slabs) { return make_quantization(std::span<const Range>(&a, 1), slabs); }

Quantization make_quantization(Range a, Range b, int slabs) {
    Range both[2] = {a, b};
    return make_quantization(std::span<const Range>(both, 2), slabs);
}

std::vector<std::vector<int>> JointContourNet::adjacency() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

namespace {

constexpr double kVolumeTol[4] = {0, 0, 1e-12, 1e-13};
constexpr double kFaceTol[4] = {0, 0, 1e-9, 1e-12};

/// Field values at the local vertices of one simplex.
struct SimplexView {
    int m = 0;                                  // simplex dimension
    std::vector<std::array<double, 4>> values;  // per field
    std::vector<double> vmin, vmax;
};

void add_simplex_constraints(std::vector<HalfSpace>& cons, int m) {
    detail::add_constraint(cons, {-1, -1, m == 3 ? -1.0 : 0.0}, 1.0, m);
    for (int i = 0; i < m; ++i) {
        Point a{0, 0, 0};
        a[i] = 1;
        detail::add_constraint(cons, a, 0.0, m);
    }
}

/// lambda_j <= 0, restricting to the facet opposite local vertex j.
void add_facet_constraint(std::vector<HalfSpace>& cons, int j, int m) {
    if (j == 0) {
        detail::add_constraint(cons, {1, 1, m == 3 ? 1.0 : 0.0}, -1.0, m);
    } else {
        Point a{0, 0, 0};
        a[j - 1] = -1;
        detail::add_constraint(cons, a, 0.0, m);
    }
}

/// Slab constraints of bin vector b; returns false for an empty region.
bool add_slab_constraints(std::vector<HalfSpace>& cons, const SimplexView& sv, const std::vector<int>& b,
                          std::span<const Quantization> quant) {
    for (std::size_t k = 0; k < b.size(); ++k) {
        const auto& v = sv.values[k];
        Point grad{0, 0, 0};
        for (int i = 0; i < sv.m; ++i) grad[i] = v[i + 1] - v[0];
        const auto& q = quant[k];
        if (b[k] > 0) {
            double lo = q.lower(b[k]);
            if (sv.vmax[k] < lo) return false;
            if (sv.vmin[k] < lo && !detail::add_constraint(cons, grad, v[0] - lo, sv.m)) return false;
        }
        if (b[k] < q.slabs - 1) {
            double hi = q.upper(b[k]);
            if (sv.vmin[k] > hi) return false;
            Point neg{-grad[0], -grad[1], -grad[2]};
            if (sv.vmax[k] > hi && !detail::add_constraint(cons, neg, hi - v[0], sv.m)) return false;
        }
    }
    return true;
}

double simplex_measure(const MultiFieldMesh& mesh, std::size_t s) {
    auto sx = mesh.simplex(s);
    const auto& p = mesh.vertices();
    if (mesh.simplex_size() == 3) return triangle_area(p[sx[0]], p[sx[1]], p[sx[2]]);
    return std::abs(signed_tet_volume(p[sx[0]], p[sx[1]], p[sx[2]], p[sx[3]]));
}

/// Values within a relative 1e-9 of an interior slab boundary are moved onto it, so that simplices sharing a
/// facet agree on which side of the boundary the facet lies.
double snap_to_boundary(const Quantization& q, double v) {
    const double t = (v - q.lo) / q.width;
    const double k = std::nearbyint(t);
    if (k >= 1 && k <= q.slabs - 1 && std::abs(t - k) < 1e-9) return q.lower(static_cast<int>(k));
    return v;
}

bool near_bins(const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::abs(a[k] - b[k]) > 1) return false;
    return true;
}

}  // namespace

JointContourNet build_jcn(const MultiFieldMesh& mesh, std::span<const Quantization> quant, FragmentMode mode) {
    const std::size_t r = mesh.field_count();
    if (r == 0) throw InputError("mesh carries no fields");
    if (quant.size() != r)
        throw InputError("got " + std::to_string(quant.size()) + " quantizations for " + std::to_string(r) + " fields");
    if (static_cast<int>(r) > mesh.dimension())
        throw InputError(std::to_string(r) + " fields exceed the simplex dimension " + std::to_string(mesh.dimension()) +
                         "; the Reeb space is not defined");
    if (mesh.simplex_count() == 0) throw InputError("mesh has no simplices");

    const int m = mesh.dimension();
    const double param_volume = m == 2 ? 0.5 : 1.0 / 6.0;
    const std::size_t ns = mesh.simplex_count();

    JointContourNet jcn;
    jcn.quantizations.assign(quant.begin(), quant.end());

    auto view_of = [&](std::size_t s) {
        SimplexView sv;
        sv.m = m;
        auto sx = mesh.simplex(s);
        sv.values.resize(r);
        sv.vmin.resize(r);
        sv.vmax.resize(r);
        for (std::size_t k = 0; k < r; ++k) {
            const auto& f = mesh.field(k);
            for (int i = 0; i <= m; ++i) sv.values[k][i] = snap_to_boundary(quant[k], f[sx[i]]);
            sv.vmin[k] = *std::min_element(sv.values[k].begin(), sv.values[k].begin() + m + 1);
            sv.vmax[k] = *std::max_element(sv.values[k].begin(), sv.values[k].begin() + m + 1);
        }
        return sv;
    };

    // Fragments, grouped by simplex.
    std::vector<int> first_fragment(ns + 1, 0);
    std::vector<HalfSpace> cons;
    for (std::size_t s = 0; s < ns; ++s) {
        first_fragment[s] = static_cast<int>(jcn.fragments.size());
        SimplexView sv = view_of(s);
        const double phys = simplex_measure(mesh, s);
        if (mode == FragmentMode::VertexBinning) {
            Fragment f{static_cast<int>(s), std::vector<int>(r), phys};
            for (std::size_t k = 0; k < r; ++k) {
                double mean = 0;
                for (int i = 0; i <= m; ++i) mean += sv.values[k][i];
                f.bins[k] = quant[k].bin(mean / (m + 1));
            }
            jcn.fragments.push_back(std::move(f));
            continue;
        }
        std::vector<int> lo(r), hi(r);
        for (std::size_t k = 0; k < r; ++k) {
            lo[k] = quant[k].bin(sv.vmin[k]);
            hi[k] = quant[k].bin(sv.vmax[k]);
        }
        std::vector<int> b = lo;
        while (true) {
            cons.clear();
            add_simplex_constraints(cons, m);
            if (add_slab_constraints(cons, sv, b, quant)) {
                auto verts = detail::polytope_vertices(cons, m);
                double vol = detail::polytope_measure(verts, cons, m);
                if (vol > kVolumeTol[m]) jcn.fragments.push_back({static_cast<int>(s), b, phys * vol / param_volume});
            }
            int k = static_cast<int>(r) - 1;
            while (k >= 0 && b[k] == hi[k]) b[k] = lo[k], --k;
            if (k < 0) break;
            ++b[k];
        }
    }
    first_fragment[ns] = static_cast<int>(jcn.fragments.size());

    const std::size_t nf = jcn.fragments.size();
    UnionFind uf(nf);
    std::vector<std::pair<int, int>> fragment_edges;

    // Do the closed regions of bins a and b, restricted to simplex s (and facet j if j >= 0), meet in a
    // (m-1)-dimensional set?
    auto meet = [&](const SimplexView& sv, const std::vector<int>& a, const std::vector<int>& b, int j) {
        cons.clear();
        add_simplex_constraints(cons, m);
        if (j >= 0) add_facet_constraint(cons, j, m);
        if (!add_slab_constraints(cons, sv, a, quant) || !add_slab_constraints(cons, sv, b, quant)) return false;
        auto verts = detail::polytope_vertices(cons, m);
        return detail::flat_measure(verts, m) > kFaceTol[m];
    };

    if (mode == FragmentMode::Clip) {
        for (std::size_t s = 0; s < ns; ++s) {
            SimplexView sv;
            bool have_view = false;
            for (int f = first_fragment[s]; f < first_fragment[s + 1]; ++f)
                for (int g = f + 1; g < first_fragment[s + 1]; ++g) {
                    if (!near_bins(jcn.fragments[f].bins, jcn.fragments[g].bins)) continue;
                    if (!have_view) sv = view_of(s), have_view = true;
                    if (meet(sv, jcn.fragments[f].bins, jcn.fragments[g].bins, -1)) fragment_edges.emplace_back(f, g);
                }
        }
    }

    // Facets shared by neighbouring simplices.
    struct FacetEntry {
        std::array<int, 3> key;
        int simplex;
        int local;
    };
    std::vector<FacetEntry> facets;
    facets.reserve(ns * (m + 1));
    for (std::size_t s = 0; s < ns; ++s) {
        auto sx = mesh.simplex(s);
        for (int j = 0; j <= m; ++j) {
            std::array<int, 3> key{-1, -1, -1};
            int c = 0;
            for (int i = 0; i <= m; ++i)
                if (i != j) key[c++] = sx[i];
            std::sort(key.begin(), key.begin() + m);
            facets.push_back({key, static_cast<int>(s), j});
        }
    }
    std::sort(facets.begin(), facets.end(), [](const FacetEntry& a, const FacetEntry& b) {
        return std::tie(a.key, a.simplex, a.local) < std::tie(b.key, b.simplex, b.local);
    });
    for (std::size_t i = 0; i < facets.size();) {
        std::size_t e = i;
        while (e < facets.size() && facets[e].key == facets[i].key) ++e;
        for (std::size_t x = i; x < e; ++x)
            for (std::size_t y = x + 1; y < e; ++y) {
                const int s = facets[x].simplex, t = facets[y].simplex;
                SimplexView sv;
                bool have_view = false;
                for (int f = first_fragment[s]; f < first_fragment[s + 1]; ++f)
                    for (int g = first_fragment[t]; g < first_fragment[t + 1]; ++g) {
                        const auto& bf = jcn.fragments[f].bins;
                        const auto& bg = jcn.fragments[g].bins;
                        if (mode == FragmentMode::VertexBinning) {
                            if (bf == bg) uf.unite(f, g);
                            else fragment_edges.emplace_back(f, g);
                            continue;
                        }
                        if (!near_bins(bf, bg)) continue;
                        if (!have_view) sv = view_of(s), have_view = true;
                        if (!meet(sv, bf, bg, facets[x].local)) continue;
                        if (bf == bg) uf.unite(f, g);
                        else fragment_edges.emplace_back(f, g);
                    }
            }
        i = e;
    }

    // Nodes in order of smallest fragment id.
    std::vector<int> node_of_root(nf, -1), node_of(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        int root = uf.find(static_cast<int>(f));
        if (node_of_root[root] < 0) {
            node_of_root[root] = static_cast<int>(jcn.nodes.size());
            JcnNode node;
            node.bins = jcn.fragments[f].bins;
            for (std::size_t k = 0; k < r; ++k) node.values.push_back(quant[k].center(node.bins[k]));
            jcn.nodes.push_back(std::move(node));
        }
        node_of[f] = node_of_root[root];
        jcn.nodes[node_of[f]].fragments.push_back(static_cast<int>(f));
    }
    for (auto [f, g] : fragment_edges) {
        int a = node_of[f], b = node_of[g];
        if (a == b) continue;
        jcn.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(jcn.edges.begin(), jcn.edges.end());
    jcn.edges.erase(std::unique(jcn.edges.begin(), jcn.edges.end()), jcn.edges.end());
    return jcn;
}

}  // namespace mfd
