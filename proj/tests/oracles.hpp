#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "mfd/distance.hpp"
#include "mfd/mdrg.hpp"
#include "mfd/persistence.hpp"

namespace oracles {

using Points = std::vector<std::pair<double, double>>;

inline Points sorted_points(const mfd::PersistenceDiagram& d) {
    Points out;
    for (const auto& p : d.points) out.emplace_back(p.birth, p.death);
    std::sort(out.begin(), out.end());
    return out;
}

/// Components of the subgraph induced by nodes with value <= t, as a label per node (-1 if excluded).
inline std::vector<int> sublevel_components(const mfd::ReebGraph& g, double t) {
    const int n = static_cast<int>(g.nodes.size());
    std::vector<int> label(n, -1);
    auto adj = g.adjacency();
    int next = 0;
    for (int s = 0; s < n; ++s) {
        if (g.nodes[s].value > t || label[s] >= 0) continue;
        std::vector<int> stack{s};
        label[s] = next;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adj[u])
                if (g.nodes[w].value <= t && label[w] < 0) label[w] = next, stack.push_back(w);
        }
        ++next;
    }
    return label;
}

/// PD0 from the rank function beta(i, j) = #components of the sublevel set at v_j meeting the sublevel set at v_i.
/// Essential classes are closed at the maximum of their component.
inline Points pd0_threshold_sweep(const mfd::ReebGraph& g) {
    std::vector<double> vals;
    for (const auto& n : g.nodes) vals.push_back(n.value);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    const int k = static_cast<int>(vals.size());
    std::vector<std::vector<int>> labels(k);
    for (int j = 0; j < k; ++j) labels[j] = sublevel_components(g, vals[j]);
    auto beta = [&](int i, int j) {
        if (i < 0) return 0;
        std::set<int> hit;
        for (std::size_t v = 0; v < g.nodes.size(); ++v)
            if (g.nodes[v].value <= vals[i]) hit.insert(labels[j][v]);
        return static_cast<int>(hit.size());
    };
    Points out;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            int mu = beta(i, j - 1) - beta(i - 1, j - 1) - beta(i, j) + beta(i - 1, j);
            for (int c = 0; c < mu; ++c) out.emplace_back(vals[i], vals[j]);
        }
        int essential = beta(i, k - 1) - beta(i - 1, k - 1);
        if (essential > 0) {
            // Each essential class born at vals[i] belongs to a component whose minimum is vals[i].
            auto& lab = labels[k - 1];
            std::vector<double> comp_min(g.nodes.size(), std::numeric_limits<double>::infinity());
            std::vector<double> comp_max(g.nodes.size(), -std::numeric_limits<double>::infinity());
            for (std::size_t v = 0; v < g.nodes.size(); ++v) {
                comp_min[lab[v]] = std::min(comp_min[lab[v]], g.nodes[v].value);
                comp_max[lab[v]] = std::max(comp_max[lab[v]], g.nodes[v].value);
            }
            for (std::size_t c = 0; c < g.nodes.size(); ++c)
                if (comp_min[c] == vals[i]) out.emplace_back(vals[i], comp_max[c]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All simple cycles as node lists (each cycle reported once).
inline std::vector<std::vector<int>> simple_cycles(const mfd::ReebGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    auto adj = g.adjacency();
    std::vector<std::vector<int>> out;
    std::vector<int> path;
    std::vector<char> on(n, 0);
    // Cycles whose smallest node id is s, traversed with the second node smaller than the last.
    std::function<void(int, int)> dfs = [&](int s, int u) {
        for (int w : adj[u]) {
            if (w == s && path.size() >= 3 && path[1] < path.back()) out.push_back(path);
            if (w <= s || on[w]) continue;
            on[w] = 1;
            path.push_back(w);
            dfs(s, w);
            path.pop_back();
            on[w] = 0;
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        on[s] = 1;
        dfs(s, s);
        on[s] = 0;
    }
    return out;
}

/// ExDg1 by cycle enumeration: each down-fork u that is the highest node of some cycle pairs with the
/// largest cycle minimum among those cycles.
inline Points exdg1_cycle_search(const mfd::ReebGraph& g) {
    auto cycles = simple_cycles(g);
    const int n = static_cast<int>(g.nodes.size());
    std::vector<double> best(n, -std::numeric_limits<double>::infinity());
    std::vector<char> has(n, 0);
    for (const auto& c : cycles) {
        int top = c[0];
        double lo = g.nodes[c[0]].value;
        for (int v : c) {
            if (g.nodes[v].value > g.nodes[top].value) top = v;
            lo = std::min(lo, g.nodes[v].value);
        }
        has[top] = 1;
        best[top] = std::max(best[top], lo);
    }
    Points out;
    for (int u = 0; u < n; ++u)
        if (has[u]) out.emplace_back(g.nodes[u].value, best[u]);
    std::sort(out.begin(), out.end());
    return out;
}

struct ExtendedPairs {
    Points pd0;   ///< ordinary 0-dim pairs plus (component min, component max)
    Points ext1;  ///< (birth edge value, death cone-triangle value)
};

/// Extended persistence by Z/2 boundary-matrix reduction on the cone over the graph. The filtration is the
/// cone vertex, the ascending lower-star filtration, then cone simplices in descending upper-star order.
inline ExtendedPairs extended_by_reduction(const mfd::ReebGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    const int m = static_cast<int>(g.edges.size());
    auto f = [&](int v) { return g.nodes[v].value; };
    struct Simplex {
        int dim;
        bool cone;
        int id;  // vertex or edge index in g (or -1 for the cone vertex)
        double value;
    };
    std::vector<Simplex> ord;
    ord.push_back({0, true, -1, -std::numeric_limits<double>::infinity()});
    std::vector<Simplex> low;
    for (int v = 0; v < n; ++v) low.push_back({0, false, v, f(v)});
    for (int e = 0; e < m; ++e) low.push_back({1, false, e, std::max(f(g.edges[e].first), f(g.edges[e].second))});
    std::stable_sort(low.begin(), low.end(), [](const Simplex& a, const Simplex& b) {
        return a.value != b.value ? a.value < b.value : a.dim < b.dim;
    });
    ord.insert(ord.end(), low.begin(), low.end());
    std::vector<Simplex> up;
    for (int v = 0; v < n; ++v) up.push_back({1, true, v, f(v)});
    for (int e = 0; e < m; ++e) up.push_back({2, true, e, std::min(f(g.edges[e].first), f(g.edges[e].second))});
    std::stable_sort(up.begin(), up.end(), [](const Simplex& a, const Simplex& b) {
        return a.value != b.value ? a.value > b.value : a.dim < b.dim;
    });
    ord.insert(ord.end(), up.begin(), up.end());

    const int total = static_cast<int>(ord.size());
    std::vector<int> vertex_pos(n), edge_pos(m), cone_vertex_pos(n), cone_edge_pos(m);
    for (int i = 0; i < total; ++i) {
        const auto& s = ord[i];
        if (s.cone && s.dim == 1) cone_vertex_pos[s.id] = i;
        else if (s.cone && s.dim == 2) cone_edge_pos[s.id] = i;
        else if (!s.cone && s.dim == 0) vertex_pos[s.id] = i;
        else if (!s.cone && s.dim == 1) edge_pos[s.id] = i;
    }
    std::vector<std::vector<int>> col(total);
    for (int i = 0; i < total; ++i) {
        const auto& s = ord[i];
        if (s.dim == 0) continue;
        if (!s.cone) col[i] = {vertex_pos[g.edges[s.id].first], vertex_pos[g.edges[s.id].second]};
        else if (s.dim == 1) col[i] = {0, vertex_pos[s.id]};
        else col[i] = {edge_pos[s.id], cone_vertex_pos[g.edges[s.id].first], cone_vertex_pos[g.edges[s.id].second]};
        std::sort(col[i].begin(), col[i].end());
    }
    std::vector<int> pivot_owner(total, -1);
    ExtendedPairs out;
    for (int j = 0; j < total; ++j) {
        auto& c = col[j];
        while (!c.empty() && pivot_owner[c.back()] >= 0) {
            const auto& other = col[pivot_owner[c.back()]];
            std::vector<int> sum;
            std::set_symmetric_difference(c.begin(), c.end(), other.begin(), other.end(), std::back_inserter(sum));
            c = std::move(sum);
        }
        if (c.empty()) continue;
        const int i = c.back();
        pivot_owner[i] = j;
        const auto &birth = ord[i], &death = ord[j];
        if (birth.dim == 0 && !birth.cone) {
            if (birth.value != death.value) out.pd0.emplace_back(birth.value, death.value);
        } else if (birth.dim == 1 && !birth.cone && death.dim == 2) {
            out.ext1.emplace_back(birth.value, death.value);
        }
    }
    std::sort(out.pd0.begin(), out.pd0.end());
    std::sort(out.ext1.begin(), out.ext1.end());
    return out;
}

/// Bottleneck distance by enumerating every partial matching.
inline double bottleneck_brute(const mfd::PersistenceDiagram& x, const mfd::PersistenceDiagram& y) {
    const auto& a = x.points;
    const auto& b = y.points;
    auto half = [](const mfd::DiagramPoint& p) { return std::abs(p.death - p.birth) / 2.0; };
    double best = std::numeric_limits<double>::infinity();
    std::vector<char> taken(b.size(), 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double cost) {
        if (cost >= best) return;
        if (i == a.size()) {
            double c = cost;
            for (std::size_t j = 0; j < b.size(); ++j)
                if (!taken[j]) c = std::max(c, half(b[j]));
            best = std::min(best, c);
            return;
        }
        rec(i + 1, std::max(cost, half(a[i])));
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (taken[j]) continue;
            taken[j] = 1;
            double d = std::max(std::abs(a[i].birth - b[j].birth), std::abs(a[i].death - b[j].death));
            rec(i + 1, std::max(cost, d));
            taken[j] = 0;
        }
    };
    rec(0, 0.0);
    return best;
}

inline double assignment_sum(const mfd::CostMatrix& c, const std::vector<int>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += c[i][p[i]];
    return s;
}

inline double assignment_max(const mfd::CostMatrix& c, const std::vector<int>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s = std::max(s, c[i][p[i]]);
    return s;
}

inline bool is_permutation(const std::vector<int>& p) {
    std::vector<int> s = p;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != static_cast<int>(i)) return false;
    return true;
}

/// Minimum over all n! permutations of the row-order sum and of the maximum.
inline std::pair<double, double> assignment_brute(const mfd::CostMatrix& c) {
    std::vector<int> p(c.size());
    std::iota(p.begin(), p.end(), 0);
    double best_sum = std::numeric_limits<double>::infinity(), best_max = best_sum;
    do {
        best_sum = std::min(best_sum, assignment_sum(c, p));
        best_max = std::min(best_max, assignment_max(c, p));
    } while (std::next_permutation(p.begin(), p.end()));
    if (c.empty()) return {0.0, 0.0};
    return {best_sum, best_max};
}

}  // namespace oracles
