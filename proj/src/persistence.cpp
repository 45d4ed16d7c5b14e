#include "mfd/persistence.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mfd/union_find.hpp"
#include "text_util.hpp"

namespace mfd {

const char* to_string(DiagramKind k) {
    switch (k) {
        case DiagramKind::Pd0: return "pd0";
        case DiagramKind::Pd0Neg: return "pd0-neg";
        case DiagramKind::ExDg1: return "exdg1";
    }
    return "?";
}

namespace {

void require_morse(const ReebGraph& g) {
    if (!is_morse(g)) throw std::invalid_argument("persistence requires a Morse-ified Reeb graph");
}

std::vector<int> ascending_order(const ReebGraph& g) {
    std::vector<int> order(g.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return g.nodes[a].value != g.nodes[b].value ? g.nodes[a].value < g.nodes[b].value : a < b;
    });
    return order;
}

struct Sweep {
    std::vector<DiagramPoint> ordinary;
    std::vector<DiagramPoint> essential;  // one (min, max) per component
    std::vector<int> essential_down_forks;
};

Sweep sweep(const ReebGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    auto adj = g.adjacency();
    auto order = ascending_order(g);
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[order[i]] = i;

    UnionFind uf(n);
    std::vector<int> oldest(n);  // per root: minimum of the component
    std::iota(oldest.begin(), oldest.end(), 0);
    Sweep out;
    for (int u : order) {
        std::vector<int> roots;
        int lower = 0;
        for (int w : adj[u]) {
            if (rank[w] > rank[u]) continue;
            ++lower;
            int r = uf.find(w);
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
        if (lower >= 2 && roots.size() < static_cast<std::size_t>(lower)) out.essential_down_forks.push_back(u);
        if (roots.empty()) continue;
        std::sort(roots.begin(), roots.end(), [&](int a, int b) { return rank[oldest[a]] < rank[oldest[b]]; });
        const int elder = oldest[roots[0]];
        for (std::size_t i = 1; i < roots.size(); ++i) {
            const int young = oldest[roots[i]];
            out.ordinary.push_back({g.nodes[young].value, g.nodes[u].value, young, u});
        }
        int root = uf.find(u);
        for (int r : roots) {
            int merged = uf.unite(root, r);
            if (merged >= 0) root = merged;
        }
        oldest[uf.find(u)] = elder;
    }
    std::vector<int> top(n, -1);
    for (int u : order) top[uf.find(u)] = u;
    for (int u : order) {
        int r = uf.find(u);
        if (oldest[r] == u) out.essential.push_back({g.nodes[u].value, g.nodes[top[r]].value, u, top[r]});
    }
    return out;
}

}  // namespace

PersistenceDiagram compute_pd0(const ReebGraph& g) {
    require_morse(g);
    Sweep s = sweep(g);
    PersistenceDiagram d;
    d.kind = DiagramKind::Pd0;
    d.points = std::move(s.ordinary);
    d.points.insert(d.points.end(), s.essential.begin(), s.essential.end());
    return d;
}

PersistenceDiagram compute_pd0_neg(const ReebGraph& g) {
    ReebGraph neg = g;
    for (auto& n : neg.nodes) n.value = -n.value;
    PersistenceDiagram d = compute_pd0(neg);
    d.kind = DiagramKind::Pd0Neg;
    return d;
}

PersistenceDiagram compute_exdg1(const ReebGraph& g) {
    require_morse(g);
    Sweep s = sweep(g);
    const int n = static_cast<int>(g.nodes.size());
    auto adj = g.adjacency();
    auto order = ascending_order(g);
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[order[i]] = i;

    auto forks = s.essential_down_forks;
    std::sort(forks.begin(), forks.end(), [&](int a, int b) { return rank[a] > rank[b]; });

    PersistenceDiagram d;
    d.kind = DiagramKind::ExDg1;
    std::vector<char> used(n, 0), active(n, 0);
    for (int u : forks) {
        int a = -1, b = -1;
        for (int w : adj[u])
            if (rank[w] < rank[u]) (a < 0 ? a : b) = w;
        // Widest path from a to b below u: add nodes from the top down until a and b connect.
        UnionFind uf(n);
        std::fill(active.begin(), active.end(), 0);
        int bottleneck = -1;
        for (int i = rank[u] - 1; i >= 0; --i) {
            const int x = order[i];
            active[x] = 1;
            for (int w : adj[x])
                if (active[w]) uf.unite(x, w);
            if (active[a] && active[b] && uf.find(a) == uf.find(b)) {
                bottleneck = x;
                break;
            }
        }
        if (bottleneck < 0) throw std::logic_error("essential down-fork without a cycle");
        if (used[bottleneck]) throw std::logic_error("up-fork paired twice in extended persistence");
        used[bottleneck] = 1;
        d.points.push_back({g.nodes[u].value, g.nodes[bottleneck].value, u, bottleneck});
    }
    return d;
}

std::string format_diagram_csv(const PersistenceDiagram& d) {
    std::string out = "birth,death,kind,birth_node,death_node\n";
    for (const auto& p : d.points)
        out += detail::format_double(p.birth) + "," + detail::format_double(p.death) + "," + to_string(d.kind) + "," +
               std::to_string(p.birth_node) + "," + std::to_string(p.death_node) + "\n";
    return out;
}

}  // namespace mfd
