#include "mfd/mdrg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "mfd/union_find.hpp"

namespace mfd {

std::vector<std::vector<int>> ReebGraph::adjacency() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

int ReebGraph::component_count() const {
    UnionFind uf(nodes.size());
    int count = static_cast<int>(nodes.size());
    for (auto [a, b] : edges)
        if (uf.unite(a, b) >= 0) --count;
    return count;
}

int ReebGraph::cycle_rank() const {
    return static_cast<int>(edges.size()) - static_cast<int>(nodes.size()) + component_count();
}

Degrees degrees(const ReebGraph& g, const std::vector<std::vector<int>>& adj, int node) {
    Degrees d;
    const double v = g.nodes[node].value;
    for (int w : adj[node]) {
        const double x = g.nodes[w].value;
        if (x > v) ++d.up;
        else if (x < v) ++d.down;
        else ++d.level;
    }
    return d;
}

NodeType classify(const Degrees& d) {
    if (d.level > 0) return NodeType::Degenerate;
    if (d.up == 1 && d.down == 0) return NodeType::Minimum;
    if (d.up == 0 && d.down == 1) return NodeType::Maximum;
    if (d.up == 1 && d.down == 1) return NodeType::Regular;
    if (d.up == 2 && d.down == 1) return NodeType::UpFork;
    if (d.up == 1 && d.down == 2) return NodeType::DownFork;
    return NodeType::Degenerate;
}

bool is_critical(NodeType t) { return t != NodeType::Regular; }

bool is_morse(const ReebGraph& g) {
    auto adj = g.adjacency();
    std::vector<double> critical;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        NodeType t = classify(degrees(g, adj, static_cast<int>(v)));
        if (t == NodeType::Degenerate) return false;
        if (is_critical(t)) critical.push_back(g.nodes[v].value);
    }
    std::sort(critical.begin(), critical.end());
    return std::adjacent_find(critical.begin(), critical.end()) == critical.end();
}

namespace {

/// Reeb graph of `field` on the JCN subgraph induced by sorted `members`; may be disconnected.
ReebGraph reeb_core(const JointContourNet& jcn, const std::vector<std::vector<int>>& adj, std::span<const int> members,
                    int field) {
    const std::size_t n = members.size();
    auto local = [&](int id) -> int {
        auto it = std::lower_bound(members.begin(), members.end(), id);
        return it != members.end() && *it == id ? static_cast<int>(it - members.begin()) : -1;
    };
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int u = members[i];
        for (int w : adj[u]) {
            if (w < u) continue;
            int j = local(w);
            if (j >= 0 && jcn.nodes[u].bins[field] == jcn.nodes[w].bins[field]) uf.unite(static_cast<int>(i), j);
        }
    }
    ReebGraph g;
    g.field = field;
    g.level = field + 1;
    std::vector<int> node_of_root(n, -1), node_of(n);
    const auto& q = jcn.quantizations[field];
    for (std::size_t i = 0; i < n; ++i) {
        int root = uf.find(static_cast<int>(i));
        if (node_of_root[root] < 0) {
            node_of_root[root] = static_cast<int>(g.nodes.size());
            ReebNode node;
            node.bin = jcn.nodes[members[i]].bins[field];
            node.value = q.center(node.bin);
            g.nodes.push_back(std::move(node));
        }
        node_of[i] = node_of_root[root];
        g.nodes[node_of[i]].members.push_back(members[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int u = members[i];
        for (int w : adj[u]) {
            if (w < u) continue;
            int j = local(w);
            if (j < 0) continue;
            int a = node_of[i], b = node_of[j];
            if (a != b) g.edges.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

std::vector<ReebGraph> split_components(const ReebGraph& g) {
    UnionFind uf(g.nodes.size());
    for (auto [a, b] : g.edges) uf.unite(a, b);
    std::vector<int> comp_of_root(g.nodes.size(), -1), comp(g.nodes.size()), local(g.nodes.size());
    std::vector<ReebGraph> out;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        int root = uf.find(static_cast<int>(v));
        if (comp_of_root[root] < 0) {
            comp_of_root[root] = static_cast<int>(out.size());
            ReebGraph c;
            c.field = g.field;
            c.level = g.level;
            out.push_back(std::move(c));
        }
        comp[v] = comp_of_root[root];
        local[v] = static_cast<int>(out[comp[v]].nodes.size());
        out[comp[v]].nodes.push_back(g.nodes[v]);
    }
    for (auto [a, b] : g.edges) out[comp[a]].edges.emplace_back(local[a], local[b]);
    for (auto& c : out) std::sort(c.edges.begin(), c.edges.end());
    return out;
}

void check_field(const JointContourNet& jcn, int field) {
    if (field < 0 || field >= static_cast<int>(jcn.field_count()))
        throw InputError("field index " + std::to_string(field) + " out of range for a JCN with " +
                         std::to_string(jcn.field_count()) + " fields");
}

}  // namespace

ReebGraph reeb_of_dimension1(const JointContourNet& jcn) {
    if (jcn.nodes.empty()) throw InputError("empty JCN");
    std::vector<int> all(jcn.nodes.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return reeb_core(jcn, jcn.adjacency(), all, 0);
}

std::vector<ReebGraph> restrict_and_reeb(const JointContourNet& jcn, std::span<const int> members, int field) {
    check_field(jcn, field);
    if (members.empty()) throw InputError("parent node has no JCN members");
    std::vector<int> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    return split_components(reeb_core(jcn, jcn.adjacency(), sorted, field));
}

Mdrg build_mdrg(const JointContourNet& jcn) {
    if (jcn.nodes.empty()) throw InputError("empty JCN");
    const int r = static_cast<int>(jcn.field_count());
    Mdrg m;
    m.quantizations = jcn.quantizations;
    auto adj = jcn.adjacency();
    std::vector<int> all(jcn.nodes.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    m.graphs.push_back(reeb_core(jcn, adj, all, 0));
    m.collections.resize(r > 1 ? r - 1 : 0);
    for (int i = 0; i + 1 < r; ++i) m.collections[i].resize(jcn.quantizations[i].slabs);

    for (std::size_t g = 0; g < m.graphs.size(); ++g) {
        m.children.emplace_back(m.graphs[g].nodes.size());
        const int level = m.graphs[g].level;
        if (level >= r) continue;
        for (std::size_t v = 0; v < m.graphs[g].nodes.size(); ++v) {
            auto kids = split_components(reeb_core(jcn, adj, m.graphs[g].nodes[v].members, level));
            const int bin = m.graphs[g].nodes[v].bin;
            for (auto& kid : kids) {
                kid.parent_graph = static_cast<int>(g);
                kid.parent_node = static_cast<int>(v);
                kid.parent_bin = bin;
                const int id = static_cast<int>(m.graphs.size());
                m.children[g][v].push_back(id);
                m.collections[level - 1][bin].push_back(id);
                m.graphs.push_back(std::move(kid));
            }
        }
    }
    return m;
}

namespace {

/// True when a <= b lie within a few ulps of each other.
bool near_tie(double a, double b) {
    return b - a <= 64 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Separates ties among nodes selected by `pick`. Nodes are walked in (value, id) order and split into
/// clusters of near-tied values; a cluster holding two picked nodes is respaced to v, v + d, v + 2d, ...
/// in that order, staying below the next cluster. Strict order between distinct values is preserved.
template <class Pick>
void staircase(ReebGraph& g, double epsilon, Pick pick) {
    const std::size_t n = g.nodes.size();
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g.nodes[a].value < g.nodes[b].value; });
    auto value = [&](std::size_t k) { return g.nodes[order[k]].value; };
    for (std::size_t i = 0; i < n;) {
        std::size_t e = i + 1;
        while (e < n && near_tie(value(e - 1), value(e))) ++e;
        int picked = 0;
        for (std::size_t k = i; k < e; ++k) picked += pick(order[k]) ? 1 : 0;
        if (picked < 2) {
            i = e;
            continue;
        }
        // Grow the cluster until its respaced values fit strictly below the next value.
        for (;;) {
            const double v = value(i);
            const double next = e < n ? value(e) : std::numeric_limits<double>::infinity();
            const double d = std::min(epsilon, (next - v) / static_cast<double>(e - i));
            std::vector<double> spaced(e - i);
            spaced[0] = v;
            for (std::size_t k = 1; k < spaced.size(); ++k)
                spaced[k] = std::max(v + static_cast<double>(k) * d, std::nextafter(spaced[k - 1], next));
            if (spaced.back() < next) {
                for (std::size_t k = i; k < e; ++k) g.nodes[order[k]].value = spaced[k - i];
                break;
            }
            ++e;
            while (e < n && near_tie(value(e - 1), value(e))) ++e;
        }
        i = e;
    }
}

}  // namespace

namespace {

ReebGraph morseify_once(const ReebGraph& input, double epsilon) {
    ReebGraph g = input;
    if (g.nodes.empty()) return g;

    // Equal-valued neighbours first, so that up/down is strict.
    {
        auto adj = g.adjacency();
        std::vector<char> touched(g.nodes.size(), 0);
        for (auto [a, b] : g.edges)
            if (g.nodes[a].value == g.nodes[b].value) touched[a] = touched[b] = 1;
        staircase(g, epsilon, [&](int v) { return touched[v] != 0; });
    }

    const int original = static_cast<int>(g.nodes.size());
    auto adj = g.adjacency();
    auto by_value = [&](int a, int b) {
        return g.nodes[a].value != g.nodes[b].value ? g.nodes[a].value < g.nodes[b].value : a < b;
    };
    auto add_node = [&](double value) {
        ReebNode n;
        n.value = value;
        g.nodes.push_back(std::move(n));
        return static_cast<int>(g.nodes.size()) - 1;
    };
    // (u, w) -> node replacing u as the endpoint of original edge u-w
    std::map<std::pair<int, int>, int> rewire;
    std::vector<std::pair<int, int>> internal;

    for (int u = 0; u < original; ++u) {
        const double v = g.nodes[u].value;
        std::vector<int> up, down;
        for (int w : adj[u]) (g.nodes[w].value > v ? up : down).push_back(w);
        const std::size_t nu = up.size(), nd = down.size();
        const bool allowed = nu <= 2 && nd <= 2 && nu + nd >= 1 && !(nu == 2 && nd == 2) && !(nu == 0 && nd == 2) &&
                             !(nu == 2 && nd == 0);
        if (allowed) continue;
        std::sort(up.begin(), up.end(), by_value);
        std::sort(down.begin(), down.end(), by_value);

        // Below u: chain of down-forks, the two lowest children meet at the bottom.
        if (nd >= 3) {
            const double d = std::min(epsilon, (v - g.nodes[down.back()].value) / static_cast<double>(nd - 1));
            int parent = u;
            for (std::size_t k = 1; k + 1 < nd; ++k) {
                int w = add_node(v - k * d);
                internal.emplace_back(parent, w);
                rewire[{u, down[nd - k]}] = parent;
                parent = w;
            }
            rewire[{u, down[0]}] = parent;
            rewire[{u, down[1]}] = parent;
        }

        // Above u: a separate node when u has two of each, then a chain of up-forks.
        const double up_gap = nu == 0 ? std::numeric_limits<double>::infinity() : g.nodes[up.front()].value - v;
        const std::size_t steps = (nd >= 2 && nu >= 2 ? 1 : 0) + (nu >= 3 ? nu - 2 : 0);
        const double du = std::min(epsilon, up_gap / static_cast<double>(steps + 1));
        int step = 0;
        int top = u;
        if (nd >= 2 && nu >= 2) {
            top = add_node(v + (++step) * du);
            internal.emplace_back(u, top);
        }
        if (nu >= 3) {
            int parent = top;
            for (std::size_t k = 0; k + 2 < nu; ++k) {
                int w = add_node(v + (++step) * du);
                internal.emplace_back(parent, w);
                rewire[{u, up[k]}] = parent;
                parent = w;
            }
            rewire[{u, up[nu - 2]}] = parent;
            rewire[{u, up[nu - 1]}] = parent;
        } else {
            for (int w : up) rewire[{u, w}] = top;
        }

        if (nu == 0) internal.emplace_back(u, add_node(v + epsilon));
        else if (nd == 0) internal.emplace_back(u, add_node(v - epsilon));
    }

    if (!internal.empty() || !rewire.empty()) {
        auto endpoint = [&](int a, int b) {
            auto it = rewire.find({a, b});
            return it == rewire.end() ? a : it->second;
        };
        std::vector<std::pair<int, int>> edges;
        for (auto [a, b] : g.edges) {
            int x = endpoint(a, b), y = endpoint(b, a);
            edges.emplace_back(std::min(x, y), std::max(x, y));
        }
        for (auto [a, b] : internal) edges.emplace_back(std::min(a, b), std::max(a, b));
        std::sort(edges.begin(), edges.end());
        g.edges = std::move(edges);
    }

    // Separate equal critical values.
    {
        auto adj2 = g.adjacency();
        std::vector<char> critical(g.nodes.size());
        for (std::size_t v = 0; v < g.nodes.size(); ++v)
            critical[v] = is_critical(classify(degrees(g, adj2, static_cast<int>(v))));
        staircase(g, epsilon, [&](int v) { return critical[v] != 0; });
    }
    return g;
}

}  // namespace

ReebGraph morseify(const ReebGraph& input, double epsilon) {
    // each pass preserves Betti numbers; rounding collisions left by one pass are removed by the next
    ReebGraph g = morseify_once(input, epsilon);
    for (int pass = 0; pass < 8 && !is_morse(g); ++pass) g = morseify_once(g, epsilon);
    if (!is_morse(g)) throw std::logic_error("morseify did not converge");
    return g;
}

}  // namespace mfd
