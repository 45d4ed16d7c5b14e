#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mfd/jcn.hpp"

namespace mfd {

struct ReebNode {
    double value = 0.0;
    int bin = -1;              ///< quantized bin of the node's field; -1 for nodes inserted by morseify
    std::vector<int> members;  ///< JCN node ids, ascending
};

/// Graph with scalar node values. Edges are stored as (a < b), sorted and unique.
struct ReebGraph {
    std::vector<ReebNode> nodes;
    std::vector<std::pair<int, int>> edges;
    int level = 1;
    int field = 0;          ///< 0-based field whose bins define the nodes
    int parent_graph = -1;  ///< index in Mdrg::graphs
    int parent_node = -1;
    int parent_bin = -1;    ///< bin of the parent node on field - 1

    std::vector<std::vector<int>> adjacency() const;
    int component_count() const;
    /// |E| - |V| + components
    int cycle_rank() const;
};

enum class NodeType { Minimum, Maximum, UpFork, DownFork, Regular, Degenerate };

/// Neighbours with larger value are "up". Equal-valued neighbours count as degenerate.
struct Degrees {
    int up = 0;
    int down = 0;
    int level = 0;  ///< neighbours with the same value
};

Degrees degrees(const ReebGraph& g, const std::vector<std::vector<int>>& adj, int node);
NodeType classify(const Degrees& d);
bool is_critical(NodeType t);
/// Allowed degree types only, no equal-valued edges, critical values pairwise distinct.
bool is_morse(const ReebGraph& g);

/// Level-1 Reeb graph: components of the JCN restricted to each bin of field 0.
ReebGraph reeb_of_dimension1(const JointContourNet& jcn);

/// Reeb graphs of field `field` (0-based) on the JCN subgraph induced by `members`, one per component.
std::vector<ReebGraph> restrict_and_reeb(const JointContourNet& jcn, std::span<const int> members, int field);

/// Multi-dimensional Reeb graph. graphs[0] is the level-1 graph.
struct Mdrg {
    std::vector<Quantization> quantizations;
    std::vector<ReebGraph> graphs;
    /// children[g][v]: graphs at the next level restricted to node v of graph g
    std::vector<std::vector<std::vector<int>>> children;
    /// collections[i][c]: graphs at level i + 2 whose parent node has bin c on field i
    std::vector<std::vector<std::vector<int>>> collections;

    int levels() const { return static_cast<int>(quantizations.size()); }
};

Mdrg build_mdrg(const JointContourNet& jcn);

/// Splits degenerate nodes and separates equal critical values by multiples of epsilon.
/// Node ids of the input are preserved; inserted nodes are appended.
ReebGraph morseify(const ReebGraph& g, double epsilon);

}  // namespace mfd
