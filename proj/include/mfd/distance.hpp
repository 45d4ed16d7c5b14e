#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "mfd/mdrg.hpp"
#include "mfd/persistence.hpp"

namespace mfd {

/// One matched pair; -1 on a side stands for the diagonal.
struct MatchPair {
    int left = -1;
    int right = -1;
    double cost = 0.0;
};

struct Matching {
    std::vector<MatchPair> pairs;
    double cost = 0.0;  ///< max pair cost
};

/// Bottleneck distance under L-infinity with diagonal augmentation. Throws std::invalid_argument on kind mismatch.
std::pair<double, Matching> bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y);

using CostMatrix = std::vector<std::vector<double>>;

/// Min-sum assignment; result[i] is the column assigned to row i.
std::vector<int> hungarian(const CostMatrix& cost);
/// Min-max assignment via threshold search and perfect matching.
std::vector<int> bottleneck_assignment(const CostMatrix& cost);

enum class BijectionObjective { Minimax, Minsum };

/// Bijection between two collections of diagrams; -1 marks an empty (dummy) diagram.
struct Bijection {
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> costs;
    double value = 0.0;  ///< max cost over the bijection
};

/// Each side is padded with one empty diagram per element of the other side.
Bijection optimal_bijection(std::span<const PersistenceDiagram> f, std::span<const PersistenceDiagram> g,
                            BijectionObjective objective = BijectionObjective::Minimax);

/// Diagrams of every Morse-ified graph of an MDRG.
struct MdrgDiagrams {
    std::vector<Quantization> quantizations;
    std::vector<std::array<PersistenceDiagram, 3>> graphs;  ///< indexed by DiagramKind
    std::vector<int> graph_bins;                            ///< parent bin per graph, -1 at level 1
    std::vector<std::vector<std::vector<int>>> collections; ///< as Mdrg::collections

    int levels() const { return static_cast<int>(quantizations.size()); }
};

/// Morse-ifies each graph with epsilon = slab width * epsilon_factor and computes its three diagrams.
MdrgDiagrams compute_diagrams(const Mdrg& m, double epsilon_factor = 1e-6);

struct BinTerm {
    int level = 2;  ///< level of the compared graphs
    int bin = 0;    ///< parent bin
    std::vector<int> left_graphs;
    std::vector<int> right_graphs;
    Bijection bijection;  ///< indices into left_graphs / right_graphs
};

struct KindDistance {
    DiagramKind kind = DiagramKind::Pd0;
    double level1 = 0.0;
    Matching level1_matching;
    std::vector<double> level_terms;  ///< normalized sum per level 2..r
    std::vector<BinTerm> bins;        ///< nonzero bins only
    double value = 0.0;
};

struct DistanceReport {
    std::array<KindDistance, 3> parts;
    std::array<double, 3> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double total = 0.0;
};

/// Level-1 bottleneck term plus, for each further level, the per-bin sup terms normalized by the bin count.
/// Throws InputError when the quantizations differ.
KindDistance mdrg_distance(const MdrgDiagrams& a, const MdrgDiagrams& b, DiagramKind kind,
                           BijectionObjective objective = BijectionObjective::Minimax);
double mdrg_distance(const Mdrg& a, const Mdrg& b, DiagramKind kind,
                     BijectionObjective objective = BijectionObjective::Minimax);

/// Weighted sum w0 d0 + w1 d0(-f) + w2 d1. Throws InputError on negative weights or weights not summing to 1.
DistanceReport total_distance(const MdrgDiagrams& a, const MdrgDiagrams& b, std::array<double, 3> weights,
                              BijectionObjective objective = BijectionObjective::Minimax);
DistanceReport total_distance(const Mdrg& a, const Mdrg& b, std::array<double, 3> weights,
                              BijectionObjective objective = BijectionObjective::Minimax);

/// Same as total_distance for any number of levels r >= 2; throws InputError on level-count mismatch.
DistanceReport generalized_distance(const MdrgDiagrams& a, const MdrgDiagrams& b, std::array<double, 3> weights,
                                    BijectionObjective objective = BijectionObjective::Minimax);

}  // namespace mfd
