#pragma once

#include <string>
#include <vector>

#include "mfd/mdrg.hpp"

namespace mfd {

enum class DiagramKind { Pd0, Pd0Neg, ExDg1 };

const char* to_string(DiagramKind k);

struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;
    int birth_node = -1;  ///< node ids in the source graph
    int death_node = -1;

    bool operator==(const DiagramPoint&) const = default;
};

struct PersistenceDiagram {
    DiagramKind kind = DiagramKind::Pd0;
    std::vector<DiagramPoint> points;
};

/// Ascending sweep; ordinary down-forks pair with the younger minimum, and every component contributes
/// its (global min, global max) pair. Throws std::invalid_argument for non-Morse input.
PersistenceDiagram compute_pd0(const ReebGraph& g);

/// compute_pd0 of the value-negated graph, reported in -f coordinates.
PersistenceDiagram compute_pd0_neg(const ReebGraph& g);

/// One point (f(u), f(v)) per independent cycle: each essential down-fork u pairs with the minimum v of the
/// cycle through u with the largest minimum.
PersistenceDiagram compute_exdg1(const ReebGraph& g);

/// CSV rows: birth,death,kind,birth_node,death_node (with header).
std::string format_diagram_csv(const PersistenceDiagram& d);

}  // namespace mfd
