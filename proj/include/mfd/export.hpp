#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mfd/distance.hpp"
#include "mfd/evaluate.hpp"
#include "mfd/jcn.hpp"
#include "mfd/mdrg.hpp"
#include "mfd/pipeline.hpp"

namespace mfd {

std::string jcn_to_json(const JointContourNet& jcn);
std::string jcn_to_dot(const JointContourNet& jcn);

/// Graphs with values, members, parent links, and the collection index.
std::string mdrg_to_json(const Mdrg& m);
/// One DOT graph holding a cluster per graph of the given level (1-based).
std::string mdrg_to_dot(const Mdrg& m, int level);

std::string report_to_json(const DistanceReport& r);
/// {"total", "terms": [report per eigenfunction pair]}
std::string shape_report_to_json(const ShapeDistance& s);

/// Labeled distance matrix: header "id,<id1>,...", then one row per item.
struct NamedMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> distances;
};

std::string format_matrix_csv(const NamedMatrix& m);
/// Throws InputError on ragged rows, non-numeric entries, or row/column id mismatch.
NamedMatrix parse_matrix_csv(std::string_view text);

/// Rows "id,label" (optional header). Returns labels aligned with `ids`; throws InputError for missing ids.
std::vector<std::string> parse_labels_csv(std::string_view text, const std::vector<std::string>& ids);

}  // namespace mfd
