#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfd/mesh_io.hpp"
#include "mfd/pipeline.hpp"
#include "mfd/spectral.hpp"

namespace mfd::cli {

/// Bad flags or config values (exit code 1).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<int> slabs{32};
    std::array<double, 3> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
    BijectionObjective objective = BijectionObjective::Minimax;
    FragmentMode mode = FragmentMode::Clip;
    int eigenfunctions = 0;  ///< 0: use what each item provides
    double epsilon_factor = 1e-6;
    int workers = 1;
    int emeasure_cutoff = 32;

    PipelineOptions pipeline() const;
    /// Throws UsageError.
    void validate() const;
};

/// Overwrites the keys present in a JSON config file.
void apply_config_file(const std::string& path, RunConfig& config);

BijectionObjective parse_objective(const std::string& s);
FragmentMode parse_mode(const std::string& s);

/// One manifest row. Paths are relative to base_dir unless absolute.
struct ItemSpec {
    std::string id;
    std::string geometry;             ///< mesh path or grid:NX,NY,NZ[:sx,sy,sz]
    std::vector<std::string> fields;  ///< field sources, or a single lb:E / desc:path
    std::string label;
    std::string base_dir;
};

struct Item {
    MultiFieldMesh mesh;
    std::optional<EigenDescriptorSet> descriptors;
};

/// Columns id,geometry,fields,label (header row optional; fields separated by ';').
std::vector<ItemSpec> parse_manifest(const std::string& path);
Item load_item(const ItemSpec& spec, const RunConfig& config);

/// Distance between two loaded items; `json` receives the full report when non-null.
double item_distance(const Item& a, const Item& b, const RunConfig& config, std::string* json);

int cmd_descriptors(const std::string& mesh_path, int count, const std::string& out, bool clamp_negative);
int cmd_distance(const ItemSpec& a, const ItemSpec& b, const RunConfig& config, const std::string& out);
int cmd_matrix(const std::string& manifest, const RunConfig& config, const std::string& out, bool resume,
               const std::string& labels_out);
int cmd_evaluate(const std::string& matrix, const std::string& labels, const RunConfig& config, const std::string& out);
int cmd_timeseries(const std::string& manifest, const RunConfig& config, const std::string& out,
                   const std::string& plot_out);

}  // namespace mfd::cli
