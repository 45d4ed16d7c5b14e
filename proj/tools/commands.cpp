#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>

#include "json.hpp"
#include "mfd/evaluate.hpp"
#include "mfd/export.hpp"
#include "mfd/parallel.hpp"
#include "text_util.hpp"

namespace mfd::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::mutex log_mutex;

/// Splits one CSV row; double-quoted cells may contain commas and "" escapes a quote.
std::vector<std::string> split_csv_row(const std::string& line, const std::string& where) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c != '"')
                cells.back() += c;
            else if (i + 1 < line.size() && line[i + 1] == '"')
                cells.back() += line[++i];
            else
                quoted = false;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else if (c != '\r') {
            cells.back() += c;
        }
    }
    if (quoted) throw InputError(where + ": unterminated quote");
    return cells;
}

void log(const std::string& msg) {
    std::lock_guard lock(log_mutex);
    std::cerr << "mfd: " << msg << "\n";
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path);
    out << text;
    if (!out.flush()) throw InputError("write failed: " + path);
}

std::string resolve(const ItemSpec& spec, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute() || spec.base_dir.empty()) return p.string();
    return (fs::path(spec.base_dir) / p).string();
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    for (const auto& part : detail::split(s, ',')) {
        auto v = detail::parse_int(part);
        if (!v) throw InputError("bad " + what + ": " + s);
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

PipelineOptions RunConfig::pipeline() const {
    PipelineOptions p;
    p.slabs = slabs;
    p.weights = weights;
    p.objective = objective;
    p.mode = mode;
    p.epsilon_factor = epsilon_factor;
    return p;
}

void RunConfig::validate() const {
    if (slabs.empty()) throw UsageError("at least one slab count is required");
    for (int q : slabs)
        if (q < 1) throw UsageError("slab counts must be >= 1");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw UsageError("weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw UsageError("weights must sum to 1");
    if (eigenfunctions == 1 || eigenfunctions < 0) throw UsageError("E must be >= 2");
    if (!(epsilon_factor > 0.0)) throw UsageError("epsilon factor must be positive");
    if (workers < 1) throw UsageError("workers must be >= 1");
    if (emeasure_cutoff < 1) throw UsageError("e-measure cutoff must be >= 1");
}

BijectionObjective parse_objective(const std::string& s) {
    if (s == "minimax") return BijectionObjective::Minimax;
    if (s == "minsum") return BijectionObjective::Minsum;
    throw UsageError("objective must be minimax or minsum, got " + s);
}

FragmentMode parse_mode(const std::string& s) {
    if (s == "clip") return FragmentMode::Clip;
    if (s == "vertex") return FragmentMode::VertexBinning;
    throw UsageError("mode must be clip or vertex, got " + s);
}

void apply_config_file(const std::string& path, RunConfig& config) {
    json j;
    try {
        j = json::parse(detail::read_file(path));
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    if (!j.is_object()) throw InputError(path + ": config must be a JSON object");
    static const char* known[] = {"slabs", "weights", "objective", "mode", "E", "epsilon_factor", "workers", "emeasure_cutoff"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
            throw UsageError(path + ": unknown config key '" + it.key() + "'");
    try {
        if (j.contains("slabs")) {
            if (j["slabs"].is_array())
                config.slabs = j["slabs"].get<std::vector<int>>();
            else
                config.slabs = {j["slabs"].get<int>()};
        }
        if (j.contains("weights")) {
            auto w = j["weights"].get<std::vector<double>>();
            if (w.size() != 3) throw UsageError("weights need exactly 3 entries");
            config.weights = {w[0], w[1], w[2]};
        }
        if (j.contains("objective")) config.objective = parse_objective(j["objective"].get<std::string>());
        if (j.contains("mode")) config.mode = parse_mode(j["mode"].get<std::string>());
        if (j.contains("E")) config.eigenfunctions = j["E"].get<int>();
        if (j.contains("epsilon_factor")) config.epsilon_factor = j["epsilon_factor"].get<double>();
        if (j.contains("workers")) config.workers = j["workers"].get<int>();
        if (j.contains("emeasure_cutoff")) config.emeasure_cutoff = j["emeasure_cutoff"].get<int>();
    } catch (const json::type_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

std::vector<ItemSpec> parse_manifest(const std::string& path) {
    const std::string text = detail::read_file(path);
    const std::string base = fs::path(path).parent_path().string();
    std::vector<ItemSpec> out;
    int line_no = 0;
    for (const auto& line : detail::split(text, '\n')) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_row(line, path + ":" + std::to_string(line_no));
        if (out.empty() && line_no == 1 && cells[0] == "id") continue;
        if (cells.size() < 2 || cells.size() > 4)
            throw InputError(path + ":" + std::to_string(line_no) + ": expected id,geometry[,fields[,label]]");
        ItemSpec s;
        s.id = cells[0];
        s.geometry = cells[1];
        if (cells.size() > 2 && !cells[2].empty()) s.fields = detail::split(cells[2], ';');
        if (cells.size() > 3) s.label = cells[3];
        s.base_dir = base;
        if (s.id.empty()) throw InputError(path + ":" + std::to_string(line_no) + ": empty id");
        for (const auto& prev : out)
            if (prev.id == s.id) throw InputError(path + ": duplicate id " + s.id);
        out.push_back(std::move(s));
    }
    if (out.empty()) throw InputError(path + ": manifest has no items");
    return out;
}

Item load_item(const ItemSpec& spec, const RunConfig& config) {
    Item item;
    std::optional<RegularGrid> grid;
    if (spec.geometry.rfind("grid:", 0) == 0) {
        auto parts = detail::split(spec.geometry.substr(5), ':');
        if (parts.empty() || parts.size() > 2) throw InputError("bad grid geometry: " + spec.geometry);
        auto dims = parse_int_list(parts[0], "grid dims");
        if (dims.size() != 3 || dims[0] < 2 || dims[1] < 2 || dims[2] < 2)
            throw InputError("grid needs 3 dims >= 2: " + spec.geometry);
        grid.emplace();
        grid->dims = {dims[0], dims[1], dims[2]};
        if (parts.size() == 2) {
            auto sp = detail::split(parts[1], ',');
            if (sp.size() != 3) throw InputError("grid spacing needs 3 values: " + spec.geometry);
            for (int k = 0; k < 3; ++k) {
                auto v = detail::parse_double(sp[k]);
                if (!v || *v <= 0) throw InputError("bad grid spacing: " + spec.geometry);
                grid->spacing[k] = *v;
            }
        }
    } else {
        item.mesh = load_mesh(resolve(spec, spec.geometry));
    }

    if (spec.fields.size() == 1 && (spec.fields[0].rfind("lb:", 0) == 0 || spec.fields[0].rfind("desc:", 0) == 0)) {
        if (grid) throw InputError(spec.id + ": descriptor fields need a surface mesh");
        const std::string& src = spec.fields[0];
        if (src.rfind("desc:", 0) == 0) {
            item.descriptors = read_descriptor_csv(resolve(spec, src.substr(5)));
            if (item.descriptors->descriptors.empty() ||
                item.descriptors->descriptors[0].size() != item.mesh.vertex_count())
                throw InputError(spec.id + ": descriptor rows do not match the vertex count");
        } else {
            int count = config.eigenfunctions;
            if (src.size() > 3) {
                auto v = detail::parse_int(src.substr(3));
                if (!v) throw InputError(spec.id + ": bad eigenfunction count in " + src);
                count = static_cast<int>(*v);
            }
            if (count < 2) throw InputError(spec.id + ": lb: needs E >= 2 (set it in the manifest or with -E)");
            EigenPairs eig = solve_eigen(cotangent_laplacian(item.mesh), count);
            item.descriptors = descriptors(eig, count);
        }
        return item;
    }

    for (const auto& src : spec.fields) {
        std::string path = src;
        int column = -1;
        if (auto hash = src.rfind('#'); hash != std::string::npos) {
            auto c = detail::parse_int(src.substr(hash + 1));
            if (!c || *c < 0) throw InputError(spec.id + ": bad column in " + src);
            column = static_cast<int>(*c);
            path = src.substr(0, hash);
        }
        path = resolve(spec, path);
        const std::string ext = fs::path(path).extension().string();
        std::vector<double> values;
        if (grid) {
            if (column >= 0)
                values = load_volume(path, grid->dims, VolumeFormat::Csv, column);
            else if (ext == ".raw" || ext == ".f32")
                values = load_volume(path, grid->dims, VolumeFormat::RawF32);
            else if (ext == ".f64")
                values = load_volume(path, grid->dims, VolumeFormat::RawF64);
            else
                values = load_field_file(path);
            if (values.size() != grid->point_count())
                throw InputError(spec.id + ": " + src + " has " + std::to_string(values.size()) + " values, grid has " +
                                 std::to_string(grid->point_count()) + " points");
            grid->fields.push_back(std::move(values));
            grid->field_names.push_back(src);
        } else {
            values = column >= 0 ? load_csv_column(path, column) : load_field_file(path);
            item.mesh.attach_field(src, std::move(values));
        }
    }
    if (grid) item.mesh = grid_to_mesh(*grid);
    if (item.mesh.field_count() == 0) throw InputError(spec.id + ": no fields given");
    return item;
}

double item_distance(const Item& a, const Item& b, const RunConfig& config, std::string* json_out) {
    if (a.descriptors.has_value() != b.descriptors.has_value())
        throw InputError("cannot compare a descriptor item with a multi-field item");
    if (a.descriptors) {
        int count = config.eigenfunctions;
        if (count == 0)
            count = static_cast<int>(std::min(a.descriptors->descriptors.size(), b.descriptors->descriptors.size()));
        ShapeDistance s = shape_distance(a.mesh, *a.descriptors, b.mesh, *b.descriptors, count, config.pipeline());
        if (json_out) *json_out = shape_report_to_json(s);
        return s.total;
    }
    DistanceReport r = field_distance(a.mesh, b.mesh, config.pipeline());
    if (json_out) *json_out = report_to_json(r);
    return r.total;
}

int cmd_descriptors(const std::string& mesh_path, int count, const std::string& out, bool clamp_negative) {
    if (count < 1) throw UsageError("E must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    MultiFieldMesh mesh = load_mesh(mesh_path);
    LaplaceOptions lo;
    lo.clamp_negative_weights = clamp_negative;
    EigenPairs eig = solve_eigen(cotangent_laplacian(mesh, lo), count);
    write_output(out, format_descriptor_csv(descriptors(eig, count)));
    log("descriptors: " + std::to_string(mesh.vertex_count()) + " vertices, E=" + std::to_string(count) +
        ", residual " + detail::format_double(eig.max_residual) + ", " + detail::format_double(elapsed_ms(start)) + " ms");
    return 0;
}

int cmd_distance(const ItemSpec& a, const ItemSpec& b, const RunConfig& config, const std::string& out) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    Item ia = load_item(a, config), ib = load_item(b, config);
    std::string report;
    double d = item_distance(ia, ib, config, &report);
    write_output(out, report);
    log("distance " + detail::format_double(d) + " in " + detail::format_double(elapsed_ms(start)) + " ms");
    return 0;
}

int cmd_matrix(const std::string& manifest, const RunConfig& config, const std::string& out, bool resume,
               const std::string& labels_out) {
    config.validate();
    if (out.empty() || out == "-") throw UsageError("matrix needs an output file (-o)");
    auto specs = parse_manifest(manifest);
    const std::size_t n = specs.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[specs[i].id] = i;

    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<char>> done(n, std::vector<char>(n, 0));
    const std::string sidecar = out + ".pairs";
    if (resume && fs::exists(sidecar)) {
        int reused = 0;
        for (const auto& line : detail::split(detail::read_file(sidecar), '\n')) {
            if (line.empty()) continue;
            auto cells = detail::split(line, ',');
            if (cells.size() != 3) continue;
            auto v = detail::parse_double(cells[2]);
            auto ia = index.find(cells[0]), ib = index.find(cells[1]);
            if (!v || ia == index.end() || ib == index.end()) continue;
            d[ia->second][ib->second] = d[ib->second][ia->second] = *v;
            done[ia->second][ib->second] = done[ib->second][ia->second] = 1;
            ++reused;
        }
        log("resume: " + std::to_string(reused) + " pairs reused from " + sidecar);
    }

    std::vector<std::pair<std::size_t, std::size_t>> todo;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!done[i][j]) todo.emplace_back(i, j);

    std::vector<std::optional<Item>> items(n);
    if (!todo.empty()) {
        std::vector<char> needed(n, 0);
        for (auto [i, j] : todo) needed[i] = needed[j] = 1;
        parallel_for(n, config.workers, [&](std::size_t i) {
            if (!needed[i]) return;
            const auto start = std::chrono::steady_clock::now();
            items[i] = load_item(specs[i], config);
            log("loaded " + specs[i].id + " (" + detail::format_double(elapsed_ms(start)) + " ms)");
        });
    }

    std::ofstream side(sidecar, resume ? std::ios::app : std::ios::trunc);
    if (!side) throw InputError("cannot write " + sidecar);
    std::mutex side_mutex;
    std::size_t finished = 0;
    parallel_for(todo.size(), config.workers, [&](std::size_t k) {
        auto [i, j] = todo[k];
        const auto start = std::chrono::steady_clock::now();
        const double v = item_distance(*items[i], *items[j], config, nullptr);
        d[i][j] = d[j][i] = v;
        std::lock_guard lock(side_mutex);
        side << specs[i].id << "," << specs[j].id << "," << detail::format_double(v) << "\n" << std::flush;
        ++finished;
        log("pair " + std::to_string(finished) + "/" + std::to_string(todo.size()) + " " + specs[i].id + " " +
            specs[j].id + " d=" + detail::format_double(v) + " (" + detail::format_double(elapsed_ms(start)) + " ms)");
    });
    side.close();

    NamedMatrix m;
    for (const auto& s : specs) m.ids.push_back(s.id);
    m.distances = d;
    write_output(out, format_matrix_csv(m));

    std::string pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            pairs += specs[i].id + "," + specs[j].id + "," + detail::format_double(d[i][j]) + "\n";
    write_output(sidecar, pairs);

    if (!labels_out.empty()) {
        std::string labels = "id,label\n";
        for (const auto& s : specs) labels += s.id + "," + s.label + "\n";
        write_output(labels_out, labels);
    }
    return 0;
}

int cmd_evaluate(const std::string& matrix, const std::string& labels, const RunConfig& config, const std::string& out) {
    config.validate();
    NamedMatrix m = parse_matrix_csv(detail::read_file(matrix));
    LabeledDistanceMatrix lm{m.distances, parse_labels_csv(detail::read_file(labels), m.ids)};
    RetrievalMetrics r = retrieval_metrics(lm, config.emeasure_cutoff);
    ordered_json j = {{"items", m.ids.size()},    {"nn", r.nn},       {"tier1", r.tier1},
                      {"tier2", r.tier2},         {"emeasure", r.emeasure}, {"dcg", r.dcg},
                      {"emeasure_cutoff", config.emeasure_cutoff}};
    write_output(out, j.dump(2) + "\n");
    return 0;
}

int cmd_timeseries(const std::string& manifest, const RunConfig& config, const std::string& out,
                   const std::string& plot_out) {
    config.validate();
    auto specs = parse_manifest(manifest);
    if (specs.size() < 2) throw InputError("a time series needs at least 2 sites");
    std::vector<MultiFieldMesh> sites(specs.size());
    parallel_for(specs.size(), config.workers, [&](std::size_t i) {
        Item item = load_item(specs[i], config);
        if (item.descriptors) throw InputError(specs[i].id + ": time series sites need scalar fields");
        sites[i] = std::move(item.mesh);
    });
    const auto start = std::chrono::steady_clock::now();
    TimeSeriesReport r = timeseries_peaks(sites, config.pipeline(), config.workers);
    log("timeseries: " + std::to_string(r.distances.size()) + " steps in " + detail::format_double(elapsed_ms(start)) +
        " ms");
    write_output(out, format_peaks_csv(r.peaks));
    if (!plot_out.empty()) write_output(plot_out, format_series_plot(r.distances));
    return 0;
}

}  // namespace mfd::cli
