#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

using namespace mfd;
using namespace mfd::cli;

namespace {

struct ConfigFlags {
    std::string config_path;
    std::string slabs;
    std::vector<double> weights;
    std::string objective;
    std::string mode;
    int eigenfunctions = -1;
    double epsilon_factor = 0.0;
    int workers = 0;
    int cutoff = 0;
};

void add_config_flags(CLI::App* app, ConfigFlags& f, bool with_cutoff) {
    app->add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("-q,--slabs", f.slabs, "slab count per field, comma separated (last repeats)");
    app->add_option("-w,--weights", f.weights, "weights of PD0, PD0 of -f, ExDg1")->expected(3)->delimiter(',');
    app->add_option("--objective", f.objective, "bijection objective")->check(CLI::IsMember({"minimax", "minsum"}));
    app->add_option("--mode", f.mode, "fragment mode")->check(CLI::IsMember({"clip", "vertex"}));
    app->add_option("-E,--eigenfunctions", f.eigenfunctions, "eigenfunctions for lb: items");
    app->add_option("--epsilon-factor", f.epsilon_factor, "Morse-ification epsilon as a fraction of the slab width");
    app->add_option("-j,--workers", f.workers, "worker threads");
    if (with_cutoff) app->add_option("--emeasure-cutoff", f.cutoff, "retrievals used by the e-measure");
}

RunConfig make_config(const ConfigFlags& f) {
    RunConfig c;
    if (!f.config_path.empty()) apply_config_file(f.config_path, c);
    if (!f.slabs.empty()) {
        c.slabs.clear();
        for (const auto& part : CLI::detail::split(f.slabs, ',')) {
            try {
                c.slabs.push_back(std::stoi(part));
            } catch (const std::exception&) {
                throw UsageError("bad slab list: " + f.slabs);
            }
        }
    }
    if (!f.weights.empty()) c.weights = {f.weights[0], f.weights[1], f.weights[2]};
    if (!f.objective.empty()) c.objective = parse_objective(f.objective);
    if (!f.mode.empty()) c.mode = parse_mode(f.mode);
    if (f.eigenfunctions >= 0) c.eigenfunctions = f.eigenfunctions;
    if (f.epsilon_factor != 0.0) c.epsilon_factor = f.epsilon_factor;
    if (f.workers != 0) c.workers = f.workers;
    if (f.cutoff != 0) c.emeasure_cutoff = f.cutoff;
    c.validate();
    return c;
}

std::vector<std::string> split_fields(const std::vector<std::string>& values) {
    std::vector<std::string> out;
    for (const auto& s : values)
        for (auto& part : CLI::detail::split(s, ';'))
            if (!part.empty()) out.push_back(part);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological distances between multi-fields via multi-dimensional Reeb graphs"};
    app.require_subcommand(1);

    ConfigFlags flags;

    auto* desc = app.add_subcommand("descriptors", "Laplace-Beltrami eigenfunction descriptors of a surface mesh");
    std::string desc_mesh, desc_out;
    int desc_count = 0;
    bool clamp = false;
    desc->add_option("mesh", desc_mesh, "OFF or OBJ mesh")->required();
    desc->add_option("-E,--eigenfunctions", desc_count, "number of descriptors")->required();
    desc->add_option("-o,--out", desc_out, "output CSV (default stdout)");
    desc->add_flag("--clamp-negative", clamp, "clamp negative cotangent weights to zero");

    auto* dist = app.add_subcommand("distance", "Distance report between two inputs");
    ItemSpec a, b;
    std::vector<std::string> fields_a, fields_b;
    std::string dist_out;
    a.id = "A";
    b.id = "B";
    dist->add_option("a", a.geometry, "mesh path or grid:NX,NY,NZ[:sx,sy,sz]")->required();
    dist->add_option("b", b.geometry, "mesh path or grid:NX,NY,NZ[:sx,sy,sz]")->required();
    dist->add_option("--fields-a", fields_a, "field sources of A, repeatable or ';'-separated")->required()->take_all();
    dist->add_option("--fields-b", fields_b, "field sources of B, repeatable or ';'-separated")->required()->take_all();
    dist->add_option("-o,--out", dist_out, "output JSON (default stdout)");
    add_config_flags(dist, flags, false);

    auto* mat = app.add_subcommand("matrix", "Pairwise distance matrix over a manifest");
    std::string mat_manifest, mat_out, mat_labels;
    bool resume = false;
    mat->add_option("manifest", mat_manifest, "CSV of id,geometry,fields,label")->required()->check(CLI::ExistingFile);
    mat->add_option("-o,--out", mat_out, "output matrix CSV")->required();
    mat->add_option("--labels-out", mat_labels, "also write id,label CSV");
    mat->add_flag("--resume", resume, "reuse completed pairs from <out>.pairs");
    add_config_flags(mat, flags, false);

    auto* eval = app.add_subcommand("evaluate", "Retrieval metrics of a labeled distance matrix");
    std::string eval_matrix, eval_labels, eval_out;
    eval->add_option("matrix", eval_matrix, "matrix CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("-l,--labels", eval_labels, "id,label CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("-o,--out", eval_out, "output JSON (default stdout)");
    add_config_flags(eval, flags, true);

    auto* ts = app.add_subcommand("timeseries", "Consecutive-site distances and ranked peaks");
    std::string ts_manifest, ts_out, ts_plot;
    ts->add_option("manifest", ts_manifest, "CSV of sites in order")->required()->check(CLI::ExistingFile);
    ts->add_option("-o,--out", ts_out, "peak CSV (default stdout)");
    ts->add_option("--plot", ts_plot, "gnuplot data of the distance series");
    add_config_flags(ts, flags, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*desc) return cmd_descriptors(desc_mesh, desc_count, desc_out, clamp);
        if (*dist) {
            a.fields = split_fields(fields_a);
            b.fields = split_fields(fields_b);
            return cmd_distance(a, b, make_config(flags), dist_out);
        }
        if (*mat) return cmd_matrix(mat_manifest, make_config(flags), mat_out, resume, mat_labels);
        if (*eval) return cmd_evaluate(eval_matrix, eval_labels, make_config(flags), eval_out);
        if (*ts) return cmd_timeseries(ts_manifest, make_config(flags), ts_out, ts_plot);
    } catch (const UsageError& e) {
        std::cerr << "mfd: usage error: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "mfd: input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mfd: internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
