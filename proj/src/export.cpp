#include "mfd/export.hpp"

#include <map>

#include "json.hpp"
#include "text_util.hpp"

namespace mfd {

using nlohmann::ordered_json;

namespace {

ordered_json quantization_json(const Quantization& q) {
    return {{"lo", q.lo}, {"hi", q.hi}, {"slabs", q.slabs}, {"width", q.width}};
}

ordered_json edges_json(const std::vector<std::pair<int, int>>& edges) {
    ordered_json out = ordered_json::array();
    for (auto [a, b] : edges) out.push_back({a, b});
    return out;
}

ordered_json matching_json(const Matching& m) {
    ordered_json pairs = ordered_json::array();
    for (const auto& p : m.pairs) pairs.push_back({{"left", p.left}, {"right", p.right}, {"cost", p.cost}});
    return {{"cost", m.cost}, {"pairs", pairs}};
}

std::string label_of(const std::vector<int>& bins) {
    std::string s = "(";
    for (std::size_t i = 0; i < bins.size(); ++i) s += (i ? "," : "") + std::to_string(bins[i]);
    return s + ")";
}

}  // namespace

std::string jcn_to_json(const JointContourNet& jcn) {
    ordered_json j;
    j["quantizations"] = ordered_json::array();
    for (const auto& q : jcn.quantizations) j["quantizations"].push_back(quantization_json(q));
    j["nodes"] = ordered_json::array();
    for (std::size_t i = 0; i < jcn.nodes.size(); ++i) {
        const auto& n = jcn.nodes[i];
        double measure = 0.0;
        for (int f : n.fragments) measure += jcn.fragments[f].measure;
        j["nodes"].push_back({{"id", i}, {"bins", n.bins}, {"values", n.values}, {"fragments", n.fragments.size()},
                              {"measure", measure}});
    }
    j["edges"] = edges_json(jcn.edges);
    return j.dump(2) + "\n";
}

std::string jcn_to_dot(const JointContourNet& jcn) {
    std::string out = "graph jcn {\n";
    for (std::size_t i = 0; i < jcn.nodes.size(); ++i)
        out += "  n" + std::to_string(i) + " [label=\"" + label_of(jcn.nodes[i].bins) + "\"];\n";
    for (auto [a, b] : jcn.edges) out += "  n" + std::to_string(a) + " -- n" + std::to_string(b) + ";\n";
    return out + "}\n";
}

std::string mdrg_to_json(const Mdrg& m) {
    ordered_json j;
    j["quantizations"] = ordered_json::array();
    for (const auto& q : m.quantizations) j["quantizations"].push_back(quantization_json(q));
    j["graphs"] = ordered_json::array();
    for (std::size_t g = 0; g < m.graphs.size(); ++g) {
        const auto& rg = m.graphs[g];
        ordered_json nodes = ordered_json::array();
        for (std::size_t v = 0; v < rg.nodes.size(); ++v) {
            const auto& n = rg.nodes[v];
            ordered_json node = {{"id", v}, {"value", n.value}, {"bin", n.bin}, {"members", n.members}};
            if (g < m.children.size() && v < m.children[g].size()) node["children"] = m.children[g][v];
            nodes.push_back(node);
        }
        j["graphs"].push_back({{"id", g},
                               {"level", rg.level},
                               {"field", rg.field},
                               {"parent_graph", rg.parent_graph},
                               {"parent_node", rg.parent_node},
                               {"parent_bin", rg.parent_bin},
                               {"nodes", nodes},
                               {"edges", edges_json(rg.edges)}});
    }
    j["collections"] = m.collections;
    return j.dump(2) + "\n";
}

std::string mdrg_to_dot(const Mdrg& m, int level) {
    if (level < 1 || level > m.levels())
        throw InputError("level " + std::to_string(level) + " outside 1.." + std::to_string(m.levels()));
    std::string out = "graph mdrg_level" + std::to_string(level) + " {\n";
    for (std::size_t g = 0; g < m.graphs.size(); ++g) {
        const auto& rg = m.graphs[g];
        if (rg.level != level) continue;
        const std::string prefix = "g" + std::to_string(g) + "_";
        out += "  subgraph cluster_" + std::to_string(g) + " {\n    label=\"graph " + std::to_string(g);
        if (rg.parent_graph >= 0)
            out += " (parent " + std::to_string(rg.parent_graph) + ":" + std::to_string(rg.parent_node) + ")";
        out += "\";\n";
        for (std::size_t v = 0; v < rg.nodes.size(); ++v)
            out += "    " + prefix + std::to_string(v) + " [label=\"" + detail::format_double(rg.nodes[v].value) + "\"];\n";
        for (auto [a, b] : rg.edges)
            out += "    " + prefix + std::to_string(a) + " -- " + prefix + std::to_string(b) + ";\n";
        out += "  }\n";
    }
    return out + "}\n";
}

namespace {

ordered_json report_json(const DistanceReport& r) {
    ordered_json j;
    j["total"] = r.total;
    j["weights"] = r.weights;
    j["parts"] = ordered_json::array();
    for (const auto& part : r.parts) {
        ordered_json bins = ordered_json::array();
        for (const auto& b : part.bins) {
            ordered_json pairs = ordered_json::array();
            for (std::size_t i = 0; i < b.bijection.pairs.size(); ++i)
                pairs.push_back({{"left", b.bijection.pairs[i].first},
                                 {"right", b.bijection.pairs[i].second},
                                 {"cost", b.bijection.costs[i]}});
            bins.push_back({{"level", b.level},
                            {"bin", b.bin},
                            {"left_graphs", b.left_graphs},
                            {"right_graphs", b.right_graphs},
                            {"value", b.bijection.value},
                            {"pairs", pairs}});
        }
        j["parts"].push_back({{"kind", to_string(part.kind)},
                              {"value", part.value},
                              {"level1", part.level1},
                              {"level1_matching", matching_json(part.level1_matching)},
                              {"level_terms", part.level_terms},
                              {"bins", bins}});
    }
    return j;
}

}  // namespace

std::string report_to_json(const DistanceReport& r) { return report_json(r).dump(2) + "\n"; }

std::string shape_report_to_json(const ShapeDistance& s) {
    ordered_json j;
    j["total"] = s.total;
    j["terms"] = ordered_json::array();
    for (const auto& t : s.terms) j["terms"].push_back(report_json(t));
    return j.dump(2) + "\n";
}

std::string format_matrix_csv(const NamedMatrix& m) {
    std::string out = "id";
    for (const auto& id : m.ids) out += "," + id;
    out += "\n";
    for (std::size_t i = 0; i < m.ids.size(); ++i) {
        out += m.ids[i];
        for (double d : m.distances[i]) out += "," + detail::format_double(d);
        out += "\n";
    }
    return out;
}

NamedMatrix parse_matrix_csv(std::string_view text) {
    NamedMatrix m;
    std::vector<std::string> header;
    int line_no = 0;
    for (const auto& raw : detail::split(text, '\n')) {
        ++line_no;
        if (raw.empty()) continue;
        auto cells = detail::split(raw, ',');
        if (header.empty()) {
            header = cells;
            if (header.size() < 2) throw InputError("matrix header needs at least one id");
            continue;
        }
        if (cells.size() != header.size())
            throw InputError("matrix line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(header.size()));
        m.ids.push_back(cells[0]);
        std::vector<double> row;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            auto v = detail::parse_double(cells[c]);
            if (!v) throw InputError("matrix line " + std::to_string(line_no) + ": not a number: " + cells[c]);
            row.push_back(*v);
        }
        m.distances.push_back(std::move(row));
    }
    if (header.empty()) throw InputError("empty matrix file");
    if (m.ids.size() != header.size() - 1) throw InputError("matrix is not square");
    for (std::size_t i = 0; i < m.ids.size(); ++i)
        if (m.ids[i] != header[i + 1]) throw InputError("row id '" + m.ids[i] + "' does not match column id '" + header[i + 1] + "'");
    return m;
}

std::vector<std::string> parse_labels_csv(std::string_view text, const std::vector<std::string>& ids) {
    std::map<std::string, std::string> by_id;
    bool first = true;
    for (const auto& raw : detail::split(text, '\n')) {
        if (raw.empty()) continue;
        auto cells = detail::split(raw, ',');
        if (cells.size() < 2) throw InputError("labels line needs id,label: " + raw);
        if (first && cells[0] == "id") {
            first = false;
            continue;
        }
        first = false;
        if (!by_id.emplace(cells[0], cells[1]).second) throw InputError("duplicate id in labels: " + cells[0]);
    }
    std::vector<std::string> out;
    for (const auto& id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw InputError("no label for id: " + id);
        out.push_back(it->second);
    }
    return out;
}

}  // namespace mfd
