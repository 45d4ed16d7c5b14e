#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "mfd/export.hpp"

using namespace mfd;
using nlohmann::json;

namespace {

MultiFieldMesh small_bivariate() {
    auto m = fixtures::torus(2, 0.7, 12, 8);
    m.attach_field("x", fixtures::coordinate(m, 0));
    m.attach_field("z", fixtures::coordinate(m, 2));
    return m;
}

std::vector<Quantization> quantize(const MultiFieldMesh& m, int q) {
    std::vector<Quantization> out;
    for (std::size_t k = 0; k < m.field_count(); ++k) out.push_back(make_quantization(field_range(m.field(k)), q));
    return out;
}

}  // namespace

TEST_CASE("JCN JSON and DOT") {
    auto m = small_bivariate();
    auto jcn = build_jcn(m, quantize(m, 4));
    auto j = json::parse(jcn_to_json(jcn));
    CHECK(j["quantizations"].size() == 2);
    CHECK(j["nodes"].size() == jcn.nodes.size());
    CHECK(j["edges"].size() == jcn.edges.size());
    CHECK(j["nodes"][0]["bins"].get<std::vector<int>>() == jcn.nodes[0].bins);
    auto dot = jcn_to_dot(jcn);
    CHECK(dot.rfind("graph jcn {", 0) == 0);
    CHECK(dot.find("n0 --") != std::string::npos);
}

TEST_CASE("MDRG JSON and DOT") {
    auto m = small_bivariate();
    auto mdrg = build_mdrg(build_jcn(m, quantize(m, 4)));
    auto j = json::parse(mdrg_to_json(mdrg));
    REQUIRE(j["graphs"].size() == mdrg.graphs.size());
    CHECK(j["graphs"][0]["level"] == 1);
    CHECK(j["graphs"][1]["parent_graph"] == 0);
    CHECK(j["collections"].size() == 1);
    CHECK(j["graphs"][0]["nodes"][0]["children"].is_array());
    auto dot = mdrg_to_dot(mdrg, 2);
    CHECK(dot.rfind("graph mdrg_level2 {", 0) == 0);
    CHECK(dot.find("subgraph cluster_1") != std::string::npos);
    CHECK_THROWS_AS(mdrg_to_dot(mdrg, 0), InputError);
    CHECK_THROWS_AS(mdrg_to_dot(mdrg, 3), InputError);
}

TEST_CASE("distance report JSON") {
    auto a = small_bivariate();
    auto b = a.without_fields();
    b.attach_field("x", fixtures::coordinate(a, 1));
    b.attach_field("z", fixtures::coordinate(a, 2));
    PipelineOptions opt;
    opt.slabs = {4};
    auto r = field_distance(a, b, opt);
    auto j = json::parse(report_to_json(r));
    CHECK(j["total"].get<double>() == r.total);
    REQUIRE(j["parts"].size() == 3);
    CHECK(j["parts"][0]["kind"] == "pd0");
    CHECK(j["parts"][1]["kind"] == "pd0-neg");
    CHECK(j["parts"][2]["kind"] == "exdg1");
    CHECK(j["parts"][0]["level_terms"].size() == 1);
    ShapeDistance s;
    s.total = r.total;
    s.terms = {r};
    auto sj = json::parse(shape_report_to_json(s));
    CHECK(sj["terms"].size() == 1);
}

TEST_CASE("matrix CSV round trip and errors") {
    NamedMatrix m{{"a", "b", "c"}, {{0, 0.1, 1e-17}, {0.1, 0, 3.25}, {1e-17, 3.25, 0}}};
    auto text = format_matrix_csv(m);
    CHECK(text.rfind("id,a,b,c\n", 0) == 0);
    auto r = parse_matrix_csv(text);
    CHECK(r.ids == m.ids);
    CHECK(r.distances == m.distances);
    CHECK_THROWS_AS(parse_matrix_csv(""), InputError);
    CHECK_THROWS_AS(parse_matrix_csv("id,a,b\na,0,1\nb,1\n"), InputError);
    CHECK_THROWS_AS(parse_matrix_csv("id,a,b\na,0,x\nb,1,0\n"), InputError);
    CHECK_THROWS_AS(parse_matrix_csv("id,a,b\na,0,1\n"), InputError);
    CHECK_THROWS_AS(parse_matrix_csv("id,a,b\na,0,1\nc,1,0\n"), InputError);
}

TEST_CASE("labels CSV") {
    std::vector<std::string> ids{"s1", "s2"};
    CHECK(parse_labels_csv("id,label\ns2,torus\ns1,sphere\n", ids) == std::vector<std::string>{"sphere", "torus"});
    CHECK(parse_labels_csv("s1,a\ns2,b\n", ids) == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(parse_labels_csv("s1,a\n", ids), InputError);
    CHECK_THROWS_AS(parse_labels_csv("s1,a\ns1,b\ns2,c\n", ids), InputError);
}
