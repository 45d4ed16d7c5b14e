#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "mfd/persistence.hpp"
#include "oracles.hpp"

using namespace mfd;
using oracles::Points;
using oracles::sorted_points;

namespace {

ReebGraph make_graph(std::vector<double> values, std::vector<std::pair<int, int>> edges) {
    ReebGraph g;
    for (double v : values) g.nodes.push_back({v, -1, {}});
    for (auto& e : edges) e = std::minmax(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    g.edges = edges;
    return g;
}

ReebGraph negated(ReebGraph g) {
    for (auto& n : g.nodes) n.value = -n.value;
    return g;
}

int count_type(const ReebGraph& g, NodeType t) {
    auto adj = g.adjacency();
    int c = 0;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) c += classify(degrees(g, adj, static_cast<int>(v))) == t;
    return c;
}

}  // namespace

TEST_CASE("single edge") {
    auto g = make_graph({0, 1}, {{0, 1}});
    CHECK(sorted_points(compute_pd0(g)) == Points{{0, 1}});
    CHECK(sorted_points(compute_pd0_neg(g)) == Points{{-1, 0}});
    CHECK(compute_exdg1(g).points.empty());
    CHECK(compute_pd0(g).kind == DiagramKind::Pd0);
    CHECK(compute_pd0_neg(g).kind == DiagramKind::Pd0Neg);
    CHECK(compute_exdg1(g).kind == DiagramKind::ExDg1);
}

TEST_CASE("down-fork merging two minima") {
    // minima 0 (value 0) and 1 (value 0.2) meet at the down-fork 2, which rises to 3
    auto g = make_graph({0, 0.2, 1, 3}, {{0, 2}, {1, 2}, {2, 3}});
    auto d = compute_pd0(g);
    CHECK(sorted_points(d) == Points{{0, 3}, {0.2, 1}});
    for (const auto& p : d.points)
        if (p.birth == 0.2) {
            CHECK(p.birth_node == 1);
            CHECK(p.death_node == 2);
        }
    CHECK(sorted_points(compute_pd0_neg(g)) == Points{{-3, 0}});
}

TEST_CASE("up-fork splitting into two maxima") {
    auto g = make_graph({0, 2, 3, 2.5}, {{0, 1}, {1, 2}, {1, 3}});
    CHECK(sorted_points(compute_pd0(g)) == Points{{0, 3}});
    CHECK(sorted_points(compute_pd0_neg(g)) == Points{{-3, 0}, {-2.5, -2}});
}

TEST_CASE("single cycle") {
    auto g = make_graph({0, 2, 3, 4, 5, 6}, {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}});
    auto d = compute_exdg1(g);
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].birth == 5);
    CHECK(d.points[0].death == 2);
    CHECK(d.points[0].birth_node == 4);
    CHECK(d.points[0].death_node == 1);
    CHECK(sorted_points(compute_pd0(g)) == Points{{0, 6}});
}

TEST_CASE("tree has an empty ExDg1") {
    auto g = make_graph({0, 0.2, 1, 3, 4, 3.5}, {{0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}});
    CHECK(compute_exdg1(g).points.empty());
}

TEST_CASE("nested cycles match the oracles") {
    // two loops stacked on one spine
    auto g = make_graph({0, 1, 2, 2.5, 3, 4, 5, 5.5, 6, 7},
                        {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}, {5, 6}, {5, 7}, {6, 8}, {7, 8}, {8, 9}});
    REQUIRE(is_morse(g));
    auto d = sorted_points(compute_exdg1(g));
    CHECK(d.size() == 2);
    CHECK(d == oracles::exdg1_cycle_search(g));
    CHECK(d == oracles::extended_by_reduction(g).ext1);
}

TEST_CASE("non-Morse input is rejected") {
    auto g = make_graph({0, 0}, {{0, 1}});
    CHECK_THROWS_AS(compute_pd0(g), std::invalid_argument);
    CHECK_THROWS_AS(compute_exdg1(g), std::invalid_argument);
    auto monkey = make_graph({5, 1, 2, 3, 9}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK_THROWS_AS(compute_pd0_neg(monkey), std::invalid_argument);
}

TEST_CASE("random Morse graphs agree with the oracles") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 200; ++t) {
        auto g = fixtures::random_morse_graph(12, rng);
        auto pd0 = sorted_points(compute_pd0(g));
        auto ext = oracles::extended_by_reduction(g);
        CHECK(pd0 == oracles::pd0_threshold_sweep(g));
        CHECK(pd0 == ext.pd0);
        CHECK(sorted_points(compute_pd0_neg(g)) == oracles::pd0_threshold_sweep(negated(g)));
        auto ex = sorted_points(compute_exdg1(g));
        CHECK(ex == oracles::exdg1_cycle_search(g));
        CHECK(ex == ext.ext1);
        CHECK(static_cast<int>(ex.size()) == g.cycle_rank());
        CHECK(static_cast<int>(pd0.size()) == count_type(g, NodeType::Minimum));
        CHECK(static_cast<int>(compute_pd0_neg(g).points.size()) ==
              count_type(g, NodeType::Maximum));
    }
}

TEST_CASE("diagrams shift with the values") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 50; ++t) {
        auto g = fixtures::random_morse_graph(12, rng);
        auto h = g;
        for (auto& n : h.nodes) n.value += 4.0;
        for (auto kind : {0, 1, 2}) {
            auto a = kind == 0 ? compute_pd0(g) : kind == 1 ? compute_pd0_neg(g) : compute_exdg1(g);
            auto b = kind == 0 ? compute_pd0(h) : kind == 1 ? compute_pd0_neg(h) : compute_exdg1(h);
            const double s = kind == 1 ? -4.0 : 4.0;
            REQUIRE(a.points.size() == b.points.size());
            auto pa = sorted_points(a), pb = sorted_points(b);
            for (std::size_t i = 0; i < pa.size(); ++i) {
                CHECK(pb[i].first == doctest::Approx(pa[i].first + s));
                CHECK(pb[i].second == doctest::Approx(pa[i].second + s));
            }
        }
    }
}

TEST_CASE("diagram CSV") {
    auto g = make_graph({0, 1}, {{0, 1}});
    auto csv = format_diagram_csv(compute_pd0(g));
    CHECK(csv.rfind("birth,death,kind,birth_node,death_node\n", 0) == 0);
    CHECK(csv.find("pd0") != std::string::npos);
    CHECK(std::string(to_string(DiagramKind::ExDg1)).size() > 0);
}
