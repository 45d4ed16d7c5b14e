#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mfd/spectral.hpp"

using namespace mfd;

namespace {

double spread(const Eigen::VectorXd& v) {
    return (v.maxCoeff() - v.minCoeff()) / v.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("constant functions are in the kernel") {
    auto op = cotangent_laplacian(fixtures::torus(2, 0.7, 12, 8));
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.mass.size());
    CHECK((op.stiffness * ones).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SparseMatrix<double> t = op.stiffness.transpose();
    CHECK((op.stiffness - t).norm() < 1e-14);
    CHECK(op.mass.minCoeff() > 0);
}

TEST_CASE("two equilateral triangles: shared edge weight 1/sqrt(3)") {
    const double h = std::sqrt(3.0) / 2;
    MultiFieldMesh m({{0, 0, 0}, {1, 0, 0}, {0.5, h, 0}, {0.5, -h, 0}}, {0, 1, 2, 0, 3, 1}, 3);
    auto op = cotangent_laplacian(m);
    CHECK(-op.stiffness.coeff(0, 1) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
    // boundary edge: single cotangent, halved
    CHECK(-op.stiffness.coeff(0, 2) == doctest::Approx(0.5 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(op.mass[2] == doctest::Approx(std::sqrt(3.0) / 12).epsilon(1e-14));
}

TEST_CASE("icosahedron masses are equal") {
    auto op = cotangent_laplacian(fixtures::icosphere(0));
    CHECK(op.mass.maxCoeff() / op.mass.minCoeff() < 1 + 1e-9);
}

TEST_CASE("degenerate and non-manifold input") {
    MultiFieldMesh flat({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {0, 1, 2}, 3);
    CHECK_THROWS_AS(cotangent_laplacian(flat), InputError);
    MultiFieldMesh fan({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}}, {0, 1, 2, 0, 1, 3, 0, 1, 4}, 3);
    CHECK_THROWS_AS(cotangent_laplacian(fan), InputError);
    auto tets = fixtures::tet_grid(2);
    CHECK_THROWS_AS(cotangent_laplacian(tets), InputError);
}

TEST_CASE("eigenpairs of a connected mesh") {
    auto m = fixtures::torus(2, 0.7, 16, 10);
    auto op = cotangent_laplacian(m);
    auto eig = solve_eigen(op, 8);
    REQUIRE(eig.values.size() == 9);
    CHECK(std::abs(eig.values[0]) < 1e-8);
    CHECK(spread(eig.vectors.col(0)) < 1e-6);
    for (int i = 1; i < 9; ++i) CHECK(eig.values[i] >= eig.values[i - 1]);
    CHECK(eig.max_residual < 1e-8);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            double d = eig.vectors.col(i).dot(op.mass.cwiseProduct(eig.vectors.col(j)));
            CHECK(std::abs(d - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
    CHECK_THROWS_AS(solve_eigen(op, static_cast<int>(m.vertex_count())), InputError);
}

TEST_CASE("two components give two zero eigenvalues") {
    auto a = fixtures::icosphere(1);
    std::vector<Vec3> v = a.vertices();
    std::vector<int> t = a.simplex_indices();
    const int off = static_cast<int>(v.size());
    for (auto p : a.vertices()) v.push_back({p[0] + 5, p[1], p[2]});
    for (int i : a.simplex_indices()) t.push_back(i + off);
    auto eig = solve_eigen(cotangent_laplacian(MultiFieldMesh(v, t, 3)), 3);
    CHECK(std::abs(eig.values[0]) < 1e-8);
    CHECK(std::abs(eig.values[1]) < 1e-8);
    CHECK(eig.values[2] > 1e-3);
    CHECK_THROWS_AS(descriptors(eig, 2), InputError);
}

TEST_CASE("sparse and dense solvers agree") {
    auto op = cotangent_laplacian(fixtures::torus(2, 0.7, 20, 12));
    auto dense = solve_eigen(op, 6);
    EigenSolveOptions o;
    o.dense_limit = 0;
    auto sparse = solve_eigen(op, 6, o);
    for (int i = 0; i < 7; ++i) CHECK(sparse.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-8));
    CHECK(sparse.max_residual < 1e-8);
}

TEST_CASE("descriptors: sign invariance, nonnegativity, homogeneity") {
    auto eig = solve_eigen(cotangent_laplacian(fixtures::torus(2, 0.7, 12, 8)), 4);
    auto d = descriptors(eig, 4);
    CHECK(d.eigenvalues.size() == 4);
    CHECK(d.descriptors.size() == 4);
    EigenPairs flipped = eig;
    flipped.vectors = -eig.vectors;
    auto df = descriptors(flipped, 4);
    CHECK(df.descriptors == d.descriptors);
    for (const auto& col : d.descriptors)
        for (double x : col) CHECK(x >= 0);
    EigenPairs doubled = eig;
    doubled.vectors = 2 * eig.vectors;
    auto dd = descriptors(doubled, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t v = 0; v < d.descriptors[i].size(); ++v) CHECK(dd.descriptors[i][v] == 2 * d.descriptors[i][v]);
    for (std::size_t v = 0; v < d.descriptors[0].size(); ++v)
        CHECK(d.descriptors[0][v] == doctest::Approx(std::abs(eig.vectors(v, 1)) / std::sqrt(eig.values[1])));
    CHECK_THROWS_AS(descriptors(eig, 5), InputError);
}

TEST_CASE("isometry invariance of the spectrum") {
    auto m = fixtures::torus(2, 0.7, 12, 8);
    auto a = solve_eigen(cotangent_laplacian(m), 6);
    std::mt19937_64 rng(3);
    fixtures::random_rigid_motion(m, rng);
    auto b = solve_eigen(cotangent_laplacian(m), 6);
    for (int i = 1; i < 7; ++i) CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-9 * a.values[i]);
}

TEST_CASE("descriptor CSV round trip") {
    auto eig = solve_eigen(cotangent_laplacian(fixtures::icosphere(1)), 3);
    auto d = descriptors(eig, 3);
    auto path = (std::filesystem::temp_directory_path() / "mfd_desc.csv").string();
    write_descriptor_csv(d, path);
    auto r = read_descriptor_csv(path);
    CHECK(r.eigenvalues == d.eigenvalues);
    CHECK(r.descriptors == d.descriptors);
}
