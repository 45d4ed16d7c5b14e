#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "mfd/mesh_io.hpp"

namespace mfd {

/// Discrete Laplace-Beltrami operator: stiffness M (symmetric, zero row sums) and lumped mass S.
struct LaplaceOperator {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::VectorXd mass;  ///< diagonal of S, strictly positive
};

struct LaplaceOptions {
    bool clamp_negative_weights = false;
};

/// Cotangent weights m_ij = (cot a + cot b)/2, one cotangent on boundary edges; s_i = 1/3 incident area.
/// Throws InputError on degenerate triangles or edges with more than two incident triangles.
LaplaceOperator cotangent_laplacian(const MultiFieldMesh& mesh, const LaplaceOptions& options = {});

/// Smallest eigenpairs of M v = lambda S v, vectors S-orthonormal (columns).
struct EigenPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    double max_residual = 0.0;
};

struct EigenSolveOptions {
    int dense_limit = 1500;  ///< above this vertex count the sparse shift-invert solver is used
    double tolerance = 1e-10;
    int max_iterations = 1000;
};

/// Returns the k+1 smallest eigenpairs, nondecreasing; ties ordered by the lexicographic |phi| vector.
EigenPairs solve_eigen(const LaplaceOperator& op, int k, const EigenSolveOptions& options = {});

/// Normalized absolute eigenfunctions |phi_i| / sqrt(lambda_i), i = 1..E.
struct EigenDescriptorSet {
    std::vector<double> eigenvalues;                ///< lambda_1..lambda_E
    std::vector<std::vector<double>> descriptors;   ///< descriptors[i-1][v]
};

EigenDescriptorSet descriptors(const EigenPairs& eig, int count);

/// Header row of eigenvalues, then one row per vertex.
std::string format_descriptor_csv(const EigenDescriptorSet& d);
void write_descriptor_csv(const EigenDescriptorSet& d, const std::string& path);
EigenDescriptorSet read_descriptor_csv(const std::string& path);

}  // namespace mfd
