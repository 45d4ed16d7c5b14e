#include "mfd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "text_util.hpp"

namespace mfd {

LaplaceOperator cotangent_laplacian(const MultiFieldMesh& mesh, const LaplaceOptions& options) {
    if (mesh.simplex_size() != 3) throw InputError("Laplace-Beltrami operator requires a triangle mesh");
    const int n = static_cast<int>(mesh.vertex_count());
    const auto& p = mesh.vertices();

    std::map<std::pair<int, int>, double> weight;
    std::map<std::pair<int, int>, int> incidence;
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);

    for (std::size_t t = 0; t < mesh.simplex_count(); ++t) {
        auto tri = mesh.simplex(t);
        const double area = triangle_area(p[tri[0]], p[tri[1]], p[tri[2]]);
        double scale = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int c = 0; c < 3; ++c) scale = std::max(scale, std::abs(p[tri[a]][c]));
        if (!(area > 1e-14 * std::max(1.0, scale * scale)))
            throw InputError("degenerate triangle " + std::to_string(t) + " (zero area)");
        for (int a = 0; a < 3; ++a) mass[tri[a]] += area / 3.0;

        for (int c = 0; c < 3; ++c) {
            const int i = tri[(c + 1) % 3], j = tri[(c + 2) % 3], k = tri[c];
            double u[3], v[3];
            for (int d = 0; d < 3; ++d) {
                u[d] = p[i][d] - p[k][d];
                v[d] = p[j][d] - p[k][d];
            }
            const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            // |u x v| = 2 * area
            const double cot = dot / (2.0 * area);
            auto key = std::minmax(i, j);
            weight[key] += 0.5 * cot;
            if (++incidence[key] > 2)
                throw InputError("non-manifold edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                 ") has more than two incident triangles");
        }
    }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(weight.size() * 4);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    for (auto [key, w] : weight) {
        if (options.clamp_negative_weights) w = std::max(w, 0.0);
        trip.emplace_back(key.first, key.second, -w);
        trip.emplace_back(key.second, key.first, -w);
        diag[key.first] += w;
        diag[key.second] += w;
    }
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[i]);

    LaplaceOperator op;
    op.stiffness.resize(n, n);
    op.stiffness.setFromTriplets(trip.begin(), trip.end());
    for (int i = 0; i < n; ++i)
        if (!(mass[i] > 0)) throw InputError("vertex " + std::to_string(i) + " has no incident triangle");
    op.mass = std::move(mass);
    return op;
}

namespace {

double residual(const LaplaceOperator& op, const Eigen::VectorXd& x, double lambda) {
    Eigen::VectorXd sx = op.mass.cwiseProduct(x);
    Eigen::VectorXd r = op.stiffness * x - lambda * sx;
    return r.norm() / sx.norm();
}

EigenPairs solve_dense(const LaplaceOperator& op, int k) {
    Eigen::VectorXd inv_sqrt = op.mass.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd a = inv_sqrt.asDiagonal() * Eigen::MatrixXd(op.stiffness) * inv_sqrt.asDiagonal();
    a = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed to converge");
    EigenPairs out;
    out.values = es.eigenvalues().head(k + 1);
    out.vectors = inv_sqrt.asDiagonal() * es.eigenvectors().leftCols(k + 1);
    return out;
}

/// S-orthonormalizes the columns of y in place (two passes of modified Gram-Schmidt).
void s_orthonormalize(Eigen::MatrixXd& y, const Eigen::VectorXd& s) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            for (Eigen::Index i = 0; i < j; ++i) {
                double c = y.col(i).dot(s.cwiseProduct(y.col(j)));
                y.col(j) -= c * y.col(i);
            }
            double nrm = std::sqrt(y.col(j).dot(s.cwiseProduct(y.col(j))));
            if (nrm > 0) y.col(j) /= nrm;
        }
    }
}

EigenPairs solve_sparse(const LaplaceOperator& op, int k, const EigenSolveOptions& options) {
    const Eigen::Index n = op.mass.size();
    const int want = k + 1;
    const int p = static_cast<int>(std::min<Eigen::Index>(n, std::max(2 * want, want + 8)));
    const double sigma = 1e-6 * op.stiffness.diagonal().mean() / op.mass.mean();

    Eigen::SparseMatrix<double> shifted = op.stiffness;
    for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += sigma * op.mass[i];
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("factorization of shifted operator failed");

    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i) x(i, j) = gauss(rng);
    s_orthonormalize(x, op.mass);

    EigenPairs out;
    for (int it = 0; it < options.max_iterations; ++it) {
        Eigen::MatrixXd y = ldlt.solve(op.mass.asDiagonal() * x);
        s_orthonormalize(y, op.mass);
        Eigen::MatrixXd small = y.transpose() * (op.stiffness * y);
        small = 0.5 * (small + small.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
        x = y * es.eigenvectors();
        out.values = es.eigenvalues().head(want);
        out.vectors = x.leftCols(want);
        double worst = 0.0;
        for (int i = 0; i < want; ++i) worst = std::max(worst, residual(op, out.vectors.col(i), out.values[i]));
        out.max_residual = worst;
        if (worst < options.tolerance) return out;
    }
    if (out.max_residual < 1e-8) return out;
    throw std::runtime_error("eigensolver did not converge; residual " + std::to_string(out.max_residual));
}

bool lex_abs_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double x = std::abs(a[i]), y = std::abs(b[i]);
        if (x != y) return x < y;
    }
    return false;
}

}  // namespace

EigenPairs solve_eigen(const LaplaceOperator& op, int k, const EigenSolveOptions& options) {
    const Eigen::Index n = op.mass.size();
    if (k < 0 || k >= n) throw InputError("requested " + std::to_string(k) + " eigenpairs beyond lambda_0 but mesh has " +
                                          std::to_string(n) + " vertices");
    EigenPairs raw = n <= options.dense_limit ? solve_dense(op, k) : solve_sparse(op, k, options);

    const int m = static_cast<int>(raw.values.size());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    const double scale = std::max(1.0, raw.values.cwiseAbs().maxCoeff());
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (std::abs(raw.values[a] - raw.values[b]) > 1e-9 * scale) return raw.values[a] < raw.values[b];
        return lex_abs_less(raw.vectors.col(a), raw.vectors.col(b));
    });
    EigenPairs out;
    out.values.resize(m);
    out.vectors.resize(n, m);
    for (int i = 0; i < m; ++i) {
        out.values[i] = raw.values[order[i]];
        out.vectors.col(i) = raw.vectors.col(order[i]);
        out.max_residual = std::max(out.max_residual, residual(op, out.vectors.col(i), out.values[i]));
    }
    return out;
}

EigenDescriptorSet descriptors(const EigenPairs& eig, int count) {
    if (count < 1) throw InputError("descriptor count must be at least 1");
    if (eig.values.size() < count + 1)
        throw InputError("need " + std::to_string(count + 1) + " eigenpairs, have " + std::to_string(eig.values.size()));
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    EigenDescriptorSet out;
    for (int i = 1; i <= count; ++i) {
        const double lambda = eig.values[i];
        if (!(lambda > 1e-10 * scale))
            throw InputError("eigenvalue " + std::to_string(i) + " is not positive (" + std::to_string(lambda) +
                             "); the mesh is disconnected or the operator is broken");
        const double inv = 1.0 / std::sqrt(lambda);
        std::vector<double> d(eig.vectors.rows());
        for (Eigen::Index v = 0; v < eig.vectors.rows(); ++v) d[v] = std::abs(eig.vectors(v, i)) * inv;
        out.eigenvalues.push_back(lambda);
        out.descriptors.push_back(std::move(d));
    }
    return out;
}

std::string format_descriptor_csv(const EigenDescriptorSet& d) {
    std::string out;
    for (std::size_t i = 0; i < d.eigenvalues.size(); ++i)
        out += (i ? "," : "") + detail::format_double(d.eigenvalues[i]);
    out += "\n";
    const std::size_t n = d.descriptors.empty() ? 0 : d.descriptors[0].size();
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < d.descriptors.size(); ++i)
            out += (i ? "," : "") + detail::format_double(d.descriptors[i][v]);
        out += "\n";
    }
    return out;
}

void write_descriptor_csv(const EigenDescriptorSet& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << format_descriptor_csv(d);
}

EigenDescriptorSet read_descriptor_csv(const std::string& path) {
    std::istringstream in(detail::read_file(path));
    std::string line;
    EigenDescriptorSet out;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split(line, ',');
        std::vector<double> row;
        for (const auto& c : cells) {
            auto v = detail::parse_double(c);
            if (!v) throw InputError(path + " line " + std::to_string(line_no) + ": non-numeric cell '" + c + "'");
            row.push_back(*v);
        }
        if (out.eigenvalues.empty() && out.descriptors.empty()) {
            out.eigenvalues = row;
            out.descriptors.assign(row.size(), {});
            continue;
        }
        if (row.size() != out.eigenvalues.size())
            throw InputError(path + " line " + std::to_string(line_no) + ": expected " +
                             std::to_string(out.eigenvalues.size()) + " columns");
        for (std::size_t i = 0; i < row.size(); ++i) out.descriptors[i].push_back(row[i]);
    }
    if (out.eigenvalues.empty()) throw InputError(path + ": empty descriptor file");
    return out;
}

}  // namespace mfd
