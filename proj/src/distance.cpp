#include "mfd/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace mfd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Hopcroft-Karp maximum matching on a bipartite graph with equal side sizes.
class Matcher {
public:
    explicit Matcher(int n) : n_(n), adj_(n), match_left_(n, -1), match_right_(n, -1), dist_(n) {}

    void add_edge(int l, int r) { adj_[l].push_back(r); }

    int solve() {
        int size = 0;
        while (bfs())
            for (int l = 0; l < n_; ++l)
                if (match_left_[l] < 0 && dfs(l)) ++size;
        return size;
    }

    const std::vector<int>& match_left() const { return match_left_; }

private:
    bool bfs() {
        std::queue<int> q;
        bool found = false;
        for (int l = 0; l < n_; ++l) {
            if (match_left_[l] < 0) {
                dist_[l] = 0;
                q.push(l);
            } else {
                dist_[l] = -1;
            }
        }
        while (!q.empty()) {
            int l = q.front();
            q.pop();
            for (int r : adj_[l]) {
                int m = match_right_[r];
                if (m < 0) found = true;
                else if (dist_[m] < 0) {
                    dist_[m] = dist_[l] + 1;
                    q.push(m);
                }
            }
        }
        return found;
    }

    bool dfs(int l) {
        for (int r : adj_[l]) {
            int m = match_right_[r];
            if (m < 0 || (dist_[m] == dist_[l] + 1 && dfs(m))) {
                match_left_[l] = r;
                match_right_[r] = l;
                return true;
            }
        }
        dist_[l] = -1;
        return false;
    }

    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_left_, match_right_, dist_;
};

/// Smallest threshold t among the finite entries such that {cost <= t} has a perfect matching,
/// with the matching (row -> column).
std::pair<double, std::vector<int>> min_max_matching(const CostMatrix& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {0.0, {}};
    std::vector<double> cand;
    cand.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : cost)
        for (double c : row)
            if (c < kInf) cand.push_back(c);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    auto attempt = [&](double t, std::vector<int>* out) {
        Matcher m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (cost[i][j] <= t) m.add_edge(i, j);
        bool ok = m.solve() == n;
        if (ok && out) *out = m.match_left();
        return ok;
    };
    std::size_t lo = 0, hi = cand.size() - 1;
    if (!attempt(cand[hi], nullptr)) throw std::logic_error("no perfect matching under the largest finite cost");
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (attempt(cand[mid], nullptr)) hi = mid;
        else lo = mid + 1;
    }
    std::vector<int> match;
    attempt(cand[lo], &match);
    return {cand[lo], match};
}

void check_square_finite(const CostMatrix& cost) {
    for (const auto& row : cost) {
        if (row.size() != cost.size()) throw std::invalid_argument("assignment requires a square cost matrix");
        for (double c : row)
            if (!std::isfinite(c)) throw std::invalid_argument("assignment requires finite costs");
    }
}

double half_persistence(const DiagramPoint& p) { return std::abs(p.death - p.birth) / 2.0; }

double linf(const DiagramPoint& a, const DiagramPoint& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double max_half_persistence(const PersistenceDiagram& d) {
    double m = 0.0;
    for (const auto& p : d.points) m = std::max(m, half_persistence(p));
    return m;
}

}  // namespace

std::pair<double, Matching> bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y) {
    if (x.kind != y.kind) throw std::invalid_argument("bottleneck distance between diagrams of different kinds");
    const int n = static_cast<int>(x.points.size()), m = static_cast<int>(y.points.size());
    const int size = n + m;
    Matching matching;
    if (size == 0) return {0.0, matching};
    // Rows: X points, then diagonal copies of Y points. Columns: Y points, then diagonal copies of X points.
    CostMatrix cost(size, std::vector<double>(size, kInf));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) cost[i][j] = linf(x.points[i], y.points[j]);
        cost[i][m + i] = half_persistence(x.points[i]);
    }
    for (int j = 0; j < m; ++j) {
        cost[n + j][j] = half_persistence(y.points[j]);
        for (int i = 0; i < n; ++i) cost[n + j][m + i] = 0.0;
    }
    auto [value, match] = min_max_matching(cost);
    for (int row = 0; row < size; ++row) {
        const int col = match[row];
        if (row < n && col < m) matching.pairs.push_back({row, col, cost[row][col]});
        else if (row < n) matching.pairs.push_back({row, -1, cost[row][col]});
        else if (col < m) matching.pairs.push_back({-1, col, cost[row][col]});
    }
    matching.cost = value;
    return {value, matching};
}

std::vector<int> hungarian(const CostMatrix& cost) {
    check_square_finite(cost);
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    // Shortest augmenting paths with potentials; 1-based, column 0 is a sentinel.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) minv[j] = cur, way[j] = j0;
                if (minv[j] < delta) delta = minv[j], j1 = j;
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) u[p[j]] += delta, v[j] -= delta;
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assignment(n);
    for (int j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
    return assignment;
}

std::vector<int> bottleneck_assignment(const CostMatrix& cost) {
    check_square_finite(cost);
    return min_max_matching(cost).second;
}

Bijection optimal_bijection(std::span<const PersistenceDiagram> f, std::span<const PersistenceDiagram> g,
                            BijectionObjective objective) {
    const int n1 = static_cast<int>(f.size()), n2 = static_cast<int>(g.size());
    const int size = n1 + n2;
    Bijection out;
    if (size == 0) return out;
    CostMatrix cost(size, std::vector<double>(size, 0.0));
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) cost[i][j] = bottleneck(f[i], g[j]).first;
        const double empty = max_half_persistence(f[i]);
        for (int j = n2; j < size; ++j) cost[i][j] = empty;
    }
    for (int j = 0; j < n2; ++j) {
        const double empty = max_half_persistence(g[j]);
        for (int i = n1; i < size; ++i) cost[i][j] = empty;
    }
    auto assignment = objective == BijectionObjective::Minimax ? bottleneck_assignment(cost) : hungarian(cost);
    for (int i = 0; i < size; ++i) {
        const int j = assignment[i];
        if (i >= n1 && j >= n2) continue;
        out.pairs.emplace_back(i < n1 ? i : -1, j < n2 ? j : -1);
        out.costs.push_back(cost[i][j]);
        out.value = std::max(out.value, cost[i][j]);
    }
    return out;
}

MdrgDiagrams compute_diagrams(const Mdrg& m, double epsilon_factor) {
    MdrgDiagrams out;
    out.quantizations = m.quantizations;
    out.collections = m.collections;
    out.graphs.reserve(m.graphs.size());
    for (const auto& g : m.graphs) {
        const double eps = m.quantizations[g.field].width * epsilon_factor;
        ReebGraph mg = morseify(g, eps);
        out.graphs.push_back({compute_pd0(mg), compute_pd0_neg(mg), compute_exdg1(mg)});
        out.graph_bins.push_back(g.parent_bin);
    }
    return out;
}

KindDistance mdrg_distance(const MdrgDiagrams& a, const MdrgDiagrams& b, DiagramKind kind, BijectionObjective objective) {
    if (a.levels() != b.levels())
        throw InputError("MDRG level counts differ (" + std::to_string(a.levels()) + " vs " + std::to_string(b.levels()) + ")");
    if (a.quantizations != b.quantizations) throw InputError("MDRGs were built over different quantizations");
    if (a.graphs.empty() || b.graphs.empty()) throw InputError("empty MDRG");
    const int k = static_cast<int>(kind);
    KindDistance out;
    out.kind = kind;
    auto [d1, match] = bottleneck(a.graphs[0][k], b.graphs[0][k]);
    out.level1 = d1;
    out.level1_matching = std::move(match);
    out.value = d1;
    for (int level = 0; level + 1 < a.levels(); ++level) {
        const auto& q = a.quantizations[level];
        double sum = 0.0;
        for (int step = 0; step < q.slabs; ++step) {
            const int c = kind == DiagramKind::Pd0Neg ? q.mirror(step) : step;
            const auto& left = a.collections[level][c];
            const auto& right = b.collections[level][c];
            if (left.empty() && right.empty()) continue;
            std::vector<PersistenceDiagram> dl, dr;
            for (int id : left) dl.push_back(a.graphs[id][k]);
            for (int id : right) dr.push_back(b.graphs[id][k]);
            BinTerm term;
            term.level = level + 2;
            term.bin = kind == DiagramKind::Pd0Neg ? step : c;
            term.left_graphs = left;
            term.right_graphs = right;
            term.bijection = optimal_bijection(dl, dr, objective);
            sum += term.bijection.value;
            if (term.bijection.value > 0) out.bins.push_back(std::move(term));
        }
        const double normalized = sum / q.slabs;
        out.level_terms.push_back(normalized);
        out.value += normalized;
    }
    return out;
}

double mdrg_distance(const Mdrg& a, const Mdrg& b, DiagramKind kind, BijectionObjective objective) {
    return mdrg_distance(compute_diagrams(a), compute_diagrams(b), kind, objective).value;
}

DistanceReport total_distance(const MdrgDiagrams& a, const MdrgDiagrams& b, std::array<double, 3> weights,
                              BijectionObjective objective) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InputError("weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InputError("weights must sum to 1");
    DistanceReport r;
    r.weights = weights;
    for (int k = 0; k < 3; ++k) r.parts[k] = mdrg_distance(a, b, static_cast<DiagramKind>(k), objective);
    r.total = weights[0] * r.parts[0].value + weights[1] * r.parts[1].value + weights[2] * r.parts[2].value;
    return r;
}

DistanceReport total_distance(const Mdrg& a, const Mdrg& b, std::array<double, 3> weights, BijectionObjective objective) {
    return total_distance(compute_diagrams(a), compute_diagrams(b), weights, objective);
}

DistanceReport generalized_distance(const MdrgDiagrams& a, const MdrgDiagrams& b, std::array<double, 3> weights,
                                    BijectionObjective objective) {
    if (a.levels() < 2 || b.levels() < 2) throw InputError("generalized distance needs at least 2 fields");
    return total_distance(a, b, weights, objective);
}

}  // namespace mfd
