#include "mfd/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mfd/parallel.hpp"
#include "text_util.hpp"

namespace mfd {

RetrievalMetrics retrieval_metrics(const LabeledDistanceMatrix& m, int emeasure_cutoff) {
    const std::size_t n = m.distances.size();
    if (n < 2) throw InputError("retrieval metrics need at least 2 items");
    if (m.labels.size() != n) throw InputError("label count does not match the matrix size");
    if (emeasure_cutoff < 1) throw InputError("e-measure cutoff must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        if (m.distances[i].size() != n) throw InputError("distance matrix is not square");
        for (std::size_t j = 0; j < n; ++j) {
            const double d = m.distances[i][j];
            if (!std::isfinite(d) || d < 0) throw InputError("distance matrix entries must be finite and nonnegative");
            if (std::abs(d - m.distances[j][i]) > 1e-9 * std::max(1.0, std::abs(d)))
                throw InputError("distance matrix is not symmetric");
        }
    }
    std::map<std::string, int> class_size;
    for (const auto& l : m.labels) ++class_size[l];
    for (const auto& [label, count] : class_size)
        if (count < 2) throw InputError("class '" + label + "' has a single member");

    RetrievalMetrics out;
    std::vector<std::size_t> ranked(n - 1);
    for (std::size_t q = 0; q < n; ++q) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != q) ranked[k++] = j;
        std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            return m.distances[q][a] != m.distances[q][b] ? m.distances[q][a] < m.distances[q][b] : a < b;
        });
        const int relevant = class_size[m.labels[q]] - 1;
        auto hits_in = [&](std::size_t top) {
            top = std::min(top, ranked.size());
            int hits = 0;
            for (std::size_t r = 0; r < top; ++r) hits += m.labels[ranked[r]] == m.labels[q];
            return hits;
        };
        out.nn += m.labels[ranked[0]] == m.labels[q] ? 1.0 : 0.0;
        out.tier1 += static_cast<double>(hits_in(relevant)) / relevant;
        out.tier2 += static_cast<double>(hits_in(2 * relevant)) / relevant;

        const std::size_t cutoff = std::min<std::size_t>(emeasure_cutoff, ranked.size());
        const int hits = hits_in(cutoff);
        const double precision = static_cast<double>(hits) / cutoff, recall = static_cast<double>(hits) / relevant;
        if (precision + recall > 0) out.emeasure += 2 * precision * recall / (precision + recall);

        double dcg = 0.0, ideal = 0.0;
        for (std::size_t r = 0; r < ranked.size(); ++r) {
            const double discount = r == 0 ? 1.0 : 1.0 / std::log2(static_cast<double>(r + 1));
            if (m.labels[ranked[r]] == m.labels[q]) dcg += discount;
            if (static_cast<int>(r) < relevant) ideal += discount;
        }
        out.dcg += dcg / ideal;
    }
    out.nn /= n;
    out.tier1 /= n;
    out.tier2 /= n;
    out.emeasure /= n;
    out.dcg /= n;
    return out;
}

std::vector<Peak> find_peaks(std::span<const double> d) {
    std::vector<Peak> peaks;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n;) {
        std::size_t e = i;
        while (e + 1 < n && d[e + 1] == d[i]) ++e;
        const bool has_left = i > 0, has_right = e + 1 < n;
        if (has_left || has_right) {
            const double v = d[i];
            const bool above = (!has_left || d[i - 1] < v) && (!has_right || d[e + 1] < v);
            double shoulder = -std::numeric_limits<double>::infinity();
            if (has_left) shoulder = std::max(shoulder, d[i - 1]);
            if (has_right) shoulder = std::max(shoulder, d[e + 1]);
            if (above && v - shoulder > 0)
                for (std::size_t t = i; t <= e; ++t) peaks.push_back({static_cast<int>(t) + 1, v, v - shoulder});
        }
        i = e + 1;
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        return a.prominence != b.prominence ? a.prominence > b.prominence : a.t < b.t;
    });
    return peaks;
}

TimeSeriesReport timeseries_peaks(std::span<const MultiFieldMesh> sites, const PipelineOptions& options, int workers) {
    if (sites.size() < 2) throw InputError("a time series needs at least 2 sites");
    TimeSeriesReport out;
    out.distances.resize(sites.size() - 1);
    parallel_for(sites.size() - 1, workers,
                 [&](std::size_t t) { out.distances[t] = field_distance(sites[t], sites[t + 1], options).total; });
    out.peaks = find_peaks(out.distances);
    return out;
}

std::string format_peaks_csv(const std::vector<Peak>& peaks) {
    std::string out = "t,distance,prominence\n";
    for (const auto& p : peaks)
        out += std::to_string(p.t) + "," + detail::format_double(p.distance) + "," + detail::format_double(p.prominence) + "\n";
    return out;
}

std::string format_series_plot(std::span<const double> distances) {
    std::string out = "# t distance\n";
    for (std::size_t t = 0; t < distances.size(); ++t)
        out += std::to_string(t + 1) + " " + detail::format_double(distances[t]) + "\n";
    return out;
}

}  // namespace mfd
