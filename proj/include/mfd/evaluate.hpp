#pragma once

#include <span>
#include <string>
#include <vector>

#include "mfd/mesh_io.hpp"
#include "mfd/pipeline.hpp"

namespace mfd {

/// Symmetric matrix with zero diagonal and one class label per item.
struct LabeledDistanceMatrix {
    std::vector<std::vector<double>> distances;
    std::vector<std::string> labels;
};

struct RetrievalMetrics {
    double nn = 0.0;
    double tier1 = 0.0;
    double tier2 = 0.0;
    double emeasure = 0.0;
    double dcg = 0.0;
};

/// Ranks by distance with ties broken by item index. Throws InputError for singleton classes
/// or a malformed matrix.
RetrievalMetrics retrieval_metrics(const LabeledDistanceMatrix& m, int emeasure_cutoff = 32);

struct Peak {
    int t = 0;  ///< 1-based step t compares sites t and t+1
    double distance = 0.0;
    double prominence = 0.0;
};

/// Plateaus strictly higher than both shoulders (missing shoulders ignored); ranked by prominence, then t.
std::vector<Peak> find_peaks(std::span<const double> distances);

struct TimeSeriesReport {
    std::vector<double> distances;  ///< distances[t-1] = d_T(site t, site t+1)
    std::vector<Peak> peaks;
};

/// Distances between consecutive sites (each pair on its union-range quantization) and ranked peaks.
TimeSeriesReport timeseries_peaks(std::span<const MultiFieldMesh> sites, const PipelineOptions& options, int workers = 1);

std::string format_peaks_csv(const std::vector<Peak>& peaks);
/// Two columns, t and distance, for gnuplot.
std::string format_series_plot(std::span<const double> distances);

}  // namespace mfd
