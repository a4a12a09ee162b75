#pragma once

#include "shorttopics/error.hpp"
#include "shorttopics/matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shorttopics {

enum class Selection { leaf, excess_of_mass };

const char* to_string(Selection s) noexcept;
std::optional<Selection> parse_selection(std::string_view name);

struct ClusterConfig {
    std::size_t min_cluster_size = 5;
    std::optional<std::size_t> min_samples; // defaults to min_cluster_size
    Selection selection = Selection::leaf;
    std::optional<double> prob_threshold;   // calibrated when unset
    double target_outlier_frac = 0.10;
    std::size_t max_chars = 800;
    Metric metric = Metric::euclidean;

    std::size_t effective_min_samples() const noexcept { return min_samples.value_or(min_cluster_size); }

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

/// Distance from each point to its k-th nearest other point.
std::vector<double> core_distances(const Matrix& x, std::size_t k, Metric metric = Metric::euclidean);

/// max(core_a, core_b, d(a, b)).
double mutual_reachability(std::span<const double> a, std::span<const double> b, double core_a, double core_b,
                           Metric metric = Metric::euclidean) noexcept;

struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    double weight = 0.0;

    bool operator==(const Edge&) const = default;
};

/// Prim's algorithm over the implicit complete mutual-reachability graph: O(N^2) time,
/// O(N) memory. Ties go to the smaller point index.
std::vector<Edge> minimum_spanning_tree(const Matrix& x, std::span<const double> core,
                                        Metric metric = Metric::euclidean);

/// Single-linkage merge. Nodes below n_points are points; node n_points + i is merges[i].
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double distance = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::size_t n_points = 0;
    std::vector<Merge> merges;
};

/// Merges MST edges by ascending (weight, smaller endpoint, larger endpoint) with union-find.
Dendrogram build_hierarchy(std::vector<Edge> mst, std::size_t n_points);

/// One row of the condensed tree. `child` below n_points is a point falling out of `parent`
/// at `lambda`; otherwise it is a cluster born at `lambda` with `size` points.
struct CondensedEdge {
    std::size_t parent = 0;
    std::size_t child = 0;
    double lambda = 0.0;
    std::size_t size = 0;

    bool operator==(const CondensedEdge&) const = default;
};

struct CondensedTree {
    std::size_t n_points = 0;
    std::size_t n_clusters = 0; // cluster ids are n_points .. n_points + n_clusters - 1
    std::vector<CondensedEdge> edges;

    std::size_t root() const noexcept { return n_points; }
    bool is_point(std::size_t node) const noexcept { return node < n_points; }

    /// Lambda at which each cluster was created (0 for the root), indexed by id - n_points.
    std::vector<double> birth_lambdas() const;
    /// Cluster children of each cluster, indexed by id - n_points.
    std::vector<std::vector<std::size_t>> cluster_children() const;
    /// Size of each cluster at birth, indexed by id - n_points.
    std::vector<std::size_t> birth_sizes() const;
};

/// Lambda assigned to a merge distance: 1/d, capped at kMaxLambda for coincident points.
inline constexpr double kMaxLambda = 1e12;
double lambda_of(double distance) noexcept;

/// Top-down condensation: a split creates two clusters only when both sides hold at least
/// min_cluster_size points, otherwise the smaller side's points fall out of the parent.
CondensedTree condense(const Dendrogram& dendrogram, std::size_t min_cluster_size);

/// Sum over each cluster's points of (lambda at which the point leaves it - birth lambda),
/// indexed by id - n_points.
std::vector<double> stability(const CondensedTree& tree);

/// Selected cluster ids, ascending.
std::vector<std::size_t> select_clusters(const CondensedTree& tree, Selection selection);

/// Points of each cluster's subtree, indexed by id - n_points.
std::vector<std::vector<std::size_t>> cluster_points(const CondensedTree& tree);

inline constexpr double kMembershipEpsilon = 1e-8;

struct SoftMembership {
    Matrix probabilities;                       // N x K, rows sum to 1
    std::vector<std::vector<std::size_t>> exemplars; // per selected cluster
};

/// Exemplars of a cluster are the points leaving its leaves at the leaf's maximal lambda.
/// Weight of cluster c for x is 1/(eps + distance to the nearest exemplar of c);
/// memberships are the normalized weights.
SoftMembership soft_membership(const Matrix& x, const CondensedTree& tree, std::span<const std::size_t> selected,
                               Metric metric = Metric::euclidean);

enum class OutlierReason { none, low_probability, too_long, unrepresentable };

const char* to_string(OutlierReason r) noexcept;

struct ClusterResult {
    std::vector<int> labels;              // -1 for outliers
    Matrix memberships;                   // N x K; all-zero rows for forced outliers
    std::vector<double> stabilities;      // per selected cluster
    std::vector<OutlierReason> reasons;
    double prob_threshold = 0.0;

    std::size_t n_clusters() const noexcept { return memberships.cols(); }
    std::size_t n_outliers() const;
};

/// Forced outliers: too long, or not representable. Others are outliers when their largest
/// membership is below the threshold; the rest take the argmax (ties to the lower id).
ClusterResult assign(const Matrix& memberships, const ClusterConfig& cfg, double prob_threshold,
                     std::span<const std::size_t> raw_char_len, std::span<const bool> representable);

/// 20 log-spaced thresholds from 1e-3 to 1e-2 inclusive.
std::vector<double> calibration_grid();

struct Calibration {
    double threshold = 0.0;
    double outlier_fraction = 0.0;
    bool reached = false;
};

/// Smallest grid threshold whose outlier fraction (forced outliers included) reaches
/// target - 0.03; 1e-2 with a warning when none does.
Calibration calibrate_threshold(const Matrix& memberships, std::span<const bool> forced, double target,
                                Warnings* warnings = nullptr);

/// Everything produced by one clustering run over a point set.
struct Hierarchy {
    std::vector<double> core;
    std::vector<Edge> mst;
    Dendrogram dendrogram;
    CondensedTree tree;
    std::vector<double> stabilities; // all condensed clusters
    std::vector<std::size_t> selected;
    SoftMembership membership;
};

/// core distances -> MST -> hierarchy -> condensed tree -> selection -> soft membership.
/// Throws DataError when fewer than 2 points are given.
Hierarchy build_cluster_hierarchy(const Matrix& x, const ClusterConfig& cfg, Warnings* warnings = nullptr);

} // namespace shorttopics
