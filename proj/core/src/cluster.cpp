#include "shorttopics/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace shorttopics {

const char* to_string(Selection s) noexcept {
    return s == Selection::leaf ? "leaf" : "excess-of-mass";
}

std::optional<Selection> parse_selection(std::string_view name) {
    if (name == "leaf") return Selection::leaf;
    if (name == "excess-of-mass" || name == "eom") return Selection::excess_of_mass;
    return std::nullopt;
}

const char* to_string(OutlierReason r) noexcept {
    switch (r) {
    case OutlierReason::none: return "none";
    case OutlierReason::low_probability: return "low-probability";
    case OutlierReason::too_long: return "too-long";
    case OutlierReason::unrepresentable: return "unrepresentable";
    }
    return "unknown";
}

void ClusterConfig::validate() const {
    if (min_cluster_size < 2) throw ConfigError("min_cluster_size must be at least 2");
    if (min_samples && *min_samples < 1) throw ConfigError("min_samples must be at least 1");
    if (prob_threshold && !(*prob_threshold > 0.0 && *prob_threshold < 1.0)) {
        throw ConfigError("prob_threshold must lie in (0, 1)");
    }
    if (!(target_outlier_frac >= 0.0 && target_outlier_frac < 1.0)) {
        throw ConfigError("target_outlier_frac must lie in [0, 1)");
    }
}

// ---------------------------------------------------------------------------
// Distances and the minimum spanning tree

std::vector<double> core_distances(const Matrix& x, std::size_t k, Metric metric) {
    const std::size_t n = x.rows();
    if (n < 2) throw DataError("insufficient points: core distances need at least 2, got " + std::to_string(n));
    if (k < 1 || k > n - 1) {
        throw ConfigError("core distance neighbor count " + std::to_string(k) + " must lie in [1, " +
                          std::to_string(n - 1) + "]");
    }
    std::vector<double> core(n);
    std::vector<double> buffer(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) buffer[m++] = distance(x.row(i), x.row(j), metric);
        }
        const auto kth = buffer.begin() + static_cast<std::ptrdiff_t>(k - 1);
        std::nth_element(buffer.begin(), kth, buffer.end());
        core[i] = *kth;
    }
    return core;
}

double mutual_reachability(std::span<const double> a, std::span<const double> b, double core_a, double core_b,
                           Metric metric) noexcept {
    return std::max({core_a, core_b, distance(a, b, metric)});
}

std::vector<Edge> minimum_spanning_tree(const Matrix& x, std::span<const double> core, Metric metric) {
    const std::size_t n = x.rows();
    std::vector<Edge> edges;
    if (n < 2) return edges;
    edges.reserve(n - 1);

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<bool> in_tree(n, false);
    std::vector<double> best(n, inf);
    std::vector<std::size_t> parent(n, 0);

    std::size_t current = 0;
    in_tree[0] = true;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        double next_weight = inf;
        for (std::size_t j = 0; j < n; ++j) {
            if (in_tree[j]) continue;
            const double w = mutual_reachability(x.row(current), x.row(j), core[current], core[j], metric);
            if (w < best[j] || (w == best[j] && current < parent[j])) {
                best[j] = w;
                parent[j] = current;
            }
            if (best[j] < next_weight) {
                next_weight = best[j];
                next = j;
            }
        }
        in_tree[next] = true;
        edges.push_back({std::min(parent[next], next), std::max(parent[next], next), next_weight});
        current = next;
    }
    return edges;
}

// ---------------------------------------------------------------------------
// Single-linkage hierarchy

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), node_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
        std::iota(node_.begin(), node_.end(), 0);
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Dendrogram node currently representing x's component.
    std::size_t node(std::size_t x) { return node_[find(x)]; }

    void unite(std::size_t a, std::size_t b, std::size_t new_node) {
        const std::size_t ra = find(a);
        const std::size_t rb = find(b);
        parent_[rb] = ra;
        node_[ra] = new_node;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> node_;
};

} // namespace

Dendrogram build_hierarchy(std::vector<Edge> mst, std::size_t n_points) {
    for (auto& e : mst) {
        if (e.a > e.b) std::swap(e.a, e.b);
    }
    std::sort(mst.begin(), mst.end(), [](const Edge& l, const Edge& r) {
        if (l.weight != r.weight) return l.weight < r.weight;
        if (l.a != r.a) return l.a < r.a;
        return l.b < r.b;
    });

    Dendrogram d;
    d.n_points = n_points;
    d.merges.reserve(mst.size());
    UnionFind uf(n_points);
    std::vector<std::size_t> sizes(n_points, 1);
    for (const auto& e : mst) {
        const std::size_t left = uf.node(e.a);
        const std::size_t right = uf.node(e.b);
        if (uf.find(e.a) == uf.find(e.b)) continue;
        const std::size_t size = sizes[uf.find(e.a)] + sizes[uf.find(e.b)];
        const std::size_t id = n_points + d.merges.size();
        d.merges.push_back({left, right, e.weight, size});
        const std::size_t root_a = uf.find(e.a);
        uf.unite(e.a, e.b, id);
        sizes[root_a] = size;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Condensed tree

double lambda_of(double distance) noexcept {
    if (!(distance > 0.0)) return kMaxLambda;
    return std::min(1.0 / distance, kMaxLambda);
}

std::vector<double> CondensedTree::birth_lambdas() const {
    std::vector<double> birth(n_clusters, 0.0);
    for (const auto& e : edges) {
        if (!is_point(e.child)) birth[e.child - n_points] = e.lambda;
    }
    return birth;
}

std::vector<std::vector<std::size_t>> CondensedTree::cluster_children() const {
    std::vector<std::vector<std::size_t>> children(n_clusters);
    for (const auto& e : edges) {
        if (!is_point(e.child)) children[e.parent - n_points].push_back(e.child);
    }
    return children;
}

std::vector<std::size_t> CondensedTree::birth_sizes() const {
    std::vector<std::size_t> sizes(n_clusters, 0);
    if (n_clusters > 0) sizes[0] = n_points;
    for (const auto& e : edges) {
        if (!is_point(e.child)) sizes[e.child - n_points] = e.size;
    }
    return sizes;
}

CondensedTree condense(const Dendrogram& dendrogram, std::size_t min_cluster_size) {
    const std::size_t n = dendrogram.n_points;
    CondensedTree tree;
    tree.n_points = n;
    if (n == 0) return tree;
    tree.n_clusters = 1;
    if (dendrogram.merges.empty()) {
        // A single point falls out of the root at once.
        tree.edges.push_back({n, 0, kMaxLambda, 1});
        return tree;
    }

    const std::size_t total_nodes = n + dendrogram.merges.size();
    const std::size_t root = total_nodes - 1;
    const auto size_of = [&](std::size_t node) { return node < n ? std::size_t{1} : dendrogram.merges[node - n].size; };

    std::vector<std::size_t> relabel(total_nodes, 0);
    std::vector<bool> ignore(total_nodes, false);
    relabel[root] = n;
    std::size_t next_label = n + 1;

    std::vector<std::size_t> stack;
    const auto fall_out = [&](std::size_t subtree, std::size_t parent_label, double lambda) {
        stack.assign(1, subtree);
        while (!stack.empty()) {
            const std::size_t node = stack.back();
            stack.pop_back();
            if (node < n) {
                tree.edges.push_back({parent_label, node, lambda, 1});
            } else {
                ignore[node] = true;
                stack.push_back(dendrogram.merges[node - n].right);
                stack.push_back(dendrogram.merges[node - n].left);
            }
        }
    };

    // Breadth-first from the root so parents are always handled before their children.
    std::vector<std::size_t> queue{root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t node = queue[head];
        if (node < n || ignore[node]) continue;
        const Merge& merge = dendrogram.merges[node - n];
        queue.push_back(merge.left);
        queue.push_back(merge.right);

        const double lambda = lambda_of(merge.distance);
        const std::size_t parent_label = relabel[node];
        const std::size_t left_count = size_of(merge.left);
        const std::size_t right_count = size_of(merge.right);

        if (left_count >= min_cluster_size && right_count >= min_cluster_size) {
            relabel[merge.left] = next_label++;
            tree.edges.push_back({parent_label, relabel[merge.left], lambda, left_count});
            relabel[merge.right] = next_label++;
            tree.edges.push_back({parent_label, relabel[merge.right], lambda, right_count});
        } else if (left_count < min_cluster_size && right_count < min_cluster_size) {
            fall_out(merge.left, parent_label, lambda);
            fall_out(merge.right, parent_label, lambda);
        } else if (left_count < min_cluster_size) {
            relabel[merge.right] = parent_label;
            fall_out(merge.left, parent_label, lambda);
        } else {
            relabel[merge.left] = parent_label;
            fall_out(merge.right, parent_label, lambda);
        }
    }
    tree.n_clusters = next_label - n;
    return tree;
}

std::vector<double> stability(const CondensedTree& tree) {
    const auto birth = tree.birth_lambdas();
    std::vector<double> result(tree.n_clusters, 0.0);
    for (const auto& e : tree.edges) {
        const std::size_t p = e.parent - tree.n_points;
        result[p] += (e.lambda - birth[p]) * static_cast<double>(e.size);
    }
    return result;
}

std::vector<std::size_t> select_clusters(const CondensedTree& tree, Selection selection) {
    const std::size_t n = tree.n_points;
    const auto children = tree.cluster_children();
    if (tree.n_clusters == 0) return {};
    if (children[0].empty()) return {tree.root()};

    std::vector<std::size_t> selected;
    if (selection == Selection::leaf) {
        for (std::size_t c = 1; c < tree.n_clusters; ++c) {
            if (children[c].empty()) selected.push_back(n + c);
        }
        return selected;
    }

    // Excess of mass: children ids are always larger than their parent's, so a descending
    // sweep visits every subtree before its root. The root itself is not a candidate.
    const auto stab = stability(tree);
    std::vector<double> subtree(tree.n_clusters, 0.0);
    std::vector<bool> chosen(tree.n_clusters, false);
    for (std::size_t c = tree.n_clusters - 1; c >= 1; --c) {
        double child_sum = 0.0;
        for (const std::size_t ch : children[c]) child_sum += subtree[ch - n];
        if (!children[c].empty() && !(stab[c] > child_sum)) {
            subtree[c] = child_sum;
        } else {
            subtree[c] = stab[c];
            chosen[c] = true;
            // Deselect everything below.
            std::vector<std::size_t> stack(children[c].begin(), children[c].end());
            while (!stack.empty()) {
                const std::size_t d = stack.back() - n;
                stack.pop_back();
                chosen[d] = false;
                stack.insert(stack.end(), children[d].begin(), children[d].end());
            }
        }
    }
    for (std::size_t c = 1; c < tree.n_clusters; ++c) {
        if (chosen[c]) selected.push_back(n + c);
    }
    return selected;
}

std::vector<std::vector<std::size_t>> cluster_points(const CondensedTree& tree) {
    std::vector<std::vector<std::size_t>> points(tree.n_clusters);
    for (const auto& e : tree.edges) {
        if (tree.is_point(e.child)) points[e.parent - tree.n_points].push_back(e.child);
    }
    const auto children = tree.cluster_children();
    for (std::size_t c = tree.n_clusters; c-- > 0;) {
        for (const std::size_t ch : children[c]) {
            const auto& sub = points[ch - tree.n_points];
            points[c].insert(points[c].end(), sub.begin(), sub.end());
        }
        std::sort(points[c].begin(), points[c].end());
    }
    return points;
}

// ---------------------------------------------------------------------------
// Soft membership and assignment

SoftMembership soft_membership(const Matrix& x, const CondensedTree& tree, std::span<const std::size_t> selected,
                               Metric metric) {
    const std::size_t n = tree.n_points;
    const auto children = tree.cluster_children();

    // Maximal fall-out lambda of each leaf and the points reaching it.
    std::vector<double> max_lambda(tree.n_clusters, -1.0);
    for (const auto& e : tree.edges) {
        if (tree.is_point(e.child)) {
            auto& m = max_lambda[e.parent - n];
            m = std::max(m, e.lambda);
        }
    }

    SoftMembership out;
    out.exemplars.resize(selected.size());
    for (std::size_t s = 0; s < selected.size(); ++s) {
        std::vector<std::size_t> leaves;
        std::vector<std::size_t> stack{selected[s]};
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            const auto& ch = children[c - n];
            if (ch.empty()) leaves.push_back(c);
            stack.insert(stack.end(), ch.begin(), ch.end());
        }
        std::sort(leaves.begin(), leaves.end());
        for (const auto& e : tree.edges) {
            if (!tree.is_point(e.child)) continue;
            if (!std::binary_search(leaves.begin(), leaves.end(), e.parent)) continue;
            if (e.lambda == max_lambda[e.parent - n]) out.exemplars[s].push_back(e.child);
        }
        std::sort(out.exemplars[s].begin(), out.exemplars[s].end());
    }

    out.probabilities = Matrix(x.rows(), selected.size());
    std::vector<double> weights(selected.size());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double total = 0.0;
        for (std::size_t s = 0; s < selected.size(); ++s) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const std::size_t e : out.exemplars[s]) {
                nearest = std::min(nearest, distance(x.row(i), x.row(e), metric));
            }
            weights[s] = 1.0 / (kMembershipEpsilon + nearest);
            total += weights[s];
        }
        for (std::size_t s = 0; s < selected.size(); ++s) {
            out.probabilities(i, s) = total > 0.0 ? weights[s] / total : 0.0;
        }
    }
    return out;
}

std::size_t ClusterResult::n_outliers() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), -1));
}

ClusterResult assign(const Matrix& memberships, const ClusterConfig& cfg, double prob_threshold,
                     std::span<const std::size_t> raw_char_len, std::span<const bool> representable) {
    const std::size_t n = memberships.rows();
    ClusterResult result;
    result.memberships = memberships;
    result.labels.assign(n, -1);
    result.reasons.assign(n, OutlierReason::none);
    result.prob_threshold = prob_threshold;

    for (std::size_t i = 0; i < n; ++i) {
        auto row = result.memberships.row(i);
        if (i < raw_char_len.size() && raw_char_len[i] > cfg.max_chars) {
            result.reasons[i] = OutlierReason::too_long;
        } else if (i < representable.size() && !representable[i]) {
            result.reasons[i] = OutlierReason::unrepresentable;
        }
        if (result.reasons[i] != OutlierReason::none) {
            std::fill(row.begin(), row.end(), 0.0);
            continue;
        }
        if (row.empty()) {
            result.reasons[i] = OutlierReason::low_probability;
            continue;
        }
        const auto best = std::max_element(row.begin(), row.end()); // first maximum on ties
        if (*best < prob_threshold) {
            result.reasons[i] = OutlierReason::low_probability;
        } else {
            result.labels[i] = static_cast<int>(best - row.begin());
        }
    }
    return result;
}

std::vector<double> calibration_grid() {
    constexpr int kPoints = 20;
    std::vector<double> grid(kPoints);
    for (int k = 0; k < kPoints; ++k) grid[k] = std::pow(10.0, -3.0 + static_cast<double>(k) / (kPoints - 1));
    grid.front() = 1e-3;
    grid.back() = 1e-2;
    return grid;
}

Calibration calibrate_threshold(const Matrix& memberships, std::span<const bool> forced, double target,
                                Warnings* warnings) {
    const std::size_t n = memberships.rows();
    std::vector<double> max_membership(n, 0.0);
    std::size_t n_forced = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i < forced.size() && forced[i]) {
            ++n_forced;
            max_membership[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        const auto row = memberships.row(i);
        max_membership[i] = row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
    }

    constexpr double kSlack = 0.03;
    constexpr double kCompareEps = 1e-12;
    const auto grid = calibration_grid();
    Calibration result;
    for (const double t : grid) {
        std::size_t low = 0;
        for (const double m : max_membership) low += m < t ? 1 : 0;
        const double fraction = n == 0 ? 0.0 : static_cast<double>(low + n_forced) / static_cast<double>(n);
        if (fraction + kCompareEps >= target - kSlack) {
            return {t, fraction, true};
        }
        result = {t, fraction, false};
    }
    warn(warnings, "calibrate_threshold: no threshold in [1e-3, 1e-2] reaches the target outlier fraction; using 1e-2");
    return result;
}

// ---------------------------------------------------------------------------

Hierarchy build_cluster_hierarchy(const Matrix& x, const ClusterConfig& cfg, Warnings* warnings) {
    cfg.validate();
    const std::size_t n = x.rows();
    if (n < 2) throw DataError("insufficient points: clustering needs at least 2, got " + std::to_string(n));
    std::size_t k = cfg.effective_min_samples();
    if (k > n - 1) {
        warn(warnings, "min_samples " + std::to_string(k) + " exceeds the " + std::to_string(n - 1) +
                           " available neighbors; using " + std::to_string(n - 1));
        k = n - 1;
    }
    Hierarchy h;
    h.core = core_distances(x, k, cfg.metric);
    h.mst = minimum_spanning_tree(x, h.core, cfg.metric);
    h.dendrogram = build_hierarchy(h.mst, n);
    h.tree = condense(h.dendrogram, cfg.min_cluster_size);
    h.stabilities = stability(h.tree);
    h.selected = select_clusters(h.tree, cfg.selection);
    h.membership = soft_membership(x, h.tree, h.selected, cfg.metric);
    return h;
}

} // namespace shorttopics
