#include "shorttopics/topics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace shorttopics {

std::string Topic::label() const {
    if (name_tokens.empty()) return "topic-" + std::to_string(id);
    std::string out;
    for (const auto& t : name_tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

namespace {

struct TokenCounts {
    std::size_t documents = 0;
    std::size_t terms = 0;
};

std::map<std::string, TokenCounts> count_tokens(std::span<const TokenizedInquiry> inquiries,
                                                std::span<const std::size_t> members) {
    std::map<std::string, TokenCounts> counts;
    std::vector<std::string> seen;
    for (const std::size_t m : members) {
        seen.clear();
        for (const auto& tok : inquiries[m].tokens) {
            auto& c = counts[tok];
            ++c.terms;
            if (std::find(seen.begin(), seen.end(), tok) == seen.end()) {
                seen.push_back(tok);
                ++c.documents;
            }
        }
    }
    return counts;
}

} // namespace

std::vector<std::string> name_topic(std::span<const TokenizedInquiry> inquiries,
                                    std::span<const std::size_t> members) {
    const auto counts = count_tokens(inquiries, members);
    std::vector<std::pair<std::string, TokenCounts>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& l, const auto& r) {
        if (l.second.documents != r.second.documents) return l.second.documents > r.second.documents;
        if (l.second.terms != r.second.terms) return l.second.terms > r.second.terms;
        return l.first < r.first;
    });
    // Integer form of ceil(0.2 * |members|).
    const std::size_t min_docs = (members.size() + 4) / 5;
    std::vector<std::string> name;
    for (std::size_t i = 0; i < ranked.size() && i < kMaxNameTokens; ++i) {
        if (ranked[i].second.documents >= min_docs) name.push_back(ranked[i].first);
    }
    return name;
}

std::vector<double> name_vector(std::span<const std::string> name_tokens, const EmbeddingStore& store) {
    std::vector<double> out(store.dim(), 0.0);
    std::size_t found = 0;
    for (const auto& tok : name_tokens) {
        const auto v = store.find(tok);
        if (v.empty()) continue;
        for (std::size_t d = 0; d < out.size(); ++d) out[d] += static_cast<double>(v[d]);
        ++found;
    }
    if (found > 0) {
        for (auto& x : out) x /= static_cast<double>(found);
    }
    return out;
}

std::vector<double> topic_vector(std::span<const InquiryVector> vectors, std::span<const std::size_t> members) {
    if (members.empty()) return {};
    std::vector<double> out(vectors[members.front()].vector.size(), 0.0);
    for (const std::size_t m : members) {
        const auto& v = vectors[m].vector;
        for (std::size_t d = 0; d < out.size(); ++d) out[d] += v[d];
    }
    for (auto& x : out) x /= static_cast<double>(members.size());
    return out;
}

WordFrequencies wordcloud_data(std::span<const TokenizedInquiry> inquiries, std::span<const std::size_t> members) {
    const auto counts = count_tokens(inquiries, members);
    WordFrequencies out;
    out.reserve(counts.size());
    for (const auto& [tok, c] : counts) out.emplace_back(tok, c.documents);
    std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.second > r.second; });
    return out;
}

void describe_topic(Topic& topic, const TopicContext& ctx) {
    std::sort(topic.members.begin(), topic.members.end());
    topic.name_tokens = name_topic(ctx.inquiries, topic.members);
    topic.topic_vector = topic_vector(ctx.vectors, topic.members);
    if (ctx.store != nullptr) {
        topic.name_vector = name_vector(topic.name_tokens, *ctx.store);
    } else {
        topic.name_vector.assign(topic.topic_vector.size(), 0.0);
    }
    topic.word_frequencies = wordcloud_data(ctx.inquiries, topic.members);

    std::vector<std::vector<double>> rows;
    rows.reserve(topic.members.size());
    for (const std::size_t m : topic.members) rows.push_back(ctx.vectors[m].vector);
    topic.metrics = topic_metrics(topic.name_vector, Matrix::from_rows(rows), ctx.similarity);
    topic.map.reset();
}

TopicSet build_topics(const ClusterResult& clusters, const TopicContext& ctx) {
    TopicSet set;
    std::vector<Topic> by_cluster(clusters.n_clusters());
    for (std::size_t k = 0; k < by_cluster.size(); ++k) by_cluster[k].id = static_cast<int>(k);
    for (std::size_t i = 0; i < clusters.labels.size(); ++i) {
        const int label = clusters.labels[i];
        if (label < 0) {
            set.outliers.push_back({i, clusters.reasons[i]});
        } else {
            by_cluster[static_cast<std::size_t>(label)].members.push_back(i);
        }
    }
    for (auto& t : by_cluster) {
        if (t.members.empty()) continue;
        describe_topic(t, ctx);
        set.topics.push_back(std::move(t));
    }
    return set;
}

MergeOutcome merge_topics(const TopicSet& topics, double threshold, const TopicContext& ctx) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("merge threshold must lie in (0, 1]");
    const std::size_t n = topics.topics.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (cosine(topics.topics[i].name_vector, topics.topics[j].name_vector) >= threshold) {
                const std::size_t a = find(i);
                const std::size_t b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    std::map<std::size_t, Topic> components;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& src = topics.topics[i];
        auto [it, inserted] = components.try_emplace(find(i));
        Topic& dst = it->second;
        if (inserted) {
            dst.id = src.id;
        } else {
            dst.id = std::min(dst.id, src.id);
        }
        dst.members.insert(dst.members.end(), src.members.begin(), src.members.end());
    }

    MergeOutcome out;
    out.topics.outliers = topics.outliers;
    out.merges = n - components.size();
    for (auto& [root, topic] : components) {
        if (out.merges > 0) {
            describe_topic(topic, ctx);
        } else {
            topic = topics.topics[root];
        }
        out.topics.topics.push_back(std::move(topic));
    }
    std::sort(out.topics.topics.begin(), out.topics.topics.end(),
              [](const Topic& l, const Topic& r) { return l.id < r.id; });
    return out;
}

std::vector<std::pair<int, int>> unmerged_pairs(const TopicSet& topics, double threshold) {
    std::vector<std::pair<int, int>> out;
    const auto& t = topics.topics;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            if (cosine(t[i].name_vector, t[j].name_vector) >= threshold) out.emplace_back(t[i].id, t[j].id);
        }
    }
    return out;
}

void semantic_map(TopicSet& topics, ReductionConfig reducer, Warnings* warnings) {
    for (auto& t : topics.topics) t.map.reset();
    if (topics.topics.size() < 2) {
        warn(warnings, "semantic map needs at least 2 topics, got " + std::to_string(topics.topics.size()) +
                           "; map omitted");
        return;
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(topics.topics.size());
    for (const auto& t : topics.topics) rows.push_back(t.topic_vector);
    const Matrix x = Matrix::from_rows(rows);

    reducer.target_dim = 2;
    Matrix coords;
    if (x.cols() < 2) {
        coords = Matrix(x.rows(), 2);
        for (std::size_t i = 0; i < x.rows(); ++i) coords(i, 0) = x.cols() == 1 ? x(i, 0) : 0.0;
    } else if (reducer.method == ReductionMethod::none) {
        // No reducer configured: fall back to the linear projection.
        coords = pca(x, 2, warnings);
    } else {
        coords = reduce(x, reducer, warnings).rows;
    }
    for (std::size_t i = 0; i < topics.topics.size(); ++i) {
        const double cx = coords(i, 0);
        const double cy = coords.cols() > 1 ? coords(i, 1) : 0.0;
        topics.topics[i].map = std::array<double, 2>{cx, cy};
    }
}

} // namespace shorttopics
