#include "shorttopics/pipeline.hpp"

#include "shorttopics/csv.hpp"
#include "shorttopics/report.hpp"
#include "shorttopics/resources.hpp"

#include "json.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <memory>
#include <sstream>

namespace shorttopics {

namespace {

template <typename F>
auto in_stage(const std::string& name, std::vector<StageTiming>* timings, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    const auto record = [&] {
        if (timings != nullptr) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            timings->push_back({name, elapsed.count()});
        }
    };
    try {
        if constexpr (std::is_void_v<decltype(body())>) {
            body();
            record();
        } else {
            auto result = body();
            record();
            return result;
        }
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw StageError(name, StageError::Kind::config, e.what());
    } catch (const DataError& e) {
        throw StageError(name, StageError::Kind::data, e.what());
    } catch (const std::exception& e) {
        throw StageError(name, StageError::Kind::internal, e.what());
    }
}

struct Inputs {
    Corpus corpus;
    ResourceBundle resources;
    EmbeddingStore store;
};

Inputs load_inputs(const PipelineConfig& cfg, bool require_embeddings, Warnings* warnings) {
    cfg.validate(require_embeddings);
    Inputs in;
    in.corpus = cfg.corpus_format ? load_corpus(cfg.corpus_path, *cfg.corpus_format) : load_corpus(cfg.corpus_path);
    in.resources = load_resources(cfg.resources_dir.empty() ? default_resources_dir() : cfg.resources_dir);
    if (require_embeddings) in.store = load_embeddings(cfg.embeddings_path, warnings);
    return in;
}

std::vector<TokenizedInquiry> tokenize_corpus(const PipelineConfig& cfg, const Inputs& in) {
    auto extra = product_stopwords(in.resources, in.corpus.product);
    extra.insert(extra.end(), cfg.product_stopwords.begin(), cfg.product_stopwords.end());
    const Preprocessor pre(in.resources, extra);
    return pre(in.corpus);
}

EmbeddingStore augmented(EmbeddingStore store, const ResourceBundle& resources) {
    store = augment_with_definitions(std::move(store), resources.oov_definitions);
    return augment_with_trade_names(std::move(store), resources.trade_names);
}

} // namespace

RunReport analyze(const PipelineConfig& cfg, ClusterStage* cluster_stage) {
    RunReport report;
    report.config = cfg;
    Warnings warnings;
    auto* timings = &report.timings;

    Inputs in = in_stage("load", timings, [&] { return load_inputs(cfg, true, &warnings); });
    report.tokenized = in_stage("preprocess", timings, [&] { return tokenize_corpus(cfg, in); });
    report.corpus = std::move(in.corpus);
    const std::size_t n = report.corpus.size();

    const EmbeddingStore store = in_stage("embed", timings, [&] {
        EmbeddingStore s = augmented(std::move(in.store), in.resources);
        report.vectors.reserve(n);
        for (const auto& t : report.tokenized) report.vectors.push_back(embed_inquiry(t, s, cfg.oov_mode));
        return s;
    });

    std::vector<std::size_t> raw_len(n);
    const auto representable = std::make_unique<bool[]>(n);
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < n; ++i) {
        raw_len[i] = report.tokenized[i].raw_char_len;
        representable[i] = report.vectors[i].representable;
        if (representable[i] && raw_len[i] <= cfg.cluster.max_chars) eligible.push_back(i);
    }
    report.counts.inquiries = n;
    report.counts.representable = static_cast<std::size_t>(std::count(representable.get(), representable.get() + n, true));

    const Matrix reduced = in_stage("reduce", timings, [&] {
        std::vector<std::vector<double>> rows;
        rows.reserve(eligible.size());
        for (const std::size_t i : eligible) rows.push_back(report.vectors[i].vector);
        Matrix x = Matrix::from_rows(rows);
        if (eligible.size() < 2 || cfg.reduction.method == ReductionMethod::none) return x;
        ReductionConfig rc = cfg.reduction;
        if (rc.target_dim == 0) rc.target_dim = std::min(scheduled_target_dim(eligible.size()), x.cols());
        report.config.reduction.target_dim = rc.target_dim;
        return reduce(x, rc, &warnings).rows;
    });

    ClusterStage stage = in_stage("cluster", timings, [&] {
        if (eligible.size() < 2) {
            throw DataError(fmt::format("insufficient points: {} of {} inquiries can be clustered, need at least 2",
                                        eligible.size(), n));
        }
        ClusterStage s;
        s.points = eligible;
        s.hierarchy = build_cluster_hierarchy(reduced, cfg.cluster, &warnings);

        const auto& local = s.hierarchy.membership.probabilities;
        Matrix full(n, local.cols());
        for (std::size_t r = 0; r < eligible.size(); ++r) {
            std::copy(local.row(r).begin(), local.row(r).end(), full.row(eligible[r]).begin());
        }
        double threshold = 0.0;
        if (cfg.cluster.prob_threshold) {
            threshold = *cfg.cluster.prob_threshold;
        } else {
            const auto forced = std::make_unique<bool[]>(n);
            std::fill_n(forced.get(), n, true);
            for (const std::size_t i : eligible) forced[i] = false;
            threshold = calibrate_threshold(full, {forced.get(), n}, cfg.cluster.target_outlier_frac, &warnings)
                            .threshold;
        }
        s.result = assign(full, cfg.cluster, threshold, raw_len, {representable.get(), n});
        for (const std::size_t c : s.hierarchy.selected) {
            s.result.stabilities.push_back(s.hierarchy.stabilities[c - s.hierarchy.tree.n_points]);
        }
        return s;
    });
    report.config.cluster.prob_threshold = stage.result.prob_threshold;
    report.counts.clusters = stage.result.n_clusters();
    for (const auto r : stage.result.reasons) {
        if (r == OutlierReason::low_probability) ++report.counts.low_probability;
        if (r == OutlierReason::too_long) ++report.counts.too_long;
        if (r == OutlierReason::unrepresentable) ++report.counts.unrepresentable;
    }

    in_stage("topics", timings, [&] {
        const TopicContext ctx{report.tokenized, report.vectors, &store, cfg.similarity};
        TopicSet initial = build_topics(stage.result, ctx);
        report.counts.topics_before_merge = initial.topics.size();
        MergeOutcome merged = merge_topics(initial, cfg.merge_threshold, ctx);
        for (const auto& [a, b] : unmerged_pairs(merged.topics, cfg.merge_threshold)) {
            warnings.add(fmt::format("topics {} and {} reach the merge threshold after renaming; left unmerged", a, b));
        }
        report.topics = std::move(merged.topics);
        report.counts.topics_after_merge = report.topics.topics.size();
        ReductionConfig map_cfg = cfg.reduction;
        map_cfg.seed = cfg.seed;
        semantic_map(report.topics, map_cfg, &warnings);
    });

    if (cluster_stage != nullptr) *cluster_stage = std::move(stage);
    report.warnings = std::move(warnings.messages);
    return report;
}

namespace {

class OutputGuard {
public:
    void write(const std::filesystem::path& path, const std::string& text) {
        write_text_file(path, text);
        written_.push_back(path);
    }
    void commit() { written_.clear(); }
    ~OutputGuard() {
        std::error_code ec;
        for (const auto& p : written_) std::filesystem::remove(p, ec);
    }

private:
    std::vector<std::filesystem::path> written_;
};

} // namespace

RunReport run_pipeline(const PipelineConfig& cfg) {
    RunReport report = analyze(cfg);
    const auto entries = map_entries(report.topics);
    if (entries.empty()) report.warnings.push_back("no topic coordinates; map.svg not written");

    in_stage("write", &report.timings, [&] {
        OutputGuard guard;
        guard.write(cfg.output_dir / "topics.json", topics_json(report));
        guard.write(cfg.output_dir / "metrics.csv", metrics_csv(report));
        if (!entries.empty()) guard.write(cfg.output_dir / "map.svg", render_map_svg(entries));
        guard.commit();
    });
    return report;
}

std::filesystem::path run_oov_report(const PipelineConfig& cfg, std::size_t n) {
    Warnings warnings;
    Inputs in = in_stage("load", nullptr, [&] { return load_inputs(cfg, true, &warnings); });
    const auto tokenized = in_stage("preprocess", nullptr, [&] { return tokenize_corpus(cfg, in); });
    const auto rows = in_stage("embed", nullptr, [&] {
        const EmbeddingStore store = augmented(std::move(in.store), in.resources);
        return detect_top_oov(tokenized, store, n);
    });
    const auto path = cfg.output_dir / "oov_report.tsv";
    in_stage("write", nullptr, [&] { write_text_file(path, oov_report_tsv(rows)); });
    return path;
}

ClusterStage run_cluster_only(const PipelineConfig& cfg) {
    ClusterStage stage;
    const RunReport report = analyze(cfg, &stage);
    const auto& ids = report.corpus.inquiries;

    in_stage("write", nullptr, [&] {
        std::ostringstream clusters;
        csv::write_row(clusters, {"id", "label", "reason", "max_membership"});
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto row = stage.result.memberships.row(i);
            const double best = row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
            csv::write_row(clusters, {ids[i].id, std::to_string(stage.result.labels[i]),
                                      to_string(stage.result.reasons[i]), fmt::format("{:.9g}", best)});
        }

        std::ostringstream mst;
        csv::write_row(mst, {"a", "b", "weight"});
        for (const auto& e : stage.hierarchy.mst) {
            csv::write_row(mst, {ids[stage.points[e.a]].id, ids[stage.points[e.b]].id, fmt::format("{:.17g}", e.weight)});
        }

        const auto& tree = stage.hierarchy.tree;
        nlohmann::ordered_json jt;
        jt["n_points"] = tree.n_points;
        jt["n_clusters"] = tree.n_clusters;
        jt["selected"] = stage.hierarchy.selected;
        jt["stabilities"] = stage.hierarchy.stabilities;
        auto edges = nlohmann::ordered_json::array();
        for (const auto& e : tree.edges) {
            edges.push_back({{"parent", e.parent},
                             {"child", tree.is_point(e.child) ? nlohmann::ordered_json(ids[stage.points[e.child]].id)
                                                              : nlohmann::ordered_json(e.child)},
                             {"lambda", e.lambda},
                             {"size", e.size}});
        }
        jt["edges"] = std::move(edges);

        OutputGuard guard;
        guard.write(cfg.output_dir / "clusters.csv", clusters.str());
        guard.write(cfg.output_dir / "mst.csv", mst.str());
        guard.write(cfg.output_dir / "condensed_tree.json", jt.dump(2) + "\n");
        guard.commit();
    });
    return stage;
}

} // namespace shorttopics
