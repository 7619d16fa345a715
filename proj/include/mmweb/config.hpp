#pragma once

#include <filesystem>
#include <string>

#include "mmweb/corpus_io.hpp"
#include "mmweb/filters.hpp"
#include "mmweb/json_io.hpp"
#include "mmweb/minhash.hpp"
#include "mmweb/ngram_lm.hpp"
#include "mmweb/quality_model.hpp"
#include "mmweb/repetition.hpp"
#include "mmweb/safety.hpp"
#include "mmweb/simplify.hpp"

namespace mmweb {

/// Directory holding the bundled word lists, training corpora and fixtures.
std::filesystem::path default_data_dir();

struct StageToggles {
    bool language = true;
    bool minhash = true;
    bool repetition = true;
    bool quality = true;
    bool node_filter = true;
    bool doc_filter = true;
    bool optout = true;
    bool image_dedup = true;
    bool nsfw = true;
    bool url_dedup = true;
    bool imageset_dedup = true;
    bool paragraph_dedup = true;

    void disable_filters();
    bool operator==(const StageToggles&) const = default;
};

struct LanguageStageConfig {
    std::string target = "en";
    double min_score = 0.0;  // on top of target being the top label
    bool operator==(const LanguageStageConfig&) const = default;
};

struct QualityStageConfig {
    std::string model;     // saved model; empty trains from the files below
    std::string positive;  // one curated document per line
    std::string negative;  // one noisy document per line
    double threshold = 0.5;
    QualityTrainOptions train;
    bool operator==(const QualityStageConfig&) const;
};

struct LmConfig {
    std::string model;   // saved model; empty trains from `corpus`
    std::string corpus;  // one sentence or paragraph per line
    NGramOptions options;
    bool operator==(const LmConfig&) const;
};

struct FetchConfig {
    std::string mode = "fixture";  // fixture | http
    std::string fixture_dir;
    std::size_t max_in_flight = 8;
    int politeness_ms = 250;
    int timeout_s = 10;
    bool operator==(const FetchConfig&) const = default;
};

struct WordListConfig {
    std::string stop, flagged, spam;
    std::string common;  // empty builds the set from the LM corpus
    bool operator==(const WordListConfig&) const = default;
};

struct OptOutConfig {
    std::string mode = "allow-all";  // allow-all | local-list | http-batch
    std::string list;
    HttpBatchOptions http;
    bool operator==(const OptOutConfig&) const;
};

struct NsfwConfig {
    NsfwParams params;
    std::string scores;  // scored manifest for external-model mode
    bool operator==(const NsfwConfig&) const;
};

struct DedupConfig {
    std::uint64_t max_image_occurrences = 10;
    std::uint64_t min_paragraph_count = 3;
    bool operator==(const DedupConfig&) const = default;
};

struct PipelineConfig {
    std::string input;
    SourceFormat input_format = SourceFormat::warc;
    std::string output;
    std::size_t shards = 4;
    std::size_t threads = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 1234;
    std::string data_dir;  // empty = bundled data

    StageToggles stages;
    LanguageStageConfig language;
    MinHashOptions minhash;
    RepetitionThresholds repetition;
    QualityStageConfig quality;
    SimplifyConfig simplify = SimplifyConfig::defaults();
    FetchConfig fetch;
    TextFilterParams text_filters;
    ImageFilterParams image_filters;
    WordListConfig word_lists;
    LmConfig lm;
    OptOutConfig optout;
    NsfwConfig nsfw;
    DedupConfig dedup;

    /// Test hook: throw right after this stage's checkpoint is durable.
    std::string crash_after_stage;

    /// Fills empty data paths from `data_dir` and validates every section.
    void finalize();
};

/// Unknown keys anywhere are an error. Relative paths resolve against `base_dir`.
PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
json to_json(const PipelineConfig& c);

/// Hash of every setting that affects output (excludes test hooks, thread
/// count and output location).
std::string config_fingerprint(const PipelineConfig& c);

}  // namespace mmweb
