#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmweb/config.hpp"
#include "mmweb/document.hpp"
#include "mmweb/json_io.hpp"

namespace mmweb {

/// Raised when a stage fails; names the stage and the last durable checkpoint.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, std::string last_checkpoint, const std::string& what);
    const std::string& stage() const { return stage_; }
    const std::string& last_checkpoint() const { return last_checkpoint_; }

private:
    std::string stage_;
    std::string last_checkpoint_;
};

struct StageReport {
    std::string stage;
    std::size_t records_in = 0;
    std::size_t records_out = 0;
    std::map<std::string, std::size_t> rejections;  // reason code -> records (or nodes)
    std::map<std::string, double> counters;         // stage-specific extras
    double wall_ms = 0;
    bool resumed = false;  // loaded from a checkpoint instead of recomputed
};

json to_json(const StageReport& r);
StageReport stage_report_from_json(const json& j);

/// Canonical stage order of a full run.
const std::vector<std::string>& stage_names();

/// Stages run by a CLI subcommand, in canonical order.
std::vector<std::string> stages_for_command(std::string_view command);

struct RunOptions {
    std::string first_stage = "ingest";
    std::string last_stage = "paragraph_dedup";
    /// Input for runs that do not start at ingest: a pages.jsonl or
    /// documents.jsonl file, or a directory holding one.
    std::optional<std::filesystem::path> input;
};

struct PipelineResult {
    std::vector<MultimodalDocument> documents;  // empty when the run ends on page records
    std::size_t pages = 0;                      // page records when the run ends before extract
    std::vector<StageReport> reports;
    std::filesystem::path output;               // documents.jsonl or pages.jsonl
};

/// Runs the stages between first and last, checkpointing each to
/// <output>/stages/<NN>_<stage>/shard-<k>.jsonl and resuming from completed
/// checkpoints with a matching config fingerprint. Writes the final records,
/// report.json, and for document output stats.json and stats.txt.
PipelineResult run_pipeline(PipelineConfig config, const RunOptions& options = {});

/// Exclusive ownership of an output directory through a lock file.
class OutputLock {
public:
    explicit OutputLock(const std::filesystem::path& dir);
    ~OutputLock();
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

private:
    std::filesystem::path path_;
};

}  // namespace mmweb
