#include <CLI11.hpp>

#include <iostream>

#include "mmweb/config.hpp"
#include "mmweb/corpus_io.hpp"
#include "mmweb/ngram_lm.hpp"
#include "mmweb/pipeline.hpp"
#include "mmweb/quality_model.hpp"
#include "mmweb/stats.hpp"
#include "mmweb/word_lists.hpp"

namespace fs = std::filesystem;
using namespace mmweb;

namespace {

struct CommonArgs {
    std::string config;
    std::string input;
    std::string input_format;
    std::string output;
    std::size_t shards = 0;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config, "Pipeline config (JSON)");
    cmd->add_option("--input", a.input, "Input source or previous output (defaults to the config's input)");
    cmd->add_option("--output", a.output, "Output directory")->required();
    cmd->add_option("--shards", a.shards, "Number of shards");
    cmd->add_option("--seed", a.seed, "Master seed");
}

std::vector<std::string> text_lines(const std::string& path) {
    return text::paragraphs(read_file(path));
}

void print_reports(const PipelineResult& r) {
    for (const auto& s : r.reports) {
        std::cout << s.stage << ": " << s.records_in << " -> " << s.records_out << (s.resumed ? " (resumed)" : "");
        for (const auto& [code, n] : s.rejections) std::cout << "  " << code << "=" << n;
        std::cout << '\n';
    }
    std::cout << "wrote " << r.output.string() << '\n';
}

int run_stages(const std::string& command, const CommonArgs& a) {
    PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : load_config(a.config);
    cfg.output = a.output;
    if (a.shards) cfg.shards = a.shards;
    if (a.seed) cfg.seed = *a.seed;
    const auto stages = stages_for_command(command);
    RunOptions opts;
    opts.first_stage = stages.front();
    opts.last_stage = stages.back();
    if (opts.first_stage == "ingest") {
        if (!a.input.empty()) cfg.input = a.input;
        if (!a.input_format.empty()) cfg.input_format = source_format_from_string(a.input_format);
        if (cfg.input.empty()) throw Error("no input: pass --input or set \"input\" in the config");
    } else {
        if (a.input.empty()) throw Error(command + " needs --input (a previous stage's output)");
        opts.input = a.input;
    }
    print_reports(run_pipeline(cfg, opts));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Builds filtered, deduplicated image-text web documents from crawled pages"};
    app.require_subcommand(1);

    std::map<std::string, CommonArgs> stage_args;
    const std::vector<std::pair<std::string, std::string>> stage_commands{
        {"ingest", "Read pages; language ID, near-dedup, repetition and quality gates"},
        {"simplify", "Simplify page DOMs"},
        {"extract", "Extract interleaved documents from simplified pages"},
        {"fetch", "Fetch image metadata and attach it"},
        {"filter", "Node-level and document-level filters"},
        {"safety", "Opt-out and NSFW removal"},
        {"dedup", "Image-URL, URL, image-set and domain-paragraph dedup"},
        {"run-all", "Every stage in order"},
    };
    for (const auto& [name, help] : stage_commands) {
        auto* cmd = app.add_subcommand(name, help);
        add_common(cmd, stage_args[name]);
        if (name == "ingest" || name == "run-all")
            cmd->add_option("--input-format", stage_args[name].input_format, "warc, html_dir or jsonl");
    }

    std::string stats_input, stats_output;
    auto* stats = app.add_subcommand("stats", "Corpus statistics as text and JSON");
    CommonArgs stats_common;
    stats->add_option("--config", stats_common.config, "Unused; accepted for symmetry");
    stats->add_option("--input", stats_input, "documents.jsonl or an output directory")->required();
    stats->add_option("--output", stats_output, "Directory for stats.json and stats.txt");
    stats->add_option("--shards", stats_common.shards, "Unused; accepted for symmetry");
    stats->add_option("--seed", stats_common.seed, "Unused; accepted for symmetry");

    std::string pos_path, neg_path, model_out;
    auto* tq = app.add_subcommand("train-quality", "Train the quality classifier");
    tq->add_option("--positive", pos_path, "Curated documents, one per line")->required();
    tq->add_option("--negative", neg_path, "Noisy documents, one per line")->required();
    tq->add_option("--output", model_out, "Model file")->required();

    std::string lm_corpus, lm_out;
    int lm_order = 5;
    auto* tl = app.add_subcommand("train-lm", "Train the n-gram language model");
    tl->add_option("--corpus", lm_corpus, "Training text, one sentence per line")->required();
    tl->add_option("--order", lm_order, "Model order");
    tl->add_option("--output", lm_out, "Model file")->required();

    std::string cw_in, cw_out;
    auto* cw = app.add_subcommand("common-words", "Words occurring at least twice in a corpus");
    cw->add_option("--input", cw_in, "Text corpus")->required();
    cw->add_option("--output", cw_out, "Word list")->required();

    std::string ex_in, ex_out;
    auto* ex = app.add_subcommand("export-arrays", "Documents as parallel texts/images arrays");
    ex->add_option("--input", ex_in, "documents.jsonl")->required();
    ex->add_option("--output", ex_out, "Output JSONL")->required();

    auto* pc = app.add_subcommand("print-config", "Print the default configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [name, help] : stage_commands) {
            if (app.got_subcommand(name)) return run_stages(name, stage_args[name]);
        }
        if (stats->parsed()) {
            fs::path in = stats_input;
            if (fs::is_directory(in)) in /= "documents.jsonl";
            const auto docs = read_documents(in);
            const auto report = stats_report(docs);
            std::cout << to_text(report);
            if (!stats_output.empty()) {
                fs::create_directories(stats_output);
                write_file_atomic(fs::path(stats_output) / "stats.json", to_json(report).dump(2) + "\n");
                write_file_atomic(fs::path(stats_output) / "stats.txt", to_text(report));
            }
        } else if (tq->parsed()) {
            std::vector<double> losses;
            auto model = QualityModel::train(text_lines(pos_path), text_lines(neg_path), {}, &losses);
            model.save(model_out);
            std::cout << "loss " << losses.front() << " -> " << losses.back() << '\n';
        } else if (tl->parsed()) {
            NGramOptions o;
            o.order = lm_order;
            auto lm = NGramLM::train(text_lines(lm_corpus), o);
            lm.save(lm_out);
            std::cout << "vocabulary " << lm.vocabulary_size() << '\n';
        } else if (cw->parsed()) {
            const auto words = build_common_words(text_lines(cw_in));
            save_word_list(cw_out, words);
            std::cout << words.size() << " common words\n";
        } else if (ex->parsed()) {
            std::vector<json> rows;
            for (const auto& d : read_documents(ex_in)) rows.push_back(to_json(export_parallel_arrays(d)));
            write_jsonl(ex_out, rows);
        } else if (pc->parsed()) {
            std::cout << to_json(PipelineConfig{}).dump(2) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
