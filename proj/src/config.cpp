#include "mmweb/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>

#ifndef MMWEB_DATA_DIR
#define MMWEB_DATA_DIR "data"
#endif

namespace mmweb {

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("MMWEB_DATA_DIR"); env && *env) return env;
    return MMWEB_DATA_DIR;
}

void StageToggles::disable_filters() {
    *this = StageToggles{false, false, false, false, false, false, false, false, false, false, false, false};
}

bool QualityStageConfig::operator==(const QualityStageConfig& o) const {
    return model == o.model && positive == o.positive && negative == o.negative && threshold == o.threshold &&
           train.hash_dimension == o.train.hash_dimension && train.epochs == o.train.epochs &&
           train.learning_rate == o.train.learning_rate && train.l2 == o.train.l2 &&
           train.hash_seed == o.train.hash_seed;
}

bool LmConfig::operator==(const LmConfig& o) const {
    return model == o.model && corpus == o.corpus && options.order == o.options.order &&
           options.additive == o.options.additive && options.interpolation == o.options.interpolation &&
           options.min_count == o.options.min_count;
}

bool OptOutConfig::operator==(const OptOutConfig& o) const {
    return mode == o.mode && list == o.list && http.endpoint == o.http.endpoint &&
           http.batch_size == o.http.batch_size && http.max_in_flight == o.http.max_in_flight &&
           http.timeout == o.http.timeout && http.retries == o.http.retries && http.fail_closed == o.http.fail_closed;
}

bool NsfwConfig::operator==(const NsfwConfig& o) const {
    return scores == o.scores && params.mode == o.params.mode &&
           params.banned_substrings == o.params.banned_substrings && params.cutoff == o.params.cutoff;
}

namespace {

// Converters shared by the reader and the writer.
template <typename T>
    requires(std::is_arithmetic_v<T> || std::is_same_v<T, std::string>)
json encode(const T& v) {
    return v;
}
json encode(const std::set<std::string>& v) { return json(std::vector<std::string>(v.begin(), v.end())); }
json encode(const std::vector<std::string>& v) { return v; }
json encode(const std::vector<double>& v) { return v; }
template <std::size_t N>
json encode(const std::array<double, N>& v) { return json(std::vector<double>(v.begin(), v.end())); }
json encode(const std::set<ImageFormat>& v) {
    json out = json::array();
    for (auto f : v) out.push_back(std::string(to_string(f)));
    return out;
}
json encode(SourceFormat v) { return std::string(to_string(v)); }
json encode(NsfwMode v) { return std::string(to_string(v)); }
json encode(std::chrono::milliseconds v) { return v.count(); }

template <typename T>
void decode(const json& j, T& out) {
    out = j.get<T>();
}
void decode(const json& j, std::set<ImageFormat>& out) {
    out.clear();
    for (const auto& s : j) {
        auto f = image_format_from_string(s.get<std::string>());
        if (f == ImageFormat::other) throw Error("unknown image format '" + s.get<std::string>() + "'");
        out.insert(f);
    }
}
void decode(const json& j, SourceFormat& out) { out = source_format_from_string(j.get<std::string>()); }
void decode(const json& j, NsfwMode& out) { out = nsfw_mode_from_string(j.get<std::string>()); }
void decode(const json& j, std::chrono::milliseconds& out) { out = std::chrono::milliseconds(j.get<long long>()); }
template <std::size_t N>
void decode(const json& j, std::array<double, N>& out) {
    auto v = j.get<std::vector<double>>();
    if (v.size() != N) throw Error("expected " + std::to_string(N) + " values");
    std::copy(v.begin(), v.end(), out.begin());
}

class Reader {
public:
    Reader(const json& j, std::string where, std::filesystem::path base)
        : j_(j), where_(std::move(where)), base_(std::move(base)) {
        if (!j_.is_object()) throw Error("config: " + where_ + " must be an object");
    }

    template <typename T>
    void field(const char* name, T& out) {
        auto it = j_.find(name);
        if (it == j_.end()) return;
        used_.insert(name);
        try {
            decode(*it, out);
        } catch (const Error& e) {
            throw Error("config: " + where_ + "." + name + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error("config: " + where_ + "." + name + ": " + e.what());
        }
    }

    void path(const char* name, std::string& out) {
        field(name, out);
        if (!out.empty() && j_.contains(name) && !base_.empty() && std::filesystem::path(out).is_relative())
            out = (base_ / out).lexically_normal().string();
    }

    template <typename F>
    void section(const char* name, F&& fn) {
        auto it = j_.find(name);
        if (it == j_.end()) return;
        used_.insert(name);
        Reader sub(*it, where_ + "." + name, base_);
        fn(sub);
        sub.finish();
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) throw Error("config: unknown key " + where_ + "." + it.key());
        }
    }

private:
    const json& j_;
    std::string where_;
    std::filesystem::path base_;
    std::set<std::string> used_;
};

class Writer {
public:
    template <typename T>
    void field(const char* name, T& v) {
        j[name] = encode(v);
    }
    void path(const char* name, std::string& v) { j[name] = v; }
    template <typename F>
    void section(const char* name, F&& fn) {
        Writer sub;
        fn(sub);
        j[name] = std::move(sub.j);
    }

    json j = json::object();
};

template <typename IO>
void visit(IO& io, PipelineConfig& c, bool include_local) {
    io.path("input", c.input);
    io.field("input_format", c.input_format);
    if (include_local) {
        io.path("output", c.output);
        io.field("threads", c.threads);
        io.field("crash_after_stage", c.crash_after_stage);
    }
    io.field("shards", c.shards);
    io.field("seed", c.seed);
    io.path("data_dir", c.data_dir);
    io.section("stages", [&](IO& s) {
        auto& t = c.stages;
        s.field("language", t.language);
        s.field("minhash", t.minhash);
        s.field("repetition", t.repetition);
        s.field("quality", t.quality);
        s.field("node_filter", t.node_filter);
        s.field("doc_filter", t.doc_filter);
        s.field("optout", t.optout);
        s.field("image_dedup", t.image_dedup);
        s.field("nsfw", t.nsfw);
        s.field("url_dedup", t.url_dedup);
        s.field("imageset_dedup", t.imageset_dedup);
        s.field("paragraph_dedup", t.paragraph_dedup);
    });
    io.section("language", [&](IO& s) {
        s.field("target", c.language.target);
        s.field("min_score", c.language.min_score);
    });
    io.section("minhash", [&](IO& s) {
        s.field("shingle_size", c.minhash.shingle_size);
        s.field("seed", c.minhash.seed);
        s.field("bands", c.minhash.bands);
        s.field("rows", c.minhash.rows);
        s.field("threshold", c.minhash.threshold);
    });
    io.section("repetition", [&](IO& s) {
        s.field("duplicate_line_fraction", c.repetition.duplicate_line_fraction);
        s.field("duplicate_line_char_fraction", c.repetition.duplicate_line_char_fraction);
        s.field("top_ngram_char_fraction", c.repetition.top_ngram_char_fraction);
        s.field("duplicate_ngram_char_fraction", c.repetition.duplicate_ngram_char_fraction);
    });
    io.section("quality", [&](IO& s) {
        s.path("model", c.quality.model);
        s.path("positive", c.quality.positive);
        s.path("negative", c.quality.negative);
        s.field("threshold", c.quality.threshold);
        s.field("hash_dimension", c.quality.train.hash_dimension);
        s.field("epochs", c.quality.train.epochs);
        s.field("learning_rate", c.quality.train.learning_rate);
        s.field("l2", c.quality.train.l2);
        s.field("hash_seed", c.quality.train.hash_seed);
    });
    io.section("simplify", [&](IO& s) {
        auto& x = c.simplify;
        s.field("unwrap_tags", x.unwrap_tags);
        s.field("structural_tags", x.structural_tags);
        s.field("media_tags", x.media_tags);
        s.field("extra_kept_tags", x.extra_kept_tags);
        s.field("banned_div_id_substrings", x.banned_div_id_substrings);
        s.field("banned_div_attributes", x.banned_div_attributes);
        s.field("banned_div_classes", x.banned_div_classes);
        s.field("sentinel_class", x.sentinel_class);
        s.field("sentinel_text", x.sentinel_text);
        s.field("retained_attributes", x.retained_attributes);
    });
    io.section("fetch", [&](IO& s) {
        s.field("mode", c.fetch.mode);
        s.path("fixture_dir", c.fetch.fixture_dir);
        s.field("max_in_flight", c.fetch.max_in_flight);
        s.field("politeness_ms", c.fetch.politeness_ms);
        s.field("timeout_s", c.fetch.timeout_s);
    });
    auto cutoffs = [](IO& s, TextCutoffs& t) {
        s.field("min_words", t.min_words);
        s.field("max_words", t.max_words);
        s.field("max_char_repetition_ratio", t.max_char_repetition_ratio);
        s.field("max_word_repetition_ratio", t.max_word_repetition_ratio);
        s.field("max_special_char_ratio", t.max_special_char_ratio);
        s.field("min_stop_word_ratio", t.min_stop_word_ratio);
        s.field("max_flagged_word_ratio", t.max_flagged_word_ratio);
        s.field("min_punctuation_ratio", t.min_punctuation_ratio);
        s.field("max_spam_word_ratio", t.max_spam_word_ratio);
        s.field("min_common_word_ratio", t.min_common_word_ratio);
        s.field("min_lang_id_score", t.min_lang_id_score);
        s.field("max_perplexity", t.max_perplexity);
    };
    io.section("text_filters", [&](IO& s) {
        s.section("paragraph", [&](IO& p) { cutoffs(p, c.text_filters.paragraph); });
        s.section("document", [&](IO& p) { cutoffs(p, c.text_filters.document); });
        s.field("char_ngram", c.text_filters.char_ngram);
        s.field("word_ngram", c.text_filters.word_ngram);
        s.field("language", c.text_filters.language);
    });
    io.section("image_filters", [&](IO& s) {
        auto& x = c.image_filters;
        s.field("formats", x.formats);
        s.field("min_side", x.min_side);
        s.field("max_side", x.max_side);
        s.field("min_aspect", x.min_aspect);
        s.field("max_aspect", x.max_aspect);
        s.field("banned_substrings", x.banned_substrings);
        s.field("min_images_per_doc", x.min_images_per_doc);
        s.field("max_images_per_doc", x.max_images_per_doc);
    });
    io.section("word_lists", [&](IO& s) {
        s.path("stop", c.word_lists.stop);
        s.path("flagged", c.word_lists.flagged);
        s.path("spam", c.word_lists.spam);
        s.path("common", c.word_lists.common);
    });
    io.section("lm", [&](IO& s) {
        s.path("model", c.lm.model);
        s.path("corpus", c.lm.corpus);
        s.field("order", c.lm.options.order);
        s.field("additive", c.lm.options.additive);
        s.field("interpolation", c.lm.options.interpolation);
        s.field("min_count", c.lm.options.min_count);
    });
    io.section("optout", [&](IO& s) {
        s.field("mode", c.optout.mode);
        s.path("list", c.optout.list);
        s.field("endpoint", c.optout.http.endpoint);
        s.field("batch_size", c.optout.http.batch_size);
        s.field("max_in_flight", c.optout.http.max_in_flight);
        s.field("timeout_ms", c.optout.http.timeout);
        s.field("retries", c.optout.http.retries);
        s.field("fail_closed", c.optout.http.fail_closed);
    });
    io.section("nsfw", [&](IO& s) {
        s.field("mode", c.nsfw.params.mode);
        s.field("banned_substrings", c.nsfw.params.banned_substrings);
        s.field("cutoff", c.nsfw.params.cutoff);
        s.path("scores", c.nsfw.scores);
    });
    io.section("dedup", [&](IO& s) {
        s.field("max_image_occurrences", c.dedup.max_image_occurrences);
        s.field("min_paragraph_count", c.dedup.min_paragraph_count);
    });
}

void fill(std::string& path, const std::filesystem::path& dflt) {
    if (path.empty()) path = dflt.string();
}

}  // namespace

void PipelineConfig::finalize() {
    const std::filesystem::path data = data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir);
    fill(quality.positive, data / "quality" / "positive.txt");
    fill(quality.negative, data / "quality" / "negative.txt");
    fill(lm.corpus, data / "corpus" / "wiki_sample.txt");
    fill(word_lists.stop, data / "wordlists" / "stop.txt");
    fill(word_lists.flagged, data / "wordlists" / "flagged.txt");
    fill(word_lists.spam, data / "wordlists" / "spam.txt");
    fill(fetch.fixture_dir, data / "images");

    if (shards == 0) throw Error("config: shards must be positive");
    if (fetch.mode != "fixture" && fetch.mode != "http") throw Error("config: fetch.mode must be fixture or http");
    if (optout.mode != "allow-all" && optout.mode != "local-list" && optout.mode != "http-batch")
        throw Error("config: optout.mode must be allow-all, local-list or http-batch");
    if (optout.mode == "local-list" && optout.list.empty()) throw Error("config: optout.list is required");
    if (nsfw.params.mode == NsfwMode::external_model && nsfw.scores.empty())
        throw Error("config: nsfw.scores is required for external-model");
    if (!(nsfw.params.cutoff >= 0 && nsfw.params.cutoff <= 1)) throw Error("config: nsfw.cutoff must be in [0, 1]");
    if (!(quality.threshold >= 0 && quality.threshold <= 1)) throw Error("config: quality.threshold must be in [0, 1]");
    if (minhash.bands * minhash.rows != static_cast<int>(kMinHashSlots))
        throw Error("config: minhash bands * rows must be " + std::to_string(kMinHashSlots));
    simplify.validate();
    image_filters.validate();
}

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    PipelineConfig c;
    Reader r(j, "config", base_dir);
    visit(r, c, true);
    r.finish();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error("config: cannot parse " + path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

json to_json(const PipelineConfig& c) {
    Writer w;
    auto copy = c;
    visit(w, copy, true);
    return w.j;
}

std::string config_fingerprint(const PipelineConfig& c) {
    Writer w;
    auto copy = c;
    visit(w, copy, false);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(text::stable_hash(w.j.dump(), 0x636f6e666967ULL)));
    return buf;
}

}  // namespace mmweb
