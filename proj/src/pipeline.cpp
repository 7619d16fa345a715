#include "mmweb/pipeline.hpp"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <thread>
#include <unordered_set>

#include "mmweb/corpus_io.hpp"
#include "mmweb/dedup.hpp"
#include "mmweb/extract.hpp"
#include "mmweb/fetch.hpp"
#include "mmweb/filters.hpp"
#include "mmweb/language_id.hpp"
#include "mmweb/minhash.hpp"
#include "mmweb/repetition.hpp"
#include "mmweb/safety.hpp"
#include "mmweb/simplify.hpp"
#include "mmweb/stats.hpp"

namespace fs = std::filesystem;

namespace mmweb {

PipelineError::PipelineError(std::string stage, std::string last_checkpoint, const std::string& what)
    : Error("stage " + stage + " failed (last checkpoint: " + (last_checkpoint.empty() ? "none" : last_checkpoint) +
            "): " + what),
      stage_(std::move(stage)),
      last_checkpoint_(std::move(last_checkpoint)) {}

json to_json(const StageReport& r) {
    return {{"stage", r.stage},       {"records_in", r.records_in}, {"records_out", r.records_out},
            {"rejections", r.rejections}, {"counters", r.counters},     {"wall_ms", r.wall_ms},
            {"resumed", r.resumed}};
}

StageReport stage_report_from_json(const json& j) {
    StageReport r;
    r.stage = j.at("stage").get<std::string>();
    r.records_in = j.at("records_in").get<std::size_t>();
    r.records_out = j.at("records_out").get<std::size_t>();
    r.rejections = j.at("rejections").get<std::map<std::string, std::size_t>>();
    r.counters = j.at("counters").get<std::map<std::string, double>>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.resumed = j.value("resumed", false);
    return r;
}

const std::vector<std::string>& stage_names() {
    static const std::vector<std::string> names{
        "ingest",      "language",   "minhash", "repetition",  "quality",   "simplify",
        "extract",     "fetch",      "node_filter", "doc_filter", "optout", "image_dedup",
        "nsfw",        "url_dedup",  "imageset_dedup", "paragraph_dedup"};
    return names;
}

std::vector<std::string> stages_for_command(std::string_view command) {
    if (command == "ingest") return {"ingest", "language", "minhash", "repetition", "quality"};
    if (command == "simplify") return {"simplify"};
    if (command == "extract") return {"extract"};
    if (command == "fetch") return {"fetch"};
    if (command == "filter") return {"node_filter", "doc_filter"};
    if (command == "safety") return {"optout", "nsfw"};
    if (command == "dedup") return {"image_dedup", "url_dedup", "imageset_dedup", "paragraph_dedup"};
    if (command == "run-all") return stage_names();
    throw Error("unknown command '" + std::string(command) + "'");
}

OutputLock::OutputLock(const fs::path& dir) : path_(dir / ".lock") {
    fs::create_directories(dir);
    for (int attempt = 0; attempt < 2; ++attempt) {
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd >= 0) {
            const std::string pid = std::to_string(::getpid()) + "\n";
            [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
            ::close(fd);
            return;
        }
        if (errno != EEXIST) throw Error("cannot create lock file " + path_.string());
        long owner = 0;
        try {
            owner = std::stol(read_file(path_));
        } catch (const std::exception&) {
        }
        if (owner > 0 && (::kill(static_cast<pid_t>(owner), 0) == 0 || errno != ESRCH))
            throw Error("output directory " + dir.string() + " is locked by process " + std::to_string(owner));
        fs::remove(path_);  // stale lock of a dead process
    }
    throw Error("cannot acquire lock " + path_.string());
}

OutputLock::~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

namespace {

struct PageItem {
    std::string id;
    std::string url;
    std::int64_t fetch_time = 0;
    std::string html;
    std::string text;
};

json to_json(const PageItem& p) {
    return {{"id", p.id}, {"url", p.url}, {"fetch_time", p.fetch_time}, {"html", p.html}, {"text", p.text}};
}

PageItem page_item_from_json(const json& j) {
    return {j.at("id").get<std::string>(), j.at("url").get<std::string>(), j.at("fetch_time").get<std::int64_t>(),
            j.at("html").get<std::string>(), j.value("text", std::string())};
}

using PageShard = std::vector<PageItem>;
using DocShard = std::vector<MultimodalDocument>;

struct Data {
    bool documents = false;
    std::vector<PageShard> pages;
    std::vector<DocShard> docs;

    std::size_t count() const {
        std::size_t n = 0;
        if (documents) {
            for (const auto& s : docs) n += s.size();
        } else {
            for (const auto& s : pages) n += s.size();
        }
        return n;
    }
};

template <typename T>
std::vector<std::vector<T>> split_shards(std::vector<T> items, std::size_t shards) {
    std::vector<std::vector<T>> out(shards);
    const std::size_t n = items.size();
    for (std::size_t k = 0; k < shards; ++k) {
        const std::size_t lo = k * n / shards, hi = (k + 1) * n / shards;
        out[k].assign(std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(lo)),
                      std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(hi)));
    }
    return out;
}

// Runs fn(0..n-1) on up to `threads` workers; rethrows the lowest-index failure.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t t = std::max<std::size_t>(1, std::min(threads, n));
    if (t == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < t; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::vector<std::string> out;
    for (auto& p : text::paragraphs(read_file(path))) out.push_back(std::move(p));
    return out;
}

std::string shard_name(std::size_t k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "shard-%05zu.jsonl", k);
    return buf;
}

std::string make_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "d%08zu", i);
    return buf;
}

bool page_stage(const std::string& name) {
    static const std::unordered_set<std::string> s{"ingest", "language", "minhash", "repetition", "quality",
                                                   "simplify"};
    return s.count(name) > 0;
}

bool stage_enabled(const PipelineConfig& c, const std::string& name) {
    const auto& t = c.stages;
    if (name == "language") return t.language;
    if (name == "minhash") return t.minhash;
    if (name == "repetition") return t.repetition;
    if (name == "quality") return t.quality;
    if (name == "node_filter") return t.node_filter;
    if (name == "doc_filter") return t.doc_filter;
    if (name == "optout") return t.optout;
    if (name == "image_dedup") return t.image_dedup;
    if (name == "nsfw") return t.nsfw;
    if (name == "url_dedup") return t.url_dedup;
    if (name == "imageset_dedup") return t.imageset_dedup;
    if (name == "paragraph_dedup") return t.paragraph_dedup;
    return true;
}

// Models and lists, built on first use.
class Resources {
public:
    explicit Resources(const PipelineConfig& c) : c_(c) {}

    const QualityModel& quality() {
        if (!quality_) {
            if (!c_.quality.model.empty()) {
                quality_ = QualityModel::load(c_.quality.model);
            } else {
                quality_ = QualityModel::train(read_lines(c_.quality.positive), read_lines(c_.quality.negative),
                                               c_.quality.train);
            }
        }
        return *quality_;
    }

    const NGramLM& lm() {
        if (!lm_) lm_ = c_.lm.model.empty() ? NGramLM::train(lm_corpus(), c_.lm.options) : NGramLM::load(c_.lm.model);
        return *lm_;
    }

    const WordLists& lists() {
        if (!lists_) {
            WordLists w;
            w.stop = load_word_list(c_.word_lists.stop);
            w.flagged = load_word_list(c_.word_lists.flagged);
            w.spam = load_word_list(c_.word_lists.spam);
            w.common = c_.word_lists.common.empty() ? build_common_words(lm_corpus())
                                                    : load_word_list(c_.word_lists.common);
            lists_ = std::move(w);
        }
        return *lists_;
    }

    FilterModels filter_models() { return {&CharNgramLanguageId::builtin(), &lm()}; }

private:
    const std::vector<std::string>& lm_corpus() {
        if (!corpus_) corpus_ = read_lines(c_.lm.corpus);
        return *corpus_;
    }

    const PipelineConfig& c_;
    std::optional<QualityModel> quality_;
    std::optional<NGramLM> lm_;
    std::optional<WordLists> lists_;
    std::optional<std::vector<std::string>> corpus_;
};

class Runner {
public:
    Runner(const PipelineConfig& c, fs::path stage_root)
        : c_(c),
          res_(c),
          root_(std::move(stage_root)),
          threads_(c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency())) {}

    StageReport run(const std::string& stage, Data& data) {
        StageReport r;
        r.stage = stage;
        r.records_in = stage == "ingest" ? 0 : data.count();
        const auto t0 = std::chrono::steady_clock::now();
        current_dir_ = stage_dir(stage);
        fs::create_directories(current_dir_);
        if (stage == "ingest") ingest(data, r);
        else if (stage == "language") language(data, r);
        else if (stage == "minhash") minhash(data, r);
        else if (stage == "repetition") repetition(data, r);
        else if (stage == "quality") quality(data, r);
        else if (stage == "simplify") simplify_pages(data, r);
        else if (stage == "extract") extract(data, r);
        else if (stage == "fetch") fetch(data, r);
        else if (stage == "node_filter") node_filter(data, r);
        else if (stage == "doc_filter") doc_filter(data, r);
        else if (stage == "optout") optout(data, r);
        else if (stage == "image_dedup") image_dedup(data, r);
        else if (stage == "nsfw") nsfw(data, r);
        else if (stage == "url_dedup") url_dedup(data, r);
        else if (stage == "imageset_dedup") imageset_dedup(data, r);
        else if (stage == "paragraph_dedup") paragraph_dedup(data, r);
        else throw Error("unknown stage " + stage);
        r.records_out = data.count();
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

    fs::path stage_dir(const std::string& stage) const {
        const auto& names = stage_names();
        const auto idx = std::find(names.begin(), names.end(), stage) - names.begin();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%02td_", idx);
        return root_ / (buf + stage);
    }

private:
    // Keeps the records for which keep(record, reasons) is true; rejected
    // records add their reason codes to the report.
    template <typename T, typename F>
    void retain(std::vector<std::vector<T>>& shards, StageReport& r, F keep) {
        std::vector<std::map<std::string, std::size_t>> local(shards.size());
        parallel_for(shards.size(), threads_, [&](std::size_t k) {
            std::vector<T> kept;
            for (auto& item : shards[k]) {
                std::vector<std::string> reasons;
                if (keep(item, reasons)) {
                    kept.push_back(std::move(item));
                } else {
                    for (auto& code : reasons) ++local[k][code];
                }
            }
            shards[k] = std::move(kept);
        });
        for (const auto& m : local) {
            for (const auto& [code, n] : m) r.rejections[code] += n;
        }
    }

    void drop_imageless(Data& data, StageReport& r) {
        if (!c_.stages.doc_filter) return;
        retain(data.docs, r, [&](const MultimodalDocument& d, std::vector<std::string>& why) {
            if (d.image_count() >= c_.image_filters.min_images_per_doc) return true;
            why.push_back("NoImages");
            return false;
        });
    }

    void ingest(Data& data, StageReport& r) {
        ReadStats rs;
        auto pages = read_pages(c_.input, c_.input_format, &rs);
        r.records_in = rs.total();
        if (rs.skipped_non_html) r.rejections["NonHtml"] = rs.skipped_non_html;
        if (rs.skipped_non_response) r.rejections["NonResponse"] = rs.skipped_non_response;
        if (rs.malformed) r.rejections["Malformed"] = rs.malformed;
        r.counters["out_of_order"] = static_cast<double>(rs.out_of_order);

        std::vector<PageItem> items(pages.size());
        for (std::size_t i = 0; i < pages.size(); ++i) {
            items[i] = {make_id(i), std::move(pages[i].url), pages[i].fetch_time, std::move(pages[i].raw_html), {}};
        }
        data.documents = false;
        data.pages = split_shards(std::move(items), c_.shards);
        retain(data.pages, r, [&](PageItem& p, std::vector<std::string>& why) {
            try {
                p.text = extract_document(simplify(p.html, c_.simplify), p.url, p.fetch_time, p.id).text();
            } catch (const Error&) {
                p.text.clear();
            }
            if (!text::trim(p.text).empty()) return true;
            why.push_back("NoText");
            return false;
        });
    }

    void language(Data& data, StageReport& r) {
        const auto& lid = CharNgramLanguageId::builtin();
        retain(data.pages, r, [&](const PageItem& p, std::vector<std::string>& why) {
            const auto best = lid.detect(p.text);
            if (best.label == c_.language.target && best.score >= c_.language.min_score) return true;
            why.push_back(best.label == c_.language.target ? "LowLanguageScore" : "WrongLanguage");
            return false;
        });
    }

    void minhash(Data& data, StageReport& r) {
        MinHashOptions options = c_.minhash;
        options.seed = text::mix64(options.seed ^ c_.seed);
        std::vector<std::vector<MinHashSignature>> sigs(data.pages.size());
        parallel_for(data.pages.size(), threads_, [&](std::size_t k) {
            for (const auto& p : data.pages[k]) sigs[k].push_back(minhash_signature(p.text, options));
        });
        std::vector<MinHashSignature> flat;
        for (auto& s : sigs) flat.insert(flat.end(), s.begin(), s.end());
        const auto survivors = dedup_minhash(flat, options);
        std::vector<char> keep(flat.size(), 0);
        for (auto i : survivors) keep[i] = 1;
        std::size_t g = 0;
        for (auto& shard : data.pages) {
            PageShard kept;
            for (auto& p : shard) {
                if (keep[g++]) kept.push_back(std::move(p));
                else ++r.rejections["NearDuplicate"];
            }
            shard = std::move(kept);
        }
    }

    void repetition(Data& data, StageReport& r) {
        retain(data.pages, r, [&](const PageItem& p, std::vector<std::string>& why) {
            const auto v = repetition_gate(repetition_stats(p.text), c_.repetition);
            for (const auto& reason : v.reasons) why.push_back(reason.code);
            return v.accepted();
        });
    }

    void quality(Data& data, StageReport& r) {
        const auto& model = res_.quality();
        retain(data.pages, r, [&](const PageItem& p, std::vector<std::string>& why) {
            if (model.score(p.text) >= c_.quality.threshold) return true;
            why.push_back("LowQuality");
            return false;
        });
    }

    void simplify_pages(Data& data, StageReport& r) {
        std::vector<std::pair<double, double>> bytes(data.pages.size());
        parallel_for(data.pages.size(), threads_, [&](std::size_t k) {
            for (auto& p : data.pages[k]) {
                bytes[k].first += static_cast<double>(p.html.size());
                p.html = serialize_html(simplify(p.html, c_.simplify));
                bytes[k].second += static_cast<double>(p.html.size());
            }
        });
        for (const auto& [raw, simplified] : bytes) {
            r.counters["raw_bytes"] += raw;
            r.counters["simplified_bytes"] += simplified;
        }
    }

    void extract(Data& data, StageReport& r) {
        std::vector<DocShard> docs(data.pages.size());
        std::vector<std::size_t> failed(data.pages.size(), 0);
        parallel_for(data.pages.size(), threads_, [&](std::size_t k) {
            for (const auto& p : data.pages[k]) {
                try {
                    docs[k].push_back(extract_document(parse_html(p.html), p.url, p.fetch_time, p.id));
                } catch (const Error&) {
                    ++failed[k];
                }
            }
        });
        for (auto f : failed) {
            if (f) r.rejections["EmptyDocument"] += f;
        }
        data.pages.clear();
        data.docs = std::move(docs);
        data.documents = true;
    }

    void fetch(Data& data, StageReport& r) {
        std::vector<MultimodalDocument> all;
        for (const auto& s : data.docs) all.insert(all.end(), s.begin(), s.end());
        const auto manifest = harvest_image_urls(all);
        write_manifest(current_dir_ / "manifest.jsonl", manifest);
        std::vector<std::string> urls;
        for (const auto& e : manifest) urls.push_back(e.url);

        std::unique_ptr<ImageFetcher> fetcher;
        if (c_.fetch.mode == "http") {
            HttpFetcherOptions o;
            o.max_in_flight = c_.fetch.max_in_flight;
            o.politeness_delay = std::chrono::milliseconds(c_.fetch.politeness_ms);
            o.timeout = std::chrono::seconds(c_.fetch.timeout_s);
            fetcher = std::make_unique<HttpFetcher>(o);
        } else {
            fetcher = std::make_unique<FixtureFetcher>(c_.fetch.fixture_dir);
        }
        FetchResults results;
        fetch_missing(*fetcher, urls, results);
        std::vector<FetchResult> ordered;
        std::size_t ok = 0;
        for (const auto& u : urls) {
            ordered.push_back(results.at(u));
            ok += ordered.back().status == FetchStatus::ok;
        }
        write_fetch_results(current_dir_ / "fetch_results.jsonl", ordered);

        std::size_t images_in = 0, images_out = 0;
        for (auto& shard : data.docs) {
            for (auto& d : shard) {
                images_in += d.image_count();
                d = attach_images(std::move(d), results);
                images_out += d.image_count();
            }
        }
        r.counters["unique_urls"] = static_cast<double>(urls.size());
        r.counters["fetched_ok"] = static_cast<double>(ok);
        r.counters["images_in"] = static_cast<double>(images_in);
        r.counters["images_out"] = static_cast<double>(images_out);
    }

    void node_filter(Data& data, StageReport& r) {
        const auto& lists = res_.lists();
        const auto models = res_.filter_models();
        std::vector<std::map<std::string, double>> local(data.docs.size());
        parallel_for(data.docs.size(), threads_, [&](std::size_t k) {
            DocShard kept;
            for (auto& d : data.docs[k]) {
                auto nr = filter_nodes(std::move(d), c_.text_filters, c_.image_filters, lists, models);
                local[k]["paragraphs_removed"] += static_cast<double>(nr.paragraphs_removed);
                local[k]["images_removed"] += static_cast<double>(nr.images_removed);
                for (const auto& [code, n] : nr.reasons) local[k]["node:" + code] += static_cast<double>(n);
                if (nr.document.segments.empty()) {
                    local[k]["empty_documents"] += 1;
                    continue;
                }
                kept.push_back(std::move(nr.document));
            }
            data.docs[k] = std::move(kept);
        });
        for (const auto& m : local) {
            for (const auto& [key, v] : m) {
                if (key == "empty_documents") r.rejections["EmptyDocument"] += static_cast<std::size_t>(v);
                else r.counters[key] += v;
            }
        }
    }

    void doc_filter(Data& data, StageReport& r) {
        const auto& lists = res_.lists();
        const auto models = res_.filter_models();
        retain(data.docs, r, [&](const MultimodalDocument& d, std::vector<std::string>& why) {
            const auto v = filter_document_level(d, c_.text_filters, c_.image_filters, lists, models);
            for (const auto& reason : v.reasons) why.push_back(reason.code);
            return v.accepted();
        });
    }

    void optout(Data& data, StageReport& r) {
        std::unique_ptr<OptOutClient> client;
        HttpBatchClient* http = nullptr;
        if (c_.optout.mode == "local-list") {
            client = std::make_unique<LocalListClient>(LocalListClient::load(c_.optout.list));
        } else if (c_.optout.mode == "http-batch") {
            auto h = std::make_unique<HttpBatchClient>(c_.optout.http);
            http = h.get();
            client = std::move(h);
        } else {
            client = std::make_unique<AllowAllClient>();
        }
        OptOutReport total;
        for (auto& shard : data.docs) {
            const auto rep = remove_opted_out(shard, *client);
            total.images_checked += rep.images_checked;
            total.images_removed += rep.images_removed;
        }
        r.counters["images_checked"] = static_cast<double>(total.images_checked);
        r.counters["images_removed"] = static_cast<double>(total.images_removed);
        if (http) r.counters["failed_batches"] = static_cast<double>(http->failed_batches());
        drop_imageless(data, r);
    }

    CorpusCounters count(Data& data, void (*fn)(std::span<const MultimodalDocument>, CorpusCounters&)) {
        std::vector<CorpusCounters> local(data.docs.size());
        parallel_for(data.docs.size(), threads_, [&](std::size_t k) { fn(data.docs[k], local[k]); });
        CorpusCounters merged;
        for (const auto& l : local) merged.merge(l);
        merged.save(current_dir_ / "counters.tsv");
        return merged;
    }

    void image_dedup(Data& data, StageReport& r) {
        const auto counters = count(data, count_image_urls);
        std::vector<std::size_t> removed(data.docs.size(), 0);
        parallel_for(data.docs.size(), threads_, [&](std::size_t k) {
            removed[k] = drop_overused_images(data.docs[k], counters, c_.dedup.max_image_occurrences);
        });
        double total = 0;
        for (auto n : removed) total += static_cast<double>(n);
        r.counters["images_removed"] = total;
        drop_imageless(data, r);
    }

    void nsfw(Data& data, StageReport& r) {
        std::unique_ptr<NsfwScorer> scorer;
        if (c_.nsfw.params.mode == NsfwMode::external_model)
            scorer = std::make_unique<ScoredManifestScorer>(ScoredManifestScorer::load(c_.nsfw.scores));
        NsfwReport total;
        for (auto& shard : data.docs) {
            const auto rep = remove_nsfw(shard, c_.nsfw.params, scorer.get());
            total.images_removed += rep.images_removed;
            total.documents_dropped += rep.documents_dropped;
        }
        r.counters["images_removed"] = static_cast<double>(total.images_removed);
        if (total.documents_dropped) r.rejections["NsfwImage"] = total.documents_dropped;
        drop_imageless(data, r);
    }

    void url_dedup(Data& data, StageReport& r) {
        const auto counters = count(data, count_latest_by_url);
        retain(data.docs, r, [&](const MultimodalDocument& d, std::vector<std::string>& why) {
            if (survives_url_dedup(d, counters)) return true;
            why.push_back("DuplicateUrl");
            return false;
        });
    }

    void imageset_dedup(Data& data, StageReport& r) {
        const auto counters = count(data, count_latest_by_image_set);
        retain(data.docs, r, [&](const MultimodalDocument& d, std::vector<std::string>& why) {
            if (survives_image_set_dedup(d, counters)) return true;
            why.push_back("DuplicateImageSet");
            return false;
        });
    }

    void paragraph_dedup(Data& data, StageReport& r) {
        const auto counters = count(data, count_paragraphs);
        std::vector<std::size_t> removed(data.docs.size(), 0);
        parallel_for(data.docs.size(), threads_, [&](std::size_t k) {
            for (auto& d : data.docs[k]) removed[k] += remove_repeated_paragraphs(d, counters, c_.dedup.min_paragraph_count);
        });
        double total = 0;
        for (auto n : removed) total += static_cast<double>(n);
        r.counters["paragraphs_removed"] = total;
        retain(data.docs, r, [&](const MultimodalDocument& d, std::vector<std::string>& why) {
            if (!text::trim(d.text()).empty()) return true;
            why.push_back("NoText");
            return false;
        });
    }

    const PipelineConfig& c_;
    Resources res_;
    fs::path root_;
    std::size_t threads_;
    fs::path current_dir_;
};

void save_shards(const Data& data, const fs::path& dir) {
    if (data.documents) {
        for (std::size_t k = 0; k < data.docs.size(); ++k) write_documents(data.docs[k], dir / shard_name(k));
    } else {
        for (std::size_t k = 0; k < data.pages.size(); ++k) {
            std::vector<json> rows;
            for (const auto& p : data.pages[k]) rows.push_back(to_json(p));
            write_jsonl(dir / shard_name(k), rows);
        }
    }
}

Data load_shards(const fs::path& dir, bool documents, std::size_t shards) {
    Data data;
    data.documents = documents;
    for (std::size_t k = 0; k < shards; ++k) {
        const auto path = dir / shard_name(k);
        if (!fs::exists(path)) throw Error("missing checkpoint shard " + path.string());
        if (documents) {
            data.docs.push_back(read_documents(path));
        } else {
            PageShard shard;
            for_each_jsonl(path, [&](const json& j) { shard.push_back(page_item_from_json(j)); });
            data.pages.push_back(std::move(shard));
        }
    }
    return data;
}

Data load_input(const fs::path& input, bool documents, std::size_t shards) {
    fs::path file = input;
    if (fs::is_directory(input)) file = input / (documents ? "documents.jsonl" : "pages.jsonl");
    if (!fs::exists(file)) throw Error("input not found: " + file.string());
    Data data;
    data.documents = documents;
    if (documents) {
        data.docs = split_shards(read_documents(file), shards);
    } else {
        std::vector<PageItem> items;
        for_each_jsonl(file, [&](const json& j) { items.push_back(page_item_from_json(j)); });
        data.pages = split_shards(std::move(items), shards);
    }
    return data;
}

struct Marker {
    std::string fingerprint;
    StageReport report;
};

std::optional<Marker> read_marker(const fs::path& dir) {
    const auto path = dir / "_DONE";
    if (!fs::exists(path)) return std::nullopt;
    try {
        auto j = json::parse(read_file(path));
        return Marker{j.at("fingerprint").get<std::string>(), stage_report_from_json(j.at("report"))};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void write_marker(const fs::path& dir, const std::string& fingerprint, const StageReport& r) {
    json j{{"fingerprint", fingerprint}, {"report", to_json(r)}};
    write_file_atomic(dir / "_DONE", j.dump(2) + "\n");
}

}  // namespace

PipelineResult run_pipeline(PipelineConfig config, const RunOptions& options) {
    config.finalize();
    if (config.output.empty()) throw Error("config: output directory is required");
    const fs::path out = config.output;
    OutputLock lock(out);

    const auto& names = stage_names();
    auto first = std::find(names.begin(), names.end(), options.first_stage);
    auto last = std::find(names.begin(), names.end(), options.last_stage);
    if (first == names.end() || last == names.end() || last < first)
        throw Error("invalid stage range " + options.first_stage + ".." + options.last_stage);
    std::vector<std::string> stages;
    for (auto it = first; it <= last; ++it) {
        if (stage_enabled(config, *it)) stages.push_back(*it);
    }
    if (*first != "ingest" && !options.input) throw Error("a run starting at " + *first + " needs an input");

    const std::string fingerprint = config_fingerprint(config) + "/" + *first + "/" +
                                    (options.input ? fs::absolute(*options.input).lexically_normal().string() : "");
    Runner runner(config, out / "stages");

    PipelineResult result;
    std::size_t start = 0;
    std::string last_checkpoint;
    for (; start < stages.size(); ++start) {
        auto marker = read_marker(runner.stage_dir(stages[start]));
        if (!marker || marker->fingerprint != fingerprint) break;
        marker->report.resumed = true;
        result.reports.push_back(marker->report);
        last_checkpoint = stages[start];
    }

    Data data;
    if (start > 0) {
        data = load_shards(runner.stage_dir(last_checkpoint), !page_stage(last_checkpoint), config.shards);
    } else if (*first != "ingest") {
        const bool takes_pages = page_stage(*first) || *first == "extract";
        data = load_input(*options.input, !takes_pages, config.shards);
    }

    for (std::size_t i = start; i < stages.size(); ++i) {
        const auto& stage = stages[i];
        const auto dir = runner.stage_dir(stage);
        fs::remove_all(dir);
        StageReport report;
        try {
            report = runner.run(stage, data);
            save_shards(data, dir);
            write_marker(dir, fingerprint, report);
        } catch (const PipelineError&) {
            throw;
        } catch (const std::exception& e) {
            throw PipelineError(stage, last_checkpoint, e.what());
        }
        last_checkpoint = stage;
        result.reports.push_back(report);
        if (config.crash_after_stage == stage) throw PipelineError(stage, stage, "injected crash");
    }

    json report{{"fingerprint", fingerprint}, {"stages", json::array()}};
    for (const auto& r : result.reports) report["stages"].push_back(to_json(r));
    if (data.documents) {
        for (auto& shard : data.docs) {
            for (auto& d : shard) result.documents.push_back(std::move(d));
        }
        result.output = out / "documents.jsonl";
        write_documents(result.documents, result.output);
        const auto stats = stats_report(result.documents);
        write_file_atomic(out / "stats.json", to_json(stats).dump(2) + "\n");
        write_file_atomic(out / "stats.txt", to_text(stats));
    } else {
        std::vector<json> rows;
        for (const auto& shard : data.pages) {
            for (const auto& p : shard) rows.push_back(to_json(p));
        }
        result.pages = rows.size();
        result.output = out / "pages.jsonl";
        write_jsonl(result.output, rows);
    }
    write_file_atomic(out / "report.json", report.dump(2) + "\n");
    return result;
}

}  // namespace mmweb
