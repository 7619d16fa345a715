#include "mmweb/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "binary_io.hpp"
#include "mmweb/json_io.hpp"
#include "mmweb/text.hpp"

namespace mmweb {

namespace {

constexpr std::string_view kMagic = "MMWNGRAM\n";
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kUnk = 0;
constexpr std::uint32_t kBos = 1;

void append_id(std::string& key, std::uint32_t id) {
    char buf[4];
    std::memcpy(buf, &id, 4);
    key.append(buf, 4);
}

std::string pack(std::span<const std::uint32_t> ids) {
    std::string key;
    key.reserve(ids.size() * 4);
    for (auto id : ids) append_id(key, id);
    return key;
}

std::vector<double> default_lambdas(int order) {
    std::vector<double> l(static_cast<std::size_t>(order), 0.7);
    l[0] = 0.95;
    return l;
}

}  // namespace

NGramLM NGramLM::train(std::span<const std::string> corpus, const NGramOptions& options) {
    if (options.order < 2) throw Error("n-gram order must be >= 2");
    if (options.additive <= 0.0) throw Error("additive constant must be positive");
    NGramLM lm;
    lm.order_ = options.order;
    lm.additive_ = options.additive;
    lm.min_count_ = options.min_count;
    lm.lambdas_ = options.interpolation.empty() ? default_lambdas(options.order) : options.interpolation;
    if (lm.lambdas_.size() != static_cast<std::size_t>(options.order)) throw Error("need one interpolation weight per order");
    for (double l : lm.lambdas_) {
        if (!(l > 0.0 && l < 1.0)) throw Error("interpolation weights must lie in (0, 1)");
    }

    std::vector<std::vector<std::string>> docs;
    std::map<std::string, std::uint64_t> freq;
    std::uint64_t token_count = 0;
    for (const auto& d : corpus) {
        docs.push_back(text::tokens(d));
        for (const auto& t : docs.back()) ++freq[t];
        token_count += docs.back().size();
    }
    if (token_count < 10ull * static_cast<std::uint64_t>(options.order))
        throw Error("corpus too small: need at least 10 x order tokens");

    lm.words_ = {"<unk>", "<s>"};
    for (const auto& [w, c] : freq) {
        if (c >= static_cast<std::uint64_t>(options.min_count) && w != "<unk>" && w != "<s>") lm.words_.push_back(w);
    }
    for (std::uint32_t i = 0; i < lm.words_.size(); ++i) lm.ids_.emplace(lm.words_[i], i);

    lm.grams_.assign(static_cast<std::size_t>(options.order), {});
    std::vector<std::uint32_t> padded;
    for (const auto& toks : docs) {
        padded.assign(static_cast<std::size_t>(options.order - 1), kBos);
        for (const auto& t : toks) padded.push_back(lm.id_of(t));
        for (std::size_t i = static_cast<std::size_t>(options.order - 1); i < padded.size(); ++i) {
            for (int k = 1; k <= options.order; ++k) {
                std::span<const std::uint32_t> gram(padded.data() + i + 1 - k, static_cast<std::size_t>(k));
                ++lm.grams_[static_cast<std::size_t>(k - 1)][pack(gram)];
            }
        }
    }
    lm.rebuild_contexts();
    return lm;
}

void NGramLM::rebuild_contexts() {
    contexts_.assign(grams_.size(), {});
    total_tokens_ = 0;
    for (std::size_t k = 0; k < grams_.size(); ++k) {
        for (const auto& [key, c] : grams_[k]) {
            if (k == 0) {
                total_tokens_ += c;
            } else {
                contexts_[k][key.substr(0, key.size() - 4)] += c;
            }
        }
    }
}

std::uint32_t NGramLM::id_of(std::string_view word) const {
    auto it = ids_.find(std::string(word));
    if (it == ids_.end() || it->second == kBos) return kUnk;
    return it->second;
}

std::vector<std::string> NGramLM::vocabulary() const {
    std::vector<std::string> out;
    out.push_back(words_[kUnk]);
    out.insert(out.end(), words_.begin() + 2, words_.end());
    return out;
}

double NGramLM::probability_ids(std::span<const std::uint32_t> history, std::uint32_t word) const {
    const double v = static_cast<double>(vocabulary_size());
    double p = 1.0 / v;
    std::string key;
    for (int k = 1; k <= order_; ++k) {
        const auto ctx_len = static_cast<std::size_t>(k - 1);
        key.clear();
        for (std::size_t j = 0; j < ctx_len; ++j) {
            // history is already padded with <s> to at least order-1 entries
            append_id(key, history[history.size() - ctx_len + j]);
        }
        double ctx_count = 0.0;
        if (k == 1) {
            ctx_count = static_cast<double>(total_tokens_);
        } else {
            auto it = contexts_[static_cast<std::size_t>(k - 1)].find(key);
            if (it != contexts_[static_cast<std::size_t>(k - 1)].end()) ctx_count = static_cast<double>(it->second);
        }
        if (ctx_count == 0.0) continue;
        append_id(key, word);
        const auto& table = grams_[static_cast<std::size_t>(k - 1)];
        auto git = table.find(key);
        const double c = git == table.end() ? 0.0 : static_cast<double>(git->second);
        const double lambda = lambdas_[static_cast<std::size_t>(k - 1)];
        p = lambda * (c + additive_) / (ctx_count + additive_ * v) + (1.0 - lambda) * p;
    }
    return p;
}

double NGramLM::probability(std::span<const std::string> context, std::string_view word) const {
    std::vector<std::uint32_t> history(static_cast<std::size_t>(order_ - 1), kBos);
    for (const auto& t : context) history.push_back(id_of(t));
    return probability_ids(history, id_of(word));
}

std::vector<double> NGramLM::token_log_probs(std::string_view text) const {
    std::vector<std::uint32_t> history(static_cast<std::size_t>(order_ - 1), kBos);
    std::vector<double> out;
    for (const auto& t : text::tokens(text)) {
        const std::uint32_t id = id_of(t);
        out.push_back(std::log(probability_ids(history, id)));
        history.push_back(id);
    }
    return out;
}

double NGramLM::perplexity(std::string_view text) const {
    const auto lps = token_log_probs(text);
    if (lps.empty()) throw Error("perplexity of text with zero tokens");
    double sum = 0.0;
    for (double lp : lps) sum += lp;
    return std::exp(-sum / static_cast<double>(lps.size()));
}

std::string NGramLM::serialize() const {
    detail::BinaryWriter w;
    w.raw(kMagic);
    w.put(kVersion);
    w.put(static_cast<std::uint32_t>(order_));
    w.put(additive_);
    for (double l : lambdas_) w.put(l);
    w.put(static_cast<std::int32_t>(min_count_));
    w.put(static_cast<std::uint32_t>(words_.size()));
    for (const auto& word : words_) w.put_string(word);
    for (const auto& table : grams_) {
        std::vector<std::pair<Key, std::uint64_t>> entries(table.begin(), table.end());
        std::sort(entries.begin(), entries.end());
        w.put(static_cast<std::uint64_t>(entries.size()));
        for (const auto& [key, c] : entries) {
            w.put_string(key);
            w.put(c);
        }
    }
    return w.take();
}

NGramLM NGramLM::deserialize(std::string_view bytes) {
    detail::BinaryReader r(bytes);
    r.expect(kMagic);
    if (r.get<std::uint32_t>() != kVersion) throw Error("unsupported n-gram model version");
    NGramLM lm;
    lm.order_ = static_cast<int>(r.get<std::uint32_t>());
    if (lm.order_ < 2 || lm.order_ > 16) throw Error("bad n-gram order in model file");
    lm.additive_ = r.get<double>();
    for (int k = 0; k < lm.order_; ++k) lm.lambdas_.push_back(r.get<double>());
    lm.min_count_ = r.get<std::int32_t>();
    const auto nwords = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < nwords; ++i) {
        lm.words_.push_back(r.get_string());
        lm.ids_.emplace(lm.words_.back(), i);
    }
    if (lm.words_.size() < 2) throw Error("model vocabulary missing reserved symbols");
    lm.grams_.assign(static_cast<std::size_t>(lm.order_), {});
    for (int k = 0; k < lm.order_; ++k) {
        const auto n = r.get<std::uint64_t>();
        for (std::uint64_t i = 0; i < n; ++i) {
            std::string key = r.get_string();
            lm.grams_[static_cast<std::size_t>(k)][std::move(key)] = r.get<std::uint64_t>();
        }
    }
    if (!r.done()) throw Error("trailing bytes in n-gram model");
    lm.rebuild_contexts();
    return lm;
}

void NGramLM::save(const std::filesystem::path& path) const {
    write_file_atomic(path, serialize());
}

NGramLM NGramLM::load(const std::filesystem::path& path) {
    return deserialize(read_file(path));
}

}  // namespace mmweb
