#include "mmweb/stats.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mmweb {

namespace {

double median(std::vector<std::size_t> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    if (v.size() % 2) return static_cast<double>(v[mid]);
    return (static_cast<double>(v[mid - 1]) + static_cast<double>(v[mid])) / 2.0;
}

std::size_t token_bin(std::size_t tokens) {
    const auto& edges = token_bin_edges();
    auto it = std::upper_bound(edges.begin(), edges.end(), tokens);
    return *(it - 1);
}

}  // namespace

const std::vector<std::size_t>& token_bin_edges() {
    static const std::vector<std::size_t> edges{0, 50, 100, 200, 400, 800, 1600, 3200, 6400};
    return edges;
}

StatsReport stats_report(std::span<const MultimodalDocument> docs, std::size_t top_k) {
    StatsReport r;
    r.documents = docs.size();
    std::unordered_set<std::string> unique;
    std::unordered_map<std::string, std::size_t> domains;
    for (const auto& d : docs) {
        const std::size_t toks = text::tokens(d.text()).size();
        const auto urls = d.image_urls();
        r.doc_tokens.push_back(toks);
        r.doc_images.push_back(urls.size());
        r.tokens += toks;
        r.images += urls.size();
        unique.insert(urls.begin(), urls.end());
        ++r.images_histogram[urls.size()];
        ++r.tokens_histogram[token_bin(toks)];
        ++r.joint_histogram[{token_bin(toks), urls.size()}];
        ++domains[d.domain()];
    }
    r.unique_images = unique.size();
    r.unique_image_ratio = r.images ? static_cast<double>(r.unique_images) / static_cast<double>(r.images) : 0.0;
    r.median_images = median(r.doc_images);
    r.median_tokens = median(r.doc_tokens);

    std::size_t cumulative = 0;
    for (const auto& [x, n] : r.images_histogram) {
        cumulative += x * n;
        r.image_cdf.emplace_back(x, r.images ? 100.0 * static_cast<double>(cumulative) / static_cast<double>(r.images) : 0.0);
    }

    r.top_domains.assign(domains.begin(), domains.end());
    std::sort(r.top_domains.begin(), r.top_domains.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (r.top_domains.size() > top_k) r.top_domains.resize(top_k);
    return r;
}

json to_json(const StatsReport& r) {
    json j;
    j["documents"] = r.documents;
    j["images"] = r.images;
    j["unique_images"] = r.unique_images;
    j["unique_image_ratio"] = r.unique_image_ratio;
    j["tokens"] = r.tokens;
    j["median_images"] = r.median_images;
    j["median_tokens"] = r.median_tokens;
    j["doc_tokens"] = r.doc_tokens;
    j["doc_images"] = r.doc_images;
    json ih = json::array();
    for (const auto& [k, v] : r.images_histogram) ih.push_back({{"images", k}, {"documents", v}});
    j["images_histogram"] = ih;
    json th = json::array();
    for (const auto& [k, v] : r.tokens_histogram) th.push_back({{"tokens_from", k}, {"documents", v}});
    j["tokens_histogram"] = th;
    j["token_bin_edges"] = token_bin_edges();
    json jh = json::array();
    for (const auto& [k, v] : r.joint_histogram)
        jh.push_back({{"tokens_from", k.first}, {"images", k.second}, {"documents", v}});
    j["joint_histogram"] = jh;
    json cdf = json::array();
    for (const auto& [x, p] : r.image_cdf) cdf.push_back({{"max_images", x}, {"percent_images", p}});
    j["image_cdf"] = cdf;
    json dom = json::array();
    for (const auto& [d, n] : r.top_domains) dom.push_back({{"domain", d}, {"documents", n}});
    j["top_domains"] = dom;
    return j;
}

std::string to_text(const StatsReport& r) {
    std::ostringstream out;
    out << "documents        " << r.documents << '\n'
        << "images           " << r.images << '\n'
        << "unique images    " << r.unique_images << " (" << 100.0 * r.unique_image_ratio << "%)\n"
        << "tokens           " << r.tokens << '\n'
        << "median images    " << r.median_images << '\n'
        << "median tokens    " << r.median_tokens << '\n';
    out << "images per document:\n";
    for (const auto& [k, v] : r.images_histogram) out << "  " << k << ": " << v << '\n';
    out << "top domains:\n";
    for (const auto& [d, n] : r.top_domains) out << "  " << d << ": " << n << '\n';
    return out.str();
}

}  // namespace mmweb
