#include "mmweb/minhash.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "mmweb/text.hpp"

namespace mmweb {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }

    // The smaller index becomes the root so each root is its cluster's earliest member.
    void join(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

}  // namespace

std::vector<std::string> word_shingles(std::string_view text, int n) {
    if (n < 1) throw Error("shingle size must be positive");
    const auto toks = text::tokens(text);
    std::vector<std::string> out;
    if (toks.empty()) return out;
    const auto size = static_cast<std::size_t>(n);
    if (toks.size() < size) {
        std::string s = toks[0];
        for (std::size_t i = 1; i < toks.size(); ++i) s += ' ' + toks[i];
        out.push_back(std::move(s));
        return out;
    }
    out.reserve(toks.size() - size + 1);
    for (std::size_t i = 0; i + size <= toks.size(); ++i) {
        std::string s = toks[i];
        for (std::size_t k = 1; k < size; ++k) s += ' ' + toks[i + k];
        out.push_back(std::move(s));
    }
    return out;
}

MinHashSignature minhash_signature(std::string_view text, const MinHashOptions& options) {
    const auto shingles = word_shingles(text, options.shingle_size);
    if (shingles.empty()) throw Error("minhash_signature: empty text");
    std::array<std::uint64_t, kMinHashSlots> keys{};
    for (std::size_t i = 0; i < kMinHashSlots; ++i) keys[i] = text::mix64(options.seed + i);
    MinHashSignature sig;
    sig.fill(std::numeric_limits<std::uint64_t>::max());
    for (const auto& s : shingles) {
        const std::uint64_t base = text::fnv1a(s);
        for (std::size_t i = 0; i < kMinHashSlots; ++i) {
            const std::uint64_t h = text::mix64(text::mix64(base ^ keys[i]) + keys[i]);
            sig[i] = std::min(sig[i], h);
        }
    }
    return sig;
}

double estimate_similarity(const MinHashSignature& a, const MinHashSignature& b) {
    std::size_t eq = 0;
    for (std::size_t i = 0; i < kMinHashSlots; ++i) eq += a[i] == b[i];
    return static_cast<double>(eq) / static_cast<double>(kMinHashSlots);
}

std::vector<std::size_t> dedup_minhash(std::span<const MinHashSignature> sigs, const MinHashOptions& options) {
    if (options.bands < 1 || options.rows < 1 ||
        static_cast<std::size_t>(options.bands * options.rows) != kMinHashSlots)
        throw Error("minhash: bands * rows must equal the signature length");
    UnionFind uf(sigs.size());

    // Identical signatures are similar by definition; group them first so a
    // large exact-duplicate cluster does not cost a quadratic pair scan.
    std::map<MinHashSignature, std::size_t> first_of;
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        auto [it, inserted] = first_of.emplace(sigs[i], i);
        if (inserted) {
            reps.push_back(i);
        } else {
            uf.join(it->second, i);
        }
    }

    const auto rows = static_cast<std::size_t>(options.rows);
    for (int band = 0; band < options.bands; ++band) {
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
        for (std::size_t i : reps) {
            std::uint64_t key = text::mix64(static_cast<std::uint64_t>(band));
            for (std::size_t r = 0; r < rows; ++r) key = text::mix64(key ^ sigs[i][band * rows + r]);
            buckets[key].push_back(i);
        }
        for (auto& [key, members] : buckets) {
            for (std::size_t a = 0; a < members.size(); ++a) {
                for (std::size_t b = a + 1; b < members.size(); ++b) {
                    if (estimate_similarity(sigs[members[a]], sigs[members[b]]) >= options.threshold)
                        uf.join(members[a], members[b]);
                }
            }
        }
    }

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        if (uf.find(i) == i) out.push_back(i);
    }
    return out;
}

}  // namespace mmweb
