#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mmweb {

/// Sparse, L2-normalized bag of hashed lowercase tokens, sorted by index.
using HashedFeatures = std::vector<std::pair<std::uint32_t, double>>;

HashedFeatures hashed_features(std::string_view text, std::uint32_t dimension, std::uint64_t seed);

struct QualityTrainOptions {
    std::uint32_t hash_dimension = 1u << 18;
    int epochs = 200;
    double learning_rate = 1.0;
    double l2 = 1e-4;
    std::uint64_t hash_seed = 0x5eed0f11u;
};

/// Logistic regression over hashed token frequencies. Immutable once built.
class QualityModel {
public:
    QualityModel(std::uint32_t hash_dimension, Eigen::VectorXd weights, double bias, std::uint64_t hash_seed);

    /// Full-batch gradient descent on mean log-loss + L2. `loss_history`, when
    /// given, receives the objective before each epoch and after the last one.
    static QualityModel train(std::span<const std::string> positives, std::span<const std::string> negatives,
                              const QualityTrainOptions& options = {},
                              std::vector<double>* loss_history = nullptr);

    double logit(std::string_view text) const;
    /// Probability that `text` comes from the curated class. Throws on empty text.
    double score(std::string_view text) const;

    std::uint32_t hash_dimension() const { return dimension_; }
    std::uint64_t hash_seed() const { return seed_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    double bias() const { return bias_; }

    std::string serialize() const;
    static QualityModel deserialize(std::string_view bytes);
    void save(const std::filesystem::path& path) const;
    static QualityModel load(const std::filesystem::path& path);

private:
    std::uint32_t dimension_;
    Eigen::VectorXd weights_;
    double bias_;
    std::uint64_t seed_;
};

inline double sigmoid(double z) {
    return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace mmweb
