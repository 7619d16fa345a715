#include "mmweb/quality_model.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <map>

#include "binary_io.hpp"
#include "mmweb/json_io.hpp"
#include "mmweb/text.hpp"

namespace mmweb {

namespace {

constexpr std::string_view kMagic = "MMWQUAL\n";
constexpr std::uint32_t kVersion = 1;

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseRows design_matrix(const std::vector<HashedFeatures>& rows, std::uint32_t dim) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const auto& [idx, v] : rows[r]) triplets.emplace_back(static_cast<int>(r), static_cast<int>(idx), v);
    }
    SparseRows x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    x.setFromTriplets(triplets.begin(), triplets.end());
    return x;
}

double objective(const Eigen::VectorXd& z, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double l2) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        // log(1 + e^z) - y z, computed stably
        const double zi = z[i];
        loss += (zi > 0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi))) - y[i] * zi;
    }
    return loss / static_cast<double>(z.size()) + 0.5 * l2 * w.squaredNorm();
}

}  // namespace

HashedFeatures hashed_features(std::string_view text, std::uint32_t dimension, std::uint64_t seed) {
    std::map<std::uint32_t, double> counts;
    for (const auto& tok : text::tokens(text)) {
        std::string w = text::normalize_word(tok);
        if (w.empty()) continue;
        counts[static_cast<std::uint32_t>(text::stable_hash(w, seed) % dimension)] += 1.0;
    }
    double norm = 0.0;
    for (const auto& [_, c] : counts) norm += c * c;
    norm = std::sqrt(norm);
    HashedFeatures out(counts.begin(), counts.end());
    for (auto& [_, v] : out) v /= norm;
    return out;
}

QualityModel::QualityModel(std::uint32_t hash_dimension, Eigen::VectorXd weights, double bias,
                           std::uint64_t hash_seed)
    : dimension_(hash_dimension), weights_(std::move(weights)), bias_(bias), seed_(hash_seed) {
    if (dimension_ < (1u << 10) || (dimension_ & (dimension_ - 1)) != 0)
        throw Error("hash dimension must be a power of two >= 2^10");
    if (weights_.size() != static_cast<Eigen::Index>(dimension_)) throw Error("weight vector length != hash dimension");
    if (!weights_.allFinite() || !std::isfinite(bias_)) throw Error("quality model weights must be finite");
}

QualityModel QualityModel::train(std::span<const std::string> positives, std::span<const std::string> negatives,
                                 const QualityTrainOptions& options, std::vector<double>* loss_history) {
    if (positives.empty() || negatives.empty()) throw Error("quality classifier needs documents in both classes");
    const std::uint32_t dim = options.hash_dimension;
    std::vector<HashedFeatures> rows;
    rows.reserve(positives.size() + negatives.size());
    Eigen::VectorXd y(static_cast<Eigen::Index>(positives.size() + negatives.size()));
    Eigen::Index r = 0;
    for (const auto& d : positives) {
        rows.push_back(hashed_features(d, dim, options.hash_seed));
        y[r++] = 1.0;
    }
    for (const auto& d : negatives) {
        rows.push_back(hashed_features(d, dim, options.hash_seed));
        y[r++] = 0.0;
    }
    const SparseRows x = design_matrix(rows, dim);
    const double n = static_cast<double>(y.size());

    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    double b = 0.0;
    for (int epoch = 0; epoch <= options.epochs; ++epoch) {
        Eigen::VectorXd z = x * w;
        z.array() += b;
        if (loss_history) loss_history->push_back(objective(z, y, w, options.l2));
        if (epoch == options.epochs) break;
        Eigen::VectorXd residual = z.unaryExpr([](double v) { return sigmoid(v); }) - y;
        Eigen::VectorXd grad = x.transpose() * residual / n + options.l2 * w;
        w -= options.learning_rate * grad;
        b -= options.learning_rate * residual.mean();
    }
    return QualityModel(dim, std::move(w), b, options.hash_seed);
}

double QualityModel::logit(std::string_view text) const {
    double z = bias_;
    for (const auto& [idx, v] : hashed_features(text, dimension_, seed_)) z += weights_[idx] * v;
    return z;
}

double QualityModel::score(std::string_view text) const {
    if (text::trim(text).empty()) throw Error("empty input");
    return sigmoid(logit(text));
}

std::string QualityModel::serialize() const {
    detail::BinaryWriter w;
    w.raw(kMagic);
    w.put(kVersion);
    w.put(dimension_);
    w.put(seed_);
    w.put(bias_);
    std::uint32_t nnz = 0;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) nnz += weights_[i] != 0.0 ? 1 : 0;
    w.put(nnz);
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
        if (weights_[i] != 0.0) {
            w.put(static_cast<std::uint32_t>(i));
            w.put(weights_[i]);
        }
    }
    return w.take();
}

QualityModel QualityModel::deserialize(std::string_view bytes) {
    detail::BinaryReader r(bytes);
    r.expect(kMagic);
    if (r.get<std::uint32_t>() != kVersion) throw Error("unsupported quality model version");
    const auto dim = r.get<std::uint32_t>();
    const auto seed = r.get<std::uint64_t>();
    const auto bias = r.get<double>();
    const auto nnz = r.get<std::uint32_t>();
    if (dim > (1u << 28)) throw Error("implausible hash dimension");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    for (std::uint32_t k = 0; k < nnz; ++k) {
        const auto idx = r.get<std::uint32_t>();
        if (idx >= dim) throw Error("weight index out of range");
        w[idx] = r.get<double>();
    }
    if (!r.done()) throw Error("trailing bytes in quality model");
    return QualityModel(dim, std::move(w), bias, seed);
}

void QualityModel::save(const std::filesystem::path& path) const {
    write_file_atomic(path, serialize());
}

QualityModel QualityModel::load(const std::filesystem::path& path) {
    return deserialize(read_file(path));
}

}  // namespace mmweb
