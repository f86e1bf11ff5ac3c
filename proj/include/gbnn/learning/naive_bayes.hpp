#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "gbnn/error.hpp"

namespace gbnn {

/// Multinomial naive Bayes over nonnegative integer count features with
/// add-one smoothing. Ties go to the smaller class label.
class MultinomialNaiveBayes {
public:
    void fit(const std::vector<std::vector<int>>& features, const std::vector<int>& labels) {
        if (features.empty()) throw ArgumentError("naive bayes: empty training set");
        if (features.size() != labels.size()) throw DimensionError("naive bayes: rows != labels");
        width_ = features.front().size();
        std::map<int, std::vector<double>> counts;
        std::map<int, std::size_t> prior;
        for (std::size_t r = 0; r < features.size(); ++r) {
            if (features[r].size() != width_) throw DimensionError("naive bayes: ragged feature rows");
            auto& c = counts[labels[r]];
            c.resize(width_, 0.0);
            for (std::size_t j = 0; j < width_; ++j) {
                if (features[r][j] < 0) throw ArgumentError("naive bayes: negative count feature");
                c[j] += features[r][j];
            }
            ++prior[labels[r]];
        }
        classes_.clear();
        log_prior_.clear();
        log_theta_.clear();
        for (const auto& [label, c] : counts) {
            double total = 0;
            for (double v : c) total += v;
            std::vector<double> lt(width_);
            for (std::size_t j = 0; j < width_; ++j)
                lt[j] = std::log((c[j] + 1.0) / (total + static_cast<double>(width_)));
            classes_.push_back(label);
            log_prior_.push_back(std::log(static_cast<double>(prior[label]) / static_cast<double>(features.size())));
            log_theta_.push_back(std::move(lt));
        }
    }

    int predict(const std::vector<int>& x) const {
        if (classes_.empty()) throw ArgumentError("naive bayes: model not fitted");
        if (x.size() != width_) throw DimensionError("naive bayes: feature width mismatch");
        int best = classes_.front();
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < classes_.size(); ++c) {
            double score = log_prior_[c];
            for (std::size_t j = 0; j < width_; ++j) score += x[j] * log_theta_[c][j];
            // classes_ ascending, so strict > keeps the smaller label on ties
            if (score > best_score) {
                best_score = score;
                best = classes_[c];
            }
        }
        return best;
    }

    const std::vector<int>& classes() const { return classes_; }

private:
    std::size_t width_ = 0;
    std::vector<int> classes_;
    std::vector<double> log_prior_;
    std::vector<std::vector<double>> log_theta_;
};

inline std::vector<int> naive_bayes_classifier(const std::vector<std::vector<int>>& train_x,
                                               const std::vector<int>& train_y,
                                               const std::vector<std::vector<int>>& test_x) {
    MultinomialNaiveBayes nb;
    nb.fit(train_x, train_y);
    std::vector<int> out;
    out.reserve(test_x.size());
    for (const auto& x : test_x) out.push_back(nb.predict(x));
    return out;
}

}  // namespace gbnn
