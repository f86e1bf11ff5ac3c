#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "gbnn/error.hpp"

namespace gbnn {

/// Coefficient of determination 1 - SS_res / SS_tot.
inline double r_squared(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size()) throw DimensionError("r_squared: length mismatch");
    if (actual.size() < 2) throw ArgumentError("r_squared: need at least two observations");
    double mean = 0;
    for (double a : actual) mean += a;
    mean /= static_cast<double>(actual.size());
    double ss_res = 0;
    double ss_tot = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ss_res += (actual[i] - pred[i]) * (actual[i] - pred[i]);
        ss_tot += (actual[i] - mean) * (actual[i] - mean);
    }
    if (ss_tot == 0) throw ArgumentError("r_squared: actual values have zero variance");
    return 1.0 - ss_res / ss_tot;
}

struct EvalReport {
    double r_squared = 0;
    /// Fraction of predictions strictly above the actual value.
    double overshoot_rate = 0;
    /// Fraction of predictions whose nearest integer equals the actual value.
    double accuracy = 0;
    std::size_t count = 0;
};

inline EvalReport evaluate_predictions(std::span<const double> pred, std::span<const double> actual) {
    if (pred.empty()) throw ArgumentError("evaluate: empty test set");
    EvalReport rep;
    rep.r_squared = r_squared(pred, actual);
    rep.count = pred.size();
    std::size_t over = 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] > actual[i]) ++over;
        if (std::round(pred[i]) == actual[i]) ++hits;
    }
    rep.overshoot_rate = static_cast<double>(over) / static_cast<double>(pred.size());
    rep.accuracy = static_cast<double>(hits) / static_cast<double>(pred.size());
    return rep;
}

}  // namespace gbnn
