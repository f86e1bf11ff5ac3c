#pragma once

// Pipeline subcommands behind the `gbnn` tool. Each command takes a plain
// options struct and writes files; the executable only parses flags.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gbnn/dataset_io.hpp"
#include "gbnn/error.hpp"
#include "gbnn/features.hpp"
#include "gbnn/groebner.hpp"
#include "gbnn/learning/linear.hpp"
#include "gbnn/learning/metrics.hpp"
#include "gbnn/learning/model_io.hpp"
#include "gbnn/learning/network.hpp"
#include "gbnn/pipeline.hpp"
#include "gbnn/sampler.hpp"

namespace gbnn::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kParseError = 2,
    kBudgetExhausted = 3,
    kShapeMismatch = 4,
};

inline constexpr std::uint64_t kDefaultMaxPairs = 5'000'000;

/// GBNN_WORKERS, or 1 when unset or invalid.
inline std::size_t default_workers() {
    if (const char* env = std::getenv("GBNN_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
        }
    }
    return 1;
}

inline void require_distinct_paths(const std::vector<std::string>& paths) {
    std::set<std::string> seen;
    for (const auto& p : paths) {
        if (p.empty()) continue;
        if (!seen.insert(p).second) throw ArgumentError("output path used twice: " + p);
    }
}

// ---------------------------------------------------------------------------

struct GenerateOptions {
    RandomModel model;
    std::size_t count = 0;
    std::string out;
    std::size_t workers = 1;
};

inline void cmd_generate(const GenerateOptions& o) {
    auto samples = generate_samples(o.model, o.count, o.workers);
    DatasetHeader h;
    h.model = o.model;
    h.count = o.count;
    write_ideals(samples, h, o.out);
}

struct LabelOptions {
    std::string ideals;
    std::string out;
    std::string quarantine;
    std::size_t workers = 1;
    std::optional<std::uint64_t> max_pairs = kDefaultMaxPairs;
};

struct LabelSummary {
    std::size_t labeled = 0;
    std::size_t quarantined = 0;
};

inline LabelSummary cmd_label(const LabelOptions& o) {
    require_distinct_paths({o.ideals, o.out, o.quarantine});
    const IdealsFile file = read_ideals(o.ideals);
    const LabelOutcome outcome = label_samples(file.samples, o.workers, o.max_pairs);
    write_labels(outcome.labels(), o.out);
    if (!o.quarantine.empty()) write_quarantine(outcome.quarantine, o.quarantine);
    return {file.samples.size() - outcome.quarantine.size(), outcome.quarantine.size()};
}

struct FeaturesOptions {
    std::string ideals;
    std::string out;
    std::string quarantine;
    std::size_t workers = 1;
    std::optional<std::uint64_t> max_pairs = kDefaultMaxPairs;
};

inline void cmd_features(const FeaturesOptions& o) {
    require_distinct_paths({o.ideals, o.out, o.quarantine});
    const IdealsFile file = read_ideals(o.ideals);
    const LabelOutcome outcome = label_samples(file.samples, o.workers, o.max_pairs);
    write_features(features_for(file.samples, outcome, o.workers), o.out);
    if (!o.quarantine.empty()) write_quarantine(outcome.quarantine, o.quarantine);
}

struct EncodeOptions {
    std::string ideals;
    std::string out;
    bool canonical = true;
};

/// Rewrites an ideals file in canonical generator order (or as given).
inline void cmd_encode(const EncodeOptions& o) {
    require_distinct_paths({o.ideals, o.out});
    const IdealsFile file = read_ideals(o.ideals);
    write_ideals(file.samples, file.header, o.out, o.canonical);
}

struct SplitOptions {
    std::size_t rows = 0;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
    std::string train_out;
    std::string test_out;
};

inline DatasetSplit cmd_split(const SplitOptions& o) {
    require_distinct_paths({o.train_out, o.test_out});
    DatasetSplit split = split_dataset(o.rows, o.test_fraction, o.seed);
    write_indices(split.train, o.train_out);
    write_indices(split.test, o.test_out);
    return split;
}

// ---------------------------------------------------------------------------
// Training and evaluation

enum class Target { size, max_degree };
enum class InputKind { ideals, features };

inline Target parse_target(const std::string& s) {
    if (s == "size") return Target::size;
    if (s == "maxdeg") return Target::max_degree;
    throw ArgumentError("unknown target: " + s);
}
inline std::string to_string(Target t) { return t == Target::size ? "size" : "maxdeg"; }
inline std::string to_string(InputKind k) { return k == InputKind::ideals ? "ideals" : "features"; }

/// Column-per-sample design matrix with aligned targets.
struct TrainingData {
    InputKind kind = InputKind::ideals;
    Eigen::MatrixXd inputs;  // D x N
    Eigen::VectorXd targets;
    std::size_t rows = 1;  // input matrix shape for the network
    std::size_t cols = 1;
    int degree_bound = 1;
};

struct DataSource {
    std::string ideals;
    std::string features;
    std::string labels;
    std::string quarantine;
    Target target = Target::size;
    bool canonical = true;
};

inline TrainingData load_training_data(const DataSource& src) {
    if (src.ideals.empty() == src.features.empty())
        throw ArgumentError("exactly one of --ideals or --features is required");
    const std::vector<GbLabel> labels = read_labels(src.labels);
    TrainingData data;
    std::vector<std::vector<double>> columns;
    if (!src.ideals.empty()) {
        data.kind = InputKind::ideals;
        const IdealsFile file = read_ideals(src.ideals);
        std::set<std::uint64_t> skip;
        if (!src.quarantine.empty())
            for (const auto& q : read_quarantine(src.quarantine)) skip.insert(q.index);
        data.rows = file.header.model.s;
        data.cols = 2 * file.header.model.n;
        data.degree_bound = file.header.model.d;
        for (const auto& s : file.samples) {
            if (skip.count(s.index)) continue;
            const FlatEncoding enc = encode_flat(s, src.canonical);
            columns.emplace_back(enc.values.begin(), enc.values.end());
        }
    } else {
        data.kind = InputKind::features;
        for (const auto& f : read_features(src.features)) columns.push_back(f.as_row());
        data.rows = 1;
        data.cols = 7;
    }
    if (columns.size() != labels.size())
        throw DimensionError("inputs have " + std::to_string(columns.size()) + " rows but labels have " +
                             std::to_string(labels.size()));
    if (columns.empty()) throw ArgumentError("no training rows");
    const auto D = static_cast<Eigen::Index>(columns.front().size());
    data.inputs.resize(D, static_cast<Eigen::Index>(columns.size()));
    data.targets.resize(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (Eigen::Index i = 0; i < D; ++i) data.inputs(i, static_cast<Eigen::Index>(j)) = columns[j][i];
        data.targets(static_cast<Eigen::Index>(j)) =
            src.target == Target::size ? static_cast<double>(labels[j].size) : labels[j].max_degree;
    }
    return data;
}

inline Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(idx[j]));
    return out;
}

inline Eigen::VectorXd select_entries(const Eigen::VectorXd& v, const std::vector<std::size_t>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out(static_cast<Eigen::Index>(j)) = v(static_cast<Eigen::Index>(idx[j]));
    return out;
}

/// Predictions of a stored model for the columns of `inputs`.
inline Eigen::VectorXd predict_with(const ModelFile& model, const Eigen::MatrixXd& inputs) {
    const std::string& kind = model.get("kind");
    if (kind == "nn") return nn_predict(neural_net_from(model), inputs);
    if (kind == "linreg") {
        const LinearModel lm = linear_model_from(model);
        if (lm.weights.size() != inputs.rows()) throw DimensionError("linear model width does not match inputs");
        return lm.predict_rows(inputs.transpose());
    }
    if (kind == "mean") return Eigen::VectorXd::Constant(inputs.cols(), model.tensor("mean")(0, 0));
    throw ParseError("model file: unknown kind '" + kind + "'");
}

inline constexpr const char* kReportHeader = "model,input,target,split,count,r_squared,overshoot_rate,accuracy";

inline void write_report(const EvalReport& r, const std::string& model, InputKind kind, Target target,
                         const std::string& split, const std::string& path) {
    auto out = io_detail::open_out(path);
    out << kReportHeader << '\n';
    out << model << ',' << to_string(kind) << ',' << to_string(target) << ',' << split << ',' << r.count << ','
        << io_detail::format_double(r.r_squared) << ',' << io_detail::format_double(r.overshoot_rate) << ','
        << io_detail::format_double(r.accuracy) << '\n';
}

inline void print_report(std::ostream& os, const EvalReport& r) {
    os << "r_squared=" << r.r_squared << " overshoot_rate=" << r.overshoot_rate << " accuracy=" << r.accuracy
       << " count=" << r.count << '\n';
}

struct TrainOptions {
    DataSource data;
    std::string model_kind = "nn";  // nn | linreg | mean
    std::string out;
    std::string report;
    std::string curve;
    double test_fraction = 0.2;
    std::optional<std::uint64_t> split_seed;  // defaults to network seed
    bool normalize = true;
    NetworkConfig net;  // shape fields are overwritten from the data
    bool verbose = false;
};

struct TrainOutcome {
    EvalReport report;
    std::vector<EpochLoss> curve;
};

inline TrainOutcome cmd_train(const TrainOptions& o) {
    require_distinct_paths({o.out, o.report, o.curve, o.data.labels, o.data.ideals, o.data.features});
    const TrainingData data = load_training_data(o.data);
    const std::uint64_t split_seed = o.split_seed.value_or(o.net.seed);
    const DatasetSplit split = split_dataset(static_cast<std::size_t>(data.inputs.cols()), o.test_fraction, split_seed);
    if (split.test.size() < 2) throw ArgumentError("test partition needs at least two rows");
    const Eigen::MatrixXd x_train = select_columns(data.inputs, split.train);
    const Eigen::VectorXd y_train = select_entries(data.targets, split.train);
    const Eigen::MatrixXd x_test = select_columns(data.inputs, split.test);
    const Eigen::VectorXd y_test = select_entries(data.targets, split.test);

    TrainOutcome outcome;
    ModelFile model;
    if (o.model_kind == "nn") {
        NetworkConfig cfg = o.net;
        cfg.input_rows = data.rows;
        cfg.input_cols = data.cols;
        if (data.kind == InputKind::features) cfg.conv_filters = 0;
        cfg.input_scale = (o.normalize && data.kind == InputKind::ideals) ? 1.0 / data.degree_bound : 1.0;
        TrainResult tr = train(cfg, x_train, y_train, [&](const EpochLoss& e) {
            if (o.verbose)
                std::cerr << "epoch " << e.epoch << " train_loss=" << e.train_loss << " val_loss=" << e.val_loss << '\n';
        });
        outcome.curve = tr.curve;
        model = to_model_file(tr.net);
    } else if (o.model_kind == "linreg") {
        model = to_model_file(fit_linear_regression(x_train.transpose(), y_train));
    } else if (o.model_kind == "mean") {
        model.header["kind"] = "mean";
        model.tensors.push_back({"mean", Eigen::MatrixXd::Constant(1, 1, y_train.mean())});
    } else {
        throw ArgumentError("unknown model kind: " + o.model_kind);
    }
    model.header["input"] = to_string(data.kind);
    model.header["target"] = to_string(o.data.target);
    model.header["canonical"] = o.data.canonical ? "1" : "0";
    model.header["test_fraction"] = io_detail::format_double(o.test_fraction);
    model.header["split_seed"] = std::to_string(split_seed);
    model.header["train_rows"] = std::to_string(split.train.size());
    write_model_file(model, o.out);

    const Eigen::VectorXd pred = predict_with(model, x_test);
    outcome.report = evaluate_predictions(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())),
                                          std::span<const double>(y_test.data(), static_cast<std::size_t>(y_test.size())));
    if (!o.report.empty()) write_report(outcome.report, o.model_kind, data.kind, o.data.target, "test", o.report);
    if (!o.curve.empty()) {
        auto out = io_detail::open_out(o.curve);
        out << "epoch,train_loss,val_loss\n";
        for (const auto& e : outcome.curve)
            out << e.epoch << ',' << io_detail::format_double(e.train_loss) << ','
                << io_detail::format_double(e.val_loss) << '\n';
    }
    return outcome;
}

struct EvalOptions {
    std::string model;
    DataSource data;
    std::string report;
    bool all_rows = false;
};

/// Evaluates a stored model on the held-out part of the split recorded in
/// the model header, or on every row with `all_rows`.
inline EvalReport cmd_eval(EvalOptions o) {
    const ModelFile model = read_model_file(o.model);
    o.data.target = parse_target(model.get("target"));
    o.data.canonical = model.get("canonical") == "1";
    const TrainingData data = load_training_data(o.data);
    if (to_string(data.kind) != model.get("input"))
        throw DimensionError("model was trained on " + model.get("input") + " inputs");
    std::vector<std::size_t> idx;
    if (o.all_rows) {
        idx.resize(static_cast<std::size_t>(data.inputs.cols()));
        std::iota(idx.begin(), idx.end(), std::size_t{0});
    } else {
        idx = split_dataset(static_cast<std::size_t>(data.inputs.cols()), std::stod(model.get("test_fraction")),
                            std::stoull(model.get("split_seed")))
                  .test;
    }
    const Eigen::VectorXd pred = predict_with(model, select_columns(data.inputs, idx));
    const Eigen::VectorXd actual = select_entries(data.targets, idx);
    EvalReport rep = evaluate_predictions(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())),
                                          std::span<const double>(actual.data(), static_cast<std::size_t>(actual.size())));
    if (!o.report.empty())
        write_report(rep, model.get("kind"), data.kind, o.data.target, o.all_rows ? "all" : "test", o.report);
    return rep;
}

// ---------------------------------------------------------------------------
// One-off queries

struct GbOptions {
    std::string ideals;
    std::size_t row = 0;
    std::optional<std::uint64_t> max_pairs;
    std::vector<std::string> vars;
};

inline GroebnerResult cmd_gb(const GbOptions& o, std::ostream& os) {
    const IdealsFile file = read_ideals(o.ideals);
    if (o.row >= file.samples.size()) throw ArgumentError("row " + std::to_string(o.row) + " out of range");
    BuchbergerOptions opts;
    opts.max_pairs = o.max_pairs;
    GroebnerResult r = buchberger(file.samples[o.row].polynomials(), opts);
    const auto names = o.vars.empty() ? default_variable_names(file.header.model.n) : o.vars;
    for (const auto& g : r.basis) os << to_string(g, names) << '\n';
    os << "# size: " << r.cardinality << "\n# max_degree: " << r.max_total_degree << "\n# pairs_processed: "
       << r.pairs_processed << "\n# reductions_to_zero: " << r.reductions_to_zero << '\n';
    return r;
}

struct DistanceOptions {
    std::string ideals;
    std::size_t i = 0;
    std::size_t j = 0;
    bool canonical = false;
};

inline double cmd_distance(const DistanceOptions& o) {
    const IdealsFile file = read_ideals(o.ideals);
    if (o.i >= file.samples.size() || o.j >= file.samples.size()) throw ArgumentError("row index out of range");
    return euclidean_distance(encode_flat(file.samples[o.i], o.canonical), encode_flat(file.samples[o.j], o.canonical));
}

}  // namespace gbnn::cli
