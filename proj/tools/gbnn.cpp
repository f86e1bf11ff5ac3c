#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gbnn/cli/commands.hpp"

using namespace gbnn;
using namespace gbnn::cli;

namespace {

void add_data_source(CLI::App* cmd, DataSource& src, std::string& target, bool with_target) {
    cmd->add_option("--ideals", src.ideals, "Ideals (or encoded ideals) file");
    cmd->add_option("--features", src.features, "Features CSV");
    cmd->add_option("--labels", src.labels, "Labels CSV")->required();
    cmd->add_option("--quarantine", src.quarantine, "Quarantine CSV; listed ideal rows are skipped");
    if (with_target)
        cmd->add_option("--target", target, "size | maxdeg")->check(CLI::IsMember({"size", "maxdeg"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random binomial ideals, reduced Groebner basis labels, and regression models"};
    app.set_config("--config", "", "key=value file with default flag values (flags win)");
    app.require_subcommand(1);

    std::size_t workers = default_workers();
    std::optional<std::uint64_t> max_pairs = kDefaultMaxPairs;
    std::uint64_t max_pairs_flag = kDefaultMaxPairs;

    // generate
    GenerateOptions gen;
    std::string mode = "exact";
    auto* generate = app.add_subcommand("generate", "Sample random binomial ideals");
    generate->add_option("--n", gen.model.n, "Number of variables")->required();
    generate->add_option("--d", gen.model.d, "Degree bound")->required();
    generate->add_option("--s", gen.model.s, "Generators per ideal")->required();
    generate->add_option("--mode", mode, "exact | upto")->check(CLI::IsMember({"exact", "upto"}));
    generate->add_option("--count", gen.count, "Number of ideals")->required();
    generate->add_option("--seed", gen.model.seed, "RNG seed")->required();
    generate->add_option("--out", gen.out, "Output ideals file")->required();
    generate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    // label
    LabelOptions lab;
    auto* label = app.add_subcommand("label", "Compute reduced Groebner basis size and max degree per ideal");
    label->add_option("--ideals", lab.ideals)->required();
    label->add_option("--out", lab.out, "Labels CSV")->required();
    label->add_option("--quarantine", lab.quarantine, "CSV of budget-exceeded rows");
    label->add_option("--workers", workers)->check(CLI::PositiveNumber);
    label->add_option("--max-pairs", max_pairs_flag, "S-pair budget per ideal (0 = unlimited)");

    // features
    FeaturesOptions feat;
    auto* features = app.add_subcommand("features", "Degree statistics, dimension and degree per ideal");
    features->add_option("--ideals", feat.ideals)->required();
    features->add_option("--out", feat.out, "Features CSV")->required();
    features->add_option("--quarantine", feat.quarantine);
    features->add_option("--workers", workers)->check(CLI::PositiveNumber);
    features->add_option("--max-pairs", max_pairs_flag, "S-pair budget per ideal (0 = unlimited)");

    // encode
    EncodeOptions enc;
    bool as_given = false;
    auto* encode = app.add_subcommand("encode", "Rewrite ideals in canonical generator order");
    encode->add_option("--ideals", enc.ideals)->required();
    encode->add_option("--out", enc.out)->required();
    encode->add_flag("--as-given", as_given, "Keep the stored generator order");

    // split
    SplitOptions spl;
    std::string split_ideals;
    auto* split = app.add_subcommand("split", "Seeded train/test partition of row indices");
    split->add_option("--ideals", split_ideals, "Take the row count from an ideals file");
    split->add_option("--rows", spl.rows, "Row count");
    split->add_option("--test-fraction", spl.test_fraction)->check(CLI::Range(0.0, 1.0));
    split->add_option("--seed", spl.seed)->required();
    split->add_option("--train-out", spl.train_out)->required();
    split->add_option("--test-out", spl.test_out)->required();

    // train
    TrainOptions tr;
    std::string train_target = "size";
    std::uint64_t split_seed = 0;
    std::string dense = "500,500";
    bool no_normalize = false;
    bool train_as_given = false;
    auto* train_cmd = app.add_subcommand("train", "Fit a model on the 80% split and report test metrics");
    add_data_source(train_cmd, tr.data, train_target, true);
    train_cmd->add_option("--model", tr.model_kind, "nn | linreg | mean")->check(CLI::IsMember({"nn", "linreg", "mean"}));
    train_cmd->add_option("--out", tr.out, "Model file")->required();
    train_cmd->add_option("--report", tr.report, "Report CSV");
    train_cmd->add_option("--curve", tr.curve, "Training curve CSV (nn)");
    train_cmd->add_option("--seed", tr.net.seed, "Training seed")->required();
    auto* split_seed_opt = train_cmd->add_option("--split-seed", split_seed, "Train/test split seed (default: --seed)");
    train_cmd->add_option("--test-fraction", tr.test_fraction)->check(CLI::Range(0.0, 1.0));
    train_cmd->add_option("--epochs", tr.net.epochs)->check(CLI::PositiveNumber);
    train_cmd->add_option("--batch-size", tr.net.batch_size)->check(CLI::PositiveNumber);
    train_cmd->add_option("--lr", tr.net.learning_rate);
    train_cmd->add_option("--dropout", tr.net.dropout_rate)->check(CLI::Range(0.0, 0.999));
    train_cmd->add_option("--filters", tr.net.conv_filters, "Conv filters (0 disables the conv layer)");
    train_cmd->add_option("--dense", dense, "Comma-separated dense layer sizes");
    train_cmd->add_option("--validation-fraction", tr.net.validation_fraction)->check(CLI::Range(0.0, 0.999));
    train_cmd->add_flag("--no-normalize", no_normalize, "Feed raw exponents instead of exponents / d");
    train_cmd->add_flag("--as-given", train_as_given, "Use stored generator order instead of canonical order");
    train_cmd->add_flag("--verbose", tr.verbose, "Print per-epoch losses");

    // eval
    EvalOptions ev;
    std::string eval_target;
    auto* eval = app.add_subcommand("eval", "Evaluate a model file on the held-out split");
    add_data_source(eval, ev.data, eval_target, false);
    eval->add_option("--model", ev.model, "Model file")->required();
    eval->add_option("--report", ev.report, "Report CSV");
    eval->add_flag("--all", ev.all_rows, "Evaluate on every row instead of the test split");

    // gb
    GbOptions gbo;
    std::uint64_t gb_max_pairs = 0;
    auto* gb = app.add_subcommand("gb", "Print the reduced Groebner basis of one ideal");
    gb->add_option("--ideals", gbo.ideals)->required();
    gb->add_option("--row", gbo.row, "0-based row")->required();
    gb->add_option("--max-pairs", gb_max_pairs, "S-pair budget (0 = unlimited)");
    gb->add_option("--vars", gbo.vars, "Variable names")->delimiter(',');

    // distance
    DistanceOptions dist;
    auto* distance = app.add_subcommand("distance", "Euclidean distance between two encoded ideals");
    distance->add_option("--ideals", dist.ideals)->required();
    distance->add_option("--i", dist.i)->required();
    distance->add_option("--j", dist.j)->required();
    distance->add_flag("--canonical", dist.canonical, "Compare canonical encodings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }

    max_pairs = max_pairs_flag == 0 ? std::nullopt : std::optional<std::uint64_t>(max_pairs_flag);
    try {
        if (*generate) {
            gen.model.mode = parse_degree_mode(mode);
            gen.workers = workers;
            cmd_generate(gen);
        } else if (*label) {
            lab.workers = workers;
            lab.max_pairs = max_pairs;
            const LabelSummary s = cmd_label(lab);
            std::cerr << "labeled " << s.labeled << ", quarantined " << s.quarantined << '\n';
        } else if (*features) {
            feat.workers = workers;
            feat.max_pairs = max_pairs;
            cmd_features(feat);
        } else if (*encode) {
            enc.canonical = !as_given;
            cmd_encode(enc);
        } else if (*split) {
            if (!split_ideals.empty()) spl.rows = read_ideals(split_ideals).samples.size();
            const DatasetSplit s = cmd_split(spl);
            std::cout << "train=" << s.train.size() << " test=" << s.test.size() << '\n';
        } else if (*train_cmd) {
            tr.data.target = parse_target(train_target);
            tr.data.canonical = !train_as_given;
            tr.normalize = !no_normalize;
            tr.net.dense_sizes = parse_sizes(dense);
            if (*split_seed_opt) tr.split_seed = split_seed;
            print_report(std::cout, cmd_train(tr).report);
        } else if (*eval) {
            print_report(std::cout, cmd_eval(ev));
        } else if (*gb) {
            if (gb_max_pairs) gbo.max_pairs = gb_max_pairs;
            cmd_gb(gbo, std::cout);
        } else if (*distance) {
            std::cout.precision(17);
            std::cout << cmd_distance(dist) << '\n';
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudgetExhausted;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kShapeMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
