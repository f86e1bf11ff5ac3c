#pragma once

// Model file: `#`-prefixed `key: value` header (format version, model kind,
// config echo, seed, pipeline metadata), then per-tensor blocks
//
//   tensor <name> <rows> <cols>
//   <rows lines of cols space-separated %.17g values>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gbnn/error.hpp"
#include "gbnn/learning/linear.hpp"
#include "gbnn/learning/network.hpp"

namespace gbnn {

inline constexpr int kModelFormatVersion = 1;

struct NamedTensor {
    std::string name;
    Eigen::MatrixXd value;
};

struct ModelFile {
    std::map<std::string, std::string> header;  // "kind", "seed", ...
    std::vector<NamedTensor> tensors;

    const std::string& get(const std::string& key) const {
        auto it = header.find(key);
        if (it == header.end()) throw ParseError("model file: missing header field '" + key + "'");
        return it->second;
    }

    const Eigen::MatrixXd& tensor(const std::string& name) const {
        for (const auto& t : tensors)
            if (t.name == name) return t.value;
        throw ParseError("model file: missing tensor '" + name + "'");
    }
};

inline void write_model_file(const ModelFile& file, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# format: gbnn-model\n";
    out << "# format_version: " << kModelFormatVersion << "\n";
    for (const auto& [k, v] : file.header) out << "# " << k << ": " << v << "\n";
    char buf[32];
    for (const auto& t : file.tensors) {
        out << "tensor " << t.name << ' ' << t.value.rows() << ' ' << t.value.cols() << '\n';
        for (Eigen::Index i = 0; i < t.value.rows(); ++i) {
            for (Eigen::Index j = 0; j < t.value.cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", t.value(i, j));
                if (j) out << ' ';
                out << buf;
            }
            out << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline ModelFile read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    ModelFile file;
    std::string line;
    std::size_t lineno = 0;
    bool saw_format = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            std::string val = line.substr(colon + 1);
            key.erase(0, key.find_first_not_of(' '));
            key.erase(key.find_last_not_of(' ') + 1);
            val.erase(0, val.find_first_not_of(' '));
            if (key == "format") {
                if (val != "gbnn-model") throw ParseError(path + ": not a gbnn model file", lineno);
                saw_format = true;
            } else if (key == "format_version") {
                if (val != std::to_string(kModelFormatVersion))
                    throw ParseError(path + ": unsupported model format_version " + val, lineno);
            } else {
                file.header[key] = val;
            }
            continue;
        }
        std::istringstream hs(line);
        std::string word, name;
        Eigen::Index rows = -1, cols = -1;
        if (!(hs >> word >> name >> rows >> cols) || word != "tensor" || rows < 0 || cols < 0)
            throw ParseError(path + ": expected tensor block header", lineno);
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (!std::getline(in, line)) throw ParseError(path + ": truncated tensor " + name, lineno);
            ++lineno;
            std::istringstream rs(line);
            for (Eigen::Index j = 0; j < cols; ++j) {
                std::string tok;
                if (!(rs >> tok)) throw ParseError(path + ": short tensor row in " + name, lineno);
                try {
                    m(i, j) = std::stod(tok);
                } catch (const std::logic_error&) {
                    throw ParseError(path + ": invalid value '" + tok + "'", lineno);
                }
            }
        }
        file.tensors.push_back({name, std::move(m)});
    }
    if (!saw_format) throw ParseError(path + ": missing format header", 1);
    return file;
}

inline std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoull(tok));
    return out;
}

inline void put_config(ModelFile& file, const NetworkConfig& c) {
    char buf[32];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    file.header["input_rows"] = std::to_string(c.input_rows);
    file.header["input_cols"] = std::to_string(c.input_cols);
    file.header["conv_filters"] = std::to_string(c.conv_filters);
    file.header["dense_sizes"] = join_sizes(c.dense_sizes);
    file.header["dropout_rate"] = num(c.dropout_rate);
    file.header["input_scale"] = num(c.input_scale);
    file.header["learning_rate"] = num(c.learning_rate);
    file.header["batch_size"] = std::to_string(c.batch_size);
    file.header["epochs"] = std::to_string(c.epochs);
    file.header["validation_fraction"] = num(c.validation_fraction);
    file.header["seed"] = std::to_string(c.seed);
}

inline NetworkConfig get_config(const ModelFile& file) {
    NetworkConfig c;
    try {
        c.input_rows = std::stoull(file.get("input_rows"));
        c.input_cols = std::stoull(file.get("input_cols"));
        c.conv_filters = std::stoull(file.get("conv_filters"));
        c.dense_sizes = parse_sizes(file.get("dense_sizes"));
        c.dropout_rate = std::stod(file.get("dropout_rate"));
        c.input_scale = std::stod(file.get("input_scale"));
        c.learning_rate = std::stod(file.get("learning_rate"));
        c.batch_size = std::stoull(file.get("batch_size"));
        c.epochs = std::stoull(file.get("epochs"));
        c.validation_fraction = std::stod(file.get("validation_fraction"));
        c.seed = std::stoull(file.get("seed"));
    } catch (const std::logic_error& e) {
        throw ParseError(std::string("model file: bad config value: ") + e.what());
    }
    return c;
}

inline ModelFile to_model_file(const NeuralNet& net) {
    ModelFile file;
    file.header["kind"] = "nn";
    put_config(file, net.config);
    net.params.for_each([&](const std::string& name, const Eigen::MatrixXd& m) { file.tensors.push_back({name, m}); });
    return file;
}

inline NeuralNet neural_net_from(const ModelFile& file) {
    if (file.get("kind") != "nn") throw ParseError("model file: kind is not nn");
    NetworkConfig c = get_config(file);
    NeuralNet net = nn_init(c).first;
    net.params.for_each([&](const std::string& name, Eigen::MatrixXd& m) {
        const Eigen::MatrixXd& t = file.tensor(name);
        if (t.rows() != m.rows() || t.cols() != m.cols())
            throw DimensionError("model file: tensor " + name + " has the wrong shape");
        m = t;
    });
    return net;
}

inline ModelFile to_model_file(const LinearModel& model) {
    ModelFile file;
    file.header["kind"] = "linreg";
    file.tensors.push_back({"weights", model.weights});
    file.tensors.push_back({"bias", Eigen::MatrixXd::Constant(1, 1, model.bias)});
    return file;
}

inline LinearModel linear_model_from(const ModelFile& file) {
    if (file.get("kind") != "linreg") throw ParseError("model file: kind is not linreg");
    LinearModel m;
    const auto& w = file.tensor("weights");
    if (w.cols() != 1) throw DimensionError("model file: weights must be a column");
    m.weights = w.col(0);
    m.bias = file.tensor("bias")(0, 0);
    return m;
}

}  // namespace gbnn
