#pragma once

// Versioned text formats shared by the pipeline stages.
//
// Ideals file: `#`-prefixed `key: value` header lines, then one ideal per
// line as 2*n*s comma-separated exponents (encode_flat order).
// Labels file: CSV `gb_size,gb_max_degree`, row i describing ideal row i.
// Quarantine file: CSV `index,pairs_processed` for samples that hit the pair budget.
// Features file: CSV with the fixed 7-column feature header.
// Split file: CSV `index`, one row index per line.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gbnn/error.hpp"
#include "gbnn/features.hpp"
#include "gbnn/groebner.hpp"
#include "gbnn/random.hpp"
#include "gbnn/sampler.hpp"

namespace gbnn {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "gbnn 0.1.0";
inline constexpr const char* kLabelsHeader = "gb_size,gb_max_degree";
inline constexpr const char* kQuarantineHeader = "index,pairs_processed";

struct DatasetHeader {
    int format_version = kFormatVersion;
    RandomModel model;
    std::uint64_t count = 0;
    /// "as-given" or "canonical"
    std::string order = "as-given";
    std::string tool = kToolVersion;
};

struct GbLabel {
    std::size_t size = 0;
    int max_degree = 0;

    friend bool operator==(const GbLabel&, const GbLabel&) = default;
};

struct QuarantineEntry {
    std::uint64_t index = 0;
    std::uint64_t pairs_processed = 0;

    friend bool operator==(const QuarantineEntry&, const QuarantineEntry&) = default;
};

struct LabeledDataset {
    DatasetHeader header;
    std::vector<FlatEncoding> encodings;
    std::vector<FeatureVector> features;
    std::vector<GbLabel> labels;
};

namespace io_detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(const std::string& field, std::size_t line, const char* what) {
    T value{};
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty())
        throw ParseError(std::string("invalid ") + what + " '" + field + "'", line);
    return value;
}

inline double parse_double(const std::string& field, std::size_t line) {
    try {
        std::size_t used = 0;
        double v = std::stod(field, &used);
        if (used != field.size()) throw ParseError("invalid number '" + field + "'", line);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("invalid number '" + field + "'", line);
    }
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

/// Reads a CSV whose first line must equal `header`; returns the data rows
/// with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(const std::string& path,
                                                                               std::string_view header) {
    auto in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file", 1);
    ++lineno;
    if (trim(line) != header) throw ParseError(path + ": expected header '" + std::string(header) + "'", lineno);
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        rows.emplace_back(lineno, split_csv(line));
    }
    return rows;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Ideals

inline void write_ideals_stream(std::ostream& out, const DatasetHeader& header,
                                const std::vector<IdealSample>& samples, bool canonical = false) {
    out << "# format: gbnn-ideals\n";
    out << "# format_version: " << header.format_version << "\n";
    out << "# n: " << header.model.n << "\n";
    out << "# d: " << header.model.d << "\n";
    out << "# s: " << header.model.s << "\n";
    out << "# mode: " << to_string(header.model.mode) << "\n";
    out << "# seed: " << header.model.seed << "\n";
    out << "# count: " << samples.size() << "\n";
    out << "# order: " << (canonical ? "canonical" : header.order) << "\n";
    out << "# tool: " << header.tool << "\n";
    for (const auto& s : samples) {
        if (s.model.n != header.model.n || s.gens.size() != header.model.s)
            throw DimensionError("write_ideals: sample shape differs from header model");
        const FlatEncoding enc = encode_flat(s, canonical);
        for (std::size_t i = 0; i < enc.values.size(); ++i) {
            if (i) out << ',';
            out << enc.values[i];
        }
        out << '\n';
    }
}

inline void write_ideals(const std::vector<IdealSample>& samples, const DatasetHeader& header,
                         const std::string& path, bool canonical = false) {
    auto out = io_detail::open_out(path);
    write_ideals_stream(out, header, samples, canonical);
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct IdealsFile {
    DatasetHeader header;
    std::vector<IdealSample> samples;
};

inline IdealsFile read_ideals_stream(std::istream& in, const std::string& name = "<stream>") {
    IdealsFile file;
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::pair<std::size_t, std::string>> data;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = io_detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            if (!data.empty()) throw ParseError(name + ": header line after data", lineno);
            const auto colon = t.find(':');
            if (colon == std::string::npos) continue;
            kv[io_detail::trim(std::string_view(t).substr(1, colon - 1))] = io_detail::trim(std::string_view(t).substr(colon + 1));
            continue;
        }
        data.emplace_back(lineno, t);
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ParseError(name + ": missing header field '" + key + "'", 0);
        return it->second;
    };
    if (need("format") != "gbnn-ideals") throw ParseError(name + ": not a gbnn ideals file", 1);
    auto& h = file.header;
    h.format_version = io_detail::parse_number<int>(need("format_version"), 0, "format_version");
    if (h.format_version != kFormatVersion)
        throw ParseError(name + ": unsupported format_version " + std::to_string(h.format_version), 0);
    h.model.n = io_detail::parse_number<std::size_t>(need("n"), 0, "n");
    h.model.d = io_detail::parse_number<int>(need("d"), 0, "d");
    h.model.s = io_detail::parse_number<std::size_t>(need("s"), 0, "s");
    try {
        h.model.mode = parse_degree_mode(need("mode"));
        h.model.validate();
    } catch (const ArgumentError& e) {
        throw ParseError(name + ": " + e.what(), 0);
    }
    h.model.seed = io_detail::parse_number<std::uint64_t>(need("seed"), 0, "seed");
    h.count = io_detail::parse_number<std::uint64_t>(need("count"), 0, "count");
    if (kv.count("order")) h.order = kv["order"];
    if (kv.count("tool")) h.tool = kv["tool"];

    const std::size_t width = 2 * h.model.n * h.model.s;
    file.samples.reserve(data.size());
    for (const auto& [ln, text] : data) {
        const auto fields = io_detail::split_csv(text);
        if (fields.size() != width)
            throw ParseError(name + ": expected " + std::to_string(width) + " values, found " +
                                 std::to_string(fields.size()),
                             ln);
        std::vector<int> values(width);
        for (std::size_t i = 0; i < width; ++i) {
            values[i] = io_detail::parse_number<int>(fields[i], ln, "exponent");
            if (values[i] < 0) throw ParseError(name + ": negative exponent", ln);
        }
        try {
            file.samples.push_back(decode_flat(values, h.model, file.samples.size()));
        } catch (const MalformedEncoding& e) {
            throw ParseError(name + ": " + e.what(), ln);
        }
    }
    if (file.samples.size() != h.count)
        throw ParseError(name + ": header count " + std::to_string(h.count) + " but " +
                             std::to_string(file.samples.size()) + " data lines",
                         lineno);
    return file;
}

inline IdealsFile read_ideals(const std::string& path) {
    auto in = io_detail::open_in(path);
    return read_ideals_stream(in, path);
}

// ---------------------------------------------------------------------------
// Labels and quarantine

inline void write_labels(const std::vector<GbLabel>& labels, const std::string& path) {
    auto out = io_detail::open_out(path);
    out << kLabelsHeader << '\n';
    for (const auto& l : labels) out << l.size << ',' << l.max_degree << '\n';
}

inline GbLabel label_of(const GroebnerResult& r) { return {r.cardinality, r.max_total_degree}; }

inline void write_labels(const std::vector<GroebnerResult>& results, const std::string& path) {
    std::vector<GbLabel> labels;
    labels.reserve(results.size());
    for (const auto& r : results) labels.push_back(label_of(r));
    write_labels(labels, path);
}

inline std::vector<GbLabel> read_labels(const std::string& path) {
    std::vector<GbLabel> labels;
    for (const auto& [ln, f] : io_detail::read_csv(path, kLabelsHeader)) {
        if (f.size() != 2) throw ParseError(path + ": expected 2 fields", ln);
        GbLabel l{io_detail::parse_number<std::size_t>(f[0], ln, "gb_size"),
                  io_detail::parse_number<int>(f[1], ln, "gb_max_degree")};
        if (l.size == 0 || l.max_degree < 0) throw ParseError(path + ": invalid label", ln);
        labels.push_back(l);
    }
    return labels;
}

inline void write_quarantine(const std::vector<QuarantineEntry>& entries, const std::string& path) {
    auto out = io_detail::open_out(path);
    out << kQuarantineHeader << '\n';
    for (const auto& q : entries) out << q.index << ',' << q.pairs_processed << '\n';
}

inline std::vector<QuarantineEntry> read_quarantine(const std::string& path) {
    std::vector<QuarantineEntry> entries;
    for (const auto& [ln, f] : io_detail::read_csv(path, kQuarantineHeader)) {
        if (f.size() != 2) throw ParseError(path + ": expected 2 fields", ln);
        entries.push_back({io_detail::parse_number<std::uint64_t>(f[0], ln, "index"),
                           io_detail::parse_number<std::uint64_t>(f[1], ln, "pairs_processed")});
    }
    return entries;
}

// ---------------------------------------------------------------------------
// Features

inline void write_features(const std::vector<FeatureVector>& rows, const std::string& path) {
    auto out = io_detail::open_out(path);
    out << kFeatureHeader << '\n';
    for (const auto& f : rows) {
        out << f.min_deg << ',' << f.max_deg << ',' << io_detail::format_double(f.mean_deg) << ','
            << io_detail::format_double(f.var_deg) << ',' << f.num_gens << ',' << f.dim << ',' << f.degree << '\n';
    }
}

inline std::vector<FeatureVector> read_features(const std::string& path) {
    std::vector<FeatureVector> rows;
    for (const auto& [ln, f] : io_detail::read_csv(path, kFeatureHeader)) {
        if (f.size() != 7) throw ParseError(path + ": expected 7 fields", ln);
        FeatureVector v;
        v.min_deg = io_detail::parse_number<int>(f[0], ln, "min_deg");
        v.max_deg = io_detail::parse_number<int>(f[1], ln, "max_deg");
        v.mean_deg = io_detail::parse_double(f[2], ln);
        v.var_deg = io_detail::parse_double(f[3], ln);
        v.num_gens = io_detail::parse_number<std::size_t>(f[4], ln, "num_gens");
        v.dim = io_detail::parse_number<int>(f[5], ln, "dim");
        v.degree = io_detail::parse_number<std::int64_t>(f[6], ln, "degree");
        rows.push_back(v);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Splits

struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded Fisher-Yates shuffle of 0..rows-1; the first round(test_fraction * rows)
/// shuffled indices form the test part, the rest the training part.
inline DatasetSplit split_dataset(std::size_t rows, double test_fraction, std::uint64_t seed) {
    if (rows == 0) throw ArgumentError("split_dataset: empty dataset");
    if (!(test_fraction >= 0 && test_fraction < 1)) throw ArgumentError("split_dataset: test_fraction must be in [0,1)");
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng = SplitMix64::stream(seed, 0);
    for (std::size_t i = rows; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(rows)));
    DatasetSplit split;
    split.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    return split;
}

inline void write_indices(const std::vector<std::size_t>& idx, const std::string& path) {
    auto out = io_detail::open_out(path);
    out << "index\n";
    for (auto i : idx) out << i << '\n';
}

inline std::vector<std::size_t> read_indices(const std::string& path) {
    std::vector<std::size_t> idx;
    for (const auto& [ln, f] : io_detail::read_csv(path, "index")) {
        if (f.size() != 1) throw ParseError(path + ": expected 1 field", ln);
        idx.push_back(io_detail::parse_number<std::size_t>(f[0], ln, "index"));
    }
    return idx;
}

}  // namespace gbnn
