#include "rfrules/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace rfrules {

namespace {

bool parse_finite_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

std::string format_numeric(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back = 0.0;
        if (parse_finite_double(probe, back) && back == v) return probe;
    }
    return buf;
}

}  // namespace

Dataset::Dataset(std::vector<Column> columns, std::vector<std::string> class_names)
    : columns_(std::move(columns)), class_names_(std::move(class_names)) {}

void Dataset::add_row(Instance values, ClassId label, double weight) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("row arity does not match column count");
    if (label < 0 || static_cast<std::size_t>(label) >= class_names_.size())
        throw std::invalid_argument("label out of range");
    if (weight < 0.0) throw std::invalid_argument("negative instance weight");
    rows_.push_back(std::move(values));
    labels_.push_back(label);
    weights_.push_back(weight);
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_names_.size(), 0);
    for (ClassId c : labels_) counts[static_cast<std::size_t>(c)]++;
    return counts;
}

std::vector<double> Dataset::class_priors() const {
    std::vector<double> priors(class_names_.size(), 0.0);
    if (labels_.empty()) return priors;
    for (ClassId c : labels_) priors[static_cast<std::size_t>(c)] += 1.0;
    for (double& p : priors) p /= static_cast<double>(labels_.size());
    return priors;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
    Dataset out(columns_, class_names_);
    for (std::size_t i : indices) {
        if (i >= rows_.size()) throw std::invalid_argument("subset index out of range");
        out.add_row(rows_[i], labels_[i], weights_[i]);
    }
    return out;
}

void Dataset::validate() const {
    if (rows_.empty()) throw std::invalid_argument("dataset has no rows");
    if (rows_.size() != labels_.size() || rows_.size() != weights_.size())
        throw std::invalid_argument("rows/labels/weights length mismatch");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].size() != columns_.size())
            throw std::invalid_argument("row " + std::to_string(i) + " has wrong arity");
        if (weights_[i] < 0.0)
            throw std::invalid_argument("row " + std::to_string(i) + " has negative weight");
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (columns_[c].kind == ColumnKind::Categorical) {
                const double v = rows_[i][c];
                if (v < 0.0 || v != std::floor(v) ||
                    static_cast<std::size_t>(v) >= columns_[c].categories.size())
                    throw std::invalid_argument("row " + std::to_string(i) + ", column " +
                                                columns_[c].name + ": invalid category index");
            }
        }
        const ClassId lbl = labels_[i];
        if (lbl < 0 || static_cast<std::size_t>(lbl) >= class_names_.size())
            throw std::invalid_argument("row " + std::to_string(i) + ": label out of range");
    }
}

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);
    if (header.size() < 2)
        throw std::runtime_error(path + ": need at least one feature column and a label column");

    std::size_t label_idx = header.size() - 1;
    if (label_column) {
        const auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end())
            throw std::runtime_error(path + ": no column named '" + *label_column + "'");
        label_idx = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::vector<std::string>> cells;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;  // trailing newline
        std::vector<std::string> row = split_line(line);
        if (row.size() != header.size())
            throw std::runtime_error(path + ": row " + std::to_string(line_no) + " has " +
                                     std::to_string(row.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c].empty())
                throw std::runtime_error(path + ": missing value at row " + std::to_string(line_no) +
                                         ", column '" + header[c] + "'");
        }
        cells.push_back(std::move(row));
    }
    if (cells.empty()) throw std::runtime_error(path + ": no data rows");

    // Column kind detection: numeric iff every cell parses as a finite real.
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_idx) feature_cols.push_back(c);

    std::vector<Column> columns;
    columns.reserve(feature_cols.size());
    for (std::size_t c : feature_cols) {
        Column col;
        col.name = header[c];
        col.kind = ColumnKind::Numeric;
        for (const auto& row : cells) {
            double v;
            if (!parse_finite_double(row[c], v)) {
                col.kind = ColumnKind::Categorical;
                break;
            }
        }
        columns.push_back(std::move(col));
    }

    // First-appearance mapping for categories and class labels.
    std::vector<std::unordered_map<std::string, int>> cat_index(columns.size());
    std::unordered_map<std::string, ClassId> label_index;
    std::vector<std::string> class_names;
    std::vector<Instance> values(cells.size(), Instance(columns.size()));
    std::vector<ClassId> labels(cells.size());
    for (std::size_t r = 0; r < cells.size(); ++r) {
        const auto& row = cells[r];
        for (std::size_t f = 0; f < feature_cols.size(); ++f) {
            const std::string& cell = row[feature_cols[f]];
            if (columns[f].kind == ColumnKind::Numeric) {
                parse_finite_double(cell, values[r][f]);
            } else {
                auto [it, inserted] =
                    cat_index[f].emplace(cell, static_cast<int>(cat_index[f].size()));
                if (inserted) columns[f].categories.push_back(cell);
                values[r][f] = static_cast<double>(it->second);
            }
        }
        const std::string& lbl = row[label_idx];
        auto [it, inserted] = label_index.emplace(lbl, static_cast<ClassId>(class_names.size()));
        if (inserted) class_names.push_back(lbl);
        labels[r] = it->second;
    }
    if (class_names.size() < 2)
        throw std::runtime_error(path + ": label column '" + header[label_idx] +
                                 "' has a single distinct value");

    Dataset data(std::move(columns), std::move(class_names));
    for (std::size_t r = 0; r < cells.size(); ++r)
        data.add_row(std::move(values[r]), labels[r], 1.0);
    return data;
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (const auto& col : data.columns()) out << col.name << ',';
    out << "class\n";
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const Instance& row = data.row(i);
        for (std::size_t c = 0; c < data.n_cols(); ++c) {
            const Column& col = data.column(c);
            if (col.kind == ColumnKind::Numeric)
                out << format_numeric(row[c]);
            else
                out << col.categories[static_cast<std::size_t>(row[c])];
            out << ',';
        }
        out << data.class_names()[static_cast<std::size_t>(data.label(i))] << '\n';
    }
}

std::vector<FoldSplit> stratified_kfold(const Dataset& data, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (static_cast<std::size_t>(k) > data.n_rows())
        throw std::invalid_argument("k exceeds the number of rows");

    const std::size_t n = data.n_rows();
    const auto counts = data.class_counts();
    const bool stratify = std::all_of(counts.begin(), counts.end(), [&](std::size_t c) {
        return c >= static_cast<std::size_t>(k);
    });
    if (!stratify)
        std::cerr << "warning: some class has fewer than " << k
                  << " members; falling back to plain shuffled folds\n";

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> fold_members(static_cast<std::size_t>(k));
    if (stratify) {
        // Deal each class round-robin, rotating the starting fold by the
        // remainders of the previous classes so fold sizes stay within +-1.
        std::size_t offset = 0;
        for (std::size_t cls = 0; cls < counts.size(); ++cls) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i)
                if (static_cast<std::size_t>(data.label(i)) == cls) members.push_back(i);
            rng.shuffle(members);
            for (std::size_t j = 0; j < members.size(); ++j)
                fold_members[(offset + j) % static_cast<std::size_t>(k)].push_back(members[j]);
            offset = (offset + members.size()) % static_cast<std::size_t>(k);
        }
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        for (std::size_t j = 0; j < n; ++j)
            fold_members[j % static_cast<std::size_t>(k)].push_back(order[j]);
    }

    std::vector<FoldSplit> folds;
    folds.reserve(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
        FoldSplit split;
        split.fold_index = f;
        split.test_indices = fold_members[static_cast<std::size_t>(f)];
        std::sort(split.test_indices.begin(), split.test_indices.end());
        std::vector<bool> in_test(n, false);
        for (std::size_t i : split.test_indices) in_test[i] = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!in_test[i]) split.train_indices.push_back(i);
        split.train = data.subset(split.train_indices);
        split.test = data.subset(split.test_indices);
        folds.push_back(std::move(split));
    }
    return folds;
}

Dataset bootstrap_sample(const Dataset& data, Rng& rng) {
    if (data.n_rows() == 0) throw std::invalid_argument("cannot bootstrap an empty dataset");
    const std::size_t n = data.n_rows();
    std::vector<std::size_t> picks(n);
    for (std::size_t i = 0; i < n; ++i) picks[i] = static_cast<std::size_t>(rng.next_below(n));
    return data.subset(picks);
}

Dataset generate_synthetic(int n_red, int n_blue, double noise_sd, std::uint64_t seed) {
    if (n_red < 1 || n_blue < 1) throw std::invalid_argument("need at least one point per class");
    if (noise_sd < 0.0) throw std::invalid_argument("noise_sd must be non-negative");

    std::vector<Column> columns{{"x", ColumnKind::Numeric, {}}, {"y", ColumnKind::Numeric, {}}};
    Dataset data(std::move(columns), {"red", "blue"});

    Rng rng(seed);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // Segments of y = x -+ 0.2 inside the unit square; perpendicular
    // direction to both is (1, -1)/sqrt(2).
    const auto emit = [&](double x0, double y0, double x1, double y1, ClassId cls, int count) {
        for (int i = 0; i < count; ++i) {
            const double t = rng.next_unit();
            const double off = rng.next_normal(0.0, noise_sd);
            double x = x0 + t * (x1 - x0) + off * inv_sqrt2;
            double y = y0 + t * (y1 - y0) - off * inv_sqrt2;
            x = std::clamp(x, 0.0, 1.0);
            y = std::clamp(y, 0.0, 1.0);
            data.add_row({x, y}, cls, 1.0);
        }
    };
    emit(0.2, 0.0, 1.0, 0.8, 0, n_red);   // red: y = x - 0.2
    emit(0.0, 0.2, 0.8, 1.0, 1, n_blue);  // blue: y = x + 0.2
    return data;
}

Dataset align_to_schema(const Dataset& data, const Schema& schema) {
    if (data.n_cols() != schema.columns.size())
        throw std::invalid_argument("column count differs from the schema");
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (data.column(c).name != schema.columns[c].name ||
            data.column(c).kind != schema.columns[c].kind)
            throw std::invalid_argument("column '" + data.column(c).name +
                                        "' does not match the schema");
    }

    std::vector<Column> columns = schema.columns;
    std::vector<std::string> class_names = schema.class_names;

    std::vector<std::unordered_map<std::string, int>> cat_index(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::size_t v = 0; v < columns[c].categories.size(); ++v)
            cat_index[c].emplace(columns[c].categories[v], static_cast<int>(v));
    std::unordered_map<std::string, ClassId> label_index;
    for (std::size_t v = 0; v < class_names.size(); ++v)
        label_index.emplace(class_names[v], static_cast<ClassId>(v));

    std::vector<Instance> remapped;
    std::vector<ClassId> labels;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        Instance values = data.row(i);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].kind != ColumnKind::Categorical) continue;
            const std::string& name =
                data.column(c).categories[static_cast<std::size_t>(values[c])];
            auto [it, inserted] = cat_index[c].emplace(name, static_cast<int>(cat_index[c].size()));
            if (inserted) columns[c].categories.push_back(name);
            values[c] = static_cast<double>(it->second);
        }
        const std::string& lbl = data.class_names()[static_cast<std::size_t>(data.label(i))];
        auto [it, inserted] = label_index.emplace(lbl, static_cast<ClassId>(label_index.size()));
        if (inserted) class_names.push_back(lbl);
        remapped.push_back(std::move(values));
        labels.push_back(it->second);
    }

    Dataset out(std::move(columns), std::move(class_names));
    for (std::size_t i = 0; i < remapped.size(); ++i)
        out.add_row(std::move(remapped[i]), labels[i], data.weight(i));
    return out;
}

}  // namespace rfrules
