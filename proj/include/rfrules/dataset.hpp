#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfrules/rng.hpp"

namespace rfrules {

using ClassId = int;

enum class ColumnKind { Numeric, Categorical };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<std::string> categories;  // categorical only; value = index into this list
};

/// One row of feature values. Numeric columns hold the value itself,
/// categorical columns hold the category index (stored exactly in a double).
using Instance = std::vector<double>;

/// Column layout and class vocabulary shared by datasets, forests and rule
/// sets trained on the same data.
struct Schema {
    std::vector<Column> columns;
    std::vector<std::string> class_names;
};

/// In-memory tabular classification dataset. Immutable once built; all
/// operations below return new datasets.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Column> columns, std::vector<std::string> class_names);

    void add_row(Instance values, ClassId label, double weight = 1.0);

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return columns_.size(); }
    std::size_t n_classes() const { return class_names_.size(); }

    const std::vector<Column>& columns() const { return columns_; }
    const Column& column(std::size_t i) const { return columns_.at(i); }
    const std::vector<std::string>& class_names() const { return class_names_; }

    const Instance& row(std::size_t i) const { return rows_[i]; }
    ClassId label(std::size_t i) const { return labels_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<ClassId>& labels() const { return labels_; }
    const std::vector<double>& weights() const { return weights_; }

    Schema schema() const { return Schema{columns_, class_names_}; }

    /// Unweighted per-class frequencies (sum to 1 for non-empty data).
    std::vector<double> class_priors() const;
    std::vector<std::size_t> class_counts() const;

    /// New dataset holding the given rows, in the given order.
    Dataset subset(const std::vector<std::size_t>& indices) const;

    /// Checks the structural invariants; throws std::invalid_argument on
    /// violation. Cheap enough to call after construction in tests.
    void validate() const;

private:
    std::vector<Column> columns_;
    std::vector<std::string> class_names_;
    std::vector<Instance> rows_;
    std::vector<ClassId> labels_;
    std::vector<double> weights_;
};

struct FoldSplit {
    Dataset train;
    Dataset test;
    int fold_index = 0;
    std::vector<std::size_t> train_indices;  // into the source dataset
    std::vector<std::size_t> test_indices;
};

/// Loads a comma-separated file with a mandatory header row. A column is
/// numeric when every cell in it parses as a finite real, otherwise
/// categorical; categories and class labels are mapped to indices in
/// first-appearance order. Empty cells are rejected with their coordinates.
/// The label column is chosen by name, or the last column when unset.
Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& label_column = std::nullopt);

/// Writes the dataset in the same format load_csv reads (label column last).
void write_csv(const Dataset& data, const std::string& path);

/// Stratified k-fold split, deterministic for a fixed seed. Falls back to
/// plain shuffled folds (with a warning on stderr) when some class has fewer
/// than k members. The k test sets partition the row indices.
std::vector<FoldSplit> stratified_kfold(const Dataset& data, int k, std::uint64_t seed);

/// n_rows draws uniformly with replacement; weights copied from the source.
Dataset bootstrap_sample(const Dataset& data, Rng& rng);

/// Two-class 2-D dataset: `red` points scattered around the segment
/// y = x - 0.2 and `blue` around y = x + 0.2 (Gaussian noise perpendicular
/// to the line, sd = noise_sd), clipped to the unit square. The implied
/// decision boundary is the diagonal y = x.
Dataset generate_synthetic(int n_red, int n_blue, double noise_sd, std::uint64_t seed);

/// Remaps categorical values and labels of `data` onto the index space of
/// `schema` by name, so that models trained under `schema` can be applied.
/// Categories or classes unseen at training time are appended behind the
/// schema's own. Column names, kinds and order must match.
Dataset align_to_schema(const Dataset& data, const Schema& schema);

}  // namespace rfrules
