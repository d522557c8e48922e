#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rfrules/dataset.hpp"
#include "rfrules/rng.hpp"

namespace testutil {

/// Writes `content` to a fresh file under the system temp directory.
inline std::string write_temp_file(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "rfrules_tests";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

inline std::string data_file(const std::string& name) {
    return std::string(RFRULES_DATA_DIR) + "/" + name;
}

/// Random mixed-type dataset for property tests: numeric columns in [0, 1],
/// categorical columns with 2-4 categories, labels uniform over n_classes.
inline rfrules::Dataset random_dataset(rfrules::Rng& rng, std::size_t n_rows,
                                       std::size_t n_numeric, std::size_t n_categorical,
                                       std::size_t n_classes) {
    std::vector<rfrules::Column> columns;
    for (std::size_t i = 0; i < n_numeric; ++i)
        columns.push_back({"num" + std::to_string(i), rfrules::ColumnKind::Numeric, {}});
    std::vector<std::size_t> cardinalities;
    for (std::size_t i = 0; i < n_categorical; ++i) {
        const std::size_t cardinality = 2 + rng.next_below(3);
        cardinalities.push_back(cardinality);
        std::vector<std::string> cats;
        for (std::size_t c = 0; c < cardinality; ++c)
            cats.push_back("c" + std::to_string(c));
        columns.push_back(
            {"cat" + std::to_string(i), rfrules::ColumnKind::Categorical, std::move(cats)});
    }
    std::vector<std::string> class_names;
    for (std::size_t c = 0; c < n_classes; ++c) class_names.push_back("k" + std::to_string(c));

    rfrules::Dataset data(std::move(columns), std::move(class_names));
    for (std::size_t r = 0; r < n_rows; ++r) {
        rfrules::Instance row;
        for (std::size_t i = 0; i < n_numeric; ++i) row.push_back(rng.next_unit());
        for (std::size_t i = 0; i < n_categorical; ++i)
            row.push_back(static_cast<double>(rng.next_below(cardinalities[i])));
        data.add_row(std::move(row),
                     static_cast<rfrules::ClassId>(rng.next_below(n_classes)), 1.0);
    }
    return data;
}

}  // namespace testutil
