#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include <doctest.h>

#include "rfrules/dataset.hpp"
#include "test_util.hpp"

using namespace rfrules;

TEST_CASE("load_csv maps labels in first-appearance order") {
    const auto path = testutil::write_temp_file("tiny.csv", "x,label\n1,a\n2,b\n3,a\n");
    const Dataset data = load_csv(path);
    data.validate();
    CHECK(data.n_rows() == 3);
    CHECK(data.n_classes() == 2);
    CHECK(data.class_names() == std::vector<std::string>{"a", "b"});
    CHECK(data.column(0).kind == ColumnKind::Numeric);
    CHECK(data.label(0) == 0);
    CHECK(data.label(1) == 1);
    CHECK(data.label(2) == 0);
}

TEST_CASE("load_csv rejects an empty cell with its coordinates") {
    const auto path = testutil::write_temp_file("missing.csv", "x,y,label\n1,2,a\n3,,b\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("row 3"), std::runtime_error);
    try {
        load_csv(path);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("column 'y'") != std::string::npos);
    }
}

TEST_CASE("load_csv rejects ragged rows and single-class data") {
    const auto ragged = testutil::write_temp_file("ragged.csv", "x,label\n1,a\n2,b,9\n");
    CHECK_THROWS_AS(load_csv(ragged), std::runtime_error);
    const auto single = testutil::write_temp_file("single.csv", "x,label\n1,a\n2,a\n");
    CHECK_THROWS_AS(load_csv(single), std::runtime_error);
    CHECK_THROWS_AS(load_csv("/nonexistent/nowhere.csv"), std::runtime_error);
}

TEST_CASE("load_csv detects categorical columns and selects the label by name") {
    const auto path = testutil::write_temp_file(
        "mixed.csv", "size,color,label\n1.5,red,yes\n2,blue,no\n0.5,red,yes\n");
    const Dataset data = load_csv(path, std::optional<std::string>("color"));
    CHECK(data.n_classes() == 2);
    CHECK(data.class_names() == std::vector<std::string>{"red", "blue"});
    CHECK(data.n_cols() == 2);
    CHECK(data.column(1).kind == ColumnKind::Categorical);  // yes/no column
}

TEST_CASE("corpus stand-in has the expected shape") {
    const Dataset data = load_csv(testutil::data_file("breast_cancer.csv"));
    data.validate();
    CHECK(data.n_rows() == 286);
    CHECK(data.n_cols() == 9);
    CHECK(data.n_classes() == 2);
}

TEST_CASE("stratified folds put one instance of each class per fold on divisible data") {
    Rng rng(7);
    auto data = testutil::random_dataset(rng, 1, 2, 0, 1);  // rebuilt below
    std::vector<Column> cols{{"x", ColumnKind::Numeric, {}}};
    Dataset d(cols, {"a", "b"});
    for (int i = 0; i < 10; ++i) d.add_row({static_cast<double>(i)}, i % 2, 1.0);
    const auto folds = stratified_kfold(d, 5, 3);
    REQUIRE(folds.size() == 5);
    for (const auto& fold : folds) {
        REQUIRE(fold.test.n_rows() == 2);
        CHECK(fold.test.label(0) != fold.test.label(1));
    }
}

TEST_CASE("stratified folds are deterministic and partition the indices") {
    Rng rng(11);
    const Dataset data = testutil::random_dataset(rng, 53, 2, 1, 3);
    const auto a = stratified_kfold(data, 4, 99);
    const auto b = stratified_kfold(data, 4, 99);
    REQUIRE(a.size() == b.size());
    std::set<std::size_t> seen;
    for (std::size_t f = 0; f < a.size(); ++f) {
        CHECK(a[f].test_indices == b[f].test_indices);
        CHECK(a[f].train_indices == b[f].train_indices);
        std::set<std::size_t> train(a[f].train_indices.begin(), a[f].train_indices.end());
        for (std::size_t i : a[f].test_indices) {
            CHECK(train.count(i) == 0);
            CHECK(seen.insert(i).second);  // each index in exactly one test set
        }
        CHECK(a[f].train_indices.size() + a[f].test_indices.size() == data.n_rows());
    }
    CHECK(seen.size() == data.n_rows());
}

TEST_CASE("286 rows over 10 folds gives test sizes of 28 or 29") {
    const Dataset data = load_csv(testutil::data_file("breast_cancer.csv"));
    const auto folds = stratified_kfold(data, 10, 0);
    std::size_t total = 0;
    for (const auto& fold : folds) {
        const std::size_t size = fold.test.n_rows();
        CHECK((size == 28 || size == 29));
        total += size;
        // each class within +-1 of exact stratification
        const auto counts = fold.test.class_counts();
        const auto full = data.class_counts();
        for (std::size_t c = 0; c < counts.size(); ++c) {
            const double exact = static_cast<double>(full[c]) / 10.0;
            CHECK(std::abs(static_cast<double>(counts[c]) - exact) <= 1.0);
        }
    }
    CHECK(total == 286);
}

TEST_CASE("kfold rejects bad k and falls back when a class is too small") {
    std::vector<Column> cols{{"x", ColumnKind::Numeric, {}}};
    Dataset d(cols, {"a", "b"});
    for (int i = 0; i < 6; ++i) d.add_row({static_cast<double>(i)}, i == 0 ? 0 : 1, 1.0);
    CHECK_THROWS_AS(stratified_kfold(d, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(stratified_kfold(d, 1, 0), std::invalid_argument);
    const auto folds = stratified_kfold(d, 3, 0);  // class a has 1 < 3 members
    CHECK(folds.size() == 3);
    std::size_t total = 0;
    for (const auto& fold : folds) total += fold.test.n_rows();
    CHECK(total == 6);
}

TEST_CASE("bootstrap keeps the sample size and copies rows") {
    std::vector<Column> cols{{"x", ColumnKind::Numeric, {}}};
    Dataset one(cols, {"a", "b"});
    one.add_row({1.5}, 0, 2.0);
    one.add_row({2.5}, 1, 1.0);
    Dataset single = one.subset({0});
    {
        Rng rng(1);
        const Dataset sample = bootstrap_sample(single, rng);
        REQUIRE(sample.n_rows() == 1);
        CHECK(sample.row(0)[0] == 1.5);
        CHECK(sample.weight(0) == 2.0);
    }
    Rng rng(5);
    const Dataset data = testutil::random_dataset(rng, 37, 2, 1, 2);
    Rng s1(42), s2(42);
    const Dataset a = bootstrap_sample(data, s1);
    const Dataset b = bootstrap_sample(data, s2);
    REQUIRE(a.n_rows() == 37);
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
        CHECK(a.row(i) == b.row(i));
        CHECK(a.label(i) == b.label(i));
    }
}

TEST_CASE("bootstrap draws about 63.4% distinct rows on average") {
    // Monte-Carlo oracle: 1 - (1 - 1/100)^100 = 0.63397...
    std::vector<Column> cols{{"x", ColumnKind::Numeric, {}}};
    Dataset data(cols, {"a", "b"});
    for (int i = 0; i < 100; ++i) data.add_row({static_cast<double>(i)}, i % 2, 1.0);
    Rng rng(2024);
    double distinct_sum = 0.0;
    const int resamples = 10000;
    for (int s = 0; s < resamples; ++s) {
        const Dataset sample = bootstrap_sample(data, rng);
        std::unordered_set<int> rows;
        for (std::size_t i = 0; i < sample.n_rows(); ++i)
            rows.insert(static_cast<int>(sample.row(i)[0]));
        distinct_sum += static_cast<double>(rows.size()) / 100.0;
    }
    const double expected = 1.0 - std::pow(0.99, 100);
    CHECK(distinct_sum / resamples == doctest::Approx(expected).epsilon(0.016));
}

TEST_CASE("synthetic dataset has the requested class counts inside the unit square") {
    const Dataset data = generate_synthetic(800, 200, 0.05, 3);
    data.validate();
    REQUIRE(data.n_rows() == 1000);
    const auto counts = data.class_counts();
    CHECK(counts[0] == 800);
    CHECK(counts[1] == 200);
    CHECK(data.class_names() == std::vector<std::string>{"red", "blue"});
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        CHECK(data.row(i)[0] >= 0.0);
        CHECK(data.row(i)[0] <= 1.0);
        CHECK(data.row(i)[1] >= 0.0);
        CHECK(data.row(i)[1] <= 1.0);
    }
}

TEST_CASE("zero noise puts every red point exactly on its segment") {
    const Dataset data = generate_synthetic(50, 50, 0.0, 9);
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const double x = data.row(i)[0], y = data.row(i)[1];
        if (data.label(i) == 0)
            CHECK(y == doctest::Approx(x - 0.2).epsilon(1e-12));
        else
            CHECK(y == doctest::Approx(x + 0.2).epsilon(1e-12));
    }
}

TEST_CASE("with sd 0.05 almost no red point crosses the diagonal") {
    // P(cross) = P(N(0, 0.05) > 0.2/sqrt(2)) ~ 0.23%, far below the 2% cap.
    const Dataset data = generate_synthetic(10000, 1, 0.05, 17);
    std::size_t above = 0;
    for (std::size_t i = 0; i < data.n_rows(); ++i)
        if (data.label(i) == 0 && data.row(i)[1] > data.row(i)[0]) ++above;
    CHECK(static_cast<double>(above) / 10000.0 < 0.02);
}

TEST_CASE("synthetic rejects bad parameters") {
    CHECK_THROWS_AS(generate_synthetic(0, 5, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic(5, 5, -0.1, 0), std::invalid_argument);
}

TEST_CASE("csv round-trip preserves values, categories and labels") {
    Rng rng(31);
    const Dataset data = testutil::random_dataset(rng, 25, 2, 2, 3);
    const auto path = testutil::write_temp_file("roundtrip.csv", "");
    write_csv(data, path);
    const Dataset back = load_csv(path);
    REQUIRE(back.n_rows() == data.n_rows());
    REQUIRE(back.n_cols() == data.n_cols());
    const Dataset aligned = align_to_schema(back, data.schema());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        CHECK(aligned.row(i) == data.row(i));
        CHECK(aligned.label(i) == data.label(i));
    }
}

TEST_CASE("align_to_schema remaps categories that appear in a different order") {
    std::vector<Column> train_cols{{"color", ColumnKind::Categorical, {"red", "blue"}}};
    std::vector<Column> test_cols{{"color", ColumnKind::Categorical, {"blue", "green"}}};
    Dataset test(test_cols, {"b", "a"});
    test.add_row({0.0}, 0, 1.0);  // blue
    test.add_row({1.0}, 1, 1.0);  // green, unseen at training time

    Schema schema{train_cols, {"a", "b"}};
    const Dataset aligned = align_to_schema(test, schema);
    CHECK(aligned.row(0)[0] == 1.0);  // blue is index 1 under the training schema
    CHECK(aligned.row(1)[0] == 2.0);  // green appended behind the schema's categories
    CHECK(aligned.label(0) == 1);     // class "b"
    CHECK(aligned.label(1) == 0);     // class "a"

    Dataset bad(std::vector<Column>{{"hue", ColumnKind::Categorical, {"x"}}}, {"a", "b"});
    bad.add_row({0.0}, 0, 1.0);
    CHECK_THROWS_AS(align_to_schema(bad, schema), std::invalid_argument);
}
