#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dpd2s/sample.hpp"

namespace dpd2s {

/// One column of a bundled resource: values with their original decimal text
/// and the indices of entries flagged as outliers.
struct DatasetColumn {
    std::string label;
    std::vector<std::string> text;
    std::vector<double> values;
    std::vector<std::size_t> outliers;  ///< ascending, 0-based
};

/// Resource format: first line "label: <text>", then one decimal value per
/// line, optionally followed by whitespace and '*' to flag an outlier. Blank
/// lines and lines starting with '#' are ignored. Throws InputError with the
/// 1-based line number.
DatasetColumn parse_resource(std::string_view text);
std::string serialize_resource(const DatasetColumn& column);

struct Dataset {
    std::string name;
    Sample sample_x;
    Sample sample_y;
    std::vector<std::size_t> outlier_indices_x;
    std::vector<std::size_t> outlier_indices_y;
    std::string provenance;
    /// Decimal text of each value, as stored in the resource.
    std::vector<std::string> text_x;
    std::vector<std::string> text_y;
};

/// Names accepted by load_dataset, in a fixed order.
std::vector<std::string> dataset_names();

/// Throws LookupError listing the available names if `name` is unknown.
Dataset load_dataset(const std::string& name);

/// Copy with flagged entries removed and the annotations cleared.
Dataset without_outliers(const Dataset& d);

/// The three Newcomb light-passage samples (day 1, 2, 3).
std::array<DatasetColumn, 3> newcomb_days();

/// Names of the embedded resource files and their raw text.
std::vector<std::string> resource_names();
std::string_view resource_text(std::string_view name);

}  // namespace dpd2s
