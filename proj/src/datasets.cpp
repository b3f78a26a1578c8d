#include "dpd2s/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "dpd2s/errors.hpp"

namespace dpd2s {

namespace detail {
extern const std::pair<std::string_view, std::string_view> kEmbeddedResources[];
extern const unsigned kEmbeddedResourceCount;
}  // namespace detail

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct DatasetInfo {
    const char* name;
    const char* file_x;
    const char* file_y;
    const char* provenance;
};

constexpr DatasetInfo kDatasets[] = {
    {"cloth", "cloth_mill_a", "cloth_mill_b",
     "Weekly run-up (percent wastage) of cloth from two mills, Levi-Strauss plant, Albuquerque"},
    {"lead", "lead_first_lake", "lead_second_lake",
     "Lead level in water samples from two lakes, coded as 10(x - 2)"},
    {"ozone", "ozone_x", "ozone_y",
     "Weight gain (g) of rats kept in an ozone environment (X) and an ozone-free control (Y)"},
    {"newcomb-day1-day2", "newcomb_day1", "newcomb_day2",
     "Newcomb (1882) light passage times, deviations from 24800 ns; day 1 vs day 2"},
    {"newcomb-day1-day3", "newcomb_day1", "newcomb_day3",
     "Newcomb (1882) light passage times, deviations from 24800 ns; day 1 vs day 3"},
    {"na-intake", "na_intake_x", "na_intake_y",
     "Sodium intake of patients with essential hypertension (X) and normal volunteers (Y)"},
    {"zinc", "zinc_urban", "zinc_rural",
     "Zinc content of hair, urban (X) and rural (Y) residents of Sri Lanka"},
};

DatasetColumn load_column(const char* file) {
    try {
        return parse_resource(resource_text(file));
    } catch (const InputError& e) {
        throw InputError(std::string("bundled resource '") + file + "': " + e.what());
    }
}

}  // namespace

DatasetColumn parse_resource(std::string_view text) {
    DatasetColumn col;
    bool have_label = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        if (!have_label) {
            constexpr std::string_view prefix = "label:";
            if (line.substr(0, prefix.size()) != prefix) {
                throw InputError("resource must start with 'label: <text>'", line_no);
            }
            col.label = std::string(trim(line.substr(prefix.size())));
            have_label = true;
            continue;
        }

        bool flagged = false;
        if (line.back() == '*') {
            flagged = true;
            line = trim(line.substr(0, line.size() - 1));
        }
        double value = 0.0;
        const auto res = std::from_chars(line.data(), line.data() + line.size(), value);
        if (line.empty() || res.ec != std::errc{} || res.ptr != line.data() + line.size() ||
            !std::isfinite(value)) {
            throw InputError("not a finite decimal value: '" + std::string(line) + "'", line_no);
        }
        if (flagged) col.outliers.push_back(col.values.size());
        col.text.emplace_back(line);
        col.values.push_back(value);
    }
    if (!have_label) throw InputError("resource has no label line", line_no);
    if (col.values.empty()) throw InputError("resource holds no values", line_no);
    return col;
}

std::string serialize_resource(const DatasetColumn& column) {
    std::string out = "label: " + column.label + "\n";
    std::size_t next_flag = 0;
    for (std::size_t i = 0; i < column.text.size(); ++i) {
        out += column.text[i];
        if (next_flag < column.outliers.size() && column.outliers[next_flag] == i) {
            out += " *";
            ++next_flag;
        }
        out += '\n';
    }
    return out;
}

std::vector<std::string> resource_names() {
    std::vector<std::string> names;
    for (unsigned i = 0; i < detail::kEmbeddedResourceCount; ++i) {
        names.emplace_back(detail::kEmbeddedResources[i].first);
    }
    return names;
}

std::string_view resource_text(std::string_view name) {
    for (unsigned i = 0; i < detail::kEmbeddedResourceCount; ++i) {
        if (detail::kEmbeddedResources[i].first == name) return detail::kEmbeddedResources[i].second;
    }
    throw LookupError("no embedded resource named '" + std::string(name) + "'");
}

std::vector<std::string> dataset_names() {
    std::vector<std::string> names;
    for (const auto& d : kDatasets) names.emplace_back(d.name);
    return names;
}

Dataset load_dataset(const std::string& name) {
    const auto it = std::find_if(std::begin(kDatasets), std::end(kDatasets),
                                 [&](const DatasetInfo& d) { return name == d.name; });
    if (it == std::end(kDatasets)) {
        std::string msg = "unknown dataset '" + name + "'; available:";
        for (const auto& n : dataset_names()) msg += " " + n;
        throw LookupError(msg);
    }
    DatasetColumn x = load_column(it->file_x);
    DatasetColumn y = load_column(it->file_y);
    Dataset d;
    d.name = it->name;
    d.provenance = it->provenance;
    d.sample_x = Sample(x.values, x.label);
    d.sample_y = Sample(y.values, y.label);
    d.outlier_indices_x = std::move(x.outliers);
    d.outlier_indices_y = std::move(y.outliers);
    d.text_x = std::move(x.text);
    d.text_y = std::move(y.text);
    return d;
}

namespace {

void drop_flagged(const Sample& s, const std::vector<std::size_t>& flagged,
                  const std::vector<std::string>& text, Sample& out_sample,
                  std::vector<std::string>& out_text) {
    std::vector<double> kept;
    std::vector<std::string> kept_text;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::binary_search(flagged.begin(), flagged.end(), i)) continue;
        kept.push_back(s[i]);
        if (i < text.size()) kept_text.push_back(text[i]);
    }
    out_sample = Sample(std::move(kept), s.label());
    out_text = std::move(kept_text);
}

}  // namespace

Dataset without_outliers(const Dataset& d) {
    Dataset out;
    out.name = d.name;
    out.provenance = d.provenance;
    drop_flagged(d.sample_x, d.outlier_indices_x, d.text_x, out.sample_x, out.text_x);
    drop_flagged(d.sample_y, d.outlier_indices_y, d.text_y, out.sample_y, out.text_y);
    return out;
}

std::array<DatasetColumn, 3> newcomb_days() {
    return {load_column("newcomb_day1"), load_column("newcomb_day2"), load_column("newcomb_day3")};
}

}  // namespace dpd2s
