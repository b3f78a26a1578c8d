#include "dpd2s/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dpd2s/datasets.hpp"
#include "dpd2s/errors.hpp"
#include "dpd2s/format.hpp"
#include "dpd2s/version.hpp"

namespace dpd2s::cli {

using nlohmann::json;

std::string_view tool_version() { return kVersion; }

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Splits on '\n', keeping line numbers 1-based.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        fn(++line_no, line);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json header_json() { return {{"tool", "dpd2s"}, {"version", std::string(kVersion)}}; }

json estimate_json(const TwoSampleEstimate& e) {
    return {{"mu1", e.mu1},           {"mu2", e.mu2},
            {"sigma", e.sigma},       {"objective", e.objective},
            {"iterations", e.iterations}, {"converged", e.converged},
            {"gradient_norm", e.gradient_norm}};
}

json request_json(const TestRequest& req) {
    json cfg = {{"method", req.method}, {"drop_outliers", req.drop_outliers}};
    if (req.method == "dpd") {
        cfg["beta"] = req.beta;
        cfg["gamma"] = req.gamma;
    }
    if (req.method == "trimmed-t") cfg["trim"] = req.trim;
    if (!req.dataset.empty()) cfg["dataset"] = req.dataset;
    if (!req.x_path.empty()) cfg["x"] = req.x_path;
    if (!req.y_path.empty()) cfg["y"] = req.y_path;
    return cfg;
}

json test_record(const Sample& x, const Sample& y, const TestRequest& req) {
    json rec = header_json();
    rec["config"] = request_json(req);
    rec["n1"] = x.size();
    rec["n2"] = y.size();
    if (req.method == "dpd") {
        const DpdTestResult r = dpd_test(x, y, TuningBeta(req.beta), TuningGamma(req.gamma));
        rec["statistic"] = r.statistic;
        rec["p_value"] = r.p_value;
        rec["p_value_underflow"] = r.p_value_underflow;
        rec["lambda"] = r.lambda;
        rec["divergence"] = r.divergence;
        rec["estimate"] = estimate_json(r.estimate);
        return rec;
    }
    ClassicalTestResult r;
    switch (parse_test_kind(req.method)) {
        case TestKind::pooled_t: r = pooled_t_test(x, y); break;
        case TestKind::trimmed_t: r = trimmed_t_test(x, y, req.trim); break;
        case TestKind::wilcoxon: r = wilcoxon_test(x, y); break;
        case TestKind::ks: r = ks_test(x, y); break;
        case TestKind::dpd: break;
    }
    rec["statistic"] = r.statistic;
    rec["p_value"] = r.p_value;
    if (r.df) rec["df"] = *r.df;
    if (r.method == ClassicalMethod::wilcoxon) rec["all_tied"] = r.all_tied;
    return rec;
}

std::string comment_header(const json& config) {
    return "# dpd2s " + std::string(kVersion) + "\n# config: " + config.dump() + "\n";
}

std::string cell_text(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

double round_grid(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

Sample parse_sample_csv(std::string_view text, std::string label) {
    std::vector<double> values;
    bool seen_first = false;
    for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        std::string_view line = trim(raw);
        if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line = trim(line.substr(3));
        if (line.empty()) return;
        // A trailing comma or surrounding quotes are tolerated; more columns are not.
        if (!line.empty() && line.back() == ',') line = trim(line.substr(0, line.size() - 1));
        if (line.size() >= 2 && line.front() == '"' && line.back() == '"') {
            line = line.substr(1, line.size() - 2);
        }
        const bool first = !seen_first;
        seen_first = true;
        if (line.find(',') != std::string_view::npos) {
            throw InputError("expected a single column, found ','", line_no);
        }
        const auto v = parse_double(line);
        if (!v) {
            if (first) {
                if (label.empty()) label = std::string(line);
                return;
            }
            throw InputError("not a decimal number: '" + std::string(line) + "'", line_no);
        }
        if (!std::isfinite(*v)) throw InputError("value is not finite", line_no);
        values.push_back(*v);
    });
    if (values.empty()) throw InputError("no numeric values found");
    return Sample(std::move(values), std::move(label));
}

Sample read_sample_csv(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return parse_sample_csv(text);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string run_test_json(const Sample& x, const Sample& y, const TestRequest& req) {
    return test_record(x, y, req).dump(2) + "\n";
}

std::string run_test_csv(const Sample& x, const Sample& y, const TestRequest& req) {
    const json rec = test_record(x, y, req);
    std::string out = comment_header(rec["config"]);
    out += "method,n1,n2,statistic,p_value\n";
    out += req.method + "," + std::to_string(x.size()) + "," + std::to_string(y.size()) + "," +
           format_double(rec["statistic"].get<double>()) + "," +
           format_double(rec["p_value"].get<double>()) + "\n";
    return out;
}

std::vector<double> parse_gamma_grid(std::string_view spec) {
    std::vector<double> grid;
    auto bad = [&](const std::string& why) {
        return DomainError("invalid gamma grid '" + std::string(spec) + "': " + why);
    };
    if (spec.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::string_view rest = spec;
        while (true) {
            const auto colon = rest.find(':');
            const auto v = parse_double(rest.substr(0, colon));
            if (!v) throw bad("expected start:step:stop");
            parts.push_back(*v);
            if (colon == std::string_view::npos) break;
            rest = rest.substr(colon + 1);
        }
        if (parts.size() != 3) throw bad("expected start:step:stop");
        const double start = parts[0];
        const double step = parts[1];
        const double stop = parts[2];
        if (!(step > 0.0) || stop < start) throw bad("step must be positive and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            grid.push_back(round_grid(start + static_cast<double>(i) * step));
        }
    } else {
        std::string_view rest = spec;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto v = parse_double(rest.substr(0, comma));
            if (!v) throw bad("expected comma-separated numbers");
            grid.push_back(*v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    if (grid.empty()) throw bad("no values");
    for (double g : grid) {
        if (!(g >= 0.0 && g <= 1.0)) throw bad("values must lie in [0, 1]");
    }
    return grid;
}

CurveResult compute_curve(const CurveInput& input, const std::vector<double>& gamma_grid,
                          BetaRule rule, double fixed_beta, std::string dataset_name,
                          unsigned threads) {
    CurveResult c;
    c.dataset = std::move(dataset_name);
    c.beta_rule = rule;
    c.fixed_beta = rule == BetaRule::fixed ? fixed_beta : 0.0;
    c.gamma_grid = gamma_grid;
    const bool with_clean = input.x_clean && input.y_clean;
    if (rule == BetaRule::fixed) TuningBeta check(fixed_beta);

    std::vector<std::optional<double>> full(gamma_grid.size());
    std::vector<std::optional<double>> clean(gamma_grid.size());
    auto eval = [&](const Sample& x, const Sample& y, double g) -> std::optional<double> {
        try {
            const double b = rule == BetaRule::fixed ? fixed_beta : g;
            return dpd_test(x, y, TuningBeta(b), TuningGamma(g)).p_value;
        } catch (const ConvergenceError&) {
            return std::nullopt;
        }
    };
    parallel_for(gamma_grid.size(), threads, [&](std::size_t i) {
        full[i] = eval(input.x, input.y, gamma_grid[i]);
        if (with_clean) clean[i] = eval(*input.x_clean, *input.y_clean, gamma_grid[i]);
    });
    c.p_values_full = std::move(full);
    if (with_clean) c.p_values_outlier_deleted = std::move(clean);
    return c;
}

namespace {

json curve_config(const CurveResult& c) {
    json cfg = {{"dataset", c.dataset},
                {"beta_rule", c.beta_rule == BetaRule::fixed ? "fixed" : "equal_to_gamma"}};
    if (c.beta_rule == BetaRule::fixed) cfg["beta"] = c.fixed_beta;
    cfg["gamma_grid"] = c.gamma_grid;
    cfg["outlier_deleted"] = c.p_values_outlier_deleted.has_value();
    return cfg;
}

}  // namespace

std::string curve_to_csv(const CurveResult& c) {
    std::string out = comment_header(curve_config(c));
    const bool clean = c.p_values_outlier_deleted.has_value();
    out += clean ? "gamma,p_full,p_outlier_deleted\n" : "gamma,p_full\n";
    for (std::size_t i = 0; i < c.gamma_grid.size(); ++i) {
        out += format_double(c.gamma_grid[i]) + "," + cell_text(c.p_values_full[i]);
        if (clean) out += "," + cell_text((*c.p_values_outlier_deleted)[i]);
        out += '\n';
    }
    return out;
}

CurveResult parse_curve_csv(std::string_view text) {
    CurveResult c;
    bool header_seen = false;
    std::size_t columns = 0;
    for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        const std::string_view line = trim(raw);
        if (line.empty()) return;
        if (line.front() == '#') {
            constexpr std::string_view tag = "# config: ";
            if (line.substr(0, tag.size()) == tag) {
                try {
                    const json cfg = json::parse(line.substr(tag.size()));
                    c.dataset = cfg.value("dataset", "");
                    if (cfg.value("beta_rule", "") == "fixed") {
                        c.beta_rule = BetaRule::fixed;
                        c.fixed_beta = cfg.at("beta").get<double>();
                    }
                } catch (const json::exception& e) {
                    throw InputError(std::string("bad config comment: ") + e.what(), line_no);
                }
            }
            return;
        }
        std::vector<std::string_view> cells;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            cells.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (!header_seen) {
            if (cells.size() < 2 || cells.size() > 3 || cells[0] != "gamma") {
                throw InputError("expected header 'gamma,p_full[,p_outlier_deleted]'", line_no);
            }
            header_seen = true;
            columns = cells.size();
            if (columns == 3) c.p_values_outlier_deleted.emplace();
            return;
        }
        if (cells.size() != columns) throw InputError("wrong number of columns", line_no);
        auto cell = [&](std::string_view s) -> std::optional<double> {
            if (s == "NA") return std::nullopt;
            const auto v = parse_double(s);
            if (!v) throw InputError("not a number: '" + std::string(s) + "'", line_no);
            return v;
        };
        const auto g = cell(cells[0]);
        if (!g) throw InputError("gamma must not be NA", line_no);
        c.gamma_grid.push_back(*g);
        c.p_values_full.push_back(cell(cells[1]));
        if (columns == 3) c.p_values_outlier_deleted->push_back(cell(cells[2]));
    });
    if (!header_seen) throw InputError("missing CSV header");
    return c;
}

std::string curve_to_svg(const CurveResult& c) {
    constexpr double width = 640.0;
    constexpr double height = 400.0;
    constexpr double left = 60.0;
    constexpr double right = 20.0;
    constexpr double top = 30.0;
    constexpr double bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double g) { return left + g * plot_w; };
    auto py = [&](double p) { return top + (1.0 - p) * plot_h; };

    std::ostringstream svg;
    svg << std::fixed << std::setprecision(2);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\">DPD test p-values"
        << (c.dataset.empty() ? "" : ": " + c.dataset) << "</text>\n";
    // axes and ticks
    svg << "<g stroke=\"black\" fill=\"none\">\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(0) << "\"/>\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\"" << py(1) << "\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        svg << "<line x1=\"" << px(v) << "\" y1=\"" << py(0) << "\" x2=\"" << px(v) << "\" y2=\"" << py(0) + 5 << "\"/>\n";
        svg << "<line x1=\"" << px(0) - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << px(0) << "\" y2=\"" << py(v) << "\"/>\n";
    }
    svg << "</g>\n<g text-anchor=\"middle\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        svg << "<text x=\"" << px(v) << "\" y=\"" << py(0) + 18 << "\">" << format_double(v) << "</text>\n";
        svg << "<text x=\"" << px(0) - 22 << "\" y=\"" << py(v) + 4 << "\">" << format_double(v) << "</text>\n";
    }
    svg << "<text x=\"" << px(0.5) << "\" y=\"" << height - 10 << "\">gamma</text>\n";
    svg << "<text x=\"16\" y=\"" << py(0.5) << "\" transform=\"rotate(-90 16 " << py(0.5) << ")\">p-value</text>\n";
    svg << "</g>\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0.05) << "\" x2=\"" << px(1) << "\" y2=\"" << py(0.05)
        << "\" stroke=\"#999\" stroke-dasharray=\"2 3\"/>\n";

    // Missing points split a curve into separate polylines.
    auto curve = [&](const std::vector<std::optional<double>>& p, const char* style) {
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" " << style
                    << " points=\"" << points << "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!p[i]) {
                flush();
                continue;
            }
            std::ostringstream pt;
            pt << std::fixed << std::setprecision(2) << px(c.gamma_grid[i]) << ',' << py(*p[i]) << ' ';
            points += pt.str();
        }
        flush();
    };
    curve(c.p_values_full, "");
    if (c.p_values_outlier_deleted) curve(*c.p_values_outlier_deleted, "stroke-dasharray=\"6 4\"");

    const double lx = px(1) - 170;
    svg << "<g>\n<line x1=\"" << lx << "\" y1=\"" << top + 10 << "\" x2=\"" << lx + 30 << "\" y2=\"" << top + 10
        << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << lx + 36 << "\" y=\"" << top + 14 << "\">full data</text>\n";
    if (c.p_values_outlier_deleted) {
        svg << "<line x1=\"" << lx << "\" y1=\"" << top + 28 << "\" x2=\"" << lx + 30 << "\" y2=\"" << top + 28
            << "\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
        svg << "<text x=\"" << lx + 36 << "\" y=\"" << top + 32 << "\">outliers deleted</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

namespace {

template <class T>
T field(const json& doc, const char* name, const std::string& path) {
    try {
        return doc.at(name).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path, doc.contains(name) ? "has the wrong type" : "is required");
    }
}

template <class T>
T field_or(const json& doc, const char* name, const std::string& path, T fallback) {
    return doc.contains(name) ? field<T>(doc, name, path) : fallback;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return key == a; });
        if (!known) throw ConfigError(prefix + key, "is not a recognised field");
    }
}

}  // namespace

SimulationFile parse_simulation_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("<document>", "must be a JSON object");
    reject_unknown(doc,
                   {"total_n_grid", "w", "mu1", "mu2", "sigma", "contamination_rate",
                    "contamination_mu", "contamination_sigma", "replications", "nominal_alpha",
                    "tests", "master_seed", "threads"},
                   "");

    SimulationFile file;
    SimulationConfig& c = file.config;
    const auto grid = field<std::vector<long long>>(doc, "total_n_grid", "total_n_grid");
    for (long long n : grid) {
        if (n <= 0) throw ConfigError("total_n_grid", "entries must be positive");
        c.total_n_grid.push_back(static_cast<std::size_t>(n));
    }
    c.w = field_or(doc, "w", "w", c.w);
    c.mu1 = field<double>(doc, "mu1", "mu1");
    c.mu2 = field<double>(doc, "mu2", "mu2");
    c.sigma = field_or(doc, "sigma", "sigma", c.sigma);
    c.contamination_rate = field_or(doc, "contamination_rate", "contamination_rate", c.contamination_rate);
    c.contamination_mu = field_or(doc, "contamination_mu", "contamination_mu", c.contamination_mu);
    c.contamination_sigma = field_or(doc, "contamination_sigma", "contamination_sigma", c.contamination_sigma);
    const auto reps = field_or<long long>(doc, "replications", "replications", 1000);
    if (reps < 1) throw ConfigError("replications", "must be at least 1");
    c.replications = static_cast<std::size_t>(reps);
    c.nominal_alpha = field_or(doc, "nominal_alpha", "nominal_alpha", c.nominal_alpha);
    if (!doc.contains("master_seed") || !doc["master_seed"].is_number_integer()) {
        throw ConfigError("master_seed", doc.contains("master_seed") ? "must be an integer" : "is required");
    }
    c.master_seed = doc["master_seed"].is_number_unsigned()
                        ? doc["master_seed"].get<std::uint64_t>()
                        : static_cast<std::uint64_t>(doc["master_seed"].get<std::int64_t>());
    const auto threads = field_or<long long>(doc, "threads", "threads", 1);
    if (threads < 0) throw ConfigError("threads", "must be >= 0");
    file.threads = static_cast<unsigned>(threads);

    if (!doc.contains("tests") || !doc["tests"].is_array()) {
        throw ConfigError("tests", doc.contains("tests") ? "must be an array" : "is required");
    }
    for (std::size_t i = 0; i < doc["tests"].size(); ++i) {
        const json& t = doc["tests"][i];
        const std::string path = "tests[" + std::to_string(i) + "]";
        if (!t.is_object()) throw ConfigError(path, "must be an object");
        reject_unknown(t, {"method", "beta", "gamma", "trim"}, path + ".");
        TestSpec spec;
        const auto method = field<std::string>(t, "method", path + ".method");
        try {
            spec.kind = parse_test_kind(method);
        } catch (const DomainError& e) {
            throw ConfigError(path + ".method", e.what());
        }
        if (spec.kind == TestKind::dpd) {
            spec.beta = field<double>(t, "beta", path + ".beta");
            spec.gamma = field_or(t, "gamma", path + ".gamma", spec.beta);
        } else if (t.contains("beta") || t.contains("gamma")) {
            throw ConfigError(path, "beta/gamma apply only to method 'dpd'");
        }
        if (spec.kind == TestKind::trimmed_t) {
            spec.trim = field_or(t, "trim", path + ".trim", spec.trim);
        } else if (t.contains("trim")) {
            throw ConfigError(path + ".trim", "applies only to method 'trimmed-t'");
        }
        c.tests.push_back(spec);
    }
    c.validate();
    return file;
}

std::string simulation_config_json(const SimulationConfig& c) {
    json tests = json::array();
    for (const TestSpec& t : c.tests) {
        json j = {{"method", test_kind_name(t.kind)}};
        if (t.kind == TestKind::dpd) {
            j["beta"] = t.beta;
            j["gamma"] = t.gamma;
        }
        if (t.kind == TestKind::trimmed_t) j["trim"] = t.trim;
        tests.push_back(j);
    }
    const json doc = {{"total_n_grid", c.total_n_grid},
                      {"w", c.w},
                      {"mu1", c.mu1},
                      {"mu2", c.mu2},
                      {"sigma", c.sigma},
                      {"contamination_rate", c.contamination_rate},
                      {"contamination_mu", c.contamination_mu},
                      {"contamination_sigma", c.contamination_sigma},
                      {"replications", c.replications},
                      {"nominal_alpha", c.nominal_alpha},
                      {"tests", tests},
                      {"master_seed", c.master_seed}};
    return doc.dump();
}

std::string simulation_report_csv(const SimulationReport& r) {
    std::string out = "# dpd2s " + std::string(kVersion) + "\n# config: " +
                      simulation_config_json(r.config) + "\n";
    out += "test,n,n1,n2,rejections,effective_replications,excluded,rejection_rate,monte_carlo_se\n";
    for (const SimulationCell& c : r.cells) {
        out += "\"" + c.test + "\"," + std::to_string(c.n) + "," + std::to_string(c.n1) + "," +
               std::to_string(c.n2) + "," + std::to_string(c.rejections) + "," +
               std::to_string(c.effective_replications) + "," + std::to_string(c.excluded) + "," +
               (c.effective_replications ? format_double(c.rejection_rate) : "NA") + "," +
               (c.effective_replications ? format_double(c.monte_carlo_se) : "NA") + "\n";
    }
    return out;
}

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
    if (!f) throw InputError("failed writing '" + path + "'");
}

struct PairInput {
    Sample x;
    Sample y;
    std::optional<Dataset> clean;
};

PairInput load_pair(const std::string& dataset, const std::string& x_path,
                    const std::string& y_path, bool need_clean) {
    PairInput in;
    if (!dataset.empty()) {
        if (!x_path.empty() || !y_path.empty()) {
            throw DomainError("use either --dataset or --x/--y, not both");
        }
        const Dataset d = load_dataset(dataset);
        in.x = d.sample_x;
        in.y = d.sample_y;
        if (need_clean) in.clean = without_outliers(d);
        return in;
    }
    if (x_path.empty() || y_path.empty()) throw DomainError("need --dataset or both --x and --y");
    in.x = read_sample_csv(x_path);
    in.y = read_sample_csv(y_path);
    return in;
}

json dataset_json(const Dataset& d) {
    return {{"name", d.name},
            {"provenance", d.provenance},
            {"x", {{"label", d.sample_x.label()}, {"values", d.text_x}, {"outliers", d.outlier_indices_x}}},
            {"y", {{"label", d.sample_y.label()}, {"values", d.text_y}, {"outliers", d.outlier_indices_y}}}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust two-sample tests of equal means based on the density power divergence"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string format = "json";
    std::string out_path;
    unsigned threads = 1;

    // test
    TestRequest req;
    bool beta_set = false;
    auto* test = app.add_subcommand("test", "Run one two-sample test");
    test->add_option("--dataset", req.dataset, "Bundled dataset name");
    test->add_option("--x", req.x_path, "CSV file with the first sample");
    test->add_option("--y", req.y_path, "CSV file with the second sample");
    test->add_option("--method", req.method, "Test to run")
        ->check(CLI::IsMember({"dpd", "pooled-t", "trimmed-t", "wilcoxon", "ks"}));
    test->add_option("--beta", req.beta, "Estimator tuning parameter (defaults to gamma)")
        ->check(CLI::Range(0.0, 1.0))
        ->each([&](const std::string&) { beta_set = true; });
    test->add_option("--gamma", req.gamma, "Divergence tuning parameter")->check(CLI::Range(0.0, 1.0));
    test->add_option("--trim", req.trim, "Per-tail trimming fraction for trimmed-t");
    test->add_flag("--drop-outliers", req.drop_outliers, "Remove annotated outliers (datasets only)");
    test->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    test->add_option("--out", out_path, "Write to this file instead of standard output");

    // curve
    std::string curve_dataset;
    std::string curve_x;
    std::string curve_y;
    std::string grid_spec = "0:0.05:1";
    std::optional<double> curve_beta;
    bool curve_drop = false;
    std::string svg_path;
    auto* curve = app.add_subcommand("curve", "DPD p-values over a grid of gamma");
    curve->add_option("--dataset", curve_dataset, "Bundled dataset name");
    curve->add_option("--x", curve_x, "CSV file with the first sample");
    curve->add_option("--y", curve_y, "CSV file with the second sample");
    curve->add_option("--grid", grid_spec, "start:step:stop or comma list")->capture_default_str();
    curve->add_option("--beta", curve_beta, "Hold beta fixed instead of beta = gamma")
        ->check(CLI::Range(0.0, 1.0));
    curve->add_flag("--drop-outliers", curve_drop, "Add the outlier-deleted curve (datasets only)");
    curve->add_option("--svg", svg_path, "Also write an SVG plot here");
    curve->add_option("--out", out_path, "Write CSV to this file instead of standard output");
    curve->add_option("--threads", threads, "Worker threads (0 = all cores)");

    // simulate
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> sim_threads;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo level and power study");
    simulate->add_option("config", config_path, "JSON configuration file")->required();
    simulate->add_option("--seed", seed, "Override master_seed");
    simulate->add_option("--threads", sim_threads, "Override threads (0 = all cores)");
    simulate->add_option("--out", out_path, "Write CSV to this file instead of standard output");

    // datasets
    auto* datasets = app.add_subcommand("datasets", "Bundled example datasets");
    datasets->require_subcommand(1);
    auto* ds_list = datasets->add_subcommand("list", "List dataset names");
    ds_list->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    std::string show_name;
    auto* ds_show = datasets->add_subcommand("show", "Print one dataset");
    ds_show->add_option("name", show_name, "Dataset name")->required();
    ds_show->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*test) {
            if (!beta_set) req.beta = req.gamma;
            if (req.drop_outliers && req.dataset.empty()) {
                throw DomainError("--drop-outliers needs --dataset");
            }
            PairInput in = load_pair(req.dataset, req.x_path, req.y_path, req.drop_outliers);
            const Sample& x = in.clean ? in.clean->sample_x : in.x;
            const Sample& y = in.clean ? in.clean->sample_y : in.y;
            emit(format == "csv" ? run_test_csv(x, y, req) : run_test_json(x, y, req), out_path, out);
        } else if (*curve) {
            if (curve_drop && curve_dataset.empty()) throw DomainError("--drop-outliers needs --dataset");
            const auto grid = parse_gamma_grid(grid_spec);
            PairInput in = load_pair(curve_dataset, curve_x, curve_y, curve_drop);
            CurveInput ci{in.x, in.y, std::nullopt, std::nullopt};
            if (in.clean) {
                ci.x_clean = in.clean->sample_x;
                ci.y_clean = in.clean->sample_y;
            }
            const std::string name = curve_dataset.empty() ? curve_x + "," + curve_y : curve_dataset;
            const CurveResult c = compute_curve(ci, grid, curve_beta ? BetaRule::fixed : BetaRule::equal_to_gamma,
                                                curve_beta.value_or(0.0), name, threads);
            emit(curve_to_csv(c), out_path, out);
            if (!svg_path.empty()) emit(curve_to_svg(c), svg_path, out);
        } else if (*simulate) {
            SimulationFile file = parse_simulation_config(read_file(config_path));
            if (seed) file.config.master_seed = *seed;
            if (sim_threads) file.threads = *sim_threads;
            const SimulationReport report = run_level_power_study(file.config, file.threads);
            emit(simulation_report_csv(report), out_path, out);
        } else if (*ds_list) {
            if (format == "csv") {
                std::string text = "name,n1,n2,outliers_x,outliers_y\n";
                for (const auto& n : dataset_names()) {
                    const Dataset d = load_dataset(n);
                    text += n + "," + std::to_string(d.sample_x.size()) + "," +
                            std::to_string(d.sample_y.size()) + "," +
                            std::to_string(d.outlier_indices_x.size()) + "," +
                            std::to_string(d.outlier_indices_y.size()) + "\n";
                }
                out << text;
            } else {
                json arr = json::array();
                for (const auto& n : dataset_names()) {
                    const Dataset d = load_dataset(n);
                    arr.push_back({{"name", n}, {"n1", d.sample_x.size()}, {"n2", d.sample_y.size()},
                                   {"provenance", d.provenance}});
                }
                json rec = header_json();
                rec["datasets"] = arr;
                out << rec.dump(2) << "\n";
            }
        } else if (*ds_show) {
            const Dataset d = load_dataset(show_name);
            if (format == "csv") {
                std::string text = "sample,index,value,outlier\n";
                auto rows = [&](const char* tag, const std::vector<std::string>& vals,
                                const std::vector<std::size_t>& flags) {
                    for (std::size_t i = 0; i < vals.size(); ++i) {
                        const bool flagged = std::binary_search(flags.begin(), flags.end(), i);
                        text += std::string(tag) + "," + std::to_string(i) + "," + vals[i] + "," +
                                (flagged ? "1" : "0") + "\n";
                    }
                };
                rows("x", d.text_x, d.outlier_indices_x);
                rows("y", d.text_y, d.outlier_indices_y);
                out << text;
            } else {
                json rec = header_json();
                rec["dataset"] = dataset_json(d);
                out << rec.dump(2) << "\n";
            }
        }
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const LookupError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitOk;
}

}  // namespace dpd2s::cli
