#include "edm/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "edm/id3.hpp"

namespace edm {

namespace {

using json = nlohmann::json;

void validate(const BinSpec& spec) {
    if (spec.labels.size() != spec.thresholds.size() + 1)
        throw ArgumentError("bin spec needs exactly one more label than thresholds");
    for (std::size_t i = 0; i + 1 < spec.thresholds.size(); ++i)
        if (!(spec.thresholds[i] < spec.thresholds[i + 1]))
            throw ArgumentError("bin thresholds must be strictly ascending");
}

bool parse_percent(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

} // namespace

std::string bin_normalized(double v, const BinSpec& spec) {
    validate(spec);
    if (!(v >= 0.0 && v <= 1.0))
        throw RangeError("normalized value " + format_numeric(v) + " outside [0,1]");
    for (std::size_t i = 0; i < spec.thresholds.size(); ++i)
        if (v <= spec.thresholds[i]) return spec.labels[i];
    return spec.labels.back();
}

MathGradeBands MathGradeBands::mca_default() {
    return MathGradeBands{{{80, 100, "A"},
                           {70, 79, "B"},
                           {60, 69, "C"},
                           {50, 59, "D"},
                           {40, 49, "E"},
                           {0, 39, "F"}},
                          "not applicable",
                          "F"};
}

std::string bin_math_grade(const std::string& raw, const MathGradeBands& bands) {
    if (raw == bands.na_text) return bands.na_label;
    double pct;
    if (!parse_percent(raw, pct))
        throw RangeError("'" + raw + "' is neither a percent nor '" + bands.na_text + "'");
    for (const auto& range : bands.ranges)
        if (pct >= range.lo && pct <= range.hi) return range.label;
    throw RangeError("percent " + format_numeric(pct) + " outside every band");
}

std::vector<double> min_max_normalize(std::span<const double> column) {
    if (column.empty()) throw ArgumentError("cannot normalize an empty column");
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    return min_max_normalize(column, *lo, *hi);
}

std::vector<double> min_max_normalize(std::span<const double> column, double min, double max) {
    if (!(max > min)) throw DegenerateColumn("column maximum does not exceed its minimum");
    std::vector<double> out;
    out.reserve(column.size());
    for (double v : column) out.push_back((v - min) / (max - min));
    return out;
}

PipelineConfig PipelineConfig::mca_default() {
    PipelineConfig cfg;
    cfg.columns.push_back({"Mathematics marks in XII", "Mathematics Grade in XII", false,
                           std::nullopt, std::nullopt, std::nullopt,
                           MathGradeBands::mca_default()});
    cfg.columns.push_back({"XII Per", "XII Grade", true, 49.0, 89.0,
                           BinSpec{{0.0, 0.25, 0.487, 0.75}, {"E", "D", "C", "B", "A"}},
                           std::nullopt});
    cfg.columns.push_back({"ug Per", "UG Grade", true, 55.0, 89.0,
                           BinSpec{{0.0, 0.11, 0.41, 0.70}, {"E", "D", "C", "B", "A"}},
                           std::nullopt});
    cfg.columns.push_back({"pg Per", "PG Grade", true, 50.0, 89.0,
                           BinSpec{{0.0, 0.23, 0.46, 0.74}, {"E", "D", "C", "B", "A"}},
                           std::nullopt});
    return cfg;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig cfg;
    for (const auto& entry : j.at("columns")) {
        ColumnTransform t;
        t.column = entry.at("column").get<std::string>();
        if (entry.contains("rename")) t.rename = entry.at("rename").get<std::string>();
        if (entry.contains("normalize")) t.normalize = entry.at("normalize").get<bool>();
        if (entry.contains("min")) t.norm_min = entry.at("min").get<double>();
        if (entry.contains("max")) t.norm_max = entry.at("max").get<double>();
        if (entry.contains("thresholds")) {
            BinSpec spec;
            spec.thresholds = entry.at("thresholds").get<std::vector<double>>();
            spec.labels = entry.at("labels").get<std::vector<std::string>>();
            validate(spec);
            t.bins = std::move(spec);
        }
        if (entry.contains("math_bands") && entry.at("math_bands").get<bool>())
            t.math = MathGradeBands::mca_default();
        if (t.bins.has_value() == t.math.has_value())
            throw ArgumentError("column '" + t.column +
                                "': exactly one of thresholds/math_bands must be given");
        cfg.columns.push_back(std::move(t));
    }
    return cfg;
}

json PipelineConfig::to_json() const {
    json cols = json::array();
    for (const auto& t : columns) {
        json entry{{"column", t.column}};
        if (t.rename) entry["rename"] = *t.rename;
        if (t.normalize) entry["normalize"] = true;
        if (t.norm_min) entry["min"] = *t.norm_min;
        if (t.norm_max) entry["max"] = *t.norm_max;
        if (t.bins) {
            entry["thresholds"] = t.bins->thresholds;
            entry["labels"] = t.bins->labels;
        }
        if (t.math) entry["math_bands"] = true;
        cols.push_back(std::move(entry));
    }
    return json{{"columns", std::move(cols)}};
}

Dataset grade_pipeline(const Dataset& ds, const PipelineConfig& config,
                       std::vector<ColumnReport>* reports) {
    if (reports) reports->clear();

    std::vector<Attribute> attrs = ds.schema().attributes();
    std::vector<std::vector<Value>> columns(attrs.size());
    for (std::size_t c = 0; c < attrs.size(); ++c) {
        columns[c].reserve(ds.size());
        for (std::size_t r = 0; r < ds.size(); ++r) columns[c].push_back(ds.at(r).values[c]);
    }

    for (const auto& t : config.columns) {
        const auto idx = ds.schema().find(t.column);
        if (!idx) throw SchemaError("pipeline column not in dataset: " + t.column);
        const std::size_t c = *idx;
        const Attribute& old_attr = ds.schema().at(c);

        ColumnReport report;
        report.column = t.column;
        report.renamed_to = t.rename.value_or(t.column);

        std::vector<std::string> labels;
        std::vector<std::optional<std::string>> graded(ds.size());

        if (t.math) {
            for (const auto& range : t.math->ranges)
                if (std::find(labels.begin(), labels.end(), range.label) == labels.end())
                    labels.push_back(range.label);
            if (std::find(labels.begin(), labels.end(), t.math->na_label) == labels.end())
                labels.push_back(t.math->na_label);
            for (std::size_t r = 0; r < ds.size(); ++r) {
                const Value& v = columns[c][r];
                if (is_missing(v)) continue;
                std::string raw = old_attr.kind == AttrKind::Nominal
                                      ? old_attr.domain[std::get<NominalValue>(v).index]
                                      : format_numeric(std::get<double>(v));
                try {
                    graded[r] = bin_math_grade(raw, *t.math);
                } catch (const RangeError& e) {
                    throw RangeError("column '" + t.column + "', row " + std::to_string(r) +
                                     ": " + e.what());
                }
            }
        } else {
            if (old_attr.kind != AttrKind::Numeric)
                throw TypeError("pipeline column '" + t.column + "' is not numeric");
            labels = t.bins->labels;

            std::vector<double> raw;
            std::vector<std::size_t> raw_rows;
            for (std::size_t r = 0; r < ds.size(); ++r) {
                const Value& v = columns[c][r];
                if (is_missing(v)) continue;
                raw.push_back(std::get<double>(v));
                raw_rows.push_back(r);
            }
            std::vector<double> values = raw;
            if (t.normalize) {
                if (raw.empty())
                    throw DegenerateColumn("column '" + t.column + "' has no values");
                double lo = t.norm_min.value_or(*std::min_element(raw.begin(), raw.end()));
                double hi = t.norm_max.value_or(*std::max_element(raw.begin(), raw.end()));
                values = min_max_normalize(raw, lo, hi);
                report.used_min = lo;
                report.used_max = hi;
            }
            for (std::size_t i = 0; i < values.size(); ++i) {
                try {
                    graded[raw_rows[i]] = bin_normalized(values[i], *t.bins);
                } catch (const RangeError& e) {
                    throw RangeError("column '" + t.column + "', row " +
                                     std::to_string(raw_rows[i]) + ": " + e.what());
                }
            }
        }

        Attribute new_attr;
        new_attr.name = t.rename.value_or(t.column);
        new_attr.kind = AttrKind::Nominal;
        new_attr.domain = labels;

        std::vector<std::size_t> bin_counts(labels.size(), 0);
        std::vector<Value> new_column(ds.size(), Value{MissingValue{}});
        for (std::size_t r = 0; r < ds.size(); ++r) {
            if (!graded[r]) continue;
            const auto li = new_attr.index_of(*graded[r]);
            new_column[r] = NominalValue{*li};
            ++bin_counts[*li];
        }
        for (std::size_t i = 0; i < labels.size(); ++i)
            report.bin_counts.emplace_back(labels[i], bin_counts[i]);

        attrs[c] = std::move(new_attr);
        columns[c] = std::move(new_column);
        if (reports) reports->push_back(std::move(report));
    }

    std::optional<std::size_t> class_index = ds.schema().class_index();
    std::vector<Instance> instances(ds.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
        instances[r].values.reserve(attrs.size());
        for (std::size_t c = 0; c < attrs.size(); ++c)
            instances[r].values.push_back(columns[c][r]);
    }
    return Dataset(Schema(std::move(attrs), class_index), std::move(instances));
}

std::vector<std::pair<std::string, double>> rank_attributes_by_gain(const Dataset& ds) {
    if (!ds.schema().class_index()) throw SchemaError("no class attribute designated");
    const std::size_t ci = *ds.schema().class_index();
    std::vector<std::pair<std::string, double>> ranked;
    for (std::size_t a = 0; a < ds.schema().arity(); ++a) {
        if (a == ci) continue;
        if (ds.schema().at(a).kind != AttrKind::Nominal)
            throw TypeError("attribute '" + ds.schema().at(a).name + "' is numeric");
        ranked.emplace_back(ds.schema().at(a).name, information_gain(ds, ds.schema().at(a).name));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranked;
}

} // namespace edm
