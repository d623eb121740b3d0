#include "edm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace edm {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

} // namespace

std::optional<std::size_t> Attribute::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < domain.size(); ++i)
        if (domain[i] == label) return i;
    return std::nullopt;
}

Schema::Schema(std::vector<Attribute> attributes, std::optional<std::size_t> class_index)
    : attributes_(std::move(attributes)), class_index_(class_index) {
    std::set<std::string_view> names;
    for (const auto& attr : attributes_) {
        if (attr.name.empty()) throw SchemaError("attribute with empty name");
        if (!names.insert(attr.name).second)
            throw SchemaError("duplicate attribute name: " + attr.name);
        if (attr.kind == AttrKind::Nominal) {
            if (attr.domain.empty())
                throw SchemaError("nominal attribute '" + attr.name + "' has an empty domain");
            std::set<std::string_view> labels;
            for (const auto& label : attr.domain)
                if (!labels.insert(label).second)
                    throw SchemaError("duplicate label '" + label + "' in attribute '" +
                                      attr.name + "'");
        } else if (!attr.domain.empty()) {
            throw SchemaError("numeric attribute '" + attr.name + "' carries a domain");
        }
    }
    if (class_index_) {
        if (*class_index_ >= attributes_.size())
            throw SchemaError("class index out of range");
        if (attributes_[*class_index_].kind != AttrKind::Nominal)
            throw SchemaError("class attribute must be nominal");
    }
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
        if (attributes_[i].name == name) return i;
    return std::nullopt;
}

const Attribute& Schema::class_attribute() const {
    if (!class_index_) throw SchemaError("no class attribute designated");
    return attributes_[*class_index_];
}

Schema Schema::with_class(std::string_view name) const {
    const auto idx = find(name);
    if (!idx) throw SchemaError("unknown class column: " + std::string(name));
    return Schema(attributes_, *idx);
}

Schema Schema::with_class_index(std::size_t index) const {
    return Schema(attributes_, index);
}

std::vector<std::string> schema_diff(const Schema& expected, const Schema& actual) {
    std::vector<std::string> diffs;
    if (expected.arity() != actual.arity())
        diffs.push_back("attribute count " + std::to_string(actual.arity()) + ", expected " +
                        std::to_string(expected.arity()));
    const std::size_t n = std::min(expected.arity(), actual.arity());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = expected.at(i);
        const auto& a = actual.at(i);
        if (e.name != a.name)
            diffs.push_back("attribute " + std::to_string(i) + ": name '" + a.name +
                            "', expected '" + e.name + "'");
        else if (e.kind != a.kind)
            diffs.push_back("attribute '" + e.name + "': kind mismatch");
    }
    return diffs;
}

Dataset::Dataset(Schema schema, std::vector<Instance> instances)
    : schema_(std::move(schema)), instances_(std::move(instances)) {
    for (std::size_t r = 0; r < instances_.size(); ++r) {
        const auto& inst = instances_[r];
        if (inst.values.size() != schema_.arity())
            throw SchemaError("instance " + std::to_string(r) + " has arity " +
                              std::to_string(inst.values.size()) + ", schema expects " +
                              std::to_string(schema_.arity()));
        for (std::size_t c = 0; c < inst.values.size(); ++c) {
            const auto& attr = schema_.at(c);
            if (const auto* nom = std::get_if<NominalValue>(&inst.values[c])) {
                if (attr.kind != AttrKind::Nominal)
                    throw SchemaError("nominal value in numeric column '" + attr.name + "'");
                if (nom->index >= attr.domain.size())
                    throw SchemaError("label index out of domain in column '" + attr.name + "'");
            } else if (std::holds_alternative<double>(inst.values[c])) {
                if (attr.kind != AttrKind::Numeric)
                    throw SchemaError("numeric value in nominal column '" + attr.name + "'");
            }
        }
    }
}

Dataset Dataset::with_class(std::string_view name) const {
    return Dataset(schema_.with_class(name), instances_);
}

std::string Dataset::label_at(std::size_t row, std::size_t col) const {
    const Value& v = at(row).values.at(col);
    if (is_missing(v)) return std::string(kMissingMarker);
    if (const auto* nom = std::get_if<NominalValue>(&v))
        return schema_.at(col).domain[nom->index];
    return format_numeric(std::get<double>(v));
}

std::string Dataset::summary() const {
    std::ostringstream out;
    out << "Instances: " << size() << "\nAttributes: " << schema_.arity() << "\n";
    for (std::size_t i = 0; i < schema_.arity(); ++i) {
        const auto& attr = schema_.at(i);
        out << "  " << attr.name;
        if (attr.kind == AttrKind::Numeric)
            out << " (numeric)";
        else
            out << " (nominal, " << attr.domain.size() << " labels)";
        if (schema_.class_index() && *schema_.class_index() == i) out << " [class]";
        out << "\n";
    }
    return out.str();
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && rows.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        bool was_quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char ch = line[i];
            if (quoted) {
                if (ch == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        cell += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    cell += ch;
                }
            } else if (ch == '"' && trim(cell).empty()) {
                quoted = true;
                was_quoted = true;
                cell.clear();
            } else if (ch == ',') {
                cells.push_back(was_quoted ? cell : trim(cell));
                cell.clear();
                was_quoted = false;
            } else {
                cell += ch;
            }
        }
        if (quoted) throw ParseError("unterminated quote", line_no);
        cells.push_back(was_quoted ? cell : trim(cell));
        rows.push_back(std::move(cells));
    }
    return rows;
}

Schema infer_schema(const std::vector<std::vector<std::string>>& rows, bool has_header) {
    if (rows.empty()) throw EmptyInput("no rows");
    const std::size_t arity = rows[0].size();
    std::vector<Attribute> attrs(arity);
    if (has_header) {
        std::set<std::string> seen;
        for (std::size_t c = 0; c < arity; ++c) {
            attrs[c].name = rows[0][c];
            if (!seen.insert(attrs[c].name).second)
                throw SchemaError("duplicate header name: " + attrs[c].name);
        }
    } else {
        for (std::size_t c = 0; c < arity; ++c) attrs[c].name = "col" + std::to_string(c);
    }

    const std::size_t first_data = has_header ? 1 : 0;
    for (std::size_t c = 0; c < arity; ++c) {
        bool numeric = true;
        for (std::size_t r = first_data; r < rows.size(); ++r) {
            const std::string& cell = rows[r][c];
            if (cell == kMissingMarker) continue;
            double unused;
            if (!parse_double(cell, unused)) {
                numeric = false;
                break;
            }
        }
        if (numeric) {
            attrs[c].kind = AttrKind::Numeric;
        } else {
            attrs[c].kind = AttrKind::Nominal;
            for (std::size_t r = first_data; r < rows.size(); ++r) {
                const std::string& cell = rows[r][c];
                if (cell == kMissingMarker) continue;
                if (!attrs[c].index_of(cell)) attrs[c].domain.push_back(cell);
            }
            if (attrs[c].domain.empty()) {
                // All-missing column: the numeric rule holds vacuously.
                attrs[c].kind = AttrKind::Numeric;
            }
        }
    }
    return Schema(std::move(attrs));
}

Dataset load_csv(std::istream& in, const LoadOptions& options) {
    auto rows = parse_csv(in);
    if (rows.empty()) throw EmptyInput("empty input");
    const std::size_t arity = rows[0].size();
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != arity)
            throw ParseError("expected " + std::to_string(arity) + " cells, found " +
                                 std::to_string(rows[r].size()),
                             r + 1);
    if (options.has_header && rows.size() == 1) throw EmptyInput("header-only input");

    Schema schema = infer_schema(rows, options.has_header);
    if (options.class_column) {
        const std::string& spec = *options.class_column;
        auto idx = schema.find(spec);
        if (!idx) {
            std::size_t parsed = 0;
            auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), parsed);
            if (ec == std::errc{} && ptr == spec.data() + spec.size() && parsed < schema.arity())
                idx = parsed;
        }
        if (!idx) throw SchemaError("unknown class column: " + spec);
        schema = schema.with_class_index(*idx);
    }

    std::vector<Instance> instances;
    const std::size_t first_data = options.has_header ? 1 : 0;
    instances.reserve(rows.size() - first_data);
    for (std::size_t r = first_data; r < rows.size(); ++r) {
        Instance inst;
        inst.values.reserve(arity);
        for (std::size_t c = 0; c < arity; ++c) {
            const std::string& cell = rows[r][c];
            if (cell == kMissingMarker) {
                inst.values.emplace_back(MissingValue{});
            } else if (schema.at(c).kind == AttrKind::Numeric) {
                double d;
                if (!parse_double(cell, d))
                    throw ParseError("cell '" + cell + "' is not numeric", r + 1);
                inst.values.emplace_back(d);
            } else {
                const auto li = schema.at(c).index_of(cell);
                if (!li) throw ParseError("label '" + cell + "' outside inferred domain", r + 1);
                inst.values.emplace_back(NominalValue{*li});
            }
        }
        instances.push_back(std::move(inst));
    }
    return Dataset(std::move(schema), std::move(instances));
}

Dataset load_csv_file(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    return load_csv(in, options);
}

std::string format_numeric(double v) {
    for (int precision = 1; precision <= 17; ++precision) {
        std::ostringstream out;
        out.precision(precision);
        out << v;
        double back;
        if (parse_double(out.str(), back) && back == v) return out.str();
    }
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

std::vector<std::vector<std::string>> to_rows(const Dataset& ds) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(ds.size() + 1);
    std::vector<std::string> header;
    for (const auto& attr : ds.schema().attributes()) header.push_back(attr.name);
    rows.push_back(std::move(header));
    for (std::size_t r = 0; r < ds.size(); ++r) {
        std::vector<std::string> row;
        row.reserve(ds.schema().arity());
        for (std::size_t c = 0; c < ds.schema().arity(); ++c) row.push_back(ds.label_at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_csv(std::ostream& out, const Dataset& ds) {
    for (const auto& row : to_rows(ds)) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            const std::string& cell = row[c];
            if (cell.find_first_of(",\"") != std::string::npos) {
                out << '"';
                for (char ch : cell) {
                    if (ch == '"') out << '"';
                    out << ch;
                }
                out << '"';
            } else {
                out << cell;
            }
        }
        out << '\n';
    }
}

void ClassDistribution::add(std::size_t class_index) {
    if (class_index >= counts.size()) counts.resize(class_index + 1, 0);
    ++counts[class_index];
    ++total;
}

std::size_t ClassDistribution::majority_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i)
        if (counts[i] > counts[best]) best = i;
    return best;
}

ClassDistribution class_distribution(const Dataset& ds) {
    const auto& cls = ds.schema().class_attribute();
    const std::size_t ci = *ds.schema().class_index();
    ClassDistribution dist;
    dist.counts.assign(cls.domain.size(), 0);
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const Value& v = ds.at(r).values[ci];
        if (is_missing(v)) throw MissingClassError("missing class value at row " + std::to_string(r));
        dist.add(std::get<NominalValue>(v).index);
    }
    return dist;
}

std::vector<std::pair<std::string, Dataset>> partition_by(const Dataset& ds,
                                                          std::string_view attribute) {
    const auto idx = ds.schema().find(attribute);
    if (!idx) throw SchemaError("unknown attribute: " + std::string(attribute));
    const Attribute& attr = ds.schema().at(*idx);
    if (attr.kind != AttrKind::Nominal)
        throw TypeError("cannot partition by numeric attribute '" + attr.name + "'");

    std::vector<std::vector<Instance>> buckets(attr.domain.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const Value& v = ds.at(r).values[*idx];
        if (is_missing(v))
            throw MissingValueError("missing value for '" + attr.name + "' at row " +
                                    std::to_string(r));
        buckets[std::get<NominalValue>(v).index].push_back(ds.at(r));
    }
    std::vector<std::pair<std::string, Dataset>> result;
    result.reserve(attr.domain.size());
    for (std::size_t i = 0; i < attr.domain.size(); ++i)
        result.emplace_back(attr.domain[i], Dataset(ds.schema(), std::move(buckets[i])));
    return result;
}

std::vector<Fold> stratified_folds(const Dataset& ds, std::size_t k, unsigned seed) {
    if (k < 2) throw FoldError("k must be at least 2");
    if (k > ds.size()) throw FoldError("k exceeds the instance count");
    if (!ds.schema().class_index()) throw SchemaError("no class attribute designated");
    const std::size_t ci = *ds.schema().class_index();
    const std::size_t n_classes = ds.schema().class_attribute().domain.size();

    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const Value& v = ds.at(r).values[ci];
        if (is_missing(v)) throw MissingClassError("missing class value at row " + std::to_string(r));
        by_class[std::get<NominalValue>(v).index].push_back(r);
    }

    std::mt19937 rng(seed);
    std::vector<std::size_t> dealt;
    dealt.reserve(ds.size());
    for (auto& group : by_class) {
        std::shuffle(group.begin(), group.end(), rng);
        dealt.insert(dealt.end(), group.begin(), group.end());
    }

    std::vector<std::vector<std::size_t>> test_idx(k);
    for (std::size_t p = 0; p < dealt.size(); ++p) test_idx[p % k].push_back(dealt[p]);

    std::vector<Fold> folds;
    folds.reserve(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<bool> in_test(ds.size(), false);
        for (std::size_t r : test_idx[f]) in_test[r] = true;
        std::vector<Instance> train, test;
        for (std::size_t r = 0; r < ds.size(); ++r)
            (in_test[r] ? test : train).push_back(ds.at(r));
        folds.push_back(Fold{Dataset(ds.schema(), std::move(train)),
                             Dataset(ds.schema(), std::move(test))});
    }
    return folds;
}

} // namespace edm
