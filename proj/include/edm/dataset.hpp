#ifndef EDM_DATASET_HPP
#define EDM_DATASET_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edm/errors.hpp"

namespace edm {

/// The only recognized missing-value marker in CSV input/output.
inline constexpr std::string_view kMissingMarker = "?";

enum class AttrKind { Nominal, Numeric };

struct MissingValue {
    bool operator==(const MissingValue&) const = default;
};

/// Index into the owning attribute's domain.
struct NominalValue {
    std::size_t index;
    bool operator==(const NominalValue&) const = default;
};

using Value = std::variant<MissingValue, NominalValue, double>;

inline bool is_missing(const Value& v) { return std::holds_alternative<MissingValue>(v); }

/// One column: name, kind, and (for nominal columns) the label domain in
/// first-appearance order. Domain order is load-bearing: it drives branch
/// order, majority-leaf tie-breaks and report layouts downstream.
struct Attribute {
    std::string name;
    AttrKind kind = AttrKind::Nominal;
    std::vector<std::string> domain;

    std::optional<std::size_t> index_of(std::string_view label) const;
    bool operator==(const Attribute&) const = default;
};

class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<Attribute> attributes,
                    std::optional<std::size_t> class_index = std::nullopt);

    std::size_t arity() const { return attributes_.size(); }
    const Attribute& at(std::size_t i) const { return attributes_.at(i); }
    const std::vector<Attribute>& attributes() const { return attributes_; }
    std::optional<std::size_t> find(std::string_view name) const;
    std::optional<std::size_t> class_index() const { return class_index_; }

    /// Throws SchemaError when no class attribute has been designated.
    const Attribute& class_attribute() const;

    Schema with_class(std::string_view name) const;
    Schema with_class_index(std::size_t index) const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<Attribute> attributes_;
    std::optional<std::size_t> class_index_;
};

/// Human-readable mismatch list between two schemas (attribute count, names,
/// kinds). Empty result means prediction-compatible; domains may still differ
/// (unseen labels simply fail to classify).
std::vector<std::string> schema_diff(const Schema& expected, const Schema& actual);

struct Instance {
    std::vector<Value> values;
    bool operator==(const Instance&) const = default;
};

/// Immutable table of instances conforming to a schema. Every transform in
/// the library returns a new Dataset.
class Dataset {
public:
    Dataset() = default;
    Dataset(Schema schema, std::vector<Instance> instances);

    const Schema& schema() const { return schema_; }
    const std::vector<Instance>& instances() const { return instances_; }
    std::size_t size() const { return instances_.size(); }
    const Instance& at(std::size_t i) const { return instances_.at(i); }

    Dataset with_class(std::string_view name) const;

    /// Label text of a nominal cell ("?" for missing).
    std::string label_at(std::size_t row, std::size_t col) const;

    /// Attribute list with kinds and domain sizes plus the instance count.
    std::string summary() const;

    bool operator==(const Dataset&) const = default;

private:
    Schema schema_;
    std::vector<Instance> instances_;
};

struct LoadOptions {
    bool has_header = true;
    /// Class column as a header name or a 0-based index in text form.
    std::optional<std::string> class_column;
};

/// Splits CSV text into cells. Comma delimiter, optional double-quote
/// quoting, cell whitespace trimmed. Throws ParseError on ragged rows.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Infers column kinds from raw cells: a column is Numeric iff every
/// non-missing cell parses as a decimal number, otherwise Nominal with the
/// domain in first-appearance order. "?" cells are missing, never labels.
Schema infer_schema(const std::vector<std::vector<std::string>>& rows, bool has_header);

Dataset load_csv(std::istream& in, const LoadOptions& options = {});
Dataset load_csv_file(const std::string& path, const LoadOptions& options = {});

/// Renders instances back to text cells (missing -> "?"); numeric values use
/// the shortest digits that round-trip.
std::vector<std::vector<std::string>> to_rows(const Dataset& ds);
void write_csv(std::ostream& out, const Dataset& ds);

/// Per-label instance counts over the class attribute, in domain order.
struct ClassDistribution {
    std::vector<std::size_t> counts;
    std::size_t total = 0;

    void add(std::size_t class_index);
    /// Plurality class; ties go to the earlier domain position.
    std::size_t majority_index() const;
    bool operator==(const ClassDistribution&) const = default;
};

ClassDistribution class_distribution(const Dataset& ds);

/// One (possibly empty) sub-dataset per domain label, in domain order.
std::vector<std::pair<std::string, Dataset>> partition_by(const Dataset& ds,
                                                          std::string_view attribute);

struct Fold {
    Dataset train;
    Dataset test;
};

/// Deterministic stratified k-fold split: instances are grouped by class,
/// each group shuffled with the seeded generator, groups concatenated in
/// domain order and dealt round-robin. Per-class counts across folds differ
/// by at most one, and so do fold sizes.
std::vector<Fold> stratified_folds(const Dataset& ds, std::size_t k, unsigned seed);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_numeric(double v);

} // namespace edm

#endif // EDM_DATASET_HPP
