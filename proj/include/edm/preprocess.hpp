#ifndef EDM_PREPROCESS_HPP
#define EDM_PREPROCESS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edm/dataset.hpp"

namespace edm {

/// Ascending cut points over [0,1] with one label per band, ordered lowest
/// band first. A value v selects labels[i] for the smallest i with
/// v <= thresholds[i], and the last label when v clears every threshold.
struct BinSpec {
    std::vector<double> thresholds;
    std::vector<std::string> labels;
};

/// Label for a normalized value per the BinSpec rule. v outside [0,1] is a
/// RangeError.
std::string bin_normalized(double v, const BinSpec& spec);

/// Inclusive integer percent ranges plus the literal text that maps to the
/// fallback band.
struct MathGradeBands {
    struct Range {
        double lo;
        double hi;
        std::string label;
    };
    std::vector<Range> ranges;
    std::string na_text;
    std::string na_label;

    /// A 80-100, B 70-79, C 60-69, D 50-59, E 40-49, F 0-39,
    /// "not applicable" -> F. The published bands leave 36-39 and 90-100
    /// unassigned; both gaps close toward the adjacent band (F and A).
    static MathGradeBands mca_default();
};

/// Band label for a raw percent or the not-applicable text. Percents with no
/// band are a RangeError.
std::string bin_math_grade(const std::string& raw, const MathGradeBands& bands);

/// (v - min) / (max - min) with the observed column extremes; a constant
/// column is a DegenerateColumn error.
std::vector<double> min_max_normalize(std::span<const double> column);
/// Same, against fixed extremes (e.g. the training column's), so test data
/// normalizes consistently.
std::vector<double> min_max_normalize(std::span<const double> column, double min, double max);

/// One column's transform: normalize (optionally against pinned extremes)
/// then bin, or band a raw math-grade column. Exactly one of `bins` / `math`
/// is set.
struct ColumnTransform {
    std::string column;
    std::optional<std::string> rename;
    bool normalize = false;
    std::optional<double> norm_min;
    std::optional<double> norm_max;
    std::optional<BinSpec> bins;
    std::optional<MathGradeBands> math;
};

struct PipelineConfig {
    std::vector<ColumnTransform> columns;

    /// The shipped default: XII/UG/PG percent columns normalized against the
    /// training extremes (49-89, 55-89, 50-89) and binned at
    /// {.25,.487,.75} / {.11,.41,.70} / {.23,.46,.74}; the math-marks column
    /// banded per MathGradeBands::mca_default().
    static PipelineConfig mca_default();

    static PipelineConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// What grade_pipeline did to one column, for CLI summaries.
struct ColumnReport {
    std::string column;
    std::string renamed_to;
    std::optional<double> used_min;
    std::optional<double> used_max;
    std::vector<std::pair<std::string, std::size_t>> bin_counts;
};

/// Replaces each configured column with a nominal grade column (domain in
/// label order); everything else passes through untouched. Missing cells
/// stay missing.
Dataset grade_pipeline(const Dataset& ds, const PipelineConfig& config,
                       std::vector<ColumnReport>* reports = nullptr);

/// Non-class attributes sorted by descending information gain against the
/// class; exact ties keep schema order.
std::vector<std::pair<std::string, double>> rank_attributes_by_gain(const Dataset& ds);

} // namespace edm

#endif // EDM_PREPROCESS_HPP
