#ifndef EDM_EVALUATION_HPP
#define EDM_EVALUATION_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edm/dataset.hpp"
#include "edm/id3.hpp"

namespace edm {

/// nullopt marks an unclassified prediction.
using Prediction = std::optional<std::string>;

struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<std::size_t>> cells; // [actual][predicted], classified only
    std::vector<std::size_t> unclassified;       // per actual class

    std::size_t row_sum(std::size_t i) const;
    std::size_t col_sum(std::size_t j) const;
    std::size_t trace() const;
    std::size_t classified() const;
    std::size_t total() const;
    std::optional<std::size_t> index_of(std::string_view label) const;
};

/// Tallies (actual, predicted) pairs; unclassified predictions are counted
/// per actual class and excluded from the cells.
ConfusionMatrix confusion_matrix(std::span<const std::pair<std::string, Prediction>> pairs,
                                 const std::vector<std::string>& classes);

struct PerClassMetrics {
    double tp_rate = 0;
    double fp_rate = 0;
    double precision = 0;
    double recall = 0;
    double f_measure = 0;
    std::optional<double> auc;
    /// Set when any ratio had a zero denominator and was reported as 0.
    bool degenerate = false;
};

/// Rates for one class over classified instances: tp_rate = recall =
/// diagonal/row, precision = diagonal/column, fp_rate = off-column/rest,
/// f_measure the harmonic mean. 0/0 cells report 0 with the degenerate flag.
PerClassMetrics per_class_metrics(const ConfusionMatrix& cm, std::string_view label);

/// Per-metric weighted mean; weights are the classified actual counts.
PerClassMetrics weighted_average(std::span<const PerClassMetrics> per_class,
                                 std::span<const double> weights);

/// Chance-corrected agreement (p_o - p_e) / (1 - p_e) over classified
/// instances. p_e == 1 is a DegenerateError.
double kappa(const ConfusionMatrix& cm);

struct ScoredRow {
    std::string actual;
    std::optional<std::vector<double>> dist; // over the class order; nullopt = unclassified
};

struct ErrorStats {
    double mae = 0;
    double rmse = 0;
    double rae_percent = 0;
    double rrse_percent = 0;
};

/// Distribution error statistics over classified rows. With K classes and N
/// classified rows against one-hot actuals: mae = sum|p-y| / (N*K),
/// rmse = sqrt(sum(p-y)^2 / (N*K)); rae/rrse take the class-prior predictor
/// as baseline and are percentages.
ErrorStats error_stats(std::span<const ScoredRow> rows, std::span<const double> prior,
                       const std::vector<std::string>& classes);

/// Mann-Whitney rank statistic of the class score for positives vs
/// negatives, ties counted half. Needs at least one classified row on each
/// side, else DegenerateError.
double one_vs_rest_auc(std::span<const ScoredRow> rows, std::string_view label,
                       const std::vector<std::string>& classes);

struct EvaluationReport {
    ConfusionMatrix matrix;
    std::size_t correct = 0;
    std::size_t incorrect = 0;
    std::size_t unclassified = 0;
    std::size_t total = 0;
    std::optional<double> kappa;
    std::optional<ErrorStats> errors;
    std::vector<PerClassMetrics> per_class; // aligned with matrix.classes
    PerClassMetrics weighted;
    std::vector<double> prior;

    double correct_percent() const;
    double incorrect_percent() const;
    double unclassified_percent() const;
};

/// Full report from pooled predictions; degenerate statistics are left
/// unset rather than failing the report.
EvaluationReport assemble_report(std::span<const std::pair<std::string, Prediction>> pairs,
                                 std::span<const ScoredRow> scored,
                                 const std::vector<std::string>& classes,
                                 std::vector<double> prior);

/// Predicts every instance with the tree it was trained with; prior = the
/// dataset's class frequencies.
EvaluationReport evaluate_training(const Dataset& ds, const DecisionTree& tree);

/// Stratified k-fold cross-validation: trains on each complement, predicts
/// each fold, pools everything into one report (prior from the full
/// dataset). Deterministic for a given seed.
EvaluationReport cross_validate(const Dataset& ds, std::size_t k, unsigned seed);

struct PredictionRow {
    std::size_t index;
    std::optional<std::string> actual; // nullopt when the class value is missing
    Prediction predicted;
};

/// One row per test instance in input order. The test schema must match the
/// model's attribute names/kinds (SchemaError otherwise); class values may
/// be missing or placeholder guesses.
std::vector<PredictionRow> predict_file(const DecisionTree& tree, const Dataset& test);

/// Text report: summary, detailed per-class accuracy and the confusion
/// matrix, section by section.
std::string render_report(const EvaluationReport& report, bool ansi_color = false);

nlohmann::json report_json(const EvaluationReport& report);

} // namespace edm

#endif // EDM_EVALUATION_HPP
