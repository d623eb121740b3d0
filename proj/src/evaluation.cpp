#include "edm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace edm {

namespace {

/// Up to `decimals` places with trailing zeros trimmed, the report style of
/// the summary/percent lines.
std::string trimmed(double v, int decimals) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(decimals) << v;
    std::string s = out.str();
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

} // namespace

std::size_t ConfusionMatrix::row_sum(std::size_t i) const {
    std::size_t sum = 0;
    for (std::size_t v : cells[i]) sum += v;
    return sum;
}

std::size_t ConfusionMatrix::col_sum(std::size_t j) const {
    std::size_t sum = 0;
    for (const auto& row : cells) sum += row[j];
    return sum;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) sum += cells[i][i];
    return sum;
}

std::size_t ConfusionMatrix::classified() const {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) sum += row_sum(i);
    return sum;
}

std::size_t ConfusionMatrix::total() const {
    std::size_t sum = classified();
    for (std::size_t u : unclassified) sum += u;
    return sum;
}

std::optional<std::size_t> ConfusionMatrix::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i] == label) return i;
    return std::nullopt;
}

ConfusionMatrix confusion_matrix(std::span<const std::pair<std::string, Prediction>> pairs,
                                 const std::vector<std::string>& classes) {
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.cells.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
    cm.unclassified.assign(classes.size(), 0);
    for (const auto& [actual, predicted] : pairs) {
        const auto ai = cm.index_of(actual);
        if (!ai) throw ArgumentError("actual label '" + actual + "' outside the class domain");
        if (!predicted) {
            ++cm.unclassified[*ai];
            continue;
        }
        const auto pi = cm.index_of(*predicted);
        if (!pi)
            throw ArgumentError("predicted label '" + *predicted + "' outside the class domain");
        ++cm.cells[*ai][*pi];
    }
    return cm;
}

PerClassMetrics per_class_metrics(const ConfusionMatrix& cm, std::string_view label) {
    const auto idx = cm.index_of(label);
    if (!idx) throw ArgumentError("label '" + std::string(label) + "' outside the class order");
    const std::size_t c = *idx;
    const double diag = static_cast<double>(cm.cells[c][c]);
    const double row = static_cast<double>(cm.row_sum(c));
    const double col = static_cast<double>(cm.col_sum(c));
    const double rest = static_cast<double>(cm.classified()) - row;

    PerClassMetrics m;
    if (row > 0) {
        m.tp_rate = diag / row;
    } else {
        m.degenerate = true;
    }
    m.recall = m.tp_rate;
    if (rest > 0) {
        m.fp_rate = (col - diag) / rest;
    } else {
        m.degenerate = true;
    }
    if (col > 0) {
        m.precision = diag / col;
    } else {
        m.degenerate = true;
    }
    if (m.tp_rate + m.precision > 0)
        m.f_measure = 2 * m.tp_rate * m.precision / (m.tp_rate + m.precision);
    return m;
}

PerClassMetrics weighted_average(std::span<const PerClassMetrics> per_class,
                                 std::span<const double> weights) {
    if (per_class.size() != weights.size())
        throw ArgumentError("one weight per class required");
    double total = 0;
    for (double w : weights) total += w;
    if (total <= 0) throw DegenerateError("zero total weight");

    PerClassMetrics avg;
    double auc_sum = 0;
    double auc_weight = 0;
    for (std::size_t i = 0; i < per_class.size(); ++i) {
        const double w = weights[i] / total;
        avg.tp_rate += w * per_class[i].tp_rate;
        avg.fp_rate += w * per_class[i].fp_rate;
        avg.precision += w * per_class[i].precision;
        avg.recall += w * per_class[i].recall;
        avg.f_measure += w * per_class[i].f_measure;
        if (per_class[i].auc) {
            auc_sum += weights[i] * *per_class[i].auc;
            auc_weight += weights[i];
        }
    }
    if (auc_weight > 0) avg.auc = auc_sum / auc_weight;
    return avg;
}

double kappa(const ConfusionMatrix& cm) {
    const double n = static_cast<double>(cm.classified());
    if (n == 0) throw DegenerateError("no classified instances");
    const double po = static_cast<double>(cm.trace()) / n;
    double pe = 0;
    for (std::size_t i = 0; i < cm.classes.size(); ++i)
        pe += (static_cast<double>(cm.row_sum(i)) / n) * (static_cast<double>(cm.col_sum(i)) / n);
    if (pe >= 1.0) throw DegenerateError("chance agreement is 1");
    return (po - pe) / (1.0 - pe);
}

ErrorStats error_stats(std::span<const ScoredRow> rows, std::span<const double> prior,
                       const std::vector<std::string>& classes) {
    const std::size_t k = classes.size();
    if (prior.size() != k) throw ArgumentError("prior size does not match the class order");

    double abs_sum = 0, sq_sum = 0, prior_abs = 0, prior_sq = 0;
    std::size_t n = 0;
    for (const auto& row : rows) {
        if (!row.dist) continue;
        if (row.dist->size() != k)
            throw ArgumentError("distribution size does not match the class order");
        auto ai = std::find(classes.begin(), classes.end(), row.actual);
        if (ai == classes.end())
            throw ArgumentError("actual label '" + row.actual + "' outside the class order");
        const std::size_t a = static_cast<std::size_t>(ai - classes.begin());
        ++n;
        for (std::size_t c = 0; c < k; ++c) {
            const double y = c == a ? 1.0 : 0.0;
            const double d = (*row.dist)[c] - y;
            abs_sum += std::abs(d);
            sq_sum += d * d;
            const double pd = prior[c] - y;
            prior_abs += std::abs(pd);
            prior_sq += pd * pd;
        }
    }
    if (n == 0) throw DegenerateError("no classified rows");

    ErrorStats stats;
    const double nk = static_cast<double>(n * k);
    stats.mae = abs_sum / nk;
    stats.rmse = std::sqrt(sq_sum / nk);
    if (prior_abs <= 0 || prior_sq <= 0)
        throw DegenerateError("prior predictor has zero error; relative statistics undefined");
    stats.rae_percent = 100.0 * abs_sum / prior_abs;
    stats.rrse_percent = 100.0 * std::sqrt(sq_sum / prior_sq);
    return stats;
}

double one_vs_rest_auc(std::span<const ScoredRow> rows, std::string_view label,
                       const std::vector<std::string>& classes) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end())
        throw ArgumentError("label '" + std::string(label) + "' outside the class order");
    const std::size_t c = static_cast<std::size_t>(it - classes.begin());

    std::vector<double> pos, neg;
    for (const auto& row : rows) {
        if (!row.dist) continue;
        (row.actual == label ? pos : neg).push_back((*row.dist)[c]);
    }
    if (pos.empty() || neg.empty())
        throw DegenerateError("need at least one positive and one negative row");

    double wins = 0;
    for (double p : pos)
        for (double q : neg) {
            if (p > q)
                wins += 1.0;
            else if (p == q)
                wins += 0.5;
        }
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

double EvaluationReport::correct_percent() const {
    return total ? 100.0 * static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

double EvaluationReport::incorrect_percent() const {
    return total ? 100.0 * static_cast<double>(incorrect) / static_cast<double>(total) : 0.0;
}

double EvaluationReport::unclassified_percent() const {
    return total ? 100.0 * static_cast<double>(unclassified) / static_cast<double>(total) : 0.0;
}

EvaluationReport assemble_report(std::span<const std::pair<std::string, Prediction>> pairs,
                                 std::span<const ScoredRow> scored,
                                 const std::vector<std::string>& classes,
                                 std::vector<double> prior) {
    EvaluationReport report;
    report.matrix = confusion_matrix(pairs, classes);
    report.total = report.matrix.total();
    report.correct = report.matrix.trace();
    report.incorrect = report.matrix.classified() - report.correct;
    report.unclassified = report.total - report.matrix.classified();
    report.prior = std::move(prior);

    try {
        report.kappa = kappa(report.matrix);
    } catch (const DegenerateError&) {
    }
    try {
        report.errors = error_stats(scored, report.prior, classes);
    } catch (const DegenerateError&) {
    }

    std::vector<double> weights;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        PerClassMetrics m = per_class_metrics(report.matrix, classes[i]);
        try {
            m.auc = one_vs_rest_auc(scored, classes[i], classes);
        } catch (const DegenerateError&) {
        }
        report.per_class.push_back(m);
        weights.push_back(static_cast<double>(report.matrix.row_sum(i)));
    }
    try {
        report.weighted = weighted_average(report.per_class, weights);
    } catch (const DegenerateError&) {
    }
    return report;
}

EvaluationReport evaluate_training(const Dataset& ds, const DecisionTree& tree) {
    const std::vector<std::string>& classes = tree.schema().class_attribute().domain;
    const std::size_t ci = *tree.schema().class_index();

    std::vector<std::pair<std::string, Prediction>> pairs;
    std::vector<ScoredRow> scored;
    pairs.reserve(ds.size());
    scored.reserve(ds.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const Value& v = ds.at(r).values[ci];
        if (is_missing(v))
            throw MissingClassError("missing class value at row " + std::to_string(r));
        const std::string actual =
            ds.schema().at(ci).domain[std::get<NominalValue>(v).index];
        pairs.emplace_back(actual, predict(tree, ds.at(r), ds.schema()));
        scored.push_back({actual, distribution_for(tree, ds.at(r), ds.schema())});
    }

    std::vector<double> prior(classes.size(), 0.0);
    if (!pairs.empty()) {
        for (const auto& [actual, predicted] : pairs)
            for (std::size_t c = 0; c < classes.size(); ++c)
                if (classes[c] == actual) ++prior[c];
        for (double& p : prior) p /= static_cast<double>(pairs.size());
    }
    return assemble_report(pairs, scored, classes, std::move(prior));
}

EvaluationReport cross_validate(const Dataset& ds, std::size_t k, unsigned seed) {
    const std::vector<std::string>& classes = ds.schema().class_attribute().domain;
    const std::size_t ci = *ds.schema().class_index();

    std::vector<std::pair<std::string, Prediction>> pairs;
    std::vector<ScoredRow> scored;
    for (const Fold& fold : stratified_folds(ds, k, seed)) {
        const DecisionTree tree = build_tree(fold.train);
        for (std::size_t r = 0; r < fold.test.size(); ++r) {
            const Instance& inst = fold.test.at(r);
            const std::string actual =
                ds.schema().at(ci).domain[std::get<NominalValue>(inst.values[ci]).index];
            pairs.emplace_back(actual, predict(tree, inst, fold.test.schema()));
            scored.push_back({actual, distribution_for(tree, inst, fold.test.schema())});
        }
    }

    const ClassDistribution dist = class_distribution(ds);
    std::vector<double> prior(classes.size(), 0.0);
    for (std::size_t c = 0; c < classes.size(); ++c)
        prior[c] = static_cast<double>(dist.counts[c]) / static_cast<double>(dist.total);
    return assemble_report(pairs, scored, classes, std::move(prior));
}

std::vector<PredictionRow> predict_file(const DecisionTree& tree, const Dataset& test) {
    const auto diffs = schema_diff(tree.schema(), test.schema());
    if (!diffs.empty()) {
        std::string msg = "test data does not match the model schema:";
        for (const auto& d : diffs) msg += "\n  " + d;
        throw SchemaError(msg);
    }
    const std::size_t ci = *tree.schema().class_index();

    std::vector<PredictionRow> out;
    out.reserve(test.size());
    for (std::size_t r = 0; r < test.size(); ++r) {
        PredictionRow row;
        row.index = r;
        const Value& v = test.at(r).values[ci];
        if (!is_missing(v))
            row.actual = test.schema().at(ci).domain[std::get<NominalValue>(v).index];
        row.predicted = predict(tree, test.at(r), test.schema());
        out.push_back(std::move(row));
    }
    return out;
}

std::string render_report(const EvaluationReport& report, bool ansi_color) {
    const char* bold = ansi_color ? "\033[1m" : "";
    const char* reset = ansi_color ? "\033[0m" : "";
    std::ostringstream out;

    out << bold << "=== Summary ===" << reset << "\n\n";
    const auto line = [&](const std::string& name, const std::string& count,
                          const std::string& pct) {
        out << pad_right(name, 36) << pad_left(count, 6);
        if (!pct.empty()) out << pad_left(pct, 12) << " %";
        out << '\n';
    };
    line("Correctly Classified Instances", std::to_string(report.correct),
         trimmed(report.correct_percent(), 4));
    line("Incorrectly Classified Instances", std::to_string(report.incorrect),
         trimmed(report.incorrect_percent(), 4));
    out << pad_right("Kappa statistic", 36)
        << pad_left(report.kappa ? trimmed(*report.kappa, 4) : "undefined", 6) << '\n';
    if (report.errors) {
        out << pad_right("Mean absolute error", 36) << pad_left(trimmed(report.errors->mae, 4), 6)
            << '\n';
        out << pad_right("Root mean squared error", 36)
            << pad_left(trimmed(report.errors->rmse, 4), 6) << '\n';
        out << pad_right("Relative absolute error", 36)
            << pad_left(trimmed(report.errors->rae_percent, 4), 6) << " %\n";
        out << pad_right("Root relative squared error", 36)
            << pad_left(trimmed(report.errors->rrse_percent, 4), 6) << " %\n";
    }
    if (report.unclassified > 0)
        line("UnClassified Instances", std::to_string(report.unclassified),
             trimmed(report.unclassified_percent(), 4));
    line("Total Number of Instances", std::to_string(report.total), "");

    out << '\n' << bold << "=== Detailed Accuracy By Class ===" << reset << "\n\n";
    out << "   TP Rate   FP Rate   Precision   Recall   F-Measure   ROC Area   Class\n";
    const auto metric_row = [&](const PerClassMetrics& m, const std::string& tag) {
        out << pad_left(trimmed(m.tp_rate, 3), 10) << pad_left(trimmed(m.fp_rate, 3), 10)
            << pad_left(trimmed(m.precision, 3), 12) << pad_left(trimmed(m.recall, 3), 9)
            << pad_left(trimmed(m.f_measure, 3), 12)
            << pad_left(m.auc ? trimmed(*m.auc, 3) : "-", 11) << "   " << tag << '\n';
    };
    for (std::size_t i = 0; i < report.matrix.classes.size(); ++i)
        metric_row(report.per_class[i], report.matrix.classes[i]);
    metric_row(report.weighted, "Weighted Avg.");

    out << '\n' << bold << "=== Confusion Matrix ===" << reset << "\n\n";
    std::size_t width = 1;
    for (const auto& row : report.matrix.cells)
        for (std::size_t cell : row) width = std::max(width, std::to_string(cell).size());
    std::vector<std::string> letters;
    for (std::size_t i = 0; i < report.matrix.classes.size(); ++i)
        letters.push_back(std::string(1, static_cast<char>('a' + i)));
    for (const auto& letter : letters) out << ' ' << pad_left(letter, width);
    out << "   <-- classified as\n";
    for (std::size_t i = 0; i < report.matrix.cells.size(); ++i) {
        for (std::size_t j = 0; j < report.matrix.cells[i].size(); ++j)
            out << ' ' << pad_left(std::to_string(report.matrix.cells[i][j]), width);
        out << " |  " << letters[i] << " = " << report.matrix.classes[i] << '\n';
    }
    if (report.unclassified > 0) {
        out << "\nUnclassified by actual class:";
        for (std::size_t i = 0; i < report.matrix.classes.size(); ++i)
            if (report.matrix.unclassified[i] > 0)
                out << ' ' << report.matrix.classes[i] << "="
                    << report.matrix.unclassified[i];
        out << '\n';
    }
    return out.str();
}

nlohmann::json report_json(const EvaluationReport& report) {
    nlohmann::json per_class = nlohmann::json::array();
    const auto metrics_json = [](const PerClassMetrics& m) {
        nlohmann::json j{{"tp_rate", m.tp_rate},     {"fp_rate", m.fp_rate},
                         {"precision", m.precision}, {"recall", m.recall},
                         {"f_measure", m.f_measure}, {"degenerate", m.degenerate}};
        if (m.auc) j["roc_area"] = *m.auc;
        return j;
    };
    for (std::size_t i = 0; i < report.matrix.classes.size(); ++i) {
        nlohmann::json j = metrics_json(report.per_class[i]);
        j["class"] = report.matrix.classes[i];
        per_class.push_back(std::move(j));
    }
    nlohmann::json j{{"correct", report.correct},
                     {"incorrect", report.incorrect},
                     {"unclassified", report.unclassified},
                     {"total", report.total},
                     {"correct_percent", report.correct_percent()},
                     {"incorrect_percent", report.incorrect_percent()},
                     {"unclassified_percent", report.unclassified_percent()},
                     {"classes", report.matrix.classes},
                     {"confusion_matrix", report.matrix.cells},
                     {"unclassified_by_class", report.matrix.unclassified},
                     {"per_class", std::move(per_class)},
                     {"weighted", metrics_json(report.weighted)},
                     {"prior", report.prior}};
    if (report.kappa) j["kappa"] = *report.kappa;
    if (report.errors)
        j["errors"] = {{"mae", report.errors->mae},
                       {"rmse", report.errors->rmse},
                       {"rae_percent", report.errors->rae_percent},
                       {"rrse_percent", report.errors->rrse_percent}};
    return j;
}

} // namespace edm
