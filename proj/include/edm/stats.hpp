#ifndef EDM_STATS_HPP
#define EDM_STATS_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edm/dataset.hpp"

namespace edm {

struct CorrelationResult {
    double r = 0;
    double p_two_tailed = 1;
    std::size_t n = 0;
    /// 0.01 or 0.05 when p falls under the level, tightest first.
    std::optional<double> significant_at;
};

/// Product-moment correlation with a two-tailed significance from the
/// Student-t distribution on n-2 degrees of freedom. Needs n >= 3
/// (SampleSizeError) and two non-constant columns (DegenerateError).
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

namespace detail {

/// Regularized incomplete beta I_x(a,b) by Lentz's continued fraction,
/// accurate to about 1e-10 over (0,1).
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| > t) for Student's t with df degrees of freedom.
double student_t_two_tailed(double t, double df);

} // namespace detail

struct CrossTab {
    std::string row_attribute;
    std::string col_attribute;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::size_t>> cells;

    std::size_t row_total(std::size_t i) const;
    std::size_t col_total(std::size_t j) const;
    std::size_t grand_total() const;
};

/// Exact contingency counts for two nominal attributes, labels in domain
/// order. Missing cells are a MissingValueError, numeric attributes a
/// TypeError.
CrossTab crosstab(const Dataset& ds, std::string_view row_attr, std::string_view col_attr);

/// Numeric encoding of a nominal column via an explicit label -> value map;
/// numeric columns pass through. Unmapped labels are an ArgumentError.
std::vector<double> encode_column(const Dataset& ds, std::string_view attribute,
                                  const std::map<std::string, double>& encoding);

/// 2x2 correlation matrix block (Pearson, Sig., N) for a variable pair.
std::string render_correlation(const CorrelationResult& result, std::string_view x_name,
                               std::string_view y_name);

std::string render_crosstab(const CrossTab& table);

} // namespace edm

#endif // EDM_STATS_HPP
