#ifndef EDM_PLACEMENT_HPP
#define EDM_PLACEMENT_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "edm/errors.hpp"

namespace edm {

enum class Band { First, Second, Third };

std::string_view band_name(Band band);
Band band_from_name(std::string_view name);

/// Percentage band: First above 60, Second above 45 up to 60, Third above 35
/// up to 45. Boundary values (exactly 45, exactly 60) belong to the lower
/// band, keeping the strict ">" of the upper bands. Percentages at or below
/// 35 or above 100 are outside the scheme (RangeError).
Band band(double pct);

enum class PlacementGrade { Excellent, Good, Average };

std::string_view grade_name(PlacementGrade grade);
PlacementGrade grade_from_name(std::string_view name);

/// Ordered IF-THEN rules over (10th, 12th, B.Tech) band triples.
class RuleBook {
public:
    struct Rule {
        Band b10;
        Band b12;
        Band btech;
        PlacementGrade grade;
    };

    explicit RuleBook(std::vector<Rule> rules);

    /// The eleven stock rules (every First/Second B.Tech combination).
    static RuleBook default_rules();

    /// One `b10,b12,btech,grade` line per rule.
    static RuleBook parse(std::istream& in);

    const std::vector<Rule>& rules() const { return rules_; }

    /// First matching rule's grade; NoRuleError when no antecedent matches
    /// (the stock rule list is deliberately incomplete).
    PlacementGrade classify(Band b10, Band b12, Band btech) const;

private:
    std::vector<Rule> rules_;
};

/// Lookup against the default rule book.
PlacementGrade classify_placement(Band b10, Band b12, Band btech);

} // namespace edm

#endif // EDM_PLACEMENT_HPP
