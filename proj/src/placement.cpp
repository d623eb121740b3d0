#include "edm/placement.hpp"

#include <istream>
#include <sstream>

namespace edm {

std::string_view band_name(Band band) {
    switch (band) {
    case Band::First: return "First";
    case Band::Second: return "Second";
    case Band::Third: return "Third";
    }
    return "?";
}

Band band_from_name(std::string_view name) {
    if (name == "First") return Band::First;
    if (name == "Second") return Band::Second;
    if (name == "Third") return Band::Third;
    throw ArgumentError("unknown band: " + std::string(name));
}

Band band(double pct) {
    if (pct > 100.0) throw RangeError("percentage above 100");
    if (pct > 60.0) return Band::First;
    if (pct > 45.0) return Band::Second;
    if (pct > 35.0) return Band::Third;
    throw RangeError("percentage at or below 35 is outside the banding scheme");
}

std::string_view grade_name(PlacementGrade grade) {
    switch (grade) {
    case PlacementGrade::Excellent: return "Excellent";
    case PlacementGrade::Good: return "Good";
    case PlacementGrade::Average: return "Average";
    }
    return "?";
}

PlacementGrade grade_from_name(std::string_view name) {
    if (name == "Excellent") return PlacementGrade::Excellent;
    if (name == "Good") return PlacementGrade::Good;
    if (name == "Average") return PlacementGrade::Average;
    throw ArgumentError("unknown grade: " + std::string(name));
}

RuleBook::RuleBook(std::vector<Rule> rules) : rules_(std::move(rules)) {
    for (std::size_t i = 0; i < rules_.size(); ++i)
        for (std::size_t j = i + 1; j < rules_.size(); ++j)
            if (rules_[i].b10 == rules_[j].b10 && rules_[i].b12 == rules_[j].b12 &&
                rules_[i].btech == rules_[j].btech)
                throw ArgumentError("duplicate rule antecedent at lines " + std::to_string(i + 1) +
                                    " and " + std::to_string(j + 1));
}

RuleBook RuleBook::default_rules() {
    using B = Band;
    using G = PlacementGrade;
    return RuleBook({{B::First, B::First, B::First, G::Excellent},
                     {B::Second, B::First, B::First, G::Good},
                     {B::Third, B::First, B::First, G::Average},
                     {B::First, B::Second, B::First, G::Good},
                     {B::Second, B::Second, B::First, G::Average},
                     {B::Third, B::Second, B::First, G::Average},
                     {B::First, B::First, B::Second, G::Average},
                     {B::Second, B::First, B::Second, G::Average},
                     {B::Third, B::First, B::Second, G::Average},
                     {B::First, B::Second, B::Second, G::Average},
                     {B::Second, B::Second, B::Second, G::Average}});
}

RuleBook RuleBook::parse(std::istream& in) {
    std::vector<Rule> rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text;
        for (char ch : line)
            if (ch != ' ' && ch != '\t' && ch != '\r') text += ch;
        if (text.empty() || text.front() == '#') continue;
        std::istringstream cells(text);
        std::string b10, b12, btech, grade;
        if (!std::getline(cells, b10, ',') || !std::getline(cells, b12, ',') ||
            !std::getline(cells, btech, ',') || !std::getline(cells, grade))
            throw ParseError("expected `b10,b12,btech,grade`", line_no);
        try {
            rules.push_back({band_from_name(b10), band_from_name(b12), band_from_name(btech),
                             grade_from_name(grade)});
        } catch (const ArgumentError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    if (rules.empty()) throw EmptyInput("no rules");
    return RuleBook(std::move(rules));
}

PlacementGrade RuleBook::classify(Band b10, Band b12, Band btech) const {
    for (const auto& rule : rules_)
        if (rule.b10 == b10 && rule.b12 == b12 && rule.btech == btech) return rule.grade;
    std::string key = std::string(band_name(b10)) + "," + std::string(band_name(b12)) + "," +
                      std::string(band_name(btech));
    throw NoRuleError("no rule covers (" + key + ")");
}

PlacementGrade classify_placement(Band b10, Band b12, Band btech) {
    static const RuleBook book = RuleBook::default_rules();
    return book.classify(b10, b12, btech);
}

} // namespace edm
