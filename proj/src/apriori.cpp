#include "edm/apriori.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <set>
#include <sstream>

namespace edm {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(trim(s.substr(start)));
            break;
        }
        parts.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return parts;
}

} // namespace

ItemCatalog::ItemCatalog(std::vector<std::string> codes) : codes_(std::move(codes)) {
    std::set<std::string_view> seen;
    for (const auto& code : codes_) {
        if (code.empty()) throw ArgumentError("empty item code");
        if (!seen.insert(code).second) throw ArgumentError("duplicate item code: " + code);
    }
}

std::optional<std::size_t> ItemCatalog::index_of(std::string_view code) const {
    for (std::size_t i = 0; i < codes_.size(); ++i)
        if (codes_[i] == code) return i;
    return std::nullopt;
}

std::size_t ItemCatalog::intern(std::string_view code) {
    if (const auto idx = index_of(code)) return *idx;
    codes_.emplace_back(code);
    return codes_.size() - 1;
}

std::string Itemset::render(const ItemCatalog& catalog, std::string_view sep) const {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += catalog.code(items[i]);
    }
    return out;
}

Itemset make_itemset(const ItemCatalog& catalog, std::span<const std::string> codes) {
    Itemset set;
    for (const auto& code : codes) {
        const auto idx = catalog.index_of(code);
        if (!idx) throw ArgumentError("unknown item code: " + code);
        set.items.push_back(*idx);
    }
    std::sort(set.items.begin(), set.items.end());
    set.items.erase(std::unique(set.items.begin(), set.items.end()), set.items.end());
    if (set.items.empty()) throw ArgumentError("empty itemset");
    return set;
}

std::vector<Itemset> candidate_join(std::span<const Itemset> level) {
    if (level.empty()) return {};
    const std::size_t k = level.front().items.size();
    for (const auto& set : level)
        if (set.items.size() != k) throw ArgumentError("mixed itemset sizes in join input");

    std::set<Itemset> out;
    for (std::size_t i = 0; i < level.size(); ++i) {
        for (std::size_t j = i + 1; j < level.size(); ++j) {
            const auto& a = level[i].items;
            const auto& b = level[j].items;
            if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) continue;
            if (a.back() == b.back()) continue;
            Itemset merged = level[i];
            merged.items.back() = std::min(a.back(), b.back());
            merged.items.push_back(std::max(a.back(), b.back()));
            out.insert(std::move(merged));
        }
    }
    return {out.begin(), out.end()};
}

std::vector<Itemset> prune(std::span<const Itemset> candidates,
                           std::span<const Itemset> previous_frequent) {
    const std::set<Itemset> prev(previous_frequent.begin(), previous_frequent.end());
    std::vector<Itemset> kept;
    for (const auto& candidate : candidates) {
        bool all_frequent = true;
        for (std::size_t drop = 0; drop < candidate.items.size() && all_frequent; ++drop) {
            Itemset subset;
            for (std::size_t i = 0; i < candidate.items.size(); ++i)
                if (i != drop) subset.items.push_back(candidate.items[i]);
            all_frequent = prev.count(subset) > 0;
        }
        if (all_frequent) kept.push_back(candidate);
    }
    return kept;
}

CountDB::CountDB(ItemCatalog catalog) : catalog_(std::move(catalog)) {}

void CountDB::set_count(const Itemset& items, std::size_t count) {
    for (std::size_t i : items.items)
        if (i >= catalog_.size()) throw ArgumentError("itemset references an unknown item");
    counts_[items.items] = count;
}

std::size_t CountDB::count(const Itemset& items) const {
    const auto it = counts_.find(items.items);
    return it == counts_.end() ? 0 : it->second;
}

CountDB CountDB::parse(std::istream& in) {
    struct Row {
        std::vector<std::string> codes;
        std::size_t count;
    };
    std::vector<Row> rows;
    ItemCatalog catalog;
    std::optional<std::size_t> total_pairs;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto cells = split(text, ',');
        if (cells.size() != 2) throw ParseError("expected `itemset,count`", line_no);
        std::size_t count = 0;
        const auto& num = cells[1];
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
        if (ec != std::errc{} || ptr != num.data() + num.size())
            throw ParseError("count '" + num + "' is not a non-negative integer", line_no);
        if (cells[0] == "TOTAL_PAIRS") {
            total_pairs = count;
            continue;
        }
        Row row{split(cells[0], ';'), count};
        for (const auto& code : row.codes) {
            if (code.empty()) throw ParseError("empty item code", line_no);
            if (row.codes.size() == 1) catalog.intern(code);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyInput("no itemset rows");

    // Multi-item rows may mention codes with no singleton row of their own.
    for (const auto& row : rows)
        for (const auto& code : row.codes) catalog.intern(code);

    CountDB db(catalog);
    std::size_t pair_sum = 0;
    for (const auto& row : rows) {
        const Itemset set = make_itemset(db.catalog(), row.codes);
        db.set_count(set, row.count);
        if (set.items.size() == 2) pair_sum += row.count;
    }
    db.set_total_pair_count(total_pairs.value_or(pair_sum));
    return db;
}

TransactionDB TransactionDB::parse(std::istream& in) {
    TransactionDB db;
    std::vector<std::vector<std::string>> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        auto codes = split(text, ',');
        codes.erase(std::remove(codes.begin(), codes.end(), std::string()), codes.end());
        if (codes.empty()) throw ParseError("empty transaction", line_no);
        for (const auto& code : codes) db.catalog.intern(code);
        raw.push_back(std::move(codes));
    }
    if (raw.empty()) throw EmptyInput("no transactions");
    for (const auto& codes : raw) db.transactions.push_back(make_itemset(db.catalog, codes));
    return db;
}

CountDB aggregate_counts(const TransactionDB& db) {
    CountDB out(db.catalog);
    std::size_t pair_total = 0;
    for (std::size_t a = 0; a < db.catalog.size(); ++a) {
        std::size_t count = 0;
        for (const auto& txn : db.transactions)
            count += std::binary_search(txn.items.begin(), txn.items.end(), a) ? 1 : 0;
        out.set_count(Itemset{{a}}, count);
    }
    for (std::size_t a = 0; a < db.catalog.size(); ++a) {
        for (std::size_t b = a + 1; b < db.catalog.size(); ++b) {
            std::size_t count = 0;
            for (const auto& txn : db.transactions)
                count += (std::binary_search(txn.items.begin(), txn.items.end(), a) &&
                          std::binary_search(txn.items.begin(), txn.items.end(), b))
                             ? 1
                             : 0;
            if (count) out.set_count(Itemset{{a, b}}, count);
            pair_total += count;
        }
    }
    out.set_total_pair_count(pair_total);
    return out;
}

namespace {

template <typename CountFn>
std::vector<ItemsetLevel> mine_levels(const ItemCatalog& catalog, std::size_t min_support_count,
                                      CountFn&& count_of) {
    if (min_support_count < 1) throw ArgumentError("minimum support count must be at least 1");

    std::vector<ItemsetLevel> levels;
    ItemsetLevel level;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const Itemset single{{i}};
        const std::size_t c = count_of(single);
        if (c >= min_support_count) level.push_back({single, c});
    }
    while (!level.empty()) {
        levels.push_back(level);
        std::vector<Itemset> frequent;
        frequent.reserve(level.size());
        for (const auto& entry : level) frequent.push_back(entry.itemset);

        const std::vector<Itemset> joined = candidate_join(frequent);
        const std::vector<Itemset> candidates = prune(joined, frequent);
        level.clear();
        for (const auto& candidate : candidates) {
            const std::size_t c = count_of(candidate);
            if (c >= min_support_count) level.push_back({candidate, c});
        }
    }
    return levels;
}

} // namespace

std::vector<ItemsetLevel> frequent_itemsets(const CountDB& db, std::size_t min_support_count) {
    return mine_levels(db.catalog(), min_support_count,
                       [&](const Itemset& s) { return db.count(s); });
}

std::vector<ItemsetLevel> frequent_itemsets(const TransactionDB& db,
                                            std::size_t min_support_count) {
    return mine_levels(db.catalog, min_support_count, [&](const Itemset& s) {
        std::size_t count = 0;
        for (const auto& txn : db.transactions)
            count += std::includes(txn.items.begin(), txn.items.end(), s.items.begin(),
                                   s.items.end())
                         ? 1
                         : 0;
        return count;
    });
}

double rule_support(std::size_t pair_count, std::size_t total_pair_count) {
    if (total_pair_count == 0) throw DegenerateError("total pair count is zero");
    return static_cast<double>(pair_count) / static_cast<double>(total_pair_count);
}

double confidence(std::size_t pair_count, std::size_t antecedent_count) {
    if (antecedent_count == 0) throw DegenerateError("antecedent count is zero");
    return static_cast<double>(pair_count) / static_cast<double>(antecedent_count);
}

double cosine(std::size_t pair_count, std::size_t count_x, std::size_t count_y) {
    if (count_x == 0 || count_y == 0) throw DegenerateError("zero marginal count");
    return static_cast<double>(pair_count) /
           std::sqrt(static_cast<double>(count_x) * static_cast<double>(count_y));
}

std::vector<AssociationRule> mine_rules(std::span<const ItemsetLevel> levels, const CountDB& db,
                                        double min_confidence) {
    std::vector<AssociationRule> rules;
    for (const auto& level : levels) {
        if (level.empty() || level.front().itemset.items.size() != 2) continue;
        for (const auto& entry : level) {
            const std::size_t x = entry.itemset.items[0];
            const std::size_t y = entry.itemset.items[1];
            const std::size_t cx = db.count(Itemset{{x}});
            const std::size_t cy = db.count(Itemset{{y}});
            for (const auto& [ante, cons, ante_count] :
                 {std::tuple{x, y, cx}, std::tuple{y, x, cy}}) {
                AssociationRule rule;
                rule.antecedent = Itemset{{ante}};
                rule.consequent = Itemset{{cons}};
                rule.pair_count = entry.count;
                rule.support = rule_support(entry.count, db.total_pair_count());
                rule.confidence = confidence(entry.count, ante_count);
                rule.cosine = cosine(entry.count, cx, cy);
                if (rule.confidence >= min_confidence) rules.push_back(std::move(rule));
            }
        }
    }
    std::stable_sort(rules.begin(), rules.end(), [](const auto& a, const auto& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
        return a.consequent < b.consequent;
    });
    return rules;
}

std::string render_levels(std::span<const ItemsetLevel> levels, const ItemCatalog& catalog) {
    std::ostringstream out;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        out << "L" << (i + 1) << " (frequent " << (i + 1) << "-itemsets)\n";
        out << "  itemset        support count\n";
        for (const auto& entry : levels[i]) {
            std::string name = entry.itemset.render(catalog);
            if (name.size() < 15) name.resize(15, ' ');
            out << "  " << name << entry.count << '\n';
        }
        out << '\n';
    }
    if (levels.empty()) out << "no frequent itemsets\n";
    return out.str();
}

std::string render_rules(std::span<const AssociationRule> rules, const ItemCatalog& catalog) {
    std::ostringstream out;
    out << "rule            support  confidence  cosine\n";
    for (const auto& rule : rules) {
        std::string name = rule.antecedent.render(catalog) + "->" + rule.consequent.render(catalog);
        if (name.size() < 15) name.resize(15, ' ');
        out << name << ' ' << std::fixed << std::setprecision(2) << std::setw(7) << rule.support
            << "  " << std::setprecision(4) << std::setw(10) << rule.confidence << "  "
            << std::setprecision(2) << std::setw(6) << rule.cosine << '\n';
    }
    return out.str();
}

} // namespace edm
