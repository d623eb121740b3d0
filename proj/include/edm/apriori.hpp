#ifndef EDM_APRIORI_HPP
#define EDM_APRIORI_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edm/errors.hpp"

namespace edm {

/// Item universe in declaration order; itemsets sort by catalog position so
/// joins and table renderings keep the source ordering.
class ItemCatalog {
public:
    ItemCatalog() = default;
    explicit ItemCatalog(std::vector<std::string> codes);

    std::size_t size() const { return codes_.size(); }
    const std::string& code(std::size_t i) const { return codes_.at(i); }
    const std::vector<std::string>& codes() const { return codes_; }
    std::optional<std::size_t> index_of(std::string_view code) const;
    /// Adds the code if unseen; returns its index either way.
    std::size_t intern(std::string_view code);

    bool operator==(const ItemCatalog&) const = default;

private:
    std::vector<std::string> codes_;
};

/// Non-empty set of catalog indices in ascending order.
struct Itemset {
    std::vector<std::size_t> items;

    bool operator==(const Itemset&) const = default;
    auto operator<=>(const Itemset&) const = default;
    std::string render(const ItemCatalog& catalog, std::string_view sep = ",") const;
};

Itemset make_itemset(const ItemCatalog& catalog, std::span<const std::string> codes);

/// Classic Apriori join: k-itemsets sharing their first k-1 items merge into
/// a (k+1)-candidate; output sorted and duplicate-free. Mixed input sizes
/// are an ArgumentError.
std::vector<Itemset> candidate_join(std::span<const Itemset> level);

/// Keeps a candidate iff every (k-1)-subset appears in the previous
/// frequent level.
std::vector<Itemset> prune(std::span<const Itemset> candidates,
                           std::span<const Itemset> previous_frequent);

/// Aggregated-count form of a database: singleton and pair occurrence
/// counts, the declared pair total, and optional higher-order counts.
/// Lookups of unlisted itemsets are 0.
class CountDB {
public:
    explicit CountDB(ItemCatalog catalog);

    const ItemCatalog& catalog() const { return catalog_; }
    void set_count(const Itemset& items, std::size_t count);
    std::size_t count(const Itemset& items) const;
    void set_total_pair_count(std::size_t n) { total_pair_count_ = n; }
    std::size_t total_pair_count() const { return total_pair_count_; }

    /// Two-column text form: `itemset,count` per line with `;`-joined codes,
    /// plus one `TOTAL_PAIRS,n` row.
    static CountDB parse(std::istream& in);

private:
    ItemCatalog catalog_;
    std::map<std::vector<std::size_t>, std::size_t> counts_;
    std::size_t total_pair_count_ = 0;
};

/// Raw transactions: one item list per basket.
struct TransactionDB {
    ItemCatalog catalog;
    std::vector<Itemset> transactions;

    /// One transaction per line, codes comma-separated.
    static TransactionDB parse(std::istream& in);
};

/// Rolls transactions up into singleton/pair counts; total pair count is the
/// sum of all pair occurrences. Higher-order counts are not materialized.
CountDB aggregate_counts(const TransactionDB& db);

struct CountedItemset {
    Itemset itemset;
    std::size_t count;
    bool operator==(const CountedItemset&) const = default;
};

using ItemsetLevel = std::vector<CountedItemset>;

/// Level-wise mining: L1 from singleton counts, then join -> prune -> count
/// -> filter until a level comes out empty. The returned levels are the
/// non-empty frequent sets L1, L2, ...
std::vector<ItemsetLevel> frequent_itemsets(const CountDB& db, std::size_t min_support_count);
std::vector<ItemsetLevel> frequent_itemsets(const TransactionDB& db,
                                            std::size_t min_support_count);

/// pair occurrences / declared pair total.
double rule_support(std::size_t pair_count, std::size_t total_pair_count);
/// pair occurrences / antecedent singleton occurrences.
double confidence(std::size_t pair_count, std::size_t antecedent_count);
/// pair occurrences / sqrt(marginal product), on raw counts.
double cosine(std::size_t pair_count, std::size_t count_x, std::size_t count_y);

struct AssociationRule {
    Itemset antecedent;
    Itemset consequent;
    std::size_t pair_count = 0;
    double support = 0;
    double confidence = 0;
    double cosine = 0;
};

/// Both directed rules for every frequent pair, filtered by minimum
/// confidence, sorted by confidence descending with ties in catalog order.
/// The three measures keep their distinct denominators on purpose: support
/// is over the pair total, confidence over the antecedent singleton count,
/// cosine over raw singleton counts.
std::vector<AssociationRule> mine_rules(std::span<const ItemsetLevel> levels, const CountDB& db,
                                        double min_confidence);

std::string render_levels(std::span<const ItemsetLevel> levels, const ItemCatalog& catalog);
std::string render_rules(std::span<const AssociationRule> rules, const ItemCatalog& catalog);

} // namespace edm

#endif // EDM_APRIORI_HPP
