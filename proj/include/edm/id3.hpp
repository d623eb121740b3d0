#ifndef EDM_ID3_HPP
#define EDM_ID3_HPP

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "edm/dataset.hpp"

namespace edm {

/// Shannon entropy of a count vector in bits. Zero counts contribute nothing
/// (0*log 0 == 0); the sum runs left to right over the given order so that
/// equal distributions produce bit-identical results, which tie detection
/// relies on.
double entropy(std::span<const std::size_t> counts);
double entropy(const ClassDistribution& dist);

/// Entropy(S) - sum over domain labels of (|S_v|/|S|) * Entropy(S_v),
/// clamped at zero against round-off. Empty partitions contribute nothing.
double information_gain(const Dataset& ds, std::string_view attribute);

struct TreeNode;

struct LeafNode {
    std::size_t class_index;
    ClassDistribution support;
    bool operator==(const LeafNode&) const = default;
};

/// Branch for a domain label that had no training instances.
struct NullLeafNode {
    bool operator==(const NullLeafNode&) const = default;
};

struct InternalNode {
    std::size_t attribute;
    std::vector<TreeNode> branches; // aligned with the attribute's domain
    bool operator==(const InternalNode&) const = default;
};

struct TreeNode {
    std::variant<LeafNode, NullLeafNode, InternalNode> node;
    bool operator==(const TreeNode&) const = default;
};

class DecisionTree {
public:
    DecisionTree(Schema schema, TreeNode root, std::size_t trained_on,
                 std::vector<double> root_gains);

    const Schema& schema() const { return schema_; }
    const TreeNode& root() const { return root_; }
    std::size_t trained_on() const { return trained_on_; }

    /// Gains on the full training set, aligned with schema attributes (0 at
    /// the class slot). Kept in the model so the tie-break stays reproducible
    /// after deserialization.
    const std::vector<double>& root_gains() const { return root_gains_; }

    bool operator==(const DecisionTree&) const = default;

private:
    Schema schema_;
    TreeNode root_;
    std::size_t trained_on_;
    std::vector<double> root_gains_;
};

/// Grows the tree top-down on nominal data. At each node the attribute with
/// the highest information gain over the node's instances wins; exact gain
/// ties are broken by the larger full-training-set gain, then schema order.
/// A node becomes a majority leaf (ties by class-domain order) when no
/// attribute remains or the best gain is zero; empty branches become null
/// leaves.
DecisionTree build_tree(const Dataset& ds);

/// Class label reached by walking the instance's values, or nullopt when the
/// walk hits a null leaf or a value the training data never saw.
/// The instance is given in `schema` coordinates; labels are re-mapped into
/// the tree's domains by name.
std::optional<std::string> predict(const DecisionTree& tree, const Instance& inst,
                                   const Schema& schema);

/// Leaf support normalized to sum 1 over the class domain, or nullopt when
/// the instance is unclassifiable.
std::optional<std::vector<double>> distribution_for(const DecisionTree& tree,
                                                    const Instance& inst,
                                                    const Schema& schema);

/// One line per branch, "| " per nesting level, leaves as ": <class>" and
/// null leaves as ": null"; branches in domain order. A bare root leaf
/// renders as its class label on one line.
std::string render_text(const DecisionTree& tree);

/// Versioned JSON model document; lossless round-trip of the schema
/// (including domain order), root gains and the node structure.
std::string serialize(const DecisionTree& tree);
DecisionTree deserialize(const std::string& document);

} // namespace edm

#endif // EDM_ID3_HPP
