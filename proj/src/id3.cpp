#include "edm/id3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace edm {

namespace {

using json = nlohmann::json;

// Gains below this are treated as zero and stop the recursion; pure nodes
// fall out of the same test since every attribute scores exactly 0 there.
constexpr double kZeroGain = 1e-6;

struct TrainContext {
    const Dataset& ds;
    std::size_t class_index;
    std::size_t n_classes;
    std::vector<double> root_gains; // by attribute index
};

std::size_t nominal_index(const Instance& inst, std::size_t attr) {
    return std::get<NominalValue>(inst.values[attr]).index;
}

ClassDistribution distribution_of(const TrainContext& ctx, std::span<const std::size_t> rows) {
    ClassDistribution dist;
    dist.counts.assign(ctx.n_classes, 0);
    for (std::size_t r : rows) dist.add(nominal_index(ctx.ds.at(r), ctx.class_index));
    return dist;
}

// Gain of `attr` over the given rows; count matrix built in one pass, the
// weighted sum taken left to right over domain order.
double gain_over(const TrainContext& ctx, std::span<const std::size_t> rows, std::size_t attr,
                 const ClassDistribution& node_dist) {
    const std::size_t n_values = ctx.ds.schema().at(attr).domain.size();
    std::vector<std::vector<std::size_t>> counts(n_values,
                                                 std::vector<std::size_t>(ctx.n_classes, 0));
    std::vector<std::size_t> sizes(n_values, 0);
    for (std::size_t r : rows) {
        const std::size_t v = nominal_index(ctx.ds.at(r), attr);
        ++counts[v][nominal_index(ctx.ds.at(r), ctx.class_index)];
        ++sizes[v];
    }
    double weighted = 0.0;
    const double n = static_cast<double>(rows.size());
    for (std::size_t v = 0; v < n_values; ++v) {
        if (sizes[v] == 0) continue;
        weighted += (static_cast<double>(sizes[v]) / n) * entropy(counts[v]);
    }
    const double g = entropy(node_dist) - weighted;
    return g > 0.0 ? g : 0.0;
}

TreeNode grow(const TrainContext& ctx, std::span<const std::size_t> rows,
              const std::vector<bool>& available) {
    if (rows.empty()) return TreeNode{NullLeafNode{}};

    const ClassDistribution dist = distribution_of(ctx, rows);

    std::optional<std::size_t> best;
    double best_gain = 0.0;
    for (std::size_t a = 0; a < ctx.ds.schema().arity(); ++a) {
        if (!available[a]) continue;
        const double g = gain_over(ctx, rows, a, dist);
        if (!best || g > best_gain ||
            (g == best_gain && ctx.root_gains[a] > ctx.root_gains[*best])) {
            best = a;
            best_gain = g;
        }
    }

    if (!best || best_gain < kZeroGain)
        return TreeNode{LeafNode{dist.majority_index(), dist}};

    const std::size_t attr = *best;
    const std::size_t n_values = ctx.ds.schema().at(attr).domain.size();
    std::vector<std::vector<std::size_t>> partitions(n_values);
    for (std::size_t r : rows) partitions[nominal_index(ctx.ds.at(r), attr)].push_back(r);

    std::vector<bool> remaining = available;
    remaining[attr] = false;

    InternalNode node{attr, {}};
    node.branches.reserve(n_values);
    for (std::size_t v = 0; v < n_values; ++v)
        node.branches.push_back(grow(ctx, partitions[v], remaining));
    return TreeNode{std::move(node)};
}

const TreeNode* walk(const DecisionTree& tree, const Instance& mapped) {
    const TreeNode* node = &tree.root();
    while (const auto* internal = std::get_if<InternalNode>(&node->node)) {
        const Value& v = mapped.values[internal->attribute];
        if (is_missing(v)) return nullptr;
        node = &internal->branches[std::get<NominalValue>(v).index];
    }
    return node;
}

// Re-expresses an instance in the tree's schema coordinates. Attributes are
// matched by position (names are checked); labels unknown to the tree's
// domain become missing, which the walk reports as unclassified.
Instance map_into(const Schema& tree_schema, const Instance& inst, const Schema& schema) {
    if (schema.arity() != tree_schema.arity())
        throw SchemaError("instance schema arity differs from the model's");
    Instance mapped;
    mapped.values.reserve(tree_schema.arity());
    for (std::size_t a = 0; a < tree_schema.arity(); ++a) {
        const Attribute& want = tree_schema.at(a);
        const Attribute& have = schema.at(a);
        if (want.name != have.name)
            throw SchemaError("attribute " + std::to_string(a) + " is '" + have.name +
                              "', model expects '" + want.name + "'");
        const Value& v = inst.values[a];
        if (is_missing(v) || std::holds_alternative<double>(v)) {
            mapped.values.emplace_back(MissingValue{});
            continue;
        }
        const std::string& label = have.domain[std::get<NominalValue>(v).index];
        if (const auto idx = want.index_of(label))
            mapped.values.emplace_back(NominalValue{*idx});
        else
            mapped.values.emplace_back(MissingValue{});
    }
    return mapped;
}

void render_node(const TreeNode& node, const Schema& schema, std::size_t depth,
                 std::ostringstream& out) {
    const auto& internal = std::get<InternalNode>(node.node);
    const Attribute& attr = schema.at(internal.attribute);
    for (std::size_t v = 0; v < internal.branches.size(); ++v) {
        for (std::size_t d = 0; d < depth; ++d) out << "| ";
        out << attr.name << " = " << attr.domain[v];
        const TreeNode& child = internal.branches[v];
        if (const auto* leaf = std::get_if<LeafNode>(&child.node)) {
            out << ": " << schema.class_attribute().domain[leaf->class_index] << '\n';
        } else if (std::holds_alternative<NullLeafNode>(child.node)) {
            out << ": null\n";
        } else {
            out << '\n';
            render_node(child, schema, depth + 1, out);
        }
    }
}

json node_to_json(const TreeNode& node) {
    if (const auto* leaf = std::get_if<LeafNode>(&node.node)) {
        return json{{"kind", "leaf"},
                    {"class", leaf->class_index},
                    {"support", leaf->support.counts}};
    }
    if (std::holds_alternative<NullLeafNode>(node.node)) return json{{"kind", "null"}};
    const auto& internal = std::get<InternalNode>(node.node);
    json branches = json::array();
    for (const auto& child : internal.branches) branches.push_back(node_to_json(child));
    return json{{"kind", "internal"}, {"attribute", internal.attribute},
                {"branches", std::move(branches)}};
}

TreeNode node_from_json(const json& j, const Schema& schema) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "null") return TreeNode{NullLeafNode{}};
    const std::size_t n_classes = schema.class_attribute().domain.size();
    if (kind == "leaf") {
        LeafNode leaf;
        leaf.class_index = j.at("class").get<std::size_t>();
        if (leaf.class_index >= n_classes)
            throw ModelFormatError("leaf class label outside the class domain");
        leaf.support.counts = j.at("support").get<std::vector<std::size_t>>();
        if (leaf.support.counts.size() != n_classes)
            throw ModelFormatError("leaf support size does not match the class domain");
        for (std::size_t c : leaf.support.counts) leaf.support.total += c;
        return TreeNode{std::move(leaf)};
    }
    if (kind == "internal") {
        InternalNode internal;
        internal.attribute = j.at("attribute").get<std::size_t>();
        if (internal.attribute >= schema.arity())
            throw ModelFormatError("internal node references an unknown attribute");
        const Attribute& attr = schema.at(internal.attribute);
        if (attr.kind != AttrKind::Nominal)
            throw ModelFormatError("internal node splits on a numeric attribute");
        const json& branches = j.at("branches");
        if (!branches.is_array() || branches.size() != attr.domain.size())
            throw ModelFormatError("branch count does not cover the attribute domain");
        for (const auto& b : branches) internal.branches.push_back(node_from_json(b, schema));
        return TreeNode{std::move(internal)};
    }
    throw ModelFormatError("unknown node kind: " + kind);
}

} // namespace

double entropy(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    if (total == 0) return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double entropy(const ClassDistribution& dist) { return entropy(dist.counts); }

double information_gain(const Dataset& ds, std::string_view attribute) {
    const auto idx = ds.schema().find(attribute);
    if (!idx) throw SchemaError("unknown attribute: " + std::string(attribute));
    if (!ds.schema().class_index()) throw SchemaError("no class attribute designated");
    if (*ds.schema().class_index() == *idx)
        throw ArgumentError("gain of the class attribute against itself is undefined");
    if (ds.schema().at(*idx).kind != AttrKind::Nominal)
        throw TypeError("information gain requires a nominal attribute");

    TrainContext ctx{ds, *ds.schema().class_index(),
                     ds.schema().class_attribute().domain.size(), {}};
    std::vector<std::size_t> rows(ds.size());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    return gain_over(ctx, rows, *idx, distribution_of(ctx, rows));
}

DecisionTree::DecisionTree(Schema schema, TreeNode root, std::size_t trained_on,
                           std::vector<double> root_gains)
    : schema_(std::move(schema)), root_(std::move(root)), trained_on_(trained_on),
      root_gains_(std::move(root_gains)) {
    if (!schema_.class_index()) throw SchemaError("decision tree requires a class attribute");
    if (root_gains_.size() != schema_.arity())
        throw SchemaError("root gain vector does not match the schema");
}

DecisionTree build_tree(const Dataset& ds) {
    if (ds.size() == 0) throw EmptyTrainingSet("cannot train on an empty dataset");
    if (!ds.schema().class_index()) throw SchemaError("no class attribute designated");
    const std::size_t class_index = *ds.schema().class_index();
    for (std::size_t a = 0; a < ds.schema().arity(); ++a)
        if (ds.schema().at(a).kind != AttrKind::Nominal)
            throw TypeError("training requires nominal attributes; '" + ds.schema().at(a).name +
                            "' is numeric");
    for (std::size_t r = 0; r < ds.size(); ++r)
        for (std::size_t a = 0; a < ds.schema().arity(); ++a)
            if (is_missing(ds.at(r).values[a]))
                throw MissingValueError("missing value at row " + std::to_string(r));

    TrainContext ctx{ds, class_index, ds.schema().class_attribute().domain.size(), {}};
    std::vector<std::size_t> rows(ds.size());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    const ClassDistribution full = distribution_of(ctx, rows);

    ctx.root_gains.assign(ds.schema().arity(), 0.0);
    std::vector<bool> available(ds.schema().arity(), false);
    for (std::size_t a = 0; a < ds.schema().arity(); ++a) {
        if (a == class_index) continue;
        available[a] = true;
        ctx.root_gains[a] = gain_over(ctx, rows, a, full);
    }

    TreeNode root = grow(ctx, rows, available);
    return DecisionTree(ds.schema(), std::move(root), ds.size(), ctx.root_gains);
}

std::optional<std::string> predict(const DecisionTree& tree, const Instance& inst,
                                   const Schema& schema) {
    const Instance mapped = map_into(tree.schema(), inst, schema);
    const TreeNode* node = walk(tree, mapped);
    if (!node) return std::nullopt;
    if (const auto* leaf = std::get_if<LeafNode>(&node->node))
        return tree.schema().class_attribute().domain[leaf->class_index];
    return std::nullopt;
}

std::optional<std::vector<double>> distribution_for(const DecisionTree& tree,
                                                    const Instance& inst,
                                                    const Schema& schema) {
    const Instance mapped = map_into(tree.schema(), inst, schema);
    const TreeNode* node = walk(tree, mapped);
    if (!node) return std::nullopt;
    const auto* leaf = std::get_if<LeafNode>(&node->node);
    if (!leaf) return std::nullopt;
    std::vector<double> dist(leaf->support.counts.size(), 0.0);
    const double total = static_cast<double>(leaf->support.total);
    if (total == 0) return std::nullopt;
    for (std::size_t c = 0; c < dist.size(); ++c)
        dist[c] = static_cast<double>(leaf->support.counts[c]) / total;
    return dist;
}

std::string render_text(const DecisionTree& tree) {
    std::ostringstream out;
    if (const auto* leaf = std::get_if<LeafNode>(&tree.root().node)) {
        out << tree.schema().class_attribute().domain[leaf->class_index] << '\n';
        return out.str();
    }
    if (std::holds_alternative<NullLeafNode>(tree.root().node)) {
        out << "null\n";
        return out.str();
    }
    render_node(tree.root(), tree.schema(), 0, out);
    return out.str();
}

std::string serialize(const DecisionTree& tree) {
    json attrs = json::array();
    for (const auto& attr : tree.schema().attributes()) {
        attrs.push_back(json{{"name", attr.name},
                             {"kind", attr.kind == AttrKind::Nominal ? "nominal" : "numeric"},
                             {"domain", attr.domain}});
    }
    json doc{{"format", "id3-model"},
             {"version", 1},
             {"class_index", *tree.schema().class_index()},
             {"attributes", std::move(attrs)},
             {"trained_on", tree.trained_on()},
             {"root_gains", tree.root_gains()},
             {"root", node_to_json(tree.root())}};
    return doc.dump(2) + "\n";
}

DecisionTree deserialize(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("model document is not valid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "id3-model")
            throw ModelFormatError("not an id3 model document");
        if (doc.at("version").get<int>() != 1)
            throw ModelFormatError("unsupported model version");
        std::vector<Attribute> attrs;
        for (const auto& a : doc.at("attributes")) {
            Attribute attr;
            attr.name = a.at("name").get<std::string>();
            const std::string kind = a.at("kind").get<std::string>();
            if (kind == "nominal")
                attr.kind = AttrKind::Nominal;
            else if (kind == "numeric")
                attr.kind = AttrKind::Numeric;
            else
                throw ModelFormatError("unknown attribute kind: " + kind);
            attr.domain = a.at("domain").get<std::vector<std::string>>();
            attrs.push_back(std::move(attr));
        }
        Schema schema(std::move(attrs), doc.at("class_index").get<std::size_t>());
        TreeNode root = node_from_json(doc.at("root"), schema);
        return DecisionTree(std::move(schema), std::move(root),
                            doc.at("trained_on").get<std::size_t>(),
                            doc.at("root_gains").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("malformed model document: ") + e.what());
    } catch (const SchemaError& e) {
        throw ModelFormatError(std::string("inconsistent model schema: ") + e.what());
    }
}

} // namespace edm
