#pragma once
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "parc/errors.hpp"

namespace parc {

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
};

/// One discrete action with its continuous parameter space. param_dim may be
/// zero (an unparameterized action).
struct ActionSpec {
    std::string name;
    std::vector<Bounds> params;
};

/// Parameterized action space: k discrete actions, each with its own bounded
/// parameter vector.
struct ActionSchema {
    std::vector<ActionSpec> actions;

    std::size_t k() const { return actions.size(); }
    std::size_t param_dim(std::size_t a) const { return actions[a].params.size(); }
    std::size_t total_param_dim() const {
        std::size_t n = 0;
        for (const auto& a : actions) n += a.params.size();
        return n;
    }

    void check() const {
        if (actions.empty()) throw DomainError("ActionSchema: needs at least one action");
        for (const auto& a : actions)
            for (const auto& b : a.params)
                if (!(b.lo < b.hi))
                    throw DomainError("ActionSchema: action '" + a.name + "' has empty bounds");
    }
};

/// A complete action: chosen discrete index + its parameter vector, plus the
/// parameter vectors the continuous actor emitted for every action.
/// full_params may be left empty when not tracked (e.g. discretized actions).
struct HybridAction {
    int a = 0;
    std::vector<double> x;
    std::vector<std::vector<double>> full_params;
};

/// Clamps every component of x to the bounds of action a.
inline std::vector<double> clamp_to_bounds(const ActionSchema& schema, int a,
                                           const std::vector<double>& x) {
    std::vector<double> out = x;
    const auto& ps = schema.actions[static_cast<std::size_t>(a)].params;
    for (std::size_t i = 0; i < out.size() && i < ps.size(); ++i) {
        if (out[i] < ps[i].lo) out[i] = ps[i].lo;
        if (out[i] > ps[i].hi) out[i] = ps[i].hi;
    }
    return out;
}

/// Checks an action against a schema. Returns human-readable violations
/// instead of throwing; empty result means the action is valid.
inline std::vector<std::string> validate(const ActionSchema& schema, const HybridAction& action) {
    std::vector<std::string> v;
    if (action.a < 0 || static_cast<std::size_t>(action.a) >= schema.k()) {
        v.push_back("discrete index " + std::to_string(action.a) + " out of range [0, " +
                    std::to_string(schema.k()) + ")");
        return v;
    }
    const auto& spec = schema.actions[static_cast<std::size_t>(action.a)];
    if (action.x.size() != spec.params.size()) {
        v.push_back("action '" + spec.name + "' expects " + std::to_string(spec.params.size()) +
                    " parameters, got " + std::to_string(action.x.size()));
        return v;
    }
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        if (action.x[i] < spec.params[i].lo || action.x[i] > spec.params[i].hi)
            v.push_back("parameter " + std::to_string(i) + " of '" + spec.name + "' = " +
                        std::to_string(action.x[i]) + " outside [" +
                        std::to_string(spec.params[i].lo) + ", " + std::to_string(spec.params[i].hi) +
                        "]");
    }
    if (!action.full_params.empty()) {
        if (action.full_params.size() != schema.k())
            v.push_back("full_params holds " + std::to_string(action.full_params.size()) +
                        " actions, schema has " + std::to_string(schema.k()));
        else if (action.full_params[static_cast<std::size_t>(action.a)] != action.x)
            v.push_back("x does not equal full_params of the selected action");
    }
    return v;
}

/// Flattens the schema into atomic actions by binning every parameter
/// dimension at bin centers: center_i = lo + (i + 0.5) * (hi - lo) / n.
/// `bins` gives per-action, per-dimension bin counts; unparameterized actions
/// contribute exactly one atomic action.
inline std::vector<HybridAction> discretize(const ActionSchema& schema,
                                            const std::vector<std::vector<int>>& bins) {
    schema.check();
    if (bins.size() != schema.k())
        throw DomainError("discretize: bins given for " + std::to_string(bins.size()) +
                          " actions, schema has " + std::to_string(schema.k()));
    std::vector<HybridAction> out;
    for (std::size_t a = 0; a < schema.k(); ++a) {
        const auto& spec = schema.actions[a];
        if (bins[a].size() != spec.params.size())
            throw DomainError("discretize: action '" + spec.name + "' has " +
                              std::to_string(spec.params.size()) + " dims, got " +
                              std::to_string(bins[a].size()) + " bin counts");
        for (int n : bins[a])
            if (n < 1) throw DomainError("discretize: bin count must be >= 1 for '" + spec.name + "'");
        // odometer over the per-dimension bins
        std::vector<int> idx(spec.params.size(), 0);
        while (true) {
            HybridAction act;
            act.a = static_cast<int>(a);
            act.x.resize(spec.params.size());
            for (std::size_t d = 0; d < spec.params.size(); ++d) {
                const Bounds& b = spec.params[d];
                act.x[d] = b.lo + (idx[d] + 0.5) * (b.hi - b.lo) / bins[a][d];
            }
            out.push_back(std::move(act));
            std::size_t d = 0;
            for (; d < idx.size(); ++d) {
                if (++idx[d] < bins[a][d]) break;
                idx[d] = 0;
            }
            if (d == idx.size()) break; // odometer wrapped (or no dims at all)
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hierarchical action trees
// ---------------------------------------------------------------------------

/// Rooted tree over action-selection sub-problems, stored as a flat arena.
/// Internal nodes are discrete selectors (>= 2 branches); leaves are either
/// continuous selectors (dim >= 1, bounded) or empty terminals.
struct ActionTree {
    enum class Kind { Branch, Continuous, Leaf };

    struct Node {
        Kind kind = Kind::Leaf;
        std::string name;
        std::vector<int> children;  // Branch only
        std::vector<Bounds> params; // Continuous only
    };

    std::vector<Node> nodes;
    int root = 0;

    const Node& at(int i) const { return nodes[static_cast<std::size_t>(i)]; }

    int depth_from(int i) const {
        const Node& n = at(i);
        if (n.kind != Kind::Branch) return 1;
        int d = 0;
        for (int c : n.children) d = std::max(d, depth_from(c));
        return 1 + d;
    }
    int depth() const { return nodes.empty() ? 0 : depth_from(root); }

    void check() const {
        if (nodes.empty()) throw DomainError("ActionTree: empty");
        for (const auto& n : nodes) {
            if (n.kind == Kind::Branch && n.children.size() < 2)
                throw DomainError("ActionTree: branch '" + n.name + "' needs >= 2 children");
            if (n.kind == Kind::Continuous && n.params.empty())
                throw DomainError("ActionTree: continuous leaf '" + n.name + "' needs >= 1 dim");
        }
    }
};

/// Depth-2 tree: discrete root over one leaf per action.
inline ActionTree tree_from_schema(const ActionSchema& schema) {
    schema.check();
    ActionTree t;
    ActionTree::Node root;
    root.kind = ActionTree::Kind::Branch;
    root.name = "root";
    t.nodes.push_back(root);
    for (const auto& spec : schema.actions) {
        ActionTree::Node leaf;
        leaf.name = spec.name;
        if (spec.params.empty()) {
            leaf.kind = ActionTree::Kind::Leaf;
        } else {
            leaf.kind = ActionTree::Kind::Continuous;
            leaf.params = spec.params;
        }
        t.nodes[0].children.push_back(static_cast<int>(t.nodes.size()));
        t.nodes.push_back(std::move(leaf));
    }
    return t;
}

/// Inverse of tree_from_schema. Only depth-2 trees with continuous or empty
/// leaves describe a parameterized action space.
inline ActionSchema schema_from_tree(const ActionTree& tree) {
    tree.check();
    const auto& root = tree.at(tree.root);
    if (root.kind != ActionTree::Kind::Branch)
        throw DomainError("schema_from_tree: root must be a discrete selector");
    if (tree.depth() != 2)
        throw DomainError("schema_from_tree: unsupported shape, tree depth " +
                          std::to_string(tree.depth()) + " != 2");
    ActionSchema s;
    for (int c : root.children) {
        const auto& leaf = tree.at(c);
        ActionSpec spec;
        spec.name = leaf.name;
        if (leaf.kind == ActionTree::Kind::Continuous) spec.params = leaf.params;
        s.actions.push_back(std::move(spec));
    }
    return s;
}

// ---------------------------------------------------------------------------
// JSON serialization: { "actions": [ { "name", "params": [ {"lo","hi"} ] } ] }
// ---------------------------------------------------------------------------

inline nlohmann::json schema_to_json(const ActionSchema& schema) {
    nlohmann::json j;
    j["actions"] = nlohmann::json::array();
    for (const auto& a : schema.actions) {
        nlohmann::json ja;
        ja["name"] = a.name;
        ja["params"] = nlohmann::json::array();
        for (const auto& b : a.params) ja["params"].push_back({{"lo", b.lo}, {"hi", b.hi}});
        j["actions"].push_back(std::move(ja));
    }
    return j;
}

inline ActionSchema schema_from_json(const nlohmann::json& j) {
    ActionSchema s;
    if (!j.contains("actions") || !j["actions"].is_array())
        throw DomainError("schema_from_json: missing 'actions' array");
    for (const auto& ja : j["actions"]) {
        ActionSpec a;
        a.name = ja.at("name").get<std::string>();
        if (ja.contains("params"))
            for (const auto& jp : ja["params"])
                a.params.push_back({jp.at("lo").get<double>(), jp.at("hi").get<double>()});
        s.actions.push_back(std::move(a));
    }
    s.check();
    return s;
}

/// FNV-1a over the canonical JSON text; used to pair checkpoints with
/// environments.
inline std::string schema_hash(const ActionSchema& schema) {
    std::string text = schema_to_json(schema).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace parc
