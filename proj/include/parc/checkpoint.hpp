#pragma once
#include <fstream>
#include <string>

#include <json.hpp>

#include "parc/action_space.hpp"
#include "parc/mlp.hpp"
#include "parc/policy.hpp"

namespace parc {

inline nlohmann::json mlp_to_json(const MlpParams& p) {
    nlohmann::json j;
    j["activation"] = p.activation == Activation::Tanh ? "tanh" : "relu";
    j["layers"] = nlohmann::json::array();
    for (const auto& l : p.layers) {
        nlohmann::json jl;
        jl["rows"] = l.weight.rows;
        jl["cols"] = l.weight.cols;
        jl["weight"] = l.weight.data;
        jl["bias"] = l.bias;
        j["layers"].push_back(std::move(jl));
    }
    return j;
}

inline MlpParams mlp_from_json(const nlohmann::json& j) {
    MlpParams p;
    std::string act = j.at("activation").get<std::string>();
    p.activation = act == "relu" ? Activation::Relu : Activation::Tanh;
    for (const auto& jl : j.at("layers")) {
        MlpParams::Layer l;
        l.weight = Matrix(jl.at("rows").get<std::size_t>(), jl.at("cols").get<std::size_t>());
        l.weight.data = jl.at("weight").get<std::vector<double>>();
        l.bias = jl.at("bias").get<std::vector<double>>();
        if (l.weight.data.size() != l.weight.rows * l.weight.cols)
            throw DomainError("mlp_from_json: weight array does not match rows*cols");
        p.layers.push_back(std::move(l));
    }
    check_chain(p, "mlp_from_json");
    return p;
}

/// Versioned JSON checkpoint. Doubles survive the round trip exactly
/// (shortest round-trip decimal serialization).
struct Checkpoint {
    int format = 1;
    std::string algo; // "hppo" or "dqn"
    std::string env;
    std::string schema_hash;
    ActionSchema schema;

    // hppo
    HybridPolicyParams policy;
    CriticParams critic;

    // dqn
    MlpParams q_net;
    std::vector<std::vector<int>> bins;
};

inline void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    nlohmann::json j;
    j["format"] = ck.format;
    j["algo"] = ck.algo;
    j["env"] = ck.env;
    j["schema_hash"] = ck.schema_hash;
    j["schema"] = schema_to_json(ck.schema);
    if (ck.algo == "hppo") {
        j["encoder"] = mlp_to_json(ck.policy.encoder);
        j["discrete_head"] = mlp_to_json(ck.policy.discrete_head);
        j["continuous_head"] = mlp_to_json(ck.policy.continuous_head);
        j["critic"] = mlp_to_json(ck.critic.net);
    } else {
        j["q_net"] = mlp_to_json(ck.q_net);
        j["bins"] = ck.bins;
    }
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write checkpoint: " + path);
    out << j.dump(1) << "\n";
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open checkpoint: " + path);
    nlohmann::json j;
    in >> j;
    Checkpoint ck;
    ck.format = j.at("format").get<int>();
    if (ck.format != 1)
        throw DomainError("unsupported checkpoint format " + std::to_string(ck.format));
    ck.algo = j.at("algo").get<std::string>();
    ck.env = j.value("env", "");
    ck.schema_hash = j.at("schema_hash").get<std::string>();
    ck.schema = schema_from_json(j.at("schema"));
    if (ck.algo == "hppo") {
        ck.policy.encoder = mlp_from_json(j.at("encoder"));
        ck.policy.discrete_head = mlp_from_json(j.at("discrete_head"));
        ck.policy.continuous_head = mlp_from_json(j.at("continuous_head"));
        ck.policy.schema = ck.schema;
        ck.critic.net = mlp_from_json(j.at("critic"));
    } else if (ck.algo == "dqn") {
        ck.q_net = mlp_from_json(j.at("q_net"));
        ck.bins = j.at("bins").get<std::vector<std::vector<int>>>();
    } else {
        throw DomainError("unknown checkpoint algo '" + ck.algo + "'");
    }
    return ck;
}

} // namespace parc
