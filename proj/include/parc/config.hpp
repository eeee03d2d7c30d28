#pragma once
#include <cstdlib>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "parc/dqn.hpp"
#include "parc/errors.hpp"
#include "parc/hppo.hpp"

namespace parc {

/// Flat dotted-key configuration: a single JSON object whose keys look like
/// "hppo.gamma" or "env". CLI flags override file values; the fully resolved
/// map is written back as a snapshot so a run can be reproduced from it.
class FlatConfig {
public:
    FlatConfig() = default;

    static FlatConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DomainError("cannot open config file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw DomainError("bad config JSON in " + path + ": " + e.what());
        }
        if (!j.is_object()) throw DomainError("config must be a JSON object: " + path);
        FlatConfig c;
        for (auto& [k, v] : j.items()) c.kv_[k] = v;
        return c;
    }

    void set(const std::string& key, const nlohmann::json& value) { kv_[key] = value; }

    /// Parses "key=value"; the value is read as JSON when possible, else as a
    /// plain string.
    void set_kv(const std::string& pair) {
        auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0)
            throw DomainError("override must look like key=value: " + pair);
        std::string key = pair.substr(0, eq);
        std::string val = pair.substr(eq + 1);
        nlohmann::json j = nlohmann::json::parse(val, nullptr, false);
        if (j.is_discarded()) j = val;
        kv_[key] = j;
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    double get_double(const std::string& key, double dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        if (it->second.is_number()) return it->second.get<double>();
        if (it->second.is_string()) return std::stod(it->second.get<std::string>());
        throw DomainError("config key '" + key + "' is not a number");
    }

    long long get_int(const std::string& key, long long dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        if (it->second.is_number_integer()) return it->second.get<long long>();
        if (it->second.is_number()) return static_cast<long long>(it->second.get<double>());
        if (it->second.is_string()) return std::stoll(it->second.get<std::string>());
        throw DomainError("config key '" + key + "' is not an integer");
    }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        if (it->second.is_string()) return it->second.get<std::string>();
        return it->second.dump();
    }

    std::vector<long long> get_int_list(const std::string& key,
                                        const std::vector<long long>& dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        std::vector<long long> out;
        if (it->second.is_array()) {
            for (const auto& v : it->second) out.push_back(v.get<long long>());
            return out;
        }
        if (it->second.is_number_integer()) return {it->second.get<long long>()};
        throw DomainError("config key '" + key + "' is not an integer list");
    }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : kv_) j[k] = v;
        return j;
    }

    void write_snapshot(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw DomainError("cannot write config snapshot: " + path);
        out << to_json().dump(1) << "\n";
    }

private:
    std::map<std::string, nlohmann::json> kv_;
};

inline TrainConfig hppo_config_from(const FlatConfig& c) {
    TrainConfig t;
    t.gamma = c.get_double("hppo.gamma", t.gamma);
    t.clip_eps = c.get_double("hppo.clip_eps", t.clip_eps);
    t.horizon = static_cast<int>(c.get_int("hppo.horizon", t.horizon));
    t.epochs_per_iter = static_cast<int>(c.get_int("hppo.epochs_per_iter", t.epochs_per_iter));
    t.minibatch_size = static_cast<int>(c.get_int("hppo.minibatch_size", t.minibatch_size));
    t.lr_actor = c.get_double("hppo.lr_actor", t.lr_actor);
    t.lr_critic = c.get_double("hppo.lr_critic", t.lr_critic);
    t.entropy_coef_d = c.get_double("hppo.entropy_coef_d", t.entropy_coef_d);
    t.entropy_coef_c = c.get_double("hppo.entropy_coef_c", t.entropy_coef_c);
    t.value_coef = c.get_double("hppo.value_coef", t.value_coef);
    t.max_iterations = static_cast<int>(c.get_int("iters", t.max_iterations));
    t.grad_clip = c.get_double("hppo.grad_clip", t.grad_clip);
    t.normalize_advantages = c.get_int("hppo.normalize_advantages", 1) != 0;
    return t;
}

inline DqnConfig dqn_config_from(const FlatConfig& c) {
    DqnConfig d;
    d.batch_size = static_cast<int>(c.get_int("dqn.batch_size", d.batch_size));
    d.gamma = c.get_double("dqn.gamma", d.gamma);
    d.eps_start = c.get_double("dqn.eps_start", d.eps_start);
    d.eps_end = c.get_double("dqn.eps_end", d.eps_end);
    d.eps_decay_steps = c.get_int("dqn.eps_decay_steps", d.eps_decay_steps);
    d.target_sync = static_cast<int>(c.get_int("dqn.target_sync", d.target_sync));
    d.lr = c.get_double("dqn.lr", d.lr);
    d.update_every = static_cast<int>(c.get_int("dqn.update_every", d.update_every));
    d.warmup = static_cast<int>(c.get_int("dqn.warmup", d.warmup));
    d.replay_capacity = static_cast<std::size_t>(c.get_int("dqn.replay_capacity",
                                                           static_cast<long long>(d.replay_capacity)));
    d.stats_every = static_cast<int>(c.get_int("dqn.stats_every", d.stats_every));
    d.max_iterations = static_cast<int>(c.get_int("iters", d.max_iterations));
    return d;
}

/// Output root resolution: --out flag beats PARC_OUT beats config beats
/// ./runs.
inline std::string resolve_out_root(const FlatConfig& c, const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PARC_OUT"); env && *env) return env;
    return c.get_string("out", "runs");
}

} // namespace parc
