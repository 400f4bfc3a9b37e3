#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "shallow/text.hpp"

namespace shallow {

struct ConfigError : Error {
  using Error::Error;
};

// Every weighting constant of the four scores. Each group must sum to 1.
struct MetricWeights {
  // lexical fabrication
  double lf_ins = 0.5;
  double lf_sub = 0.3;
  double lf_del = 0.2;
  // grammatical errors
  double ge_grammar = 0.4;
  double ge_spell = 0.3;
  double ge_punct = 0.3;
  // morphological error
  double me_sd = 0.4;
  double me_ge = 0.6;
  // local semantic windows 1..3
  double ls_w1 = 0.5;
  double ls_w2 = 0.3;
  double ls_w3 = 0.2;
  // semantic error
  double se_local = 0.25;
  double se_global = 0.75;

  void validate() const {
    auto unit = [](const char* name, double w) {
      if (!(w >= 0.0 && w <= 1.0))
        throw ConfigError(std::string("weight ") + name + " outside [0,1]");
    };
    auto group = [](const char* name, double sum) {
      if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError(std::string("weight group ") + name + " does not sum to 1");
    };
    unit("lf_ins", lf_ins); unit("lf_sub", lf_sub); unit("lf_del", lf_del);
    unit("ge_grammar", ge_grammar); unit("ge_spell", ge_spell); unit("ge_punct", ge_punct);
    unit("me_sd", me_sd); unit("me_ge", me_ge);
    unit("ls_w1", ls_w1); unit("ls_w2", ls_w2); unit("ls_w3", ls_w3);
    unit("se_local", se_local); unit("se_global", se_global);
    group("lf", lf_ins + lf_sub + lf_del);
    group("ge", ge_grammar + ge_spell + ge_punct);
    group("me", me_sd + me_ge);
    group("ls", ls_w1 + ls_w2 + ls_w3);
    group("se", se_local + se_global);
  }

  friend bool operator==(const MetricWeights&, const MetricWeights&) = default;
};

inline void to_json(nlohmann::json& j, const MetricWeights& w) {
  j = nlohmann::json{{"lf_ins", w.lf_ins},         {"lf_sub", w.lf_sub},
                     {"lf_del", w.lf_del},         {"ge_grammar", w.ge_grammar},
                     {"ge_spell", w.ge_spell},     {"ge_punct", w.ge_punct},
                     {"me_sd", w.me_sd},           {"me_ge", w.me_ge},
                     {"ls_w1", w.ls_w1},           {"ls_w2", w.ls_w2},
                     {"ls_w3", w.ls_w3},           {"se_local", w.se_local},
                     {"se_global", w.se_global}};
}

// Applies overrides on top of `base`. Unknown keys are rejected so a typo
// cannot silently leave a default in place.
inline MetricWeights weights_from_json(const nlohmann::json& j, MetricWeights base = {}) {
  if (!j.is_object()) throw ConfigError("weights must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError("weight " + key + " is not a number");
    const double v = value.get<double>();
    if (key == "lf_ins") base.lf_ins = v;
    else if (key == "lf_sub") base.lf_sub = v;
    else if (key == "lf_del") base.lf_del = v;
    else if (key == "ge_grammar") base.ge_grammar = v;
    else if (key == "ge_spell") base.ge_spell = v;
    else if (key == "ge_punct") base.ge_punct = v;
    else if (key == "me_sd") base.me_sd = v;
    else if (key == "me_ge") base.me_ge = v;
    else if (key == "ls_w1") base.ls_w1 = v;
    else if (key == "ls_w2") base.ls_w2 = v;
    else if (key == "ls_w3") base.ls_w3 = v;
    else if (key == "se_local") base.se_local = v;
    else if (key == "se_global") base.se_global = v;
    else throw ConfigError("unknown weight " + key);
  }
  base.validate();
  return base;
}

inline MetricWeights load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weights file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("weights file " + path + ": " + e.what());
  }
  return weights_from_json(j);
}

}  // namespace shallow
