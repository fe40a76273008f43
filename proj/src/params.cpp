#include "aisr/params.hpp"

#include <cmath>

namespace aisr {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::AS: return "AS";
    case Strategy::AU: return "AU";
    case Strategy::CS: return "CS";
  }
  return "?";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "AS") return Strategy::AS;
  if (name == "AU") return Strategy::AU;
  if (name == "CS") return Strategy::CS;
  throw InvalidParams("unknown strategy '" + std::string(name) + "'");
}

namespace {

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

RaceParams validate(const RaceParams& p) {
  if (!std::isfinite(p.c) || p.c < 0.0) throw InvalidParams("c must be nonnegative");
  if (!std::isfinite(p.b) || p.b <= 0.0) throw InvalidParams("b must be positive");
  if (!(p.s > 1.0) || !std::isfinite(p.s)) throw InvalidParams("s must exceed 1");
  if (!std::isfinite(p.B) || p.B <= 0.0) throw InvalidParams("B must be positive");
  if (!std::isfinite(p.W) || p.W <= 0.0) throw InvalidParams("W must be positive");
  if (!(p.W / p.s >= 1.0)) throw InvalidParams("W/s must be at least 1");
  if (!is_probability(p.p_r)) throw InvalidParams("p_r must lie in [0,1]");
  if (!is_probability(p.p_fo)) throw InvalidParams("p_fo must lie in [0,1]");
  return p;
}

DynamicsParams validate(const DynamicsParams& d) {
  if (d.Z < 2) throw InvalidParams("Z must be at least 2");
  if (!(d.beta >= 0.0) || !std::isfinite(d.beta)) throw InvalidParams("beta must be nonnegative");
  return d;
}

bool is_field(std::string_view name) {
  for (auto f : {"c", "b", "s", "B", "W", "p_r", "p_fo", "Z", "beta"}) {
    if (name == f) return true;
  }
  return false;
}

double get_field(const ModelConfig& cfg, std::string_view name) {
  const auto& r = cfg.race;
  if (name == "c") return r.c;
  if (name == "b") return r.b;
  if (name == "s") return r.s;
  if (name == "B") return r.B;
  if (name == "W") return r.W;
  if (name == "p_r") return r.p_r;
  if (name == "p_fo") return r.p_fo;
  if (name == "Z") return cfg.dyn.Z;
  if (name == "beta") return cfg.dyn.beta;
  throw InvalidParams("unknown parameter '" + std::string(name) + "'");
}

void set_field(ModelConfig& cfg, std::string_view name, double value) {
  auto& r = cfg.race;
  if (name == "c") r.c = value;
  else if (name == "b") r.b = value;
  else if (name == "s") r.s = value;
  else if (name == "B") r.B = value;
  else if (name == "W") r.W = value;
  else if (name == "p_r") r.p_r = value;
  else if (name == "p_fo") r.p_fo = value;
  else if (name == "Z") {
    if (value != std::floor(value)) throw InvalidParams("Z must be an integer");
    cfg.dyn.Z = static_cast<int>(value);
  } else if (name == "beta") cfg.dyn.beta = value;
  else throw InvalidParams("unknown parameter '" + std::string(name) + "'");
}

ModelConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParams("parameters must be a JSON object");
  ModelConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (!is_field(key)) throw InvalidParams("unknown parameter '" + key + "'");
    if (!value.is_number()) throw InvalidParams(key + " must be a number");
    set_field(cfg, key, value.get<double>());
  }
  validate(cfg.race);
  validate(cfg.dyn);
  return cfg;
}

nlohmann::json to_json(const ModelConfig& cfg) {
  const auto& r = cfg.race;
  return {{"c", r.c},       {"b", r.b},         {"s", r.s},
          {"B", r.B},       {"W", r.W},         {"p_r", r.p_r},
          {"p_fo", r.p_fo}, {"Z", cfg.dyn.Z},   {"beta", cfg.dyn.beta}};
}

}  // namespace aisr
