#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace aisr {

// Raised for any parameter that violates the model's domain constraints.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Action : std::uint8_t { Safe = 0, Unsafe = 1 };

// Canonical order AS < AU < CS is the row order of the averaged payoff matrix.
enum class Strategy : std::uint8_t { AS = 0, AU = 1, CS = 2 };

inline constexpr std::array<Strategy, 3> kAllStrategies = {Strategy::AS, Strategy::AU,
                                                           Strategy::CS};

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);

// Race parameters. W and W/s are real valued; fractional round counts are
// used as-is by the averaged payoffs.
struct RaceParams {
  double c = 1.0;      // per-round cost of playing SAFE
  double b = 4.0;      // per-round benefit shared by speed
  double s = 1.5;      // speed multiplier of UNSAFE development
  double B = 1e4;      // prize for reaching supremacy
  double W = 100.0;    // rounds a SAFE player needs
  double p_r = 0.6;    // disaster risk of an always-unsafe player
  double p_fo = 0.1;   // per-round detection probability of an unsafe act

  friend bool operator==(const RaceParams&, const RaceParams&) = default;
};

struct DynamicsParams {
  int Z = 100;         // population size
  double beta = 0.1;   // selection intensity

  friend bool operator==(const DynamicsParams&, const DynamicsParams&) = default;
};

// Returns `p` unchanged or throws InvalidParams naming the first violated
// constraint.
RaceParams validate(const RaceParams& p);
DynamicsParams validate(const DynamicsParams& d);

// Flat parameter file: any subset of c, b, s, B, W, p_r, p_fo, Z, beta.
// Missing fields keep their defaults; unknown fields are rejected.
struct ModelConfig {
  RaceParams race;
  DynamicsParams dyn;
};

ModelConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelConfig& cfg);

// Reads/writes a single named field ("c", "p_r", "Z", ...). Z is stored as int.
double get_field(const ModelConfig& cfg, std::string_view name);
void set_field(ModelConfig& cfg, std::string_view name, double value);
bool is_field(std::string_view name);

}  // namespace aisr
