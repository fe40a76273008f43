#pragma once

#include <cstddef>
#include <vector>

#include "aisr/params.hpp"

namespace aisr {

// Expected per-round payoff of the row action against the column action.
double round_payoff(Action row, Action col, const RaceParams& p);

struct RoundPayoffs {
  double ss, su, us, uu;  // (SAFE,SAFE), (SAFE,UNSAFE), (UNSAFE,SAFE), (UNSAFE,UNSAFE)
};

RoundPayoffs round_payoffs(const RaceParams& p);

// Square payoff matrix over a labelled strategy set, row player's payoff.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  PayoffMatrix(std::vector<Strategy> strategies, std::vector<double> row_major);

  std::size_t size() const { return strategies_.size(); }
  const std::vector<Strategy>& strategies() const { return strategies_; }

  double operator()(std::size_t row, std::size_t col) const { return values_[row * size() + col]; }
  double at(Strategy row, Strategy col) const { return (*this)(index_of(row), index_of(col)); }

  // Throws InvalidParams when `s` is not one of the labels.
  std::size_t index_of(Strategy s) const;

  // Sub-matrix restricted to `keep`, in the given order.
  PayoffMatrix restrict_to(const std::vector<Strategy>& keep) const;

 private:
  std::vector<Strategy> strategies_;
  std::vector<double> values_;
};

// Race-averaged payoffs of AS, AU and CS against each other.
PayoffMatrix averaged_payoff_matrix(const RaceParams& p);

// Pi(AS,AS) - Pi(AU,AU); positive when universal safety beats universal
// unsafety.
double collective_preference_gap(const RaceParams& p);

nlohmann::json to_json(const PayoffMatrix& m);

}  // namespace aisr
