#include "aisr/payoff.hpp"

#include <algorithm>

namespace aisr {

double round_payoff(Action row, Action col, const RaceParams& p) {
  const double c = p.c, b = p.b, s = p.s, q = p.p_fo;
  if (row == Action::Safe && col == Action::Safe) return -c + b / 2.0;
  if (row == Action::Safe) return -c + (1.0 - q) * b / (s + 1.0) + q * b;
  if (col == Action::Safe) return (1.0 - q) * s * b / (s + 1.0);
  return (1.0 - q * q) * b / 2.0;
}

RoundPayoffs round_payoffs(const RaceParams& p) {
  return {round_payoff(Action::Safe, Action::Safe, p), round_payoff(Action::Safe, Action::Unsafe, p),
          round_payoff(Action::Unsafe, Action::Safe, p),
          round_payoff(Action::Unsafe, Action::Unsafe, p)};
}

PayoffMatrix::PayoffMatrix(std::vector<Strategy> strategies, std::vector<double> row_major)
    : strategies_(std::move(strategies)), values_(std::move(row_major)) {
  if (values_.size() != strategies_.size() * strategies_.size()) {
    throw InvalidParams("payoff matrix size does not match strategy count");
  }
  auto sorted = strategies_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidParams("payoff matrix strategies must be distinct");
  }
}

std::size_t PayoffMatrix::index_of(Strategy s) const {
  auto it = std::find(strategies_.begin(), strategies_.end(), s);
  if (it == strategies_.end()) {
    throw InvalidParams("strategy " + std::string(to_string(s)) + " not in payoff matrix");
  }
  return static_cast<std::size_t>(it - strategies_.begin());
}

PayoffMatrix PayoffMatrix::restrict_to(const std::vector<Strategy>& keep) const {
  std::vector<double> v;
  v.reserve(keep.size() * keep.size());
  for (auto r : keep) {
    for (auto c : keep) v.push_back(at(r, c));
  }
  return PayoffMatrix(keep, std::move(v));
}

PayoffMatrix averaged_payoff_matrix(const RaceParams& p) {
  const auto pi = round_payoffs(p);
  const double s = p.s, B = p.B, W = p.W;
  const double keep = 1.0 - p.p_r;
  // Rounds after the first in which a CS player faces AU: W/s - 1, possibly fractional.
  const double tail = W / s - 1.0;

  const double safe_pair = B / (2.0 * W) + pi.ss;
  const double as_au = pi.su;
  const double au_as = keep * (s * B / W + pi.us);
  const double au_au = keep * (s * B / (2.0 * W) + pi.uu);
  const double au_cs = keep * (s * B / W + (s / W) * (pi.us + tail * pi.uu));
  const double cs_au = (s / W) * (pi.su + tail * pi.uu);

  return PayoffMatrix({Strategy::AS, Strategy::AU, Strategy::CS},
                      {safe_pair, as_au, safe_pair,
                       au_as, au_au, au_cs,
                       safe_pair, cs_au, safe_pair});
}

double collective_preference_gap(const RaceParams& p) {
  const auto m = averaged_payoff_matrix(p);
  return m.at(Strategy::AS, Strategy::AS) - m.at(Strategy::AU, Strategy::AU);
}

nlohmann::json to_json(const PayoffMatrix& m) {
  nlohmann::json names = nlohmann::json::array();
  for (auto s : m.strategies()) names.push_back(to_string(s));
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"strategies", names}, {"matrix", rows}};
}

}  // namespace aisr
