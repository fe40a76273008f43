#pragma once

#include <cstddef>
#include <vector>

#include "aisr/params.hpp"
#include "aisr/payoff.hpp"

namespace aisr {

using Matrix = std::vector<std::vector<double>>;

// The four payoffs of a two-strategy contest, mutant A against resident B.
struct PairPayoffs {
  double aa, ab, ba, bb;
};

PairPayoffs pair_payoffs(Strategy mutant, Strategy resident, const PayoffMatrix& pi);

struct PopulationPayoffs {
  double a;  // average payoff of an A player
  double b;  // average payoff of a B player
};

// Average payoffs with k A players and Z-k B players; requires 1 <= k <= Z-1.
PopulationPayoffs population_payoffs(int k, int Z, const PairPayoffs& g);

// Probability that a player with payoff f_a imitates one with payoff f_b.
double fermi_probability(double f_a, double f_b, double beta);

// Fixation probability of a single A mutant among Z-1 B residents, and its
// logarithm. Both are evaluated through log-sum-exp over the partial sums of
// -beta*(P_A - P_B), so neither overflows for large beta*Z*|payoff|.
double fixation_probability(const PairPayoffs& g, const DynamicsParams& dyn);
double log_fixation_probability(const PairPayoffs& g, const DynamicsParams& dyn);

double fixation_probability(Strategy mutant, Strategy resident, const PayoffMatrix& pi,
                            const DynamicsParams& dyn);

// log_rho[i][j] is the log fixation probability of a single j mutant in an
// i-resident population; the diagonal is -inf.
Matrix log_fixation_matrix(const PayoffMatrix& pi, const DynamicsParams& dyn);

// Row-stochastic transition matrix between homogeneous states: entry (i,j),
// j != i, is rho(j mutant in i residents)/(m-1).
Matrix transition_matrix(const PayoffMatrix& pi, const DynamicsParams& dyn);

struct StationaryResult {
  std::vector<Strategy> strategies;
  Matrix fixation;  // (i,j): fixation of a j mutant among i residents, 0 on the diagonal
  std::vector<double> distribution;
};

StationaryResult stationary_distribution(const PayoffMatrix& pi, const DynamicsParams& dyn);

// Stationary vector of a continuous/discrete chain whose off-diagonal rates are
// given as logarithms (diagonal ignored). Grassmann-Taksar-Heyman elimination
// carried out in log space: subtraction free, so rates spanning hundreds of
// orders of magnitude are handled. Throws std::runtime_error when the chain is
// reducible.
std::vector<double> stationary_from_log_rates(const Matrix& log_rates);

// max_j |(vM)_j - v_j|
double stationary_residual(const std::vector<double>& v, const Matrix& m);

// Pi(A,A) + Pi(A,B) - Pi(B,A) - Pi(B,B)
double risk_dominance_margin(Strategy a, Strategy b, const PayoffMatrix& pi);
bool is_risk_dominant(Strategy a, Strategy b, const PayoffMatrix& pi);

nlohmann::json to_json(const StationaryResult& r);

}  // namespace aisr
