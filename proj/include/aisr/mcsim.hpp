#pragma once

#include <cstdint>
#include <vector>

#include "aisr/evodyn.hpp"
#include "aisr/payoff.hpp"
#include "aisr/rng.hpp"

namespace aisr {

struct SimConfig {
  std::uint64_t runs = 10000;
  std::uint64_t seed = 1;
  std::uint64_t max_steps = 10'000'000;
};

// Requires runs >= 1 and max_steps >= Z.
SimConfig validate(const SimConfig& cfg, const DynamicsParams& dyn);

struct FixationEstimate {
  std::uint64_t successes = 0;
  std::uint64_t runs = 0;
  std::uint64_t non_absorbed = 0;  // counted as failures
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

FixationEstimate make_estimate(std::uint64_t successes, std::uint64_t runs,
                               std::uint64_t non_absorbed, std::uint64_t seed);

// Well-mixed population of A (mutant) and B (resident) agents updated by
// pairwise Fermi imitation. One step: draw a focal agent and a distinct model
// agent uniformly, then the focal copies the model's strategy with the Fermi
// probability of their current payoffs.
class ImitationProcess {
 public:
  ImitationProcess(const PairPayoffs& g, const DynamicsParams& dyn);

  void reset(int mutants);
  void step(CounterRng& rng);

  int size() const { return static_cast<int>(agents_.size()); }
  int mutants() const { return mutants_; }
  int residents() const { return size() - mutants_; }
  bool absorbed() const { return mutants_ == 0 || mutants_ == size(); }
  // Recounts the agent array; equals mutants() unless the bookkeeping is broken.
  int count_mutants() const;

 private:
  std::vector<std::uint8_t> agents_;  // 1 = mutant
  std::vector<double> b_copies_a_;     // indexed by mutant count
  std::vector<double> a_copies_b_;
  int mutants_ = 0;
};

struct RunOutcome {
  bool fixated = false;
  bool absorbed = false;
  std::uint64_t steps = 0;
};

// A single replicate starting from one mutant.
RunOutcome run_fixation(ImitationProcess& process, CounterRng& rng, std::uint64_t max_steps);

// Replicate r always draws from stream r of cfg.seed, so the parallel and the
// serial versions give identical counts for any thread count.
FixationEstimate simulate_fixation(Strategy mutant, Strategy resident, const PayoffMatrix& pi,
                                   const DynamicsParams& dyn, const SimConfig& cfg);
FixationEstimate simulate_fixation_serial(Strategy mutant, Strategy resident,
                                          const PayoffMatrix& pi, const DynamicsParams& dyn,
                                          const SimConfig& cfg);

struct StationaryEstimate {
  std::vector<Strategy> strategies;
  std::vector<double> frequencies;    // visit frequencies over recorded events
  std::vector<std::uint64_t> visits;
  std::uint64_t events = 0;           // recorded mutation events (cfg.runs)
  std::uint64_t burn_in = 0;          // discarded leading events
  std::uint64_t non_absorbed = 0;
};

// Embedded jump chain of the small-mutation limit: at each event a mutant of
// one of the other m-1 strategies (uniform) appears in the current homogeneous
// population and its fate is simulated agent by agent. Requires Z*mu <= 0.1;
// mu itself does not change the jump chain.
StationaryEstimate simulate_stationary(const PayoffMatrix& pi, const DynamicsParams& dyn,
                                       double mu, const SimConfig& cfg);

// Asymptotic standard errors of the visit frequencies after `events` steps of
// the analytic jump chain (Markov chain CLT via its deviation matrix). Used as
// the null-hypothesis yardstick when comparing simulated and analytic values.
std::vector<double> occupancy_std_errors(const PayoffMatrix& pi, const DynamicsParams& dyn,
                                         std::uint64_t events);

// Binomial standard error of a proportion p over n trials.
double binomial_std_error(double p, std::uint64_t n);

// |estimate - expected| <= sigmas * std_error
bool within_sigmas(double estimate, double expected, double std_error, double sigmas = 3.0);

nlohmann::json to_json(const FixationEstimate& e);
nlohmann::json to_json(const StationaryEstimate& e);

}  // namespace aisr
