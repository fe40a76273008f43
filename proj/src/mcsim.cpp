#include "aisr/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aisr {

namespace {

constexpr std::uint64_t kChainStream = 1ull << 63;
constexpr std::uint64_t kEventStreamBase = 1ull << 62;

// Dense solve with partial pivoting; only used on m x m systems.
Matrix inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == 0.0) throw std::runtime_error("singular matrix in deviation solve");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const double d = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= d;
      inv[col][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

}  // namespace

SimConfig validate(const SimConfig& cfg, const DynamicsParams& dyn) {
  validate(dyn);
  if (cfg.runs < 1) throw InvalidParams("runs must be at least 1");
  if (cfg.max_steps < static_cast<std::uint64_t>(dyn.Z)) {
    throw InvalidParams("max_steps must be at least Z");
  }
  return cfg;
}

double binomial_std_error(double p, std::uint64_t n) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

FixationEstimate make_estimate(std::uint64_t successes, std::uint64_t runs,
                               std::uint64_t non_absorbed, std::uint64_t seed) {
  FixationEstimate e;
  e.successes = successes;
  e.runs = runs;
  e.non_absorbed = non_absorbed;
  e.seed = seed;
  e.estimate = static_cast<double>(successes) / static_cast<double>(runs);
  e.std_error = binomial_std_error(e.estimate, runs);
  return e;
}

ImitationProcess::ImitationProcess(const PairPayoffs& g, const DynamicsParams& dyn)
    : agents_(static_cast<std::size_t>(validate(dyn).Z), 0),
      b_copies_a_(static_cast<std::size_t>(dyn.Z) + 1, 0.0),
      a_copies_b_(static_cast<std::size_t>(dyn.Z) + 1, 0.0) {
  for (int k = 1; k < dyn.Z; ++k) {
    const auto p = population_payoffs(k, dyn.Z, g);
    b_copies_a_[static_cast<std::size_t>(k)] = fermi_probability(p.b, p.a, dyn.beta);
    a_copies_b_[static_cast<std::size_t>(k)] = fermi_probability(p.a, p.b, dyn.beta);
  }
}

void ImitationProcess::reset(int mutants) {
  if (mutants < 0 || mutants > size()) throw InvalidParams("mutant count out of range");
  std::fill(agents_.begin(), agents_.end(), 0);
  std::fill(agents_.begin(), agents_.begin() + mutants, 1);
  mutants_ = mutants;
}

void ImitationProcess::step(CounterRng& rng) {
  const auto n = static_cast<std::uint32_t>(agents_.size());
  const std::uint32_t focal = rng.below(n);
  std::uint32_t model = rng.below(n - 1);
  if (model >= focal) ++model;
  const double u = rng.uniform();

  const std::uint8_t from = agents_[focal];
  const std::uint8_t to = agents_[model];
  if (from == to) return;
  const auto k = static_cast<std::size_t>(mutants_);
  const double p = from == 1 ? a_copies_b_[k] : b_copies_a_[k];
  if (u < p) {
    agents_[focal] = to;
    mutants_ += to == 1 ? 1 : -1;
  }
}

int ImitationProcess::count_mutants() const {
  return static_cast<int>(std::count(agents_.begin(), agents_.end(), std::uint8_t{1}));
}

RunOutcome run_fixation(ImitationProcess& process, CounterRng& rng, std::uint64_t max_steps) {
  process.reset(1);
  RunOutcome out;
  while (!process.absorbed() && out.steps < max_steps) {
    process.step(rng);
    ++out.steps;
  }
  out.absorbed = process.absorbed();
  out.fixated = process.mutants() == process.size();
  return out;
}

namespace {

void check_pair(Strategy mutant, Strategy resident) {
  if (mutant == resident) throw InvalidParams("mutant and resident must differ");
}

}  // namespace

FixationEstimate simulate_fixation_serial(Strategy mutant, Strategy resident,
                                          const PayoffMatrix& pi, const DynamicsParams& dyn,
                                          const SimConfig& cfg) {
  check_pair(mutant, resident);
  validate(cfg, dyn);
  ImitationProcess process(pair_payoffs(mutant, resident, pi), dyn);
  std::uint64_t wins = 0, stuck = 0;
  for (std::uint64_t r = 0; r < cfg.runs; ++r) {
    CounterRng rng(cfg.seed, r);
    const auto o = run_fixation(process, rng, cfg.max_steps);
    wins += o.fixated ? 1 : 0;
    stuck += o.absorbed ? 0 : 1;
  }
  return make_estimate(wins, cfg.runs, stuck, cfg.seed);
}

FixationEstimate simulate_fixation(Strategy mutant, Strategy resident, const PayoffMatrix& pi,
                                   const DynamicsParams& dyn, const SimConfig& cfg) {
  check_pair(mutant, resident);
  validate(cfg, dyn);
  const auto g = pair_payoffs(mutant, resident, pi);
  const auto runs = static_cast<long long>(cfg.runs);
  std::uint64_t wins = 0, stuck = 0;
#pragma omp parallel reduction(+ : wins, stuck)
  {
    ImitationProcess process(g, dyn);
#pragma omp for schedule(dynamic, 64)
    for (long long r = 0; r < runs; ++r) {
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(r));
      const auto o = run_fixation(process, rng, cfg.max_steps);
      wins += o.fixated ? 1 : 0;
      stuck += o.absorbed ? 0 : 1;
    }
  }
  return make_estimate(wins, cfg.runs, stuck, cfg.seed);
}

StationaryEstimate simulate_stationary(const PayoffMatrix& pi, const DynamicsParams& dyn,
                                       double mu, const SimConfig& cfg) {
  validate(cfg, dyn);
  if (!(mu > 0.0) || dyn.Z * mu > 0.1) {
    throw InvalidParams("mutation rate must satisfy 0 < mu and Z*mu <= 0.1");
  }
  const std::size_t m = pi.size();
  if (m < 2) throw InvalidParams("need at least two strategies");
  const auto& st = pi.strategies();

  // One process per ordered (resident, mutant) pair.
  std::vector<ImitationProcess> processes;
  processes.reserve(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      processes.emplace_back(pair_payoffs(st[j], st[i], pi), dyn);
    }
  }

  StationaryEstimate out;
  out.strategies = st;
  out.visits.assign(m, 0);
  out.events = cfg.runs;
  out.burn_in = cfg.runs / 10;

  CounterRng chain(cfg.seed, kChainStream);
  std::size_t state = 0;
  const std::uint64_t total = out.burn_in + out.events;
  for (std::uint64_t e = 0; e < total; ++e) {
    if (e >= out.burn_in) ++out.visits[state];
    auto pick = static_cast<std::size_t>(chain.below(static_cast<std::uint32_t>(m - 1)));
    if (pick >= state) ++pick;
    CounterRng rng(cfg.seed, kEventStreamBase + e);
    const auto o = run_fixation(processes[state * m + pick], rng, cfg.max_steps);
    if (!o.absorbed) ++out.non_absorbed;
    if (o.fixated) state = pick;
  }
  out.frequencies.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.frequencies[i] = static_cast<double>(out.visits[i]) / static_cast<double>(out.events);
  }
  return out;
}

std::vector<double> occupancy_std_errors(const PayoffMatrix& pi, const DynamicsParams& dyn,
                                         std::uint64_t events) {
  const std::size_t m = pi.size();
  const auto log_rho = log_fixation_matrix(pi, dyn);
  const auto stat = stationary_from_log_rates(log_rho);

  // Jump chain M = I + kappa*Q with Q scaled so its largest rate is 1; the
  // deviation matrix of M is (Pi - Q)^-1 - Pi divided by kappa.
  double hi = -INFINITY;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) hi = std::max(hi, log_rho[i][j]);
    }
  }
  const double kappa = std::exp(hi) / (m - 1.0);
  Matrix a(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    double out = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double q = std::exp(log_rho[i][j] - hi);
      a[i][j] = stat[j] - q;
      out += q;
    }
    a[i][i] = stat[i] + out;
  }
  const auto z = inverse(a);
  std::vector<double> se(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double dev = z[j][j] - stat[j];
    const double var = 2.0 * stat[j] * dev / kappa - stat[j] * (1.0 - stat[j]);
    se[j] = std::sqrt(std::max(var, 0.0) / static_cast<double>(events));
  }
  return se;
}

bool within_sigmas(double estimate, double expected, double std_error, double sigmas) {
  return std::abs(estimate - expected) <= sigmas * std_error;
}

nlohmann::json to_json(const FixationEstimate& e) {
  return {{"estimate", e.estimate},     {"std_error", e.std_error}, {"runs", e.runs},
          {"non_absorbed", e.non_absorbed}, {"seed", e.seed}};
}

nlohmann::json to_json(const StationaryEstimate& e) {
  nlohmann::json names = nlohmann::json::array();
  for (auto s : e.strategies) names.push_back(to_string(s));
  return {{"strategies", names},     {"frequencies", e.frequencies}, {"visits", e.visits},
          {"events", e.events},      {"burn_in", e.burn_in},         {"non_absorbed", e.non_absorbed}};
}

}  // namespace aisr
