#include "aisr/evodyn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aisr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(x) + exp(y))
double log_add(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// Partial sums S_i = -beta * sum_{j<=i} (P_A(j) - P_B(j)), i = 0..Z-1, S_0 = 0.
// Returns the max and the scaled sum sum_i exp(S_i - max).
struct ScaledSum {
  double max;
  double sum;
};

ScaledSum fixation_terms(const PairPayoffs& g, const DynamicsParams& dyn) {
  const int Z = dyn.Z;
  std::vector<double> terms(static_cast<std::size_t>(Z));
  terms[0] = 0.0;
  double acc = 0.0;
  for (int j = 1; j < Z; ++j) {
    const auto p = population_payoffs(j, Z, g);
    acc -= dyn.beta * (p.a - p.b);
    terms[static_cast<std::size_t>(j)] = acc;
  }
  const double hi = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - hi);
  return {hi, sum};
}

}  // namespace

PairPayoffs pair_payoffs(Strategy mutant, Strategy resident, const PayoffMatrix& pi) {
  return {pi.at(mutant, mutant), pi.at(mutant, resident), pi.at(resident, mutant),
          pi.at(resident, resident)};
}

PopulationPayoffs population_payoffs(int k, int Z, const PairPayoffs& g) {
  if (Z < 2) throw InvalidParams("Z must be at least 2");
  if (k < 1 || k > Z - 1) throw InvalidParams("k must lie in [1, Z-1]");
  const double n = Z - 1.0;
  return {((k - 1.0) * g.aa + (Z - k) * g.ab) / n, (k * g.ba + (Z - k - 1.0) * g.bb) / n};
}

double fermi_probability(double f_a, double f_b, double beta) {
  const double x = beta * (f_b - f_a);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double fixation_probability(const PairPayoffs& g, const DynamicsParams& dyn) {
  validate(dyn);
  const auto t = fixation_terms(g, dyn);
  return std::exp(-t.max) / t.sum;
}

double log_fixation_probability(const PairPayoffs& g, const DynamicsParams& dyn) {
  validate(dyn);
  const auto t = fixation_terms(g, dyn);
  return -t.max - std::log(t.sum);
}

double fixation_probability(Strategy mutant, Strategy resident, const PayoffMatrix& pi,
                            const DynamicsParams& dyn) {
  if (mutant == resident) throw InvalidParams("mutant and resident must differ");
  return fixation_probability(pair_payoffs(mutant, resident, pi), dyn);
}

Matrix log_fixation_matrix(const PayoffMatrix& pi, const DynamicsParams& dyn) {
  const std::size_t m = pi.size();
  const auto& st = pi.strategies();
  Matrix out(m, std::vector<double>(m, kNegInf));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) out[i][j] = log_fixation_probability(pair_payoffs(st[j], st[i], pi), dyn);
    }
  }
  return out;
}

Matrix transition_matrix(const PayoffMatrix& pi, const DynamicsParams& dyn) {
  const std::size_t m = pi.size();
  if (m < 2) throw InvalidParams("need at least two strategies");
  const auto& st = pi.strategies();
  Matrix t(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      t[i][j] = fixation_probability(pair_payoffs(st[j], st[i], pi), dyn) / (m - 1.0);
      off += t[i][j];
    }
    t[i][i] = 1.0 - off;
  }
  return t;
}

std::vector<double> stationary_from_log_rates(const Matrix& log_rates) {
  const std::size_t n = log_rates.size();
  if (n == 0) throw std::invalid_argument("empty rate matrix");
  if (n == 1) return {1.0};
  Matrix q = log_rates;
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i].size() != n) throw std::invalid_argument("rate matrix must be square");
    q[i][i] = kNegInf;
    for (double x : q[i]) {
      if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) {
        throw std::runtime_error("non-finite transition rate");
      }
    }
  }
  // Eliminate states n-1 .. 1, folding their flows into the remaining ones.
  for (std::size_t k = n - 1; k >= 1; --k) {
    double out = kNegInf;
    for (std::size_t j = 0; j < k; ++j) out = log_add(out, q[k][j]);
    if (out == kNegInf) {
      std::ostringstream msg;
      msg << "stationary solve is singular: state " << k
          << " has no outflow to lower states (reducible chain)";
      throw std::runtime_error(msg.str());
    }
    for (std::size_t i = 0; i < k; ++i) q[i][k] -= out;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) q[i][j] = log_add(q[i][j], q[i][k] + q[k][j]);
      }
    }
  }
  std::vector<double> lv(n, kNegInf);
  lv[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i < k; ++i) lv[k] = log_add(lv[k], lv[i] + q[i][k]);
  }
  double total = kNegInf;
  for (double x : lv) total = log_add(total, x);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(lv[i] - total);
  // Renormalise the rounded values so the entries sum to one.
  double sum = 0.0;
  for (double x : v) sum += x;
  for (double& x : v) x /= sum;
  return v;
}

StationaryResult stationary_distribution(const PayoffMatrix& pi, const DynamicsParams& dyn) {
  validate(dyn);
  const std::size_t m = pi.size();
  if (m < 2) throw InvalidParams("need at least two strategies");
  const auto log_rho = log_fixation_matrix(pi, dyn);
  StationaryResult r;
  r.strategies = pi.strategies();
  r.fixation.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) r.fixation[i][j] = std::exp(log_rho[i][j]);
    }
  }
  // The common factor 1/(m-1) does not change the stationary vector.
  r.distribution = stationary_from_log_rates(log_rho);
  return r;
}

double stationary_residual(const std::vector<double>& v, const Matrix& m) {
  double worst = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    double x = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) x += v[i] * m[i][j];
    worst = std::max(worst, std::abs(x - v[j]));
  }
  return worst;
}

double risk_dominance_margin(Strategy a, Strategy b, const PayoffMatrix& pi) {
  if (a == b) throw InvalidParams("risk dominance needs two distinct strategies");
  return pi.at(a, a) + pi.at(a, b) - pi.at(b, a) - pi.at(b, b);
}

bool is_risk_dominant(Strategy a, Strategy b, const PayoffMatrix& pi) {
  return risk_dominance_margin(a, b, pi) > 0.0;
}

nlohmann::json to_json(const StationaryResult& r) {
  nlohmann::json names = nlohmann::json::array();
  for (auto s : r.strategies) names.push_back(to_string(s));
  return {{"strategies", names}, {"fixation", r.fixation}, {"distribution", r.distribution}};
}

}  // namespace aisr
