#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mgvar/martingale.hpp"
#include "mgvar/report.hpp"
#include "mgvar/weights.hpp"

// Randomized experiment harness: trial construction from counter-based
// seeds, calibration and holdout phases, and replay of individual reports.

namespace mgvar {

enum class SuiteKind { good_lambda, lemma, proof_chain, weighted, lepingle, jumps, bdg };

std::string to_string(SuiteKind kind);
SuiteKind suite_from_string(const std::string& name);

/// Suites whose pass/fail is defined against a calibrated budget.
bool is_calibrated(SuiteKind kind);

struct FiltrationSpec {
  enum class Kind { dyadic, comb, random } kind = Kind::dyadic;
  int depth = 8;
  std::size_t cells = 64;  // random
  double q_min = 0.02;     // comb
  double q_max = 0.1;      // comb
};

enum class LambdaMode { critical, quantile, fixed };

struct SuiteConfig {
  SuiteKind suite = SuiteKind::proof_chain;
  std::size_t trials = 100;
  std::uint64_t seed = 1;          // calibration (or only) phase
  std::uint64_t holdout_seed = 2;  // calibrated suites only
  FiltrationSpec filtration;
  std::vector<GeneratorSpec> generators{GeneratorSpec{}};  // trial t uses generators[t % size]
  std::vector<double> delta{0.25};
  std::vector<double> r{3.0};
  LambdaMode lambda_mode = LambdaMode::critical;
  std::vector<double> lambdas;                       // fixed mode, and the jumps grid
  std::vector<double> quantiles{0.1, 0.25, 0.5, 0.75, 0.9};
  // Bound on the reports' empirical constants.  Unset means "calibrate".
  // good_lambda / lemma: K = joint / rhs, so the verifier runs with C = 1 / budget.
  // weighted: the multiplier C itself.
  std::optional<double> budget;
  double epsilon = 0.1;         // weighted
  double rho = 0.3;             // weighted cascade
  double lemma_constant = 1.0;  // weighted: C in C delta^2 / (r-2)^2 <= gamma
  double p = 2.0;               // lepingle, jumps, bdg
  int threads = 1;
};

/// Throws ParameterError on unknown keys, wrong types or out-of-range values.
SuiteConfig suite_config_from_json(const json& j);
json to_json(const SuiteConfig& config);

/// Objects of one trial.  The filtration is shared when it does not depend on the seed.
struct Trial {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::shared_ptr<const Filtration> filtration;
  std::optional<Martingale> f;
  std::optional<DyadicWeight> weight;  // weighted suite only
};

class TrialFactory {
 public:
  explicit TrialFactory(SuiteConfig config);
  Trial make(std::uint64_t base_seed, std::size_t index) const;
  const SuiteConfig& config() const { return config_; }

 private:
  SuiteConfig config_;
  std::shared_ptr<const Filtration> shared_;
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers; results come back in index order.
template <class Fn>
auto parallel_map(std::size_t n, int threads, Fn fn) -> std::vector<decltype(fn(std::size_t{0}))> {
  using T = decltype(fn(std::size_t{0}));
  std::vector<std::optional<T>> slots(n);
  const std::size_t workers = std::min<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) slots[i].emplace(fn(i));
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            slots[i].emplace(fn(i));
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct TrialOutcome {
  std::size_t index = 0;
  bool excluded = false;  // identically zero martingale
  std::vector<VerificationReport> reports;
};

/// Every report of the trial, each with a manifest sufficient for replay.
/// `budget` is the bound handed to the verifiers (ignored by data suites).
TrialOutcome evaluate_trial(const TrialFactory& factory, std::uint64_t base_seed, std::size_t index,
                            double budget);

struct NameStats {
  std::size_t count = 0;
  std::size_t failures = 0;
  std::size_t nonvacuous = 0;  // reports with lhs > 0
  double max_constant = 0.0;
};

struct Calibration {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double sup_constant = 0.0;
  double budget = 0.0;  // the bound applied in the holdout phase
};

/// sup of the empirical constants over a calibration run.
Calibration calibrate(const SuiteConfig& config, std::uint64_t seed);

struct SuiteResult {
  std::optional<Calibration> calibration;
  std::size_t trials = 0;
  std::size_t excluded = 0;
  std::size_t reports = 0;
  std::size_t failures = 0;
  std::map<std::string, NameStats> stats;
  json summary;
};

using ReportSink = std::function<void(const TrialOutcome&)>;

/// Calibrated suites: calibrate on `seed` unless a budget is given, then
/// evaluate `trials` fresh trials on `holdout_seed`.  Other suites run once
/// on `seed`.  The sink sees trials in index order.
SuiteResult run_suite(const SuiteConfig& config, const ReportSink& sink = {});

json to_json(const SuiteResult& result);

/// Re-evaluates the trial named in the report's manifest and returns the
/// report at the recorded position.
VerificationReport replay_report(const json& report);

/// Largest relative gap between two reports over lhs, rhs, empirical
/// constant and shared params; +inf if names or pass flags differ.
double report_gap(const VerificationReport& a, const VerificationReport& b);

}  // namespace mgvar
