#include "mgvar/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mgvar/errors.hpp"

namespace mgvar {

namespace {

constexpr std::size_t kNoPred = std::numeric_limits<std::size_t>::max();

void require_exponent(double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) {
    throw ParameterError("variation exponent r must satisfy r >= 1, got " + std::to_string(r));
  }
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("jump size lambda must be positive");
}

double root(double sum, double r) { return sum > 0.0 ? std::exp(std::log(sum) / r) : 0.0; }

std::vector<std::size_t> backtrack(const std::vector<std::size_t>& pred, std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t k = end; k != kNoPred; k = pred[k]) out.push_back(k);
  std::reverse(out.begin(), out.end());
  return out;
}

// best[j]: largest sum of |increments|^r over subsequences ending at j.
void variation_table(std::span<const double> a, double r, std::vector<double>& best,
                     std::vector<std::size_t>& pred) {
  const std::size_t n = a.size();
  best.assign(n, 0.0);
  pred.assign(n, kNoPred);
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = pow_abs(a[j] - a[i], r) + best[i];
      if (cand > best[j]) {
        best[j] = cand;
        pred[j] = i;
      }
    }
  }
}

// Prefix max over [0, p) and point updates; values start at -1.
class MaxFenwick {
 public:
  explicit MaxFenwick(std::size_t n) : tree_(n + 1, -1) {}
  void update(std::size_t pos, long value) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] = std::max(tree_[i], value);
  }
  long query(std::size_t count) const {
    long out = -1;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) out = std::max(out, tree_[i]);
    return out;
  }

 private:
  std::vector<long> tree_;
};

std::size_t pairs_from(std::span<const double> a, std::size_t start, double lambda) {
  std::size_t best = 0;
  for (std::size_t s = start; s < a.size(); ++s) {
    for (std::size_t t = s + 1; t < a.size(); ++t) {
      if (gap_exceeds(a[t], a[s], lambda)) best = std::max(best, 1 + pairs_from(a, t, lambda));
    }
  }
  return best;
}

// Largest integer l with 2^l < gap (gap > 0).
int top_dyadic_level(double gap) {
  int l = static_cast<int>(std::ceil(std::log2(gap))) - 1;
  while (std::ldexp(1.0, l + 1) < gap) ++l;
  while (std::ldexp(1.0, l) >= gap) --l;
  return l;
}

double max_gap(std::span<const double> a) {
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  return *hi - *lo;
}

}  // namespace

double pow_abs(double x, double r) {
  if (x == 0.0) return 0.0;
  return std::exp(r * std::log(std::fabs(x)));
}

VariationCertificate variation(std::span<const double> path, double r) {
  require_exponent(r);
  if (path.empty()) return {};
  std::vector<double> best;
  std::vector<std::size_t> pred;
  variation_table(path, r, best, pred);
  std::size_t end = 0;
  for (std::size_t j = 1; j < best.size(); ++j) {
    if (best[j] > best[end]) end = j;
  }
  return {root(best[end], r), backtrack(pred, end)};
}

VariationCertificate variation_pruned(std::span<const double> path, double r) {
  require_exponent(r);
  if (path.size() <= 2) return variation(path, r);

  std::vector<std::size_t> distinct{0};
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i] != path[distinct.back()]) distinct.push_back(i);
  }
  std::vector<std::size_t> kept{distinct.front()};
  for (std::size_t k = 1; k + 1 < distinct.size(); ++k) {
    const double before = path[distinct[k]] - path[distinct[k - 1]];
    const double after = path[distinct[k + 1]] - path[distinct[k]];
    if ((before > 0) != (after > 0)) kept.push_back(distinct[k]);
  }
  if (distinct.size() > 1) kept.push_back(distinct.back());

  std::vector<double> reduced(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) reduced[k] = path[kept[k]];
  auto cert = variation(reduced, r);
  for (auto& idx : cert.indices) idx = kept[idx];
  return cert;
}

double variation_bruteforce(std::span<const double> path, double r) {
  require_exponent(r);
  if (path.size() > 16) throw ParameterError("brute-force variation is limited to 16 points");
  const std::size_t n = path.size();
  double best = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    double sum = 0.0;
    long prev = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1U)) continue;
      if (prev >= 0) sum += std::pow(std::fabs(path[i] - path[static_cast<std::size_t>(prev)]), r);
      prev = static_cast<long>(i);
    }
    best = std::max(best, sum);
  }
  return best > 0.0 ? std::pow(best, 1.0 / r) : 0.0;
}

std::vector<double> prefix_variation(std::span<const double> path, double r) {
  require_exponent(r);
  std::vector<double> best;
  std::vector<std::size_t> pred;
  variation_table(path, r, best, pred);
  std::vector<double> out(path.size(), 0.0);
  double running = 0.0;
  for (std::size_t m = 0; m < path.size(); ++m) {
    running = std::max(running, best[m]);
    out[m] = root(running, r);
  }
  return out;
}

double certificate_value(std::span<const double> path, std::span<const std::size_t> indices,
                         double r) {
  double sum = 0.0;
  for (std::size_t j = 1; j < indices.size(); ++j) {
    sum += pow_abs(path[indices[j]] - path[indices[j - 1]], r);
  }
  return root(sum, r);
}

JumpChain jump_count_chain(std::span<const double> path, double lambda) {
  require_lambda(lambda);
  if (path.empty()) return {};
  const std::size_t n = path.size();
  std::vector<std::size_t> cnt(n, 0);
  std::vector<std::size_t> pred(n, kNoPred);
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (gap_exceeds(path[j], path[i], lambda) && cnt[i] + 1 > cnt[j]) {
        cnt[j] = cnt[i] + 1;
        pred[j] = i;
      }
    }
  }
  std::size_t end = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (cnt[j] > cnt[end]) end = j;
  }
  return {cnt[end], backtrack(pred, end)};
}

std::size_t jump_count_chain_fast(std::span<const double> path, double lambda) {
  require_lambda(lambda);
  const std::size_t n = path.size();
  if (n == 0) return 0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return path[x] < path[y]; });
  std::vector<double> sorted(n);
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted[k] = path[order[k]];
    rank[order[k]] = k;
  }

  MaxFenwick below(n);  // indexed by rank
  MaxFenwick above(n);  // indexed by n - 1 - rank
  long best = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double aj = path[j];
    // Values v with aj - v > lambda form a prefix of the sorted order, values
    // with v - aj > lambda a suffix; subtraction is monotone under rounding.
    const auto low_end = std::partition_point(sorted.begin(), sorted.end(),
                                              [&](double v) { return aj - v > lambda; });
    const auto high_begin = std::partition_point(sorted.begin(), sorted.end(),
                                                 [&](double v) { return !(v - aj > lambda); });
    const auto low_count = static_cast<std::size_t>(low_end - sorted.begin());
    const auto high_count = static_cast<std::size_t>(sorted.end() - high_begin);
    const long reach = std::max(below.query(low_count), above.query(high_count));
    const long cnt = reach >= 0 ? reach + 1 : 0;
    best = std::max(best, cnt);
    below.update(rank[j], cnt);
    above.update(n - 1 - rank[j], cnt);
  }
  return static_cast<std::size_t>(best);
}

std::size_t jump_count_chain_bruteforce(std::span<const double> path, double lambda) {
  require_lambda(lambda);
  if (path.size() > 20) throw ParameterError("brute-force jump count is limited to 20 points");
  const std::size_t n = path.size();
  std::size_t best = 0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::size_t count = 0;
    long prev = -1;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1U)) continue;
      if (prev >= 0) {
        ok = gap_exceeds(path[i], path[static_cast<std::size_t>(prev)], lambda);
        ++count;
      }
      prev = static_cast<long>(i);
    }
    if (ok) best = std::max(best, count);
  }
  return best;
}

std::size_t jump_count_pairs(std::span<const double> path, double lambda) {
  require_lambda(lambda);
  if (path.empty()) return 0;
  std::size_t count = 0;
  double lo = path[0];
  double hi = path[0];
  for (std::size_t j = 1; j < path.size(); ++j) {
    const double a = path[j];
    if (gap_exceeds(a, lo, lambda) || gap_exceeds(a, hi, lambda)) {
      ++count;
      lo = hi = a;
    } else {
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  return count;
}

std::size_t jump_count_pairs_bruteforce(std::span<const double> path, double lambda) {
  require_lambda(lambda);
  if (path.size() > 16) throw ParameterError("brute-force pair count is limited to 16 points");
  return pairs_from(path, 0, lambda);
}

double dyadic_jump_majorant(std::span<const double> path, double r, double tolerance,
                            bool diagnostic) {
  if (diagnostic) {
    require_exponent(r);
  } else if (!(r > 2.0)) {
    throw ParameterError("the jump majorant needs r > 2");
  }
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (path.size() < 2) return 0.0;
  const double gap = max_gap(path);
  if (gap == 0.0) return 0.0;

  const double steps = static_cast<double>(path.size() - 1);
  const double ratio = 1.0 - std::exp2(-r);
  double sum = 0.0;
  for (int l = top_dyadic_level(gap);; --l) {
    sum += std::exp2(r * (l + 1)) * static_cast<double>(jump_count_pairs(path, std::ldexp(1.0, l)));
    const double tail = steps * std::exp2(r * l) / ratio;
    if (tail < tolerance) return sum + tail;
  }
}

double literal_jump_sum(std::span<const double> path, double r, double tolerance) {
  require_exponent(r);
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (path.size() < 2) return 0.0;
  const double gap = max_gap(path);
  if (gap == 0.0) return 0.0;

  const double steps = static_cast<double>(path.size() - 1);
  const double ratio = 1.0 - std::exp2(-r);
  double sum = 0.0;
  for (int l = top_dyadic_level(gap);; --l) {
    sum += std::exp2(r * l) * static_cast<double>(jump_count_chain(path, std::ldexp(1.0, l)).count);
    const double tail = steps * std::exp2(r * (l - 1)) / ratio;
    if (tail < tolerance) return sum + tail;
  }
}

double c_r_constant(double r) {
  if (!(r > 2.0)) throw ParameterError("c_r is defined for r > 2");
  return -2.0 * std::expm1(-0.5 * (r - 2.0) * std::log(2.0));
}

double c_r_series(double r, int terms) {
  if (!(r > 2.0)) throw ParameterError("c_r is defined for r > 2");
  if (terms < 1) throw ParameterError("series needs at least one term");
  const double q = std::exp2(-0.5 * (r - 2.0));
  double sum = 0.0;
  double term = 1.0;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= q;
  }
  return 2.0 / sum;
}

}  // namespace mgvar
