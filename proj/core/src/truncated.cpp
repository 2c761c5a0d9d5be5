#include "platform_qbd/truncated.hpp"

#include <string>

#include "platform_qbd/errors.hpp"
#include "platform_qbd/model_two.hpp"  // kMaxOwnersTwo

namespace pqbd {

namespace {

void add_rate(Mat& q, std::size_t from, std::size_t to, double rate) {
  if (rate == 0.0) return;
  q(from, to) += rate;
  q(from, from) -= rate;
}

}  // namespace

Mat rule_generator_one(const ModelParams& p, std::size_t levels) {
  p.validate();
  if (levels < 1) throw DimensionError("rule_generator_one: need at least one level");
  const std::size_t n = static_cast<std::size_t>(p.n_owners);
  const std::size_t i_max = n - 1 + levels;  // level k holds waiting count n-1+k
  const std::size_t phases = n + 1;
  const std::size_t states = (i_max + 1) * phases;
  const auto at = [phases](std::size_t i, std::size_t j) { return i * phases + j; };

  Mat q(states, states);
  for (std::size_t i = 0; i <= i_max; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      const std::size_t s = at(i, j);
      if (i < i_max) add_rate(q, s, at(i + 1, j), p.lambda);  // last level reflects
      if (j < n) add_rate(q, s, at(i, j + 1), (static_cast<double>(n - j)) * p.mu);
      const std::size_t pairs = i < j ? i : j;
      if (pairs > 0)
        add_rate(q, s, at(i - 1, j - 1), static_cast<double>(pairs) * p.gamma);
    }
  }
  return q;
}

namespace {

// State layout for the two-stage model: sub-level n (n working owners,
// n < N) at offset 2^n - 1, repeated level k >= 1 at (2^N - 1) + (k-1) 2^N.
// Within a (sub-)level, working owners carry stage digits ranked
// lexicographically, first owner most significant; digit = stage - 1.
struct LayoutTwo {
  std::size_t n_owners;
  std::size_t levels;

  std::size_t boundary_size() const { return (std::size_t{1} << n_owners) - 1; }
  std::size_t repeat_size() const { return std::size_t{1} << n_owners; }
  std::size_t total() const { return boundary_size() + levels * repeat_size(); }
  std::size_t boundary_at(std::size_t n, std::size_t rank) const {
    return (std::size_t{1} << n) - 1 + rank;
  }
  std::size_t level_at(std::size_t k, std::size_t rank) const {
    return boundary_size() + (k - 1) * repeat_size() + rank;
  }
};

// Drop the digit at position m (0-based from the most significant of n).
std::size_t remove_digit(std::size_t rank, std::size_t n, std::size_t m) {
  const std::size_t w = n - 1 - m;
  const std::size_t low = rank & ((std::size_t{1} << w) - 1);
  const std::size_t high = rank >> (w + 1);
  return (high << w) | low;
}

}  // namespace

Mat rule_generator_two(const ModelParams& p, std::size_t levels) {
  p.validate();
  if (levels < 1) throw DimensionError("rule_generator_two: need at least one level");
  if (p.n_owners > kMaxOwnersTwo)
    throw CapacityError("rule_generator_two: pool size " +
                        std::to_string(p.n_owners) + " exceeds the supported maximum " +
                        std::to_string(kMaxOwnersTwo));

  const LayoutTwo lay{static_cast<std::size_t>(p.n_owners), levels};
  const std::size_t n_own = lay.n_owners;
  Mat q(lay.total(), lay.total());

  // boundary: n working owners, no queue
  for (std::size_t n = 0; n < n_own; ++n) {
    for (std::size_t rank = 0; rank < (std::size_t{1} << n); ++rank) {
      const std::size_t s = lay.boundary_at(n, rank);
      // arrival engages a fresh owner in stage 1 (appended least significant)
      const std::size_t grown = rank << 1;
      if (n + 1 < n_own)
        add_rate(q, s, lay.boundary_at(n + 1, grown), p.lambda);
      else
        add_rate(q, s, lay.level_at(1, grown), p.lambda);
      for (std::size_t m = 0; m < n; ++m) {
        const std::size_t bit = std::size_t{1} << (n - 1 - m);
        if (rank & bit)  // stage 2: completion frees the owner
          add_rate(q, s, lay.boundary_at(n - 1, remove_digit(rank, n, m)), p.mu);
        else  // stage 1 -> 2
          add_rate(q, s, lay.boundary_at(n, rank | bit), p.gamma);
      }
    }
  }

  // repeated levels: all owners working, level k has k-1 queued seekers
  for (std::size_t k = 1; k <= levels; ++k) {
    for (std::size_t rank = 0; rank < lay.repeat_size(); ++rank) {
      const std::size_t s = lay.level_at(k, rank);
      if (k < levels) add_rate(q, s, lay.level_at(k + 1, rank), p.lambda);
      for (std::size_t m = 0; m < n_own; ++m) {
        const std::size_t bit = std::size_t{1} << (n_own - 1 - m);
        if (rank & bit) {
          if (k == 1)  // nobody queued: the pool shrinks
            add_rate(q, s, lay.boundary_at(n_own - 1, remove_digit(rank, n_own, m)),
                     p.mu);
          else  // the queue's head restarts the owner in stage 1
            add_rate(q, s, lay.level_at(k - 1, rank & ~bit), p.mu);
        } else {
          add_rate(q, s, lay.level_at(k, rank | bit), p.gamma);
        }
      }
    }
  }
  return q;
}

TruncatedStationary truncated_stationary(Model model, const ModelParams& p,
                                         std::size_t levels) {
  TruncatedStationary out;
  out.model = model;
  out.n_owners = p.n_owners;
  out.levels = levels;

  if (model == Model::one) {
    const std::size_t n = static_cast<std::size_t>(p.n_owners);
    const std::size_t phases = n + 1;
    out.level0_size = n * phases;
    out.repeat_size = phases;
    out.probs = stationary_from_generator(rule_generator_one(p, levels));
    const std::size_t i_max = n - 1 + levels;
    for (std::size_t i = 0; i <= i_max; ++i) {
      for (std::size_t j = 0; j <= n; ++j) {
        const double pr = out.probs[i * phases + j];
        out.eq1 += pr * static_cast<double>(j);
        out.eq2 += pr * static_cast<double>(i);
        if (i == i_max) out.tail_mass += pr;
      }
    }
  } else {
    const LayoutTwo lay{static_cast<std::size_t>(p.n_owners), levels};
    out.level0_size = lay.boundary_size();
    out.repeat_size = lay.repeat_size();
    out.probs = stationary_from_generator(rule_generator_two(p, levels));
    for (std::size_t n = 0; n < lay.n_owners; ++n)
      for (std::size_t rank = 0; rank < (std::size_t{1} << n); ++rank)
        out.eq1 += out.probs[lay.boundary_at(n, rank)] *
                   static_cast<double>(lay.n_owners - n);
    for (std::size_t k = 1; k <= levels; ++k) {
      double mass = 0.0;
      for (std::size_t rank = 0; rank < lay.repeat_size(); ++rank)
        mass += out.probs[lay.level_at(k, rank)];
      out.eq2 += static_cast<double>(k - 1) * mass;
      if (k == levels) out.tail_mass = mass;
    }
  }
  return out;
}

TruncatedStationary truncated_stationary_auto(Model model, const ModelParams& p,
                                              std::size_t levels, double tail_tol,
                                              std::size_t max_levels) {
  std::size_t k = levels < 2 ? 2 : levels;
  while (true) {
    TruncatedStationary t = truncated_stationary(model, p, k);
    if (t.tail_mass <= tail_tol) return t;
    if (k >= max_levels)
      throw NonConvergenceError(
          "truncated_stationary_auto: tail mass " + std::to_string(t.tail_mass) +
              " still above tolerance at " + std::to_string(k) + " levels",
          static_cast<long>(k), t.tail_mass);
    k *= 2;
    if (k > max_levels) k = max_levels;
  }
}

}  // namespace pqbd
