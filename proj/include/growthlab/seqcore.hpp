#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/index.hpp"

namespace growthlab {

enum class BlockKind {
  Constant,   // log mu_k = log_mu_start
  Geometric,  // log mu_k = log_mu_start + (k - start) * log_ratio
  Formula,    // log mu_k = exponent * log k
};

/// A run [start, end) of quotient indices on which mu follows one closed form.
///
/// All sums are evaluated from the closed form, so a block may span 2^100
/// indices at no cost. Offsets passed to the range methods are relative to
/// `start` and half-open.
struct Block {
  BlockKind kind = BlockKind::Constant;
  Index start = 1;
  Index end = 1;
  double log_mu_start = 0.0;
  double log_ratio = 0.0;
  double exponent = 0.0;

  Index count() const { return end - start; }
  bool contains(Index k) const { return k >= start && k < end; }

  double log_mu_at(Index k) const;
  double log_mu_first() const { return log_mu_at(start); }
  double log_mu_last() const { return log_mu_at(end - 1); }

  /// Sum of log mu over offsets [i0, i1).
  double sum_log_mu(Index i0, Index i1) const;
  /// Sum of 1/mu over offsets [i0, i1).
  double sum_recip(Index i0, Index i1) const;
  /// Number of leading offsets i with log mu_{start+i} <= x. Consistent with
  /// log_mu_at, so the count agrees with pointwise comparison exactly.
  Index count_at_most(double x) const;
  /// Sum over the first m offsets of (x - log mu).
  double deficit(double x, Index m) const;
};

enum class Family { Gevrey, NQCounterexample, QACaseA, QACaseB, QACaseC };

std::string_view family_name(Family f);
/// Accepts the names produced by family_name. Throws ParameterError.
Family parse_family(std::string_view name);

struct ConstructionParams {
  Family family = Family::Gevrey;
  double s = 1.0;      // Gevrey exponent
  Index k_max = 0;     // Gevrey length
  double A = 3.0;      // block multiplier
  double A0 = 0.0;     // QACaseA upper bound for A
  /// NQCounterexample: choose d_j by the rule for this multiplier instead of
  /// A (0 = use A). Any value in (2, A] keeps the construction valid and lets
  /// sequences with different A share a_j, b_j.
  double d_rule_A = 0.0;
  int j_max = 0;       // number of macro-blocks
};

/// Macro-block j: mu is constant-stepped on (a, b] and geometric on (b, a_next].
/// All a_j and b_j are powers of two.
struct Checkpoint {
  int j = 0;
  Index a = 0;
  Index b = 0;
  int d = 0;
  int c = 0;
  double log_mu_a = 0.0;
  double log_mu_b = 0.0;
};

struct CountingPrefix {
  Index n = 0;          // #{k >= 1 : mu_k <= t}
  double logsum = 0.0;  // sum of log mu_k over those k
};

/// Quotient sequence mu of a weight sequence M, stored as closed-form blocks.
///
/// mu_0 = 1 is implicit; blocks cover 1..k_max contiguously. Immutable after
/// construction and safe for concurrent queries.
class BlockSequence {
 public:
  BlockSequence() = default;

  /// Assembles a sequence from raw parts, checking only that the blocks are
  /// contiguous from index 1 and individually well formed. Log-convexity is
  /// checked separately by log_convexity_violation().
  static BlockSequence from_parts(ConstructionParams params, std::vector<Block> blocks,
                                  std::vector<Checkpoint> checkpoints);

  const ConstructionParams& params() const { return params_; }
  Family family() const { return params_.family; }
  Index k_max() const { return blocks_.empty() ? 0 : blocks_.back().end - 1; }
  bool empty() const { return blocks_.empty(); }
  std::span<const Block> blocks() const { return blocks_; }
  std::span<const Checkpoint> checkpoints() const { return checkpoints_; }

  /// log mu_k for 0 <= k <= k_max. Throws IndexError.
  double log_mu(Index k) const;
  /// log M_j = sum_{k<=j} log mu_k. Throws IndexError.
  double log_M(Index j) const;
  /// sum_{k=1}^{k_hi} 1/mu_k for 1 <= k_hi <= k_max. Throws IndexError.
  double reciprocal_sum(Index k_hi) const;
  /// sum_{k=lo}^{hi} 1/mu_k evaluated block-wise (no prefix differences).
  double reciprocal_sum_range(Index lo, Index hi) const;
  /// Counting data for t = exp(log_t).
  CountingPrefix counting_prefix_log(double log_t) const;
  /// sum over k >= 1 with log mu_k <= x of (x - log mu_k); this is
  /// omega_M(e^x) for normalized log-convex M.
  double deficit_sum(double x) const;

  /// Index of the block holding k (1 <= k <= k_max).
  std::size_t block_of(Index k) const;

  /// First index k at which mu_{k} < mu_{k-1} (or mu_1 < 1), if any.
  std::optional<Index> log_convexity_violation() const;

 private:
  ConstructionParams params_;
  std::vector<Block> blocks_;
  std::vector<Checkpoint> checkpoints_;
  std::vector<double> prefix_log_;    // sum of log mu over blocks [0, i)
  std::vector<double> prefix_recip_;  // sum of 1/mu over blocks [0, i)
};

/// mu_j = j^s, i.e. M_j = (j!)^s.
BlockSequence build_gevrey(double s, Index k_max);
/// The non-quasianalytic counterexample with d_j := max(d_{j-1}+1,
/// ceil((j/2+1) log 2 / log(A/2))) and c_j = j. Requires A > 2.
BlockSequence build_nq_counterexample(const ConstructionParams& params);
/// Quasianalytic constructions (family QACaseA/B/C); mu_1 = 1.
BlockSequence build_qa_sequence(const ConstructionParams& params);
/// Dispatches on params.family.
BlockSequence build_sequence(const ConstructionParams& params);

inline double mu_at(const BlockSequence& seq, Index k) { return seq.log_mu(k); }
inline double log_M_at(const BlockSequence& seq, Index j) { return seq.log_M(j); }
inline double reciprocal_sum(const BlockSequence& seq, Index k_hi) {
  return seq.reciprocal_sum(k_hi);
}
CountingPrefix counting_prefix(const BlockSequence& seq, double t);
std::vector<Checkpoint> checkpoint_table(const BlockSequence& seq);

/// sum_{k=lo}^{hi} k^{-s}; direct below 2^16 terms, Euler-Maclaurin above.
double sum_inverse_powers(double s, Index lo, Index hi);

}  // namespace growthlab
