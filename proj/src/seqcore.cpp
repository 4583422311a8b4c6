#include "growthlab/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int kMaxExponent = 125;

double dbl(Index k) { return index_to_double(k); }

// Largest m in [0, n] with pred(m - 1) true, pred monotone (true then false).
template <class Pred>
Index partition_point(Index n, Pred pred) {
  Index lo = 0, hi = n;
  while (lo < hi) {
    const Index mid = lo + (hi - lo) / 2;
    if (pred(mid))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

double first_derivative_term(double s, int order, double x) {
  // d^order/dx^order x^{-s} = (-1)^order s(s+1)...(s+order-1) x^{-s-order}
  double c = 1.0;
  for (int i = 0; i < order; ++i) c *= -(s + i);
  return c * std::pow(x, -s - order);
}

}  // namespace

std::string index_to_string(Index k) {
  if (k == 0) return "0";
  const bool neg = k < 0;
  // magnitude via unsigned to cover the minimum value
  __extension__ unsigned __int128 u = neg ? -static_cast<unsigned __int128>(k)
                                          : static_cast<unsigned __int128>(k);
  std::string out;
  while (u > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Index parse_index(std::string_view s) {
  if (s.empty()) throw ParameterError("empty index string");
  bool neg = false;
  std::size_t pos = 0;
  if (s[0] == '-') {
    neg = true;
    pos = 1;
  }
  if (pos == s.size()) throw ParameterError("malformed index '" + std::string(s) + "'");
  Index v = 0;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (ch < '0' || ch > '9') throw ParameterError("malformed index '" + std::string(s) + "'");
    if (v > (kMaxIndex / 10) * 3) throw ParameterError("index '" + std::string(s) + "' too large");
    v = v * 10 + (ch - '0');
  }
  return neg ? -v : v;
}

double sum_inverse_powers(double s, Index lo, Index hi) {
  if (hi < lo) return 0.0;
  constexpr Index kDirect = Index{1} << 16;
  auto direct = [s](Index a, Index b) {
    double acc = 0.0;
    for (Index k = b; k >= a; --k) acc += std::pow(dbl(k), -s);
    return acc;
  };
  if (hi - lo < kDirect) return direct(lo, hi);

  // Euler-Maclaurin from n0 to hi; the head below n0 is summed directly.
  const Index n0 = std::max<Index>(lo, 64);
  const double head = n0 > lo ? direct(lo, n0 - 1) : 0.0;
  const double a = dbl(n0), b = dbl(hi);
  double integral;
  if (s == 1.0) {
    integral = std::log(b / a);
  } else {
    integral = std::pow(a, 1.0 - s) * std::expm1((1.0 - s) * std::log(b / a)) / (1.0 - s);
  }
  double tail = integral + 0.5 * (std::pow(a, -s) + std::pow(b, -s));
  // B_2/2!, B_4/4!, B_6/6!, B_8/8!
  static constexpr double kCoef[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
  for (int p = 1; p <= 4; ++p) {
    const int order = 2 * p - 1;
    tail += kCoef[p - 1] * (first_derivative_term(s, order, b) - first_derivative_term(s, order, a));
  }
  return head + tail;
}

// Block ---------------------------------------------------------------------

double Block::log_mu_at(Index k) const {
  switch (kind) {
    case BlockKind::Constant:
      return log_mu_start;
    case BlockKind::Geometric:
      return log_mu_start + dbl(k - start) * log_ratio;
    case BlockKind::Formula:
      return exponent * std::log(dbl(k));
  }
  return log_mu_start;
}

double Block::sum_log_mu(Index i0, Index i1) const {
  if (i1 <= i0) return 0.0;
  const double m = dbl(i1 - i0);
  switch (kind) {
    case BlockKind::Constant:
      return m * log_mu_start;
    case BlockKind::Geometric: {
      const double first = log_mu_start + dbl(i0) * log_ratio;
      return m * (first + 0.5 * log_ratio * (m - 1.0));
    }
    case BlockKind::Formula:
      // sum_{k=start+i0}^{start+i1-1} log k
      return exponent * (std::lgamma(dbl(start + i1)) - std::lgamma(dbl(start + i0)));
  }
  return 0.0;
}

double Block::sum_recip(Index i0, Index i1) const {
  if (i1 <= i0) return 0.0;
  const double m = dbl(i1 - i0);
  switch (kind) {
    case BlockKind::Constant:
      return m * std::exp(-log_mu_start);
    case BlockKind::Geometric: {
      const double first = log_mu_start + dbl(i0) * log_ratio;
      return std::exp(-first) * std::expm1(-m * log_ratio) / std::expm1(-log_ratio);
    }
    case BlockKind::Formula:
      return sum_inverse_powers(exponent, start + i0, start + i1 - 1);
  }
  return 0.0;
}

Index Block::count_at_most(double x) const {
  const Index n = count();
  if (n <= 0 || log_mu_first() > x) return 0;
  if (log_mu_last() <= x) return n;
  if (kind == BlockKind::Constant) return 0;
  return partition_point(n, [&](Index i) { return log_mu_at(start + i) <= x; });
}

double Block::deficit(double x, Index m) const {
  if (m <= 0) return 0.0;
  const double md = dbl(m);
  switch (kind) {
    case BlockKind::Constant:
      return md * (x - log_mu_start);
    case BlockKind::Geometric:
      return md * ((x - log_mu_start) - 0.5 * log_ratio * (md - 1.0));
    case BlockKind::Formula:
      return md * x - sum_log_mu(0, m);
  }
  return 0.0;
}

// Family names ---------------------------------------------------------------

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Gevrey:
      return "gevrey";
    case Family::NQCounterexample:
      return "nq";
    case Family::QACaseA:
      return "qa-a";
    case Family::QACaseB:
      return "qa-b";
    case Family::QACaseC:
      return "qa-c";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::Gevrey, Family::NQCounterexample, Family::QACaseA, Family::QACaseB,
                   Family::QACaseC}) {
    if (family_name(f) == name) return f;
  }
  throw ParameterError("unknown family '" + std::string(name) +
                       "' (expected gevrey, nq, qa-a, qa-b or qa-c)");
}

// BlockSequence --------------------------------------------------------------

BlockSequence BlockSequence::from_parts(ConstructionParams params, std::vector<Block> blocks,
                                        std::vector<Checkpoint> checkpoints) {
  Index expected = 1;
  for (const Block& b : blocks) {
    if (b.start != expected)
      throw DomainError("blocks are not contiguous at index " + index_to_string(b.start));
    if (b.end <= b.start) throw DomainError("empty block at index " + index_to_string(b.start));
    if (b.end - 1 > kMaxIndex) throw DomainError("block exceeds the index range");
    if (b.kind == BlockKind::Geometric && !(b.log_ratio > 0.0))
      throw DomainError("geometric block with non-positive log_ratio at " +
                        index_to_string(b.start));
    if (b.kind == BlockKind::Formula && !(b.exponent > 0.0))
      throw DomainError("formula block with non-positive exponent");
    if (!std::isfinite(b.log_mu_start)) throw DomainError("non-finite block value");
    expected = b.end;
  }

  BlockSequence seq;
  seq.params_ = params;
  seq.blocks_ = std::move(blocks);
  seq.checkpoints_ = std::move(checkpoints);
  seq.prefix_log_.assign(seq.blocks_.size() + 1, 0.0);
  seq.prefix_recip_.assign(seq.blocks_.size() + 1, 0.0);
  for (std::size_t i = 0; i < seq.blocks_.size(); ++i) {
    const Block& b = seq.blocks_[i];
    seq.prefix_log_[i + 1] = seq.prefix_log_[i] + b.sum_log_mu(0, b.count());
    seq.prefix_recip_[i + 1] = seq.prefix_recip_[i] + b.sum_recip(0, b.count());
  }
  return seq;
}

std::size_t BlockSequence::block_of(Index k) const {
  if (k < 1 || k > k_max())
    throw IndexError("index " + index_to_string(k) + " outside 1.." + index_to_string(k_max()));
  auto it = std::upper_bound(blocks_.begin(), blocks_.end(), k,
                             [](Index v, const Block& b) { return v < b.start; });
  return static_cast<std::size_t>(std::distance(blocks_.begin(), it) - 1);
}

double BlockSequence::log_mu(Index k) const {
  if (k == 0) return 0.0;
  return blocks_[block_of(k)].log_mu_at(k);
}

double BlockSequence::log_M(Index j) const {
  if (j == 0) return 0.0;
  const std::size_t i = block_of(j);
  const Block& b = blocks_[i];
  return prefix_log_[i] + b.sum_log_mu(0, j - b.start + 1);
}

double BlockSequence::reciprocal_sum(Index k_hi) const {
  if (k_hi < 1) throw IndexError("reciprocal_sum requires k_hi >= 1");
  const std::size_t i = block_of(k_hi);
  const Block& b = blocks_[i];
  return prefix_recip_[i] + b.sum_recip(0, k_hi - b.start + 1);
}

double BlockSequence::reciprocal_sum_range(Index lo, Index hi) const {
  if (hi < lo) return 0.0;
  std::size_t i = block_of(lo);
  block_of(hi);
  double acc = 0.0;
  for (; i < blocks_.size() && blocks_[i].start <= hi; ++i) {
    const Block& b = blocks_[i];
    const Index u = std::max(lo, b.start), v = std::min(hi, b.end - 1);
    acc += b.sum_recip(u - b.start, v - b.start + 1);
  }
  return acc;
}

CountingPrefix BlockSequence::counting_prefix_log(double log_t) const {
  CountingPrefix out;
  for (const Block& b : blocks_) {
    const Index m = b.count_at_most(log_t);
    if (m == 0) break;
    out.n += m;
    out.logsum += b.sum_log_mu(0, m);
    if (m < b.count()) break;
  }
  return out;
}

double BlockSequence::deficit_sum(double x) const {
  double acc = 0.0;
  for (const Block& b : blocks_) {
    const Index m = b.count_at_most(x);
    if (m == 0) break;
    acc += b.deficit(x, m);
    if (m < b.count()) break;
  }
  return acc;
}

std::optional<Index> BlockSequence::log_convexity_violation() const {
  double prev = 0.0;  // log mu_0
  for (const Block& b : blocks_) {
    if (b.log_ratio < 0.0) return b.start + 1;
    if (b.log_mu_first() < prev) return b.start;
    prev = b.log_mu_last();
  }
  return std::nullopt;
}

CountingPrefix counting_prefix(const BlockSequence& seq, double t) {
  if (!(t > 0.0)) throw ParameterError("counting_prefix requires t > 0");
  return seq.counting_prefix_log(std::log(t));
}

std::vector<Checkpoint> checkpoint_table(const BlockSequence& seq) {
  return {seq.checkpoints().begin(), seq.checkpoints().end()};
}

// Builders -------------------------------------------------------------------

BlockSequence build_gevrey(double s, Index k_max) {
  if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("Gevrey exponent s must be positive");
  if (k_max < 2) throw ParameterError("Gevrey sequence requires k_max >= 2");
  if (k_max > kMaxIndex) throw ParameterError("k_max exceeds the index range");
  ConstructionParams p;
  p.family = Family::Gevrey;
  p.s = s;
  p.k_max = k_max;
  Block b;
  b.kind = BlockKind::Formula;
  b.start = 1;
  b.end = k_max + 1;
  b.exponent = s;
  b.log_mu_start = 0.0;  // s log 1
  return BlockSequence::from_parts(p, {b}, {});
}

namespace {

// Appends the blocks of one macro-block. Index a_j = 2^{ea}.
class Assembler {
 public:
  explicit Assembler(double log_mu_1) {
    Block first;
    first.kind = BlockKind::Constant;
    first.start = 1;
    first.end = 2;
    first.log_mu_start = log_mu_1;
    blocks_.push_back(first);
  }

  // Returns exponent of a_{j+1}; updates log_mu_a to log mu_{a_{j+1}}.
  int macro(int j, int ea, double& log_mu_a, int d, int c, double log_A) {
    if (ea + d + c > kMaxExponent)
      throw ConstructionError("macro-block " + std::to_string(j) +
                                  " exceeds the representable index range 2^" +
                                  std::to_string(kMaxExponent),
                              j, ea + d + c, kMaxExponent);
    const Index a = pow2(ea);
    for (int i = 0; i < d; ++i) {
      Block b;
      b.kind = BlockKind::Constant;
      b.start = (a << i) + 1;
      b.end = (a << (i + 1)) + 1;
      b.log_mu_start = log_mu_a + (i + 1) * log_A;
      blocks_.push_back(b);
    }
    const int eb = ea + d;
    const double log_mu_b = log_mu_a + d * log_A;
    for (int i = 0; i < c; ++i) {
      const Index n = pow2(eb + i);
      Block g;
      g.kind = BlockKind::Geometric;
      g.start = n + 1;
      g.end = 2 * n + 1;
      g.log_ratio = 0.5 * kLn2 / dbl(n);
      g.log_mu_start = log_mu_b + i * (0.5 * kLn2) + g.log_ratio;
      // Once the step drops below one ulp, rounding could otherwise put the
      // first value of a run below the last value of the previous one.
      g.log_mu_start = std::max(g.log_mu_start, blocks_.back().log_mu_last());
      blocks_.push_back(g);
    }
    checkpoints_.push_back(Checkpoint{j, a, pow2(eb), d, c, log_mu_a, log_mu_b});
    log_mu_a = log_mu_b + c * (0.5 * kLn2);
    return eb + c;
  }

  BlockSequence finish(const ConstructionParams& p) {
    return BlockSequence::from_parts(p, std::move(blocks_), std::move(checkpoints_));
  }

 private:
  std::vector<Block> blocks_;
  std::vector<Checkpoint> checkpoints_;
};

void check_j_max(int j_max) {
  if (j_max < 0) throw ParameterError("j_max must be non-negative");
}

BlockSequence empty_sequence(const ConstructionParams& p) {
  return BlockSequence::from_parts(p, {}, {});
}

}  // namespace

BlockSequence build_nq_counterexample(const ConstructionParams& params) {
  if (params.family != Family::NQCounterexample)
    throw ParameterError("build_nq_counterexample requires family nq");
  if (!(params.A > 2.0) || !std::isfinite(params.A)) throw ParameterError("A must exceed 2");
  check_j_max(params.j_max);
  if (params.j_max == 0) return empty_sequence(params);

  const double rule_A = params.d_rule_A == 0.0 ? params.A : params.d_rule_A;
  if (!(rule_A > 2.0 && rule_A <= params.A))
    throw ParameterError("d_rule_A must lie in (2, A]");
  const double log_A = std::log(params.A);
  const double log_half_A = std::log(rule_A / 2.0);
  // (2/A)^d <= 2^{-(j/2+1)}  <=>  d log(A/2) >= (j/2+1) log 2
  auto admissible = [&](int j, int d) {
    return d * log_half_A >= (0.5 * j + 1.0) * kLn2 * (1.0 - 1e-14);
  };

  Assembler as(kLn2);
  double log_mu_a = kLn2;
  int ea = 0, d_prev = 0;
  for (int j = 1; j <= params.j_max; ++j) {
    int d = static_cast<int>(std::ceil((0.5 * j + 1.0) * kLn2 / log_half_A));
    while (d > 1 && admissible(j, d - 1)) --d;
    while (!admissible(j, d)) ++d;
    d = std::max(d, d_prev + 1);
    d_prev = d;
    ea = as.macro(j, ea, log_mu_a, d, j, log_A);
  }
  return as.finish(params);
}

BlockSequence build_qa_sequence(const ConstructionParams& params) {
  check_j_max(params.j_max);
  const double A = params.A;
  switch (params.family) {
    case Family::QACaseA:
      if (!(params.A0 > 1.0 && params.A0 < 2.0))
        throw ParameterError("case a requires 1 < A0 < 2");
      if (!(A > 1.0 && A <= params.A0)) throw ParameterError("case a requires 1 < A <= A0");
      break;
    case Family::QACaseB:
      if (!(A > 2.0)) throw ParameterError("case b requires A > 2");
      break;
    case Family::QACaseC:
      if (!(A > 2.0)) throw ParameterError("case c requires A > 2");
      break;
    default:
      throw ParameterError("build_qa_sequence requires family qa-a, qa-b or qa-c");
  }
  if (params.j_max == 0) return empty_sequence(params);

  const double log_A = std::log(A);
  const double log_half_A = std::log(A / 2.0);
  Assembler as(0.0);
  double log_mu_a = 0.0;
  int ea = 0, d_prev = 0, c_prev = 0;
  constexpr int kScanLimit = 4096;

  for (int j = 1; j <= params.j_max; ++j) {
    // log(mu_{a_j} / a_j)
    const double lr = log_mu_a - ea * kLn2;
    const double loglog = std::log(std::log(j + 1.0));
    int d = 0, c = 0;

    if (params.family == Family::QACaseA) {
      d = j;
      c = j;
    } else if (params.family == Family::QACaseB) {
      // x = mu_{b_j}/b_j = (mu_{a_j}/a_j)(A/2)^d must satisfy
      //   x >= sqrt2^{c-1} log(j+1)               (lower)
      //   x <= (sqrt2^{c-1} - 1) j log(j+1)        (upper, enforced for j >= 2)
      auto log_lower = [&](int cc) { return 0.5 * (cc - 1) * kLn2 + loglog; };
      auto log_upper = [&](int cc) {
        const double g = std::pow(std::numbers::sqrt2, cc - 1) - 1.0;
        return g > 0.0 ? std::log(g) + std::log(double(j)) + loglog : -INFINITY;
      };
      if (j == 1) {
        c = std::max(c_prev + 1, 1);
        d = std::max(d_prev + 1, 1);
        while (lr + d * log_half_A < log_lower(c)) ++d;
      } else {
        c = std::max(c_prev + 1, j);
        bool found = false;
        for (int tries = 0; tries < kScanLimit && !found; ++tries, ++c) {
          for (d = d_prev + 1; d < d_prev + 1 + kScanLimit; ++d) {
            const double lx = lr + d * log_half_A;
            if (lx > log_upper(c)) break;
            if (lx >= log_lower(c)) {
              found = true;
              break;
            }
          }
          if (found) break;
        }
        if (!found)
          throw ConstructionError("case b: no admissible (d, c) at j = " + std::to_string(j), j,
                                  std::exp(log_lower(c)), std::exp(log_upper(c)));
      }
    } else {
      // case c: x > j and sqrt2^{c} >= j x
      d = std::max(d_prev + 1, 1);
      while (lr + d * log_half_A <= std::log(double(j))) ++d;
      const double lx = lr + d * log_half_A;
      const int c_min =
          static_cast<int>(std::ceil(2.0 * (std::log(double(j)) + lx) / kLn2 - 1e-12));
      c = std::max({c_prev + 1, j, c_min});
      while (0.5 * c * kLn2 < std::log(double(j)) + lx) ++c;
    }

    d_prev = d;
    c_prev = c;
    ea = as.macro(j, ea, log_mu_a, d, c, log_A);
  }
  BlockSequence seq = as.finish(params);

  if (params.family == Family::QACaseA) {
    const double q = 2.0 / A;
    for (const Checkpoint& cp : seq.checkpoints()) {
      const double lhs =
          std::exp(std::log(dbl(cp.a)) - cp.log_mu_a) * (std::pow(q, cp.d) - 1.0) / (q - 1.0);
      if (lhs < 1.0 - 1e-12)
        throw ConstructionError("case a: feasibility bound fails at j = " + std::to_string(cp.j),
                                cp.j, lhs, 1.0);
    }
  }
  return seq;
}

BlockSequence build_sequence(const ConstructionParams& params) {
  switch (params.family) {
    case Family::Gevrey:
      return build_gevrey(params.s, params.k_max);
    case Family::NQCounterexample:
      return build_nq_counterexample(params);
    default:
      return build_qa_sequence(params);
  }
}

}  // namespace growthlab
