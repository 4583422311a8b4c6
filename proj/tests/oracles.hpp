#pragma once

// Brute-force reference implementations. They materialize mu index by index
// straight from the defining recursions and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

struct Naive {
  std::vector<long double> log_mu;  // log_mu[0] = 0
  std::vector<std::int64_t> a, b;   // a[j-1], b[j-1]
  std::vector<int> d;
};

// Smallest strictly increasing d_j with (2/A)^{d_j} <= 2^{-(j/2+1)}.
inline std::vector<int> nq_d_rule(double A, int j_max) {
  std::vector<int> out;
  int prev = 0;
  for (int j = 1; j <= j_max; ++j) {
    int d = prev + 1;
    while (std::pow(2.0L / A, d) > std::pow(2.0L, -(j / 2.0L + 1.0L)) * (1 + 1e-15L)) ++d;
    out.push_back(d);
    prev = d;
  }
  return out;
}

// Index-by-index recursion for the macro-block scheme: mu_k = A mu_{2^i a}
// on (2^i a, 2^{i+1} a], then mu_k = sqrt2^{1/(2^i b)} mu_{k-1} on
// (2^i b, 2^{i+1} b]. Stops once k would pass `limit`.
inline Naive macro_recursion(long double log_mu1, double A, const std::vector<int>& d,
                             const std::vector<int>& c, std::int64_t limit) {
  Naive n;
  n.d = d;
  n.log_mu = {0.0L, log_mu1};
  const long double lA = std::log((long double)A);
  const long double half_ln2 = 0.5L * std::log(2.0L);
  std::int64_t a = 1;
  for (std::size_t j = 0; j < d.size(); ++j) {
    n.a.push_back(a);
    std::int64_t lo = a;
    for (int i = 0; i < d[j]; ++i) {
      const std::int64_t hi = 2 * lo;
      if (hi > limit) return n;
      const long double v = n.log_mu[lo] + lA;
      for (std::int64_t k = lo + 1; k <= hi; ++k) n.log_mu.push_back(v);
      lo = hi;
    }
    const std::int64_t b = lo;
    n.b.push_back(b);
    for (int i = 0; i < c[j]; ++i) {
      const std::int64_t hi = 2 * lo;
      if (hi > limit) return n;
      const long double step = half_ln2 / (long double)lo;
      for (std::int64_t k = lo + 1; k <= hi; ++k) n.log_mu.push_back(n.log_mu[k - 1] + step);
      lo = hi;
    }
    a = lo;
  }
  return n;
}

inline Naive nq(double A, int j_max, std::int64_t limit = std::int64_t{1} << 22) {
  std::vector<int> c;
  for (int j = 1; j <= j_max; ++j) c.push_back(j);
  return macro_recursion(std::log(2.0L), A, nq_d_rule(A, j_max), c, limit);
}

inline std::vector<long double> gevrey(double s, std::int64_t k_max) {
  std::vector<long double> lm(k_max + 1, 0.0L);
  for (std::int64_t k = 1; k <= k_max; ++k) lm[k] = s * std::log((long double)k);
  return lm;
}

// log M_j for j = 0..n-1.
inline std::vector<long double> log_M(const std::vector<long double>& log_mu) {
  std::vector<long double> out(log_mu.size(), 0.0L);
  for (std::size_t k = 1; k < log_mu.size(); ++k) out[k] = out[k - 1] + log_mu[k];
  return out;
}

// sup_{0<=j<=J} (j x - log M_j)
inline long double omega_sup(const std::vector<long double>& logM, long double x, std::size_t J) {
  long double best = 0.0L;
  J = std::min(J, logM.size() - 1);
  for (std::size_t j = 1; j <= J; ++j) best = std::max(best, j * x - logM[j]);
  return best;
}

inline long double recip_sum(const std::vector<long double>& log_mu, std::size_t lo, std::size_t hi) {
  long double s = 0.0L;
  for (std::size_t k = lo; k <= hi; ++k) s += std::exp(-log_mu[k]);
  return s;
}

}  // namespace oracle
