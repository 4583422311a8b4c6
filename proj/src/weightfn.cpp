#include "growthlab/weightfn.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "growthlab/errors.hpp"
#include "util.hpp"

namespace growthlab {

using detail::kInf;
using detail::num;

namespace detail {

class WeightImpl {
 public:
  virtual ~WeightImpl() = default;
  virtual double at_log(double x) const = 0;
  /// omega(t) for t > 0; overridden where a direct formula avoids the
  /// rounding of exp(log t).
  virtual double at_plain(double t) const { return at_log(std::log(t)); }
  virtual double at_zero() const = 0;
  virtual WeightKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual bool normalized() const { return false; }
  virtual double log_domain_max() const { return kInf; }
  virtual const BlockSequence* sequence() const { return nullptr; }
};

}  // namespace detail

namespace {

class PowerImpl final : public detail::WeightImpl {
 public:
  explicit PowerImpl(double s) : s_(s) {}
  double at_log(double x) const override { return std::exp(x / s_); }
  double at_plain(double t) const override { return s_ == 1.0 ? t : std::pow(t, 1.0 / s_); }
  double at_zero() const override { return 0.0; }
  WeightKind kind() const override { return WeightKind::PowerWeight; }
  std::string describe() const override { return "power:" + num(s_, 17); }

 private:
  double s_;
};

class LogPowerImpl final : public detail::WeightImpl {
 public:
  explicit LogPowerImpl(double s) : s_(s) {}
  double at_log(double x) const override { return x <= 0.0 ? 0.0 : std::pow(x, s_); }
  double at_zero() const override { return 0.0; }
  WeightKind kind() const override { return WeightKind::LogPower; }
  std::string describe() const override { return "logpow:" + num(s_, 17); }
  bool normalized() const override { return true; }

 private:
  double s_;
};

class ExpLogSquareImpl final : public detail::WeightImpl {
 public:
  double at_log(double x) const override { return x < 0.0 ? 0.0 : std::exp(x * x); }
  double at_zero() const override { return 0.0; }
  WeightKind kind() const override { return WeightKind::ExpLogSquare; }
  std::string describe() const override { return "explogsq"; }
};

class AssociatedImpl final : public detail::WeightImpl {
 public:
  explicit AssociatedImpl(BlockSequence seq) : seq_(std::move(seq)) {
    domain_ = seq_.empty() ? 0.0 : seq_.log_mu(seq_.k_max());
  }
  double at_log(double x) const override { return x <= 0.0 ? 0.0 : seq_.deficit_sum(x); }
  double at_zero() const override { return 0.0; }
  WeightKind kind() const override { return WeightKind::Associated; }
  std::string describe() const override {
    const auto& p = seq_.params();
    std::string d = "assoc(" + std::string(family_name(p.family));
    if (p.family == Family::Gevrey)
      d += ",s=" + num(p.s) + ",kmax=" + index_to_string(p.k_max);
    else
      d += ",A=" + num(p.A) + ",jmax=" + std::to_string(p.j_max);
    return d + ")";
  }
  bool normalized() const override { return true; }
  double log_domain_max() const override { return domain_; }
  const BlockSequence* sequence() const override { return &seq_; }

 private:
  BlockSequence seq_;
  double domain_ = 0.0;
};

class PowerComposedImpl final : public detail::WeightImpl {
 public:
  PowerComposedImpl(WeightFn base, double a) : base_(std::move(base)), a_(a) {}
  double at_log(double x) const override { return base_.at_log(x / a_); }
  double at_zero() const override { return base_(0.0); }
  WeightKind kind() const override { return WeightKind::PowerComposed; }
  std::string describe() const override {
    return "powcomp(" + base_.describe() + "," + num(a_, 17) + ")";
  }
  bool normalized() const override { return base_.normalized(); }
  double log_domain_max() const override { return a_ * base_.log_domain_max(); }
  const BlockSequence* sequence() const override { return nullptr; }

 private:
  WeightFn base_;
  double a_;
};

class ScaledImpl final : public detail::WeightImpl {
 public:
  ScaledImpl(WeightFn base, double c, double d) : base_(std::move(base)), c_(c), d_(d) {}
  double at_log(double x) const override { return c_ * base_.at_log(x) + d_; }
  double at_zero() const override { return c_ * base_(0.0) + d_; }
  WeightKind kind() const override { return WeightKind::Scaled; }
  std::string describe() const override {
    return "scaled(" + base_.describe() + "," + num(c_, 17) + "," + num(d_, 17) + ")";
  }
  bool normalized() const override { return d_ == 0.0 && base_.normalized(); }
  double log_domain_max() const override { return base_.log_domain_max(); }

 private:
  WeightFn base_;
  double c_, d_;
};

class KappaImpl final : public detail::WeightImpl {
 public:
  KappaImpl(WeightFn base, QuadratureParams q) : base_(std::move(base)), q_(q) {}
  double at_log(double x) const override { return kappa_at_log(base_, x, q_).value; }
  double at_zero() const override { return base_(0.0); }
  WeightKind kind() const override { return WeightKind::Kappa; }
  std::string describe() const override { return "kappa(" + base_.describe() + ")"; }
  double log_domain_max() const override { return base_.log_domain_max(); }

 private:
  WeightFn base_;
  QuadratureParams q_;
};

class CustomImpl final : public detail::WeightImpl {
 public:
  CustomImpl(std::string name, std::function<double(double)> fn, double v0)
      : name_(std::move(name)), fn_(std::move(fn)), v0_(v0) {}
  double at_log(double x) const override { return fn_(x); }
  double at_zero() const override { return v0_; }
  WeightKind kind() const override { return WeightKind::Custom; }
  std::string describe() const override { return name_; }

 private:
  std::string name_;
  std::function<double(double)> fn_;
  double v0_;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive");
}

}  // namespace

double WeightFn::operator()(double t) const {
  if (!(t >= 0.0)) throw ParameterError("weight argument must be >= 0");
  if (t > 1e300) throw DomainError("plain-domain argument above 1e300; use at_log");
  if (t == 0.0) return impl_->at_zero();
  if (std::log(t) > impl_->log_domain_max()) return at_log(std::log(t));  // throws
  return impl_->at_plain(t);
}

double WeightFn::at_log(double x) const {
  if (std::isnan(x)) throw ParameterError("log-argument is NaN");
  if (x == -kInf) return impl_->at_zero();
  if (x > impl_->log_domain_max())
    throw DomainError("log-argument " + num(x) + " beyond representable range " +
                      num(impl_->log_domain_max()) + " of " + impl_->describe());
  return impl_->at_log(x);
}

WeightKind WeightFn::kind() const { return impl_->kind(); }
std::string WeightFn::describe() const { return impl_->describe(); }
bool WeightFn::normalized() const { return impl_->normalized(); }
double WeightFn::log_domain_max() const { return impl_->log_domain_max(); }
const BlockSequence* WeightFn::sequence() const { return impl_->sequence(); }

WeightFn power_weight(double s) {
  require_positive(s, "power weight exponent s");
  return WeightFn(std::make_shared<PowerImpl>(s));
}

WeightFn log_power(double s) {
  if (!(s > 1.0) || !std::isfinite(s)) throw ParameterError("log power exponent s must exceed 1");
  return WeightFn(std::make_shared<LogPowerImpl>(s));
}

WeightFn exp_log_square() { return WeightFn(std::make_shared<ExpLogSquareImpl>()); }

WeightFn associated(BlockSequence seq) {
  if (auto k = seq.log_convexity_violation())
    throw DomainError("sequence is not log-convex and normalized at index " + index_to_string(*k));
  return WeightFn(std::make_shared<AssociatedImpl>(std::move(seq)));
}

WeightFn power_compose(const WeightFn& w, double a) {
  require_positive(a, "composition exponent a");
  return WeightFn(std::make_shared<PowerComposedImpl>(w, a));
}

WeightFn scaled(const WeightFn& w, double c, double d) {
  require_positive(c, "scale c");
  if (!(d >= 0.0) || !std::isfinite(d)) throw ParameterError("offset d must be >= 0");
  return WeightFn(std::make_shared<ScaledImpl>(w, c, d));
}

WeightFn kappa_transform(const WeightFn& w, const QuadratureParams& q) {
  if (!(q.piece_length > 0.0) || !(q.piece_rel_tol > 0.0) || !(q.tail_rel_tol > 0.0) ||
      q.min_pieces < 3 || q.max_pieces < q.min_pieces || q.divergence_run < 2)
    throw ParameterError("invalid quadrature parameters");
  kappa_at_log(w, 0.0, q);
  return WeightFn(std::make_shared<KappaImpl>(w, q));
}

WeightFn custom_weight(std::string name, std::function<double(double)> at_log,
                       double value_at_zero) {
  if (!at_log) throw ParameterError("custom weight needs an evaluator");
  return WeightFn(std::make_shared<CustomImpl>(std::move(name), std::move(at_log), value_at_zero));
}

KappaResult kappa_at_log(const WeightFn& w, double log_y, const QuadratureParams& q) {
  using boost::math::quadrature::gauss_kronrod;
  if (log_y == -kInf) return KappaResult{w(0.0), 0.0, 0, 0.0};
  auto integrand = [&](double u) { return w.at_log(log_y + u) * std::exp(-u); };

  KappaResult r;
  double prev = 0.0;
  double ratios[3] = {kInf, kInf, kInf};
  int n_ratios = 0;
  int run = 0;
  for (int m = 0; m < q.max_pieces; ++m) {
    const double a = m * q.piece_length, b = a + q.piece_length;
    double err = 0.0;
    const double p = gauss_kronrod<double, 31>::integrate(integrand, a, b, 12, q.piece_rel_tol, &err);
    if (!std::isfinite(p))
      throw DivergenceError("kappa integrand overflows at u = " + num(b) + " for " + w.describe(), kInf);
    r.value += p;
    r.pieces = m + 1;
    if (prev > 0.0) {
      const double rho = p / prev;
      r.last_ratio = rho;
      ratios[n_ratios % 3] = rho;
      ++n_ratios;
      run = rho >= q.divergence_ratio ? run + 1 : 0;
      if (run >= q.divergence_run)
        throw DivergenceError("kappa integral of " + w.describe() +
                                  " diverges: pieces stop decaying (ratio " + num(rho) + ")",
                              rho);
      if (r.pieces >= q.min_pieces && n_ratios >= 3) {
        const double worst = std::max({ratios[0], ratios[1], ratios[2]});
        if (worst < 1.0) {
          const double rem = p * worst / (1.0 - worst);
          if (rem <= q.tail_rel_tol * r.value) {
            r.remainder = rem;
            r.value += rem;
            return r;
          }
        }
      }
    }
    prev = p;
  }
  throw QuadratureError("kappa quadrature for " + w.describe() + " did not converge within " +
                        std::to_string(q.max_pieces) + " pieces");
}

namespace {

struct RatioTrack {
  SubWindowAccumulator acc;
  std::size_t skipped = 0;
};

Verdict dominance_verdict(std::string condition, const Window& w, const RatioTrack& tr) {
  Verdict v;
  v.condition = std::move(condition);
  v.window = w;
  const auto& st = tr.acc.stats();
  if (tr.skipped > 0)
    v.diagnostics.push_back(std::to_string(tr.skipped) + " samples skipped (zero denominator)");
  if (!st.complete()) {
    v.diagnostics.push_back("a sub-window has no usable samples");
    return v;
  }
  for (int i = 0; i < 3; ++i) v.statistics["max_ratio_" + std::to_string(i)] = st.max[i];
  switch (classify_growth(st.max)) {
    case Trend::Bounded:
      v.state = State::Holds;
      break;
    case Trend::Diverging:
      v.state = State::Fails;
      v.witness["log_t"] = st.arg_max[2];
      v.witness["ratio"] = st.max[2];
      break;
    case Trend::Unclear:
      v.diagnostics.push_back("ratio trend is not monotone over the sub-windows");
      break;
  }
  return v;
}

}  // namespace

ComparisonReport compare(const WeightFn& sigma, const WeightFn& tau, const Window& w) {
  if (w.log_t_min < 0.0) throw ParameterError("comparison window needs t_min >= 1");
  if (!w.valid_for_asymptotics() || w.samples < 64)
    throw ParameterError("comparison window needs >= 3 decades and >= 64 samples");

  RatioTrack fwd{SubWindowAccumulator(w)}, inv{SubWindowAccumulator(w)};
  const Window tail = w.sub_window(2);
  double lo = kInf, hi = -kInf;
  for (double x : w.log_grid()) {
    const double s = sigma.at_log(x), t = tau.at_log(x);
    if (s > 0.0) {
      const double r = t / s;
      if (!std::isnan(r)) {
        fwd.acc.add(x, r);
        if (x >= tail.log_t_min) {
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
      }
    } else if (t > 0.0) {
      ++fwd.skipped;
    }
    if (t > 0.0) {
      const double r = s / t;
      if (!std::isnan(r)) inv.acc.add(x, r);
    } else if (s > 0.0) {
      ++inv.skipped;
    }
  }

  ComparisonReport rep;
  rep.ratio_inf = lo == kInf ? std::numeric_limits<double>::quiet_NaN() : lo;
  rep.ratio_sup = hi == -kInf ? std::numeric_limits<double>::quiet_NaN() : hi;
  rep.sigma_dominates = dominance_verdict("tau=O(sigma)", w, fwd);
  rep.tau_dominates = dominance_verdict("sigma=O(tau)", w, inv);

  Verdict& eq = rep.equivalence;
  eq.condition = "equivalence";
  eq.window = w;
  eq.statistics["ratio_inf"] = rep.ratio_inf;
  eq.statistics["ratio_sup"] = rep.ratio_sup;
  if (rep.sigma_dominates.fails() || rep.tau_dominates.fails()) {
    const Verdict& f = rep.sigma_dominates.fails() ? rep.sigma_dominates : rep.tau_dominates;
    eq.state = State::Fails;
    eq.witness = f.witness;
    eq.diagnostics.push_back(f.condition + " fails");
  } else if (rep.sigma_dominates.holds() && rep.tau_dominates.holds()) {
    eq.state = State::Holds;
  } else {
    eq.diagnostics.push_back("one direction is inconclusive");
  }
  return rep;
}

std::vector<std::pair<double, double>> sample_weight(const WeightFn& w, const Window& win) {
  std::vector<std::pair<double, double>> out;
  for (double x : win.log_grid()) out.emplace_back(std::exp(x), w.at_log(x));
  return out;
}

}  // namespace growthlab
