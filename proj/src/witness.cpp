#include "gsq/witness.hpp"

#include <cmath>
#include <vector>

#include "gsq/errors.hpp"

namespace gsq::witness {

namespace {

// Plug-in moments with one optional deleted row, for jackknife loops.
struct PairMoments {
  double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
  long n = 0;
  void add(double u, double v) {
    su += u;
    sv += v;
    suu += u * u;
    svv += v * v;
    suv += u * v;
    ++n;
  }
  PairMoments without(double u, double v) const {
    PairMoments m = *this;
    m.su -= u;
    m.sv -= v;
    m.suu -= u * u;
    m.svv -= v * v;
    m.suv -= u * v;
    --m.n;
    return m;
  }
  double var_u() const { return suu / n - (su / n) * (su / n); }
  double var_v() const { return svv / n - (sv / n) * (sv / n); }
  double cov() const { return suv / n - (su / n) * (sv / n); }
  // Residual variance of v after regressing on u.
  double conditional() const {
    const double vu = var_u();
    if (vu <= 0) throw NumericalError("degenerate conditioning variable");
    return var_v() - cov() * cov() / vu;
  }
};

void check_sites(const Eigen::MatrixXd& cov_or_records, int half, int a,
                 int b) {
  (void)cov_or_records;
  if (a < 0 || b < 0 || a >= half || b >= half || a == b)
    throw InputError("need two distinct sites in range");
}

double quad_var(const gaussian::GaussianState& state,
                const Eigen::VectorXd& w) {
  return w.dot(state.cov * w);
}

Estimate jackknife(const std::vector<double>& leave_one_out, double full) {
  const long n = static_cast<long>(leave_one_out.size());
  if (n < 3) throw InputError("jackknife needs at least 3 trials");
  double mean = 0;
  for (double v : leave_one_out) mean += v;
  mean /= n;
  double acc = 0;
  for (double v : leave_one_out) acc += (v - mean) * (v - mean);
  Estimate e;
  e.value = full;
  e.se = std::sqrt(acc * (n - 1) / n);
  return e;
}

}  // namespace

double wineland(double zeta2, double contrast) {
  if (zeta2 <= 0) throw InputError("variance must be positive");
  if (contrast <= 0 || contrast > 1)
    throw InputError("contrast must lie in (0, 1]");
  return zeta2 / contrast;
}

double contrast_from_populations(double n_plus, double n_zero,
                                 double n_minus) {
  if (n_plus < 0 || n_zero < 0 || n_minus < 0)
    throw InputError("populations must be non-negative");
  const double total = n_plus + n_zero + n_minus;
  if (total <= 0) throw InputError("total population must be positive");
  return (n_zero - n_plus - n_minus) / total;
}

double zscore(const Estimate& e, double bound) {
  if (e.se <= 0) throw InputError("standard error must be positive");
  return (bound - e.value) / e.se;
}

double mancini_product(const gaussian::GaussianState& state, int a, int b) {
  const int m = state.modes();
  check_sites(state.cov, m, a, b);
  double best = -1;
  for (double s : {1.0, -1.0}) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * m);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * m);
    u(a) = 1 / std::sqrt(2.0);
    u(b) = s / std::sqrt(2.0);
    v(m + a) = 1 / std::sqrt(2.0);
    v(m + b) = -s / std::sqrt(2.0);
    const double w = quad_var(state, u) * quad_var(state, v);
    if (best < 0 || w < best) best = w;
  }
  return best;
}

double steering_product(const gaussian::GaussianState& state, int a, int b) {
  const int m = state.modes();
  check_sites(state.cov, m, a, b);
  const auto cond = [&](int ia, int ib) {
    const double vaa = state.cov(ia, ia);
    if (vaa <= 0) throw NumericalError("degenerate conditioning variable");
    return state.cov(ib, ib) - state.cov(ia, ib) * state.cov(ia, ib) / vaa;
  };
  return cond(a, b) * cond(m + a, m + b);
}

Estimate mancini_from_samples(const Eigen::MatrixXd& records, int a, int b,
                              double subtract) {
  if (records.cols() % 2 != 0) throw InputError("odd record column count");
  const int m = static_cast<int>(records.cols()) / 2;
  check_sites(records, m, a, b);
  const long n = records.rows();
  if (n < 3) throw InputError("need at least 3 trials");

  const double isq = 1 / std::sqrt(2.0);
  double best = -1;
  Estimate out;
  for (double s : {1.0, -1.0}) {
    PairMoments pm;
    std::vector<double> us(n), vs(n);
    for (long i = 0; i < n; ++i) {
      us[i] = isq * (records(i, a) + s * records(i, b));
      vs[i] = isq * (records(i, m + a) - s * records(i, m + b));
      pm.add(us[i], vs[i]);
    }
    const double full =
        (pm.var_u() - subtract) * (pm.var_v() - subtract);
    if (best >= 0 && full >= best) continue;
    best = full;
    std::vector<double> loo(n);
    for (long i = 0; i < n; ++i) {
      const PairMoments d = pm.without(us[i], vs[i]);
      loo[i] = (d.var_u() - subtract) * (d.var_v() - subtract);
    }
    out = jackknife(loo, full);
  }
  return out;
}

Estimate steering_from_samples(const Eigen::MatrixXd& records, int a, int b,
                               double subtract) {
  if (records.cols() % 2 != 0) throw InputError("odd record column count");
  const int m = static_cast<int>(records.cols()) / 2;
  check_sites(records, m, a, b);
  const long n = records.rows();
  if (n < 3) throw InputError("need at least 3 trials");

  PairMoments px, pp;
  for (long i = 0; i < n; ++i) {
    px.add(records(i, a), records(i, b));
    pp.add(records(i, m + a), records(i, m + b));
  }
  const double full =
      (px.conditional() - subtract) * (pp.conditional() - subtract);
  std::vector<double> loo(n);
  for (long i = 0; i < n; ++i) {
    const PairMoments dx = px.without(records(i, a), records(i, b));
    const PairMoments dp =
        pp.without(records(i, m + a), records(i, m + b));
    loo[i] = (dx.conditional() - subtract) * (dp.conditional() - subtract);
  }
  return jackknife(loo, full);
}

Eigen::VectorXd nullifier_variances(const gaussian::GaussianState& state,
                                    const graphc::GraphSpec& g,
                                    bool normalized) {
  const int m = state.modes();
  if (g.size() != m) throw InputError("graph and state sizes disagree");
  Eigen::VectorXd out(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * m);
    w(m + i) = 1;
    for (int j = 0; j < m; ++j) w(j) = -g.adjacency(i, j);
    const double var = quad_var(state, w);
    const double norm = 1 + g.adjacency.col(i).squaredNorm();
    out(i) = normalized ? var / norm : var;
  }
  return out;
}

double mean_nullifier(const gaussian::GaussianState& state,
                      const graphc::GraphSpec& g) {
  return nullifier_variances(state, g).mean();
}

Estimate mean_nullifier_from_samples(const Eigen::MatrixXd& records,
                                     const graphc::GraphSpec& g,
                                     double subtract) {
  if (records.cols() != 2 * g.size())
    throw InputError("records and graph sizes disagree");
  const int m = g.size();
  const long n = records.rows();
  if (n < 3) throw InputError("need at least 3 trials");

  // Per-trial nullifier values; the statistic is a mean of per-site
  // plug-in variances, so delete-1 updates stay O(1).
  Eigen::MatrixXd nv(n, m);
  Eigen::VectorXd norms(m);
  for (int i = 0; i < m; ++i)
    norms(i) = 1 + g.adjacency.col(i).squaredNorm();
  for (long t = 0; t < n; ++t)
    for (int i = 0; i < m; ++i) {
      double acc = records(t, m + i);
      for (int j = 0; j < m; ++j)
        acc -= g.adjacency(i, j) * records(t, j);
      nv(t, i) = acc;
    }

  Eigen::VectorXd s1 = nv.colwise().sum();
  Eigen::VectorXd s2 = nv.array().square().colwise().sum();
  const auto stat = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        long cnt) {
    double acc = 0;
    for (int i = 0; i < m; ++i) {
      const double mean = a(i) / cnt;
      acc += (b(i) / cnt - mean * mean - subtract) / norms(i);
    }
    return acc / m;
  };
  const double full = stat(s1, s2, n);
  std::vector<double> loo(n);
  for (long t = 0; t < n; ++t) {
    Eigen::VectorXd d1 = s1 - nv.row(t).transpose();
    Eigen::VectorXd d2 =
        s2 - nv.row(t).array().square().matrix().transpose();
    loo[t] = stat(d1, d2, n - 1);
  }
  return jackknife(loo, full);
}

Eigen::VectorXd phase_space_areas(const gaussian::GaussianState& state,
                                  const Eigen::MatrixXd& basis) {
  const auto report = graphc::mode_report(state, basis);
  Eigen::VectorXd out(static_cast<int>(report.size()));
  for (size_t k = 0; k < report.size(); ++k)
    out(static_cast<int>(k)) =
        std::sqrt(report[k].zeta2_min * report[k].zeta2_max);
  return out;
}

}  // namespace gsq::witness
