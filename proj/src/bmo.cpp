#include "speclab/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace speclab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> radius_grid(const Geometry& g, double epsilon) {
  if (epsilon < 2.0 * g.h)
    throw config_error("bmo: epsilon below 2h, balls would be too small");
  std::vector<double> radii;
  for (int m = 2; m * g.h <= epsilon; ++m) radii.push_back(m * g.h);
  return radii;
}

Field smoothing_apply(const EigenSystem& es, const Field& f, double r, BmoVariant variant) {
  const Geometry& g = *es.geom;
  if (variant == BmoVariant::Heat) {
    const double t = r * r;
    std::vector<double> diag(es.n());
    for (int k = 0; k < es.n(); ++k) diag[k] = std::exp(-t * es.mu[k]);
    return es.project_apply(diag, f);
  }
  Field out(g.n(), 0.0);
  for (int i = 0; i < g.n(); ++i) {
    double vol = 0.0, acc = 0.0;
    for (int j = 0; j < g.n(); ++j) {
      if (g.dist(i, j) > r) continue;
      vol += g.w[j];
      acc += g.w[j] * f[j];
    }
    out[i] = acc / vol;
  }
  return out;
}

}  // namespace

double bmo_norm(const EigenSystem& es, const Field& f, const BmoConfig& cfg) {
  const Geometry& g = *es.geom;
  const auto radii = radius_grid(g, cfg.epsilon);
  double sup = 0.0;
  Field dev(g.n());
  for (double r : radii) {
    const Field Af = smoothing_apply(es, f, r, cfg.variant);
    for (int i = 0; i < g.n(); ++i) dev[i] = std::abs(f[i] - Af[i]);
    for (int y = 0; y < g.n(); ++y) {
      double vol = 0.0, acc = 0.0;
      for (int x = 0; x < g.n(); ++x) {
        if (g.dist(x, y) > r) continue;
        vol += g.w[x];
        acc += g.w[x] * dev[x];
      }
      sup = std::max(sup, acc / vol);
    }
  }
  return sup;
}

std::vector<BmoBallRow> bmo_report(const EigenSystem& es, const Field& f, const BmoConfig& cfg) {
  const Geometry& g = *es.geom;
  const auto radii = radius_grid(g, cfg.epsilon);
  std::vector<BmoBallRow> rows;
  Field dev(g.n());
  for (double r : radii) {
    const Field Af = smoothing_apply(es, f, r, cfg.variant);
    for (int i = 0; i < g.n(); ++i) dev[i] = std::abs(f[i] - Af[i]);
    for (int y = 0; y < g.n(); ++y) {
      double vol = 0.0, acc = 0.0;
      for (int x = 0; x < g.n(); ++x) {
        if (g.dist(x, y) > r) continue;
        vol += g.w[x];
        acc += g.w[x] * dev[x];
      }
      rows.push_back({y, r, acc / vol});
    }
  }
  return rows;
}

EpsilonIndependenceReport epsilon_independence_check(const EigenSystem& es,
                                                     const std::vector<Field>& corpus, double R,
                                                     BmoVariant variant, double c_check) {
  const Geometry& g = *es.geom;
  const double cap_hi = std::sqrt(2.0 * R), cap_lo = std::sqrt(R);
  if (cap_hi > 0.5 * g.diameter + 1e-12)
    throw config_error("epsilon_independence_check: sqrt(2R) exceeds half the diameter");
  EpsilonIndependenceReport rep;
  rep.c_check = c_check;
  rep.pass = true;
  BmoConfig lo{cap_lo, variant}, hi{cap_hi, variant};
  for (const auto& f : corpus) {
    const double nlo = bmo_norm(es, f, lo);
    const double nhi = bmo_norm(es, f, hi);
    double sup = 0.0;
    for (double v : f) sup = std::max(sup, std::abs(v));
    // Fields the smoothing reproduces (constants under Neumann) give 0/0 up
    // to rounding; pin the ratio to 1 there.
    const double floor = 1e-12 * sup;
    const double ratio = nlo <= floor && nhi <= floor ? 1.0 : nhi / nlo;
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.pass = rep.pass && ratio <= c_check && ratio >= 1.0 - 1e-12;
  }
  return rep;
}

std::vector<Field> bmo_corpus(const EigenSystem& es, int trials, unsigned seed) {
  const Geometry& g = *es.geom;
  const int n = g.n();
  std::vector<Field> corpus;
  std::mt19937 rng(seed);

  const int n_modes = std::min(8, n);
  for (int k = 1; k <= n_modes; ++k) {
    Field f(n);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) sup = std::max(sup, std::abs(es.vecs(i, k - 1)));
    for (int i = 0; i < n; ++i) f[i] = es.vecs(i, k - 1) / sup;
    corpus.push_back(std::move(f));
  }

  const int n_bumps = std::max(4, trials / 4);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_real_distribution<double> radius(4.0 * g.h, std::max(8.0 * g.h, 0.2 * g.diameter));
  for (int b = 0; b < n_bumps; ++b) {
    const int c = pick(rng);
    const double rad = radius(rng);
    Field f(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double d = g.dist(i, c);
      if (d < rad) f[i] = 0.5 * (1.0 + std::cos(kPi * d / rad));
    }
    corpus.push_back(std::move(f));
  }

  std::bernoulli_distribution sign(0.5);
  while (static_cast<int>(corpus.size()) < trials) {
    Field f(n);
    for (int i = 0; i < n; ++i) f[i] = sign(rng) ? 1.0 : -1.0;
    corpus.push_back(std::move(f));
  }
  return corpus;
}

LinfBmoEstimate linf_to_bmo_norm(const EigenSystem& es, const KernelMatrix& K,
                                 const BmoConfig& cfg, int trials, unsigned seed) {
  if (trials < 64) throw config_error("linf_to_bmo_norm: need at least 64 trials");
  const auto corpus = bmo_corpus(es, trials, seed);
  const int n_modes = std::min(8, es.n());
  const int n_bumps = std::max(4, trials / 4);
  LinfBmoEstimate est;
  for (size_t c = 0; c < corpus.size(); ++c) {
    double sup = 0.0;
    for (double v : corpus[c]) sup = std::max(sup, std::abs(v));
    const Field Kf = K.apply(corpus[c]);
    const double val = bmo_norm(es, Kf, cfg) / sup;
    est.value = std::max(est.value, val);
    if (static_cast<int>(c) < n_modes)
      est.eigenmodes = std::max(est.eigenmodes, val);
    else if (static_cast<int>(c) < n_modes + n_bumps)
      est.bumps = std::max(est.bumps, val);
    else
      est.rough = std::max(est.rough, val);
  }
  return est;
}

namespace {

double lp_field_norm(const std::vector<double>& w, const Field& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

std::vector<LpEntry> lp_norms(const KernelMatrix& K, const std::vector<double>& p_list,
                              int trials, unsigned seed, double p2_exact) {
  const auto& w = K.geom->w;
  const double n1 = operator_norm(K, NormType::L1);
  const double n2 = p2_exact >= 0.0 ? p2_exact : operator_norm(K, NormType::L2);
  const double ninf = operator_norm(K, NormType::Linf);

  // Corpus for intermediate-p lower bounds: random signs and heat-free bumps.
  std::mt19937 rng(seed);
  std::bernoulli_distribution sign(0.5);
  std::uniform_int_distribution<int> pick(0, K.n() - 1);
  std::vector<Field> corpus;
  for (int t = 0; t < trials; ++t) {
    Field f(K.n(), 0.0);
    if (t % 3 == 0) {
      f[pick(rng)] = 1.0;  // near-atomic
    } else {
      for (auto& v : f) v = sign(rng) ? 1.0 : -1.0;
    }
    corpus.push_back(std::move(f));
  }

  std::vector<LpEntry> out;
  for (double p : p_list) {
    LpEntry e;
    e.p = p;
    if (p == 1.0) {
      e.exact = true;
      e.lower = e.upper = n1;
    } else if (p == 2.0) {
      e.exact = true;
      e.lower = e.upper = n2;
    } else if (std::isinf(p)) {
      e.exact = true;
      e.lower = e.upper = ninf;
    } else if (p > 1.0 && p < 2.0) {
      const double theta = 2.0 / p - 1.0;  // 1/p = theta/1 + (1-theta)/2
      e.upper = std::pow(n1, theta) * std::pow(n2, 1.0 - theta);
    } else if (p > 2.0) {
      const double theta = 1.0 - 2.0 / p;  // 1/p = (1-theta)/2
      e.upper = std::pow(n2, 1.0 - theta) * std::pow(ninf, theta);
    } else {
      throw config_error("lp_norms: p must lie in [1, inf]");
    }
    if (!e.exact) {
      for (const auto& f : corpus) {
        const double nf = lp_field_norm(w, f, p);
        if (nf == 0.0) continue;
        e.lower = std::max(e.lower, lp_field_norm(w, K.apply(f), p) / nf);
      }
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace speclab
