#include "speclab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "speclab/special.hpp"

namespace speclab {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

double transition(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double transition_prime(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

// ---------------------------------------------------------------------------
// Fornberg finite-difference weights for the m-th derivative at z.
std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

// ---------------------------------------------------------------------------
// Filon-type quadrature: integral of s(x) cos(w x) with the envelope given by
// uniform samples (3g + 1 of them) and the oscillation integrated exactly per
// group of three cells through a cubic Lagrange interpolant.
struct FilonTable {
  double x0 = 0.0;
  double h = 0.0;
  std::vector<double> s;  // size 3g + 1
};

void filon_coefficients(double theta, double C[4], double S[4]) {
  // C_j = int_0^3 l_j(u) cos(theta u) du and the sine counterpart.
  static const double coef[4][4] = {{6.0 / 6, -11.0 / 6, 6.0 / 6, -1.0 / 6},
                                    {0.0, 6.0 / 2, -5.0 / 2, 1.0 / 2},
                                    {0.0, -3.0 / 2, 4.0 / 2, -1.0 / 2},
                                    {0.0, 2.0 / 6, -3.0 / 6, 1.0 / 6}};
  double Mc[4], Ms[4];
  if (std::abs(theta) < 0.4) {
    // Moment formulas cancel badly here; a fine Simpson rule on the smooth
    // integrand is exact to rounding and runs once per call.
    const int n = 300;
    const double du = 3.0 / n;
    for (int p = 0; p < 4; ++p) Mc[p] = Ms[p] = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double u = i * du;
      const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      double up = 1.0;
      const double cu = std::cos(theta * u), su = std::sin(theta * u);
      for (int p = 0; p < 4; ++p) {
        Mc[p] += wt * up * cu;
        Ms[p] += wt * up * su;
        up *= u;
      }
    }
    for (int p = 0; p < 4; ++p) {
      Mc[p] *= du / 3.0;
      Ms[p] *= du / 3.0;
    }
  } else {
    const double t1 = theta, t2 = theta * theta, t3 = t2 * theta, t4 = t2 * t2;
    const double S3 = std::sin(3.0 * theta), C3 = std::cos(3.0 * theta);
    Mc[0] = S3 / t1;
    Mc[1] = C3 / t2 + 3.0 * S3 / t1 - 1.0 / t2;
    Mc[2] = 6.0 * C3 / t2 + (9.0 / t1 - 2.0 / t3) * S3;
    Mc[3] = (27.0 / t2 - 6.0 / t4) * C3 + (27.0 / t1 - 18.0 / t3) * S3 + 6.0 / t4;
    Ms[0] = (1.0 - C3) / t1;
    Ms[1] = S3 / t2 - 3.0 * C3 / t1;
    Ms[2] = 6.0 * S3 / t2 - (9.0 / t1 - 2.0 / t3) * C3 - 2.0 / t3;
    Ms[3] = (27.0 / t2 - 6.0 / t4) * S3 - (27.0 / t1 - 18.0 / t3) * C3;
  }
  for (int j = 0; j < 4; ++j) {
    C[j] = S[j] = 0.0;
    for (int p = 0; p < 4; ++p) {
      C[j] += coef[j][p] * Mc[p];
      S[j] += coef[j][p] * Ms[p];
    }
  }
}

double filon_cos(const FilonTable& tab, double w) {
  const int groups = static_cast<int>((tab.s.size() - 1) / 3);
  double C[4], S[4];
  filon_coefficients(w * tab.h, C, S);
  double total = 0.0;
  for (int g = 0; g < groups; ++g) {
    const double xg = tab.x0 + 3.0 * g * tab.h;
    const double cg = std::cos(w * xg), sg = std::sin(w * xg);
    const double* sv = tab.s.data() + 3 * g;
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += sv[j] * (cg * C[j] - sg * S[j]);
    total += acc;
  }
  return total * tab.h;
}

FilonTable sample_envelope(const std::function<double(double)>& f, double x0, double x1,
                           double target_h) {
  FilonTable tab;
  const int cells = 3 * std::max(1, static_cast<int>(std::ceil((x1 - x0) / target_h / 3.0)));
  tab.x0 = x0;
  tab.h = (x1 - x0) / cells;
  tab.s.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) tab.s[i] = f(x0 + i * tab.h);
  return tab;
}

// Geometrically graded Simpson nodes on (t_lo, t_hi], resolving integrands
// that oscillate in log t.
struct QuadNodes {
  std::vector<double> t, w;
};

QuadNodes graded_octaves(double t_lo, double t_hi, int per_octave) {
  QuadNodes q;
  if (per_octave % 2) ++per_octave;
  double hi = t_hi;
  while (hi > t_lo * 1.0000001) {
    const double lo = std::max(t_lo, 0.5 * hi);
    const double step = (hi - lo) / per_octave;
    for (int i = 0; i <= per_octave; ++i) {
      const double wt = (i == 0 || i == per_octave) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      q.t.push_back(lo + i * step);
      q.w.push_back(wt * step / 3.0);
    }
    hi = lo;
  }
  return q;
}

double cos_minus_one(double x) {
  const double s = std::sin(0.5 * x);
  return -2.0 * s * s;
}

// Generic transform path: smoothly tapered cosine transform of the decaying
// part. Accurate away from t = 0; the window tail is part of its definition.
struct TaperedEnvelope {
  FilonTable tab;
  double Lambda = 0.0;
};

TaperedEnvelope numeric_transform_envelope(const Symbol& sym, int steps) {
  if (sym.decay_order < 2)
    throw config_error("fourier_transform: decaying part of '" + sym.name +
                       "' is not absolutely integrable; provide fhat_closed or decay_order >= 2");
  double Lambda = 4096.0;
  for (double probe = 16.0; probe <= 2048.0; probe *= 2.0) {
    double tail = 0.0;
    for (int i = 0; i <= 64; ++i)
      tail = std::max(tail, std::abs(sym.decaying(probe * (1.0 + i / 64.0))));
    if (tail <= 1e-12) {
      Lambda = 2.0 * probe;
      break;
    }
  }
  Lambda = std::min(Lambda, 4096.0);
  const double half = 0.5 * Lambda;
  auto env = [&](double lam) {
    const double g1 = transition((Lambda - lam) / half);
    const double g2 = transition((lam - half) / half);
    const double chi = lam <= half ? 1.0 : (lam >= Lambda ? 0.0 : g1 / (g1 + g2));
    return chi == 0.0 ? 0.0 : chi * sym.decaying(lam);
  };
  TaperedEnvelope te;
  te.Lambda = Lambda;
  te.tab = sample_envelope(env, 0.0, Lambda, Lambda / std::max(1000, steps));
  return te;
}

}  // namespace

// ---------------------------------------------------------------------------

double CutoffSpec::theta(double t) const {
  const double at = std::abs(t);
  if (at <= 0.5 * a) return 1.0;
  if (at >= a) return 0.0;
  const double g1 = transition((a - at) / (0.5 * a));
  const double g2 = transition((at - 0.5 * a) / (0.5 * a));
  return g1 / (g1 + g2);
}

double CutoffSpec::theta_prime(double t) const {
  const double at = std::abs(t);
  if (at <= 0.5 * a || at >= a) return 0.0;
  const double s = t >= 0.0 ? 1.0 : -1.0;
  const double u1 = (a - at) / (0.5 * a), u2 = (at - 0.5 * a) / (0.5 * a);
  const double g1 = transition(u1), g2 = transition(u2);
  const double d1 = transition_prime(u1) * (-s / (0.5 * a));
  const double d2 = transition_prime(u2) * (s / (0.5 * a));
  const double den = (g1 + g2) * (g1 + g2);
  return (d1 * g2 - g1 * d2) / den;
}

std::vector<Symbol> builtin_symbols() {
  std::vector<Symbol> out;

  {
    Symbol s;
    s.name = "one";
    s.c_inf = 1.0;
    s.decay_order = 8;
    s.eval = [](double) { return 1.0; };
    s.fhat_closed = [](double) { return 0.0; };
    out.push_back(std::move(s));
  }
  {
    Symbol s;
    s.name = "highpass";  // lambda^2 / (1 + lambda^2)
    s.c_inf = 1.0;
    s.decay_order = 2;
    s.eval = [](double lam) { return lam * lam / (1.0 + lam * lam); };
    s.fhat_closed = [](double t) { return -std::sqrt(0.5 * kPi) * std::exp(-std::abs(t)); };
    out.push_back(std::move(s));
  }
  for (double gamma : {0.5, 1.0}) {
    Symbol s;
    s.name = gamma == 0.5 ? "coslog-half" : "coslog-one";
    s.c_inf = 0.0;
    s.decay_order = 0;
    s.oscillatory_at_zero = true;
    s.eval = [gamma](double lam) { return std::cos(gamma * std::log1p(lam * lam)); };
    // cos transform of Re (1+lambda^2)^{i gamma}: the analytic continuation of
    // the (1+lambda^2)^{-nu} pair to nu = -i gamma, evaluated through the
    // Laplace representation of K.
    const std::complex<double> inv_gamma_fn =
        1.0 / gamma_complex(std::complex<double>(0.0, -gamma));
    s.fhat_closed = [gamma, inv_gamma_fn](double t) {
      t = std::abs(t);
      const std::complex<double> K = bessel_K(std::complex<double>(0.5, gamma), t);
      const double r = std::pow(0.5 * t, -0.5);
      const std::complex<double> phase = std::polar(r, -gamma * std::log(0.5 * t));
      const std::complex<double> val = std::sqrt(kPi) * inv_gamma_fn * phase * K;
      return kSqrt2OverPi * val.real();
    };
    out.push_back(std::move(s));
  }
  {
    Symbol s;
    s.name = "gauss";
    s.c_inf = 0.0;
    s.decay_order = 8;
    s.eval = [](double lam) { return std::exp(-lam * lam); };
    s.fhat_closed = [](double t) { return std::exp(-0.25 * t * t) / std::sqrt(2.0); };
    out.push_back(std::move(s));
  }
  {
    Symbol s;
    s.name = "invsqrt";  // (1 + lambda^2)^{-1/2}
    s.c_inf = 0.0;
    s.decay_order = 1;
    s.eval = [](double lam) { return 1.0 / std::sqrt(1.0 + lam * lam); };
    s.fhat_closed = [](double t) { return kSqrt2OverPi * bessel_K0(std::abs(t)); };
    out.push_back(std::move(s));
  }
  return out;
}

const Symbol& find_symbol(const std::vector<Symbol>& list, const std::string& name) {
  for (const auto& s : list)
    if (s.name == name) return s;
  throw config_error("unknown symbol '" + name + "'");
}

double fhat_value(const Symbol& sym, double t, int steps) {
  t = std::abs(t);
  if (sym.fhat_closed) return sym.fhat_closed(t);
  auto te = numeric_transform_envelope(sym, steps);
  return kSqrt2OverPi * filon_cos(te.tab, t);
}

SymbolTables fourier_transform(const Symbol& sym, double T, int steps, int samples_per_unit) {
  if (T < 8.0) throw config_error("fourier_transform: need T >= 8");
  if (samples_per_unit < 256) throw config_error("fourier_transform: sample density too low");

  SymbolTables tab;
  tab.source = sym;
  tab.T = T;
  const int n = 2 * static_cast<int>(std::lround(T * samples_per_unit));
  tab.dt = 2.0 * T / n;
  tab.t.resize(n);
  tab.fhat.resize(n);
  for (int j = 0; j < n; ++j) tab.t[j] = -T + (j + 0.5) * tab.dt;

  if (sym.fhat_closed) {
    for (int j = n / 2; j < n; ++j) {
      tab.fhat[j] = sym.fhat_closed(tab.t[j]);
      tab.fhat[n - 1 - j] = tab.fhat[j];  // even
    }
  } else {
    const auto te = numeric_transform_envelope(sym, steps);
    for (int j = n / 2; j < n; ++j) {
      tab.fhat[j] = kSqrt2OverPi * filon_cos(te.tab, tab.t[j]);
      tab.fhat[n - 1 - j] = tab.fhat[j];
    }
  }
  return tab;
}

void split(SymbolTables& tables, const CutoffSpec& cut) {
  if (tables.t.empty()) throw config_error("split: tables not populated");
  tables.cut = cut;
  const int n = static_cast<int>(tables.t.size());
  tables.fhat_sharp.resize(n);
  tables.fhat_flat.resize(n);
  for (int j = 0; j < n; ++j) {
    tables.fhat_sharp[j] = cut.theta(tables.t[j]) * tables.fhat[j];
    tables.fhat_flat[j] = tables.fhat[j] - tables.fhat_sharp[j];
  }
  tables.has_split = true;
}

namespace {

std::vector<double> ladder_level(const std::vector<double>& t, const std::vector<double>& prev,
                                 double dt, int level) {
  const int n = static_cast<int>(prev.size());
  std::vector<double> next(n);
  const double c = 2.0 * level - 2.0;
  for (int i = 0; i < n; ++i) {
    double d;
    if (i >= 2 && i + 2 < n) {
      d = (prev[i - 2] - 8.0 * prev[i - 1] + 8.0 * prev[i + 1] - prev[i + 2]) / (12.0 * dt);
    } else {
      // One-sided 4th-order stencil at the table edge; the values there are
      // far outside the cutoff support and identically zero.
      d = 0.0;
    }
    next[i] = -t[i] * d + c * prev[i];
  }
  return next;
}

std::vector<std::vector<double>> ladder(const std::vector<double>& t,
                                        const std::vector<double>& base, double dt, int k_max) {
  std::vector<std::vector<double>> psi(k_max + 1);
  psi[0] = base;
  for (int k = 1; k <= k_max; ++k) psi[k] = ladder_level(t, psi[k - 1], dt, k);
  return psi;
}

}  // namespace

void psi_ladder(SymbolTables& tables, int k_max) {
  if (!tables.has_split) throw config_error("psi_ladder: run split first");
  if (k_max < 0 || k_max > 4) throw config_error("psi_ladder: k_max must lie in 0..4");
  const double a = tables.cut.a;
  if (tables.dt > 2.0 * a / 8192.0 * 1.0000001)
    throw numeric_error("psi_ladder: table grid coarser than 2^13 points per cutoff window");

  tables.psi = ladder(tables.t, tables.fhat_sharp, tables.dt, k_max);

  // Refinement gate: rebuild on the 2*dt subsample and compare away from the
  // t = 0 collar, where uniform tables cannot certify derivatives.
  const int n = static_cast<int>(tables.t.size());
  std::vector<double> t2, base2;
  for (int i = 0; i < n; i += 2) {
    t2.push_back(tables.t[i]);
    base2.push_back(tables.fhat_sharp[i]);
  }
  const auto psi2 = ladder(t2, base2, 2.0 * tables.dt, k_max);
  for (int k = 1; k <= k_max; ++k) {
    double scale = 0.0;
    for (double v : tables.psi[k]) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) continue;
    double worst = 0.0;
    for (size_t m = 0; m < t2.size(); ++m) {
      const double at = std::abs(t2[m]);
      if (at < 0.03 * a || at > a) continue;
      worst = std::max(worst, std::abs(psi2[k][m] - tables.psi[k][2 * m]));
    }
    if (worst > 1e-5 * scale)
      throw numeric_error("psi_ladder: derivative refinement failed at level " +
                          std::to_string(k) + " (grid too coarse)");
  }
}

double psi_weighted_sup(const SymbolTables& tables, int k, double t_lo) {
  if (k >= static_cast<int>(tables.psi.size()))
    throw config_error("psi_weighted_sup: ladder level not built");
  double sup = 0.0;
  for (size_t i = 0; i < tables.t.size(); ++i) {
    const double at = std::abs(tables.t[i]);
    if (at < t_lo || at > tables.cut.a) continue;
    sup = std::max(sup, at * std::abs(tables.psi[k][i]));
  }
  return sup;
}

double bessel_J(int k, double lambda) { return bessel_J_normalized(k, lambda); }

double bessel_J_moment(int k, double lambda, int steps) {
  if (k < 1 || k > 4) throw config_error("bessel_J_moment: k must lie in 1..4");
  if (steps % 2) ++steps;
  auto moment = [&](double lam) {
    const double h = 1.0 / steps;
    double acc = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double s = i * h;
      const double wt = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += wt * std::pow(1.0 - s * s, k - 1) * std::cos(s * lam);
    }
    return acc * h / 3.0;
  };
  return bessel_J_normalized_zero(k) * moment(lambda) / moment(0.0);
}

// ---------------------------------------------------------------------------
// Scalar engines.

namespace {

struct SharpEngine {
  FilonTable uniform;          // theta * fhat on [t_g, a]
  QuadNodes graded;            // (t_min, t_g]
  std::vector<double> graded_env;
  double plain_uniform = 0.0;  // int of the uniform envelope (for anchoring)
  double anchor = 0.0;         // phi^#(0) - c_inf, set when anchored
  bool anchored = false;
  double c_inf = 0.0;
};

SharpEngine make_sharp_engine(const Symbol& sym, const CutoffSpec& cut, int quad_steps) {
  const double a = cut.a;
  const double t_g = 0.02 * a;
  SharpEngine eng;
  eng.c_inf = sym.c_inf;
  auto env = [&](double t) { return cut.theta(t) * fhat_value(sym, t); };
  eng.uniform = sample_envelope(env, t_g, a, (a - t_g) / std::max(32, quad_steps));
  eng.graded = graded_octaves(1e-12 * a, t_g, std::max(64, quad_steps / 64));
  eng.graded_env.resize(eng.graded.t.size());
  for (size_t i = 0; i < eng.graded.t.size(); ++i) eng.graded_env[i] = env(eng.graded.t[i]);
  eng.anchored = sym.oscillatory_at_zero;
  if (eng.anchored) {
    eng.plain_uniform = filon_cos(eng.uniform, 0.0);
    eng.anchor = (sym.eval(0.0) - sym.c_inf) - flat_symbol_value(sym, cut, 0.0);
  }
  return eng;
}

double sharp_engine_value(const SharpEngine& eng, double lambda) {
  lambda = std::abs(lambda);
  double acc;
  if (eng.anchored) {
    double g = 0.0;
    for (size_t i = 0; i < eng.graded.t.size(); ++i)
      g += eng.graded.w[i] * eng.graded_env[i] * cos_minus_one(eng.graded.t[i] * lambda);
    acc = eng.anchor + kSqrt2OverPi * (g + filon_cos(eng.uniform, lambda) - eng.plain_uniform);
  } else {
    double g = 0.0;
    for (size_t i = 0; i < eng.graded.t.size(); ++i)
      g += eng.graded.w[i] * eng.graded_env[i] * std::cos(eng.graded.t[i] * lambda);
    acc = kSqrt2OverPi * (g + filon_cos(eng.uniform, lambda));
  }
  return eng.c_inf + acc;
}

FilonTable make_flat_envelope(const Symbol& sym, const CutoffSpec& cut) {
  const double a = cut.a;
  const double T_flat = 40.0 * std::max(1.0, a);
  auto env = [&](double t) { return (1.0 - cut.theta(t)) * fhat_value(sym, t); };
  return sample_envelope(env, 0.5 * a, T_flat, 0.004);
}

}  // namespace

std::vector<double> flat_symbol_values(const Symbol& sym, const CutoffSpec& cut,
                                       const std::vector<double>& lambdas) {
  const FilonTable env = make_flat_envelope(sym, cut);
  std::vector<double> out(lambdas.size());
  for (size_t i = 0; i < lambdas.size(); ++i)
    out[i] = kSqrt2OverPi * filon_cos(env, std::abs(lambdas[i]));
  return out;
}

double flat_symbol_value(const Symbol& sym, const CutoffSpec& cut, double lambda) {
  return flat_symbol_values(sym, cut, {lambda})[0];
}

std::vector<double> sharp_symbol_values(const Symbol& sym, const CutoffSpec& cut,
                                        const std::vector<double>& lambdas, int quad_steps) {
  const SharpEngine eng = make_sharp_engine(sym, cut, quad_steps);
  std::vector<double> out(lambdas.size());
  for (size_t i = 0; i < lambdas.size(); ++i) out[i] = sharp_engine_value(eng, lambdas[i]);
  return out;
}

double sharp_symbol_value(const Symbol& sym, const CutoffSpec& cut, double lambda,
                          int quad_steps) {
  return sharp_symbol_values(sym, cut, {lambda}, quad_steps)[0];
}

double psi_value(const Symbol& sym, const CutoffSpec& cut, int k, double t) {
  if (k < 0 || k > 3) throw config_error("psi_value: k must lie in 0..3");
  t = std::abs(t);
  if (t >= cut.a) return 0.0;
  auto sharp_hat = [&](double tt) {
    const double th = cut.theta(tt);
    return th == 0.0 ? 0.0 : th * fhat_value(sym, tt);
  };
  if (k == 0) return sharp_hat(t);
  if (t <= 0.0) throw config_error("psi_value: t must be nonzero for k >= 1");

  // P_k(D) with D = d/du, u = log t:
  //   psi_1 = -D f, psi_2 = (D^2 - 2D) f, psi_3 = (-D^3 + 6D^2 - 8D) f.
  static const double comb[4][4] = {
      {1, 0, 0, 0}, {0, -1, 0, 0}, {0, -2, 1, 0}, {0, -8, 6, -1}};
  const double du = 0.004;
  const int half = 4;  // 9-point stencil
  std::vector<double> nodes(2 * half + 1), f(2 * half + 1);
  const double u0 = std::log(t);
  for (int i = -half; i <= half; ++i) {
    nodes[i + half] = i * du;
    f[i + half] = sharp_hat(std::exp(u0 + i * du));
  }
  double val = comb[k][0] * f[half];
  for (int m = 1; m <= k; ++m) {
    if (comb[k][m] == 0.0) continue;
    const auto w = fd_weights(0.0, nodes, m);
    double d = 0.0;
    for (int i = 0; i <= 2 * half; ++i) d += w[i] * f[i];
    val += comb[k][m] * d;
  }
  return val;
}

S01Certificate s01_certificate(const Symbol& sym, double lambda_max) {
  S01Certificate cert;
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    const double lam = lambda_max * i / n;
    const double h = 1e-3 * (1.0 + lam);
    const double f0 = sym.phi(lam);
    const double fp = sym.phi(lam + h), fm = sym.phi(lam - h);
    const double d1 = (fp - fm) / (2.0 * h);
    const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    cert.c0 = std::max(cert.c0, std::abs(f0));
    cert.c1 = std::max(cert.c1, (1.0 + lam) * std::abs(d1));
    cert.c2 = std::max(cert.c2, (1.0 + lam) * (1.0 + lam) * std::abs(d2));
  }
  return cert;
}

}  // namespace speclab
