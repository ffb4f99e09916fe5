#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq(double x) { return x * x; }

double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
  return std::sqrt(s);
}

double total(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Points l + i (u - l) / n, i = 0..n, with n chosen from the step.
Vec axis(double lo, double hi, double step) {
  if (hi <= lo) return {lo};
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
  Vec out;
  for (int i = 0; i <= n; ++i) out.push_back(lo + (hi - lo) * i / n);
  return out;
}

}  // namespace

Vec qp_project(const Set& s, const Vec& v) {
  const std::size_t T = v.size();
  if (T > 6) throw std::invalid_argument("qp_project: T <= 6 only");
  std::size_t patterns = 1;
  for (std::size_t t = 0; t < T; ++t) patterns *= 3;
  const double tol = 1e-12 * (1.0 + total(s.upper));
  Vec best;
  double best_d = kInf;
  for (std::size_t code = 0; code < patterns; ++code) {
    Vec x(T);
    std::vector<int> pat(T);
    std::size_t c = code;
    double fixed_sum = 0.0, free_v = 0.0;
    int m = 0;
    for (std::size_t t = 0; t < T; ++t) {
      pat[t] = static_cast<int>(c % 3);
      c /= 3;
      if (pat[t] == 0) x[t] = s.lower[t];
      if (pat[t] == 1) x[t] = s.upper[t];
      if (pat[t] == 2) {
        free_v += v[t];
        ++m;
      } else {
        fixed_sum += x[t];
      }
    }
    double mu = 0.0;
    if (s.energy && m > 0) mu = (free_v - (*s.energy - fixed_sum)) / m;
    bool ok = true;
    for (std::size_t t = 0; t < T && ok; ++t) {
      if (pat[t] == 2) x[t] = v[t] - mu;
      ok = x[t] >= s.lower[t] - tol && x[t] <= s.upper[t] + tol;
    }
    if (ok && s.energy && std::abs(total(x) - *s.energy) > 1e-9 * (1.0 + std::abs(*s.energy))) ok = false;
    if (!ok) continue;
    const double d = dist(x, v);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  if (best.empty()) throw std::invalid_argument("qp_project: empty set");
  return best;
}

std::vector<Vec> vertices(const Set& s) {
  const std::size_t T = s.lower.size();
  std::vector<Vec> out;
  if (!s.energy) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << T); ++mask) {
      Vec x(T);
      for (std::size_t t = 0; t < T; ++t) x[t] = (mask >> t) & 1 ? s.upper[t] : s.lower[t];
      out.push_back(x);
    }
    return out;
  }
  const double tol = 1e-12 * (1.0 + std::abs(*s.energy));
  for (std::size_t f = 0; f < T; ++f) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << (T - 1)); ++mask) {
      Vec x(T);
      double sum = 0.0;
      std::size_t bit = 0;
      for (std::size_t t = 0; t < T; ++t) {
        if (t == f) continue;
        x[t] = (mask >> bit++) & 1 ? s.upper[t] : s.lower[t];
        sum += x[t];
      }
      x[f] = *s.energy - sum;
      if (x[f] >= s.lower[f] - tol && x[f] <= s.upper[f] + tol) {
        x[f] = std::clamp(x[f], s.lower[f], s.upper[f]);
        out.push_back(x);
      }
    }
  }
  return out;
}

double support_by_vertices(const Set& s, const Vec& d) {
  double best = -kInf;
  for (const Vec& x : vertices(s)) {
    double v = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) v += d[t] * x[t];
    best = std::max(best, v);
  }
  return best;
}

double max_norm_by_vertices(const Set& s) {
  double best = 0.0;
  for (const Vec& x : vertices(s)) best = std::max(best, dist(x, Vec(x.size(), 0.0)));
  return best;
}

std::vector<Vec> grid_points(const Set& s, double step) {
  const std::size_t T = s.lower.size();
  if (T < 1 || T > 3) throw std::invalid_argument("grid_points: 1 <= T <= 3");
  const std::size_t free_dims = s.energy ? T - 1 : T;
  std::vector<Vec> out;
  std::vector<Vec> axes;
  for (std::size_t t = 0; t < free_dims; ++t) axes.push_back(axis(s.lower[t], s.upper[t], step));
  std::vector<std::size_t> idx(free_dims, 0);
  const double tol = 1e-12 * (1.0 + total(s.upper));
  while (true) {
    Vec x(T, 0.0);
    double sum = 0.0;
    for (std::size_t t = 0; t < free_dims; ++t) {
      x[t] = axes[t][idx[t]];
      sum += x[t];
    }
    bool ok = true;
    if (s.energy) {
      x[T - 1] = *s.energy - sum;
      ok = x[T - 1] >= s.lower[T - 1] - tol && x[T - 1] <= s.upper[T - 1] + tol;
    }
    if (ok) out.push_back(x);
    std::size_t d = 0;
    while (d < free_dims && ++idx[d] == axes[d].size()) idx[d++] = 0;
    if (d == free_dims) break;
  }
  return out;
}

std::vector<Vec> boundary_points(const Set& s, double step) {
  const std::size_t T = s.lower.size();
  if (!s.energy || T < 2 || T > 3) throw std::invalid_argument("boundary_points: budgeted sets with T in {2,3}");
  if (T == 2) return vertices(s);
  std::vector<Vec> out;
  const double E = *s.energy;
  for (std::size_t t = 0; t < 3; ++t) {
    const std::size_t i = (t + 1) % 3, j = (t + 2) % 3;
    for (double b : {s.lower[t], s.upper[t]}) {
      const double rest = E - b;
      const double lo = std::max(s.lower[i], rest - s.upper[j]);
      const double hi = std::min(s.upper[i], rest - s.lower[j]);
      if (lo > hi) continue;
      for (double xi : axis(lo, hi, step)) {
        Vec x(3);
        x[t] = b;
        x[i] = xi;
        x[j] = rest - xi;
        out.push_back(x);
      }
    }
  }
  return out;
}

double hausdorff_points(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  auto directed = [](const std::vector<Vec>& p, const std::vector<Vec>& q) {
    double worst = 0.0;
    for (const Vec& x : p) {
      double best = kInf;
      for (const Vec& y : q) best = std::min(best, dist(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double inradius_grid(const Set& s, double step) {
  const auto inner = grid_points(s, step);
  const auto edge = boundary_points(s, step / 4.0);
  double best = 0.0;
  for (const Vec& x : inner) {
    double d = kInf;
    for (const Vec& y : edge) d = std::min(d, dist(x, y));
    best = std::max(best, d);
  }
  return best;
}

double Price::value(double x) const {
  std::size_t k = 0;
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (x >= pieces[i][0]) k = i;
  return pieces[k][1] + pieces[k][2] * x;
}

double Price::right_slope(double x) const {
  std::size_t k = 0;
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (x >= pieces[i][0]) k = i;
  return pieces[k][2];
}

namespace {

struct TinyModel {
  const TinyGame& g;
  bool nash;
  Vec w, scale;

  TinyModel(const TinyGame& game, bool nash_) : g(game), nash(nash_) {
    const std::size_t N = g.players.size();
    w = g.weights.empty() ? Vec(N, 1.0) : g.weights;
    const double W = total(w);
    for (std::size_t n = 0; n < N; ++n) scale.push_back(g.sum ? w[n] : w[n] / W);
  }

  double load(const Vec& x) const {
    double X = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) X += scale[n] * x[n];
    return X;
  }

  bool feasible(const Vec& x) const {
    return !g.coupling_coef || *g.coupling_coef * load(x) <= g.coupling_rhs + 1e-12;
  }

  Vec op(const Vec& x) const {
    const double X = load(x);
    Vec F(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
      const auto& p = g.players[n];
      F[n] = g.price.value(X) + 2.0 * p.omega * (x[n] - p.preferred);
      if (nash) F[n] += scale[n] * x[n] * g.price.right_slope(X);
    }
    return F;
  }

  // argmin sum w_n (z_n - v_n)^2 over the box and the coupling row, through
  // bisection on the multiplier of the coupling row.
  Vec project(const Vec& v) const {
    auto at = [&](double nu) {
      Vec z(v.size());
      for (std::size_t n = 0; n < v.size(); ++n) {
        const double a = g.coupling_coef ? *g.coupling_coef * scale[n] : 0.0;
        z[n] = std::clamp(v[n] - nu * a / w[n], g.players[n].lower, g.players[n].upper);
      }
      return z;
    };
    Vec z = at(0.0);
    if (!g.coupling_coef || *g.coupling_coef * load(z) <= g.coupling_rhs) return z;
    double lo = 0.0, hi = 1.0;
    while (*g.coupling_coef * load(at(hi)) > g.coupling_rhs && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (*g.coupling_coef * load(at(mid)) > g.coupling_rhs ? lo : hi) = mid;
    }
    return at(hi);
  }

  double residual(const Vec& x) const {
    const Vec F = op(x);
    Vec v(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) v[n] = x[n] - F[n];
    const Vec p = project(v);
    double s = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) s += w[n] * sq(x[n] - p[n]);
    return std::sqrt(s);
  }
};

}  // namespace

GridResult grid_equilibrium(const TinyGame& g, bool nash) {
  const std::size_t N = g.players.size();
  if (N < 1 || N > 2) throw std::invalid_argument("grid_equilibrium: one or two players only");
  const TinyModel model(g, nash);

  Vec lo(N), hi(N);
  for (std::size_t n = 0; n < N; ++n) {
    lo[n] = g.players[n].lower;
    hi[n] = g.players[n].upper;
  }
  GridResult best;
  best.residual = kInf;
  double step = 1e-2;
  for (int level = 0; level < 3; ++level) {
    std::vector<Vec> axes;
    for (std::size_t n = 0; n < N; ++n) {
      // points on the global lattice lower + i * step inside [lo, hi]
      Vec ax;
      const double base = g.players[n].lower;
      const double first = std::ceil((lo[n] - base) / step - 1e-9);
      for (double i = first; base + i * step <= hi[n] + 1e-12; i += 1.0)
        ax.push_back(std::min(base + i * step, g.players[n].upper));
      if (ax.empty()) ax.push_back(lo[n]);
      axes.push_back(ax);
    }
    std::vector<std::size_t> idx(N, 0);
    while (true) {
      Vec x(N);
      for (std::size_t n = 0; n < N; ++n) x[n] = axes[n][idx[n]];
      if (model.feasible(x)) {
        const double r = model.residual(x);
        if (r < best.residual) {
          best.residual = r;
          best.profile = x;
        }
      }
      std::size_t d = 0;
      while (d < N && ++idx[d] == axes[d].size()) idx[d++] = 0;
      if (d == N) break;
    }
    if (best.profile.empty()) throw std::invalid_argument("grid_equilibrium: no feasible grid point");
    for (std::size_t n = 0; n < N; ++n) {
      lo[n] = std::max(g.players[n].lower, best.profile[n] - 5.0 * step);
      hi[n] = std::min(g.players[n].upper, best.profile[n] + 5.0 * step);
    }
    step /= 10.0;
  }
  best.load = model.load(best.profile);
  return best;
}

double ternary_min(const std::function<double(double)>& f, double lo, double hi, int iters) {
  for (int i = 0; i < iters; ++i) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    if (f(a) <= f(b))
      hi = b;
    else
      lo = a;
  }
  return 0.5 * (lo + hi);
}

double exhaustive_kmeans(const std::vector<Vec>& points, int k) {
  const std::size_t N = points.size();
  if (N > 10 || k < 1 || k > 3 || static_cast<std::size_t>(k) > N)
    throw std::invalid_argument("exhaustive_kmeans: N <= 10 and 1 <= k <= min(3, N)");
  const std::size_t d = points.front().size();
  std::size_t total_codes = 1;
  for (std::size_t i = 0; i < N; ++i) total_codes *= static_cast<std::size_t>(k);
  double best = kInf;
  std::vector<int> lab(N);
  for (std::size_t code = 0; code < total_codes; ++code) {
    std::size_t c = code;
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < N; ++i) {
      lab[i] = static_cast<int>(c % static_cast<std::size_t>(k));
      c /= static_cast<std::size_t>(k);
      ++count[static_cast<std::size_t>(lab[i])];
    }
    if (std::find(count.begin(), count.end(), 0) != count.end()) continue;
    double obj = 0.0;
    for (int cl = 0; cl < k; ++cl) {
      Vec mean(d, 0.0);
      for (std::size_t i = 0; i < N; ++i)
        if (lab[i] == cl)
          for (std::size_t j = 0; j < d; ++j) mean[j] += points[i][j] / count[static_cast<std::size_t>(cl)];
      for (std::size_t i = 0; i < N; ++i)
        if (lab[i] == cl) obj += sq(dist(points[i], mean));
    }
    best = std::min(best, obj);
  }
  return best;
}

double coupled_slack_grid_t3(const std::vector<Set>& sets, const Vec& scales, const std::vector<Vec>& a,
                             const Vec& b) {
  Vec L(3, 0.0), U(3, 0.0);
  double E = 0.0;
  for (std::size_t n = 0; n < sets.size(); ++n) {
    if (!sets[n].energy || sets[n].lower.size() != 3) throw std::invalid_argument("coupled_slack_grid_t3: T = 3 budgeted sets");
    E += scales[n] * *sets[n].energy;
    for (std::size_t k = 0; k < 3; ++k) {
      Vec e(3, 0.0);
      e[k] = 1.0;
      U[k] += scales[n] * support_by_vertices(sets[n], e);
      e[k] = -1.0;
      L[k] -= scales[n] * support_by_vertices(sets[n], e);
    }
  }
  auto phi = [&](double x1, double x2) {
    const Vec X{x1, x2, E - x1 - x2};
    const double tol = 1e-9 * (1.0 + std::abs(E));
    for (std::size_t k = 0; k < 3; ++k)
      if (X[k] < L[k] - tol || X[k] > U[k] + tol) return -kInf;
    double m = kInf;
    for (std::size_t j = 0; j < a.size(); ++j) {
      double ax = 0.0, an = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        ax += a[j][k] * X[k];
        an += a[j][k] * a[j][k];
      }
      if (an > 0.0) m = std::min(m, (b[j] - ax) / std::sqrt(an));
    }
    return m;
  };
  double lo1 = L[0], hi1 = U[0], lo2 = L[1], hi2 = U[1];
  double best = -kInf, b1 = lo1, b2 = lo2;
  const int n = 200;
  for (int level = 0; level < 12; ++level) {
    const double h1 = (hi1 - lo1) / n, h2 = (hi2 - lo2) / n;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double x1 = lo1 + i * h1, x2 = lo2 + j * h2;
        const double v = phi(x1, x2);
        if (v > best) {
          best = v;
          b1 = x1;
          b2 = x2;
        }
      }
    lo1 = std::max(L[0], b1 - 4 * h1);
    hi1 = std::min(U[0], b1 + 4 * h1);
    lo2 = std::max(L[1], b2 - 4 * h2);
    hi2 = std::min(U[1], b2 + 4 * h2);
  }
  return best;
}

}  // namespace oracle
