#include "aggeq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace aggeq {

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Thm1_individual: return "Thm1_individual";
    case BoundKind::Thm1_mean: return "Thm1_mean";
    case BoundKind::Thm1_aggregate: return "Thm1_aggregate";
    case BoundKind::Thm2_individual: return "Thm2_individual";
    case BoundKind::Thm2_mean: return "Thm2_mean";
    case BoundKind::Thm2_aggregate_strong: return "Thm2_aggregate_strong";
    case BoundKind::Thm2_aggregate_aggr: return "Thm2_aggregate_aggr";
    case BoundKind::Prop3_similarity: return "Prop3_similarity";
    case BoundKind::Corollary_aggregate: return "Corollary_aggregate";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be nonnegative and finite");
}

BoundInputs with_modulus(BoundInputs in, const Modulus& m) {
  (m.kind == Modulus::Kind::Strong ? in.alpha : in.beta) = m.value;
  return in;
}

BoundCertificate cert(BoundKind kind, const BoundInputs& in, std::optional<double> value,
                      std::string note = {}) {
  BoundCertificate c;
  c.kind = kind;
  c.inputs = in;
  c.valid = value.has_value();
  c.value = value.value_or(kInf);
  c.note = c.valid ? std::move(note) : "monotonicity modulus absent";
  return c;
}

// nullopt when the modulus is absent; throws when it is present but invalid.
std::optional<double> modulus_value(const Modulus& m) {
  if (!m.value) return std::nullopt;
  require_positive(*m.value, m.kind == Modulus::Kind::Strong ? "alpha" : "beta");
  return m.value;
}

}  // namespace

std::vector<BoundCertificate> thm1_bounds(double L2, const Modulus& m, double N, double R) {
  require_nonneg(L2, "L2");
  if (!(N >= 1.0)) throw std::invalid_argument("N must be at least 1");
  require_nonneg(R, "R");
  BoundInputs base;
  base.L2 = L2;
  base.N = N;
  base.R = R;
  const BoundInputs in = with_modulus(base, m);
  const auto mod = modulus_value(m);
  std::vector<BoundCertificate> out;
  if (m.kind == Modulus::Kind::Strong) {
    auto f = [&](double denom) -> std::optional<double> {
      if (!mod) return std::nullopt;
      return L2 / (*mod * denom);
    };
    out.push_back(cert(BoundKind::Thm1_individual, in, f(std::sqrt(N))));
    out.push_back(cert(BoundKind::Thm1_mean, in, f(N)));
    out.push_back(cert(BoundKind::Thm1_aggregate, in, f(N)));
  } else {
    std::optional<double> v;
    if (mod) v = std::sqrt(2.0 * R * L2 / (*mod * N));
    out.push_back(cert(BoundKind::Thm1_aggregate, in, v));
  }
  return out;
}

std::vector<BoundCertificate> thm2_bounds(double K, const Modulus& m, double N) {
  require_nonneg(K, "K");
  if (!(N >= 1.0)) throw std::invalid_argument("N must be at least 1");
  BoundInputs base;
  base.N = N;
  base.K = K;
  const BoundInputs in = with_modulus(base, m);
  const auto mod = modulus_value(m);
  std::vector<BoundCertificate> out;
  auto f = [&](double scale) -> std::optional<double> {
    if (!mod) return std::nullopt;
    return std::sqrt(scale * K / *mod);
  };
  if (m.kind == Modulus::Kind::Strong) {
    out.push_back(cert(BoundKind::Thm2_individual, in, f(N)));
    out.push_back(cert(BoundKind::Thm2_mean, in, f(1.0)));
    out.push_back(cert(BoundKind::Thm2_aggregate_strong, in, f(1.0)));
  } else {
    out.push_back(cert(BoundKind::Thm2_aggregate_aggr, in, f(1.0)));
  }
  return out;
}

BoundCertificate corollary_bounds(double L2, const Modulus& m, double N, double K, double R,
                                  std::optional<double> T, std::optional<double> C) {
  require_nonneg(L2, "L2");
  require_nonneg(K, "K");
  require_nonneg(R, "R");
  if (!(N >= 1.0)) throw std::invalid_argument("N must be at least 1");
  if (T) require_positive(*T, "T");
  if (C) require_nonneg(*C, "C");
  BoundInputs base;
  base.L2 = L2;
  base.N = N;
  base.K = K;
  base.R = R;
  BoundInputs in = with_modulus(base, m);
  in.T = T;
  in.C = C;
  const auto mod = modulus_value(m);
  if (!mod) return cert(BoundKind::Corollary_aggregate, in, std::nullopt);
  const double reduction = std::sqrt(K / *mod);
  if (m.kind == Modulus::Kind::Strong)
    return cert(BoundKind::Corollary_aggregate, in, L2 / (*mod * N) + reduction);
  if (T && C)
    return cert(BoundKind::Corollary_aggregate, in, R * std::sqrt(2.0 * *T * *C / (N * *mod)) + reduction,
                "R sqrt(2TC/(N beta)) + sqrt(K/beta) with user-supplied T and C");
  return cert(BoundKind::Corollary_aggregate, in, std::sqrt(2.0 * R * L2 / (*mod * N)) + reduction,
              "T and C not supplied: sqrt(2 R L2/(beta N)) + sqrt(K/beta) used instead");
}

double prop3_bound(double alpha_n, double L1n, double L1m, double delta_set, double delta_u_star,
                   double R) {
  require_positive(alpha_n, "alpha_n");
  require_nonneg(L1n, "L1n");
  require_nonneg(L1m, "L1m");
  require_nonneg(delta_set, "delta");
  require_nonneg(delta_u_star, "delta_u_star");
  require_nonneg(R, "R");
  return std::sqrt(((L1n + L1m) * delta_set + 2.0 * delta_u_star * R) / alpha_n);
}

double relative_aggregate_error(std::span<const double> ref, std::span<const double> approx) {
  if (ref.size() != approx.size()) throw std::invalid_argument("relative_aggregate_error: length mismatch");
  const double denom = norm2(ref);
  if (!(denom > 0.0)) throw std::invalid_argument("relative_aggregate_error: zero reference aggregate");
  return distance(ref, approx) / denom;
}

double relative_aggregate_error(const EquilibriumResult& ref, const EquilibriumResult& approx) {
  return relative_aggregate_error(ref.aggregate, approx.aggregate);
}

RateFit fit_rate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_rate: length mismatch");
  if (xs.size() < 3) throw std::invalid_argument("fit_rate: at least 3 points required");
  const std::size_t n = xs.size();
  Vector lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("fit_rate: data must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate: xs are all equal");
  const double slope = sxy / sxx;
  RateFit f;
  f.a = -slope;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

namespace {

Vector ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  Vector r(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("spearman: need two equal-length samples");
  const Vector rx = ranks(xs), ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace aggeq
