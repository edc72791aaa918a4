#include "wlqmc/winding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "wlqmc/qmc.hpp"

namespace wlqmc {

double WindingLaw::prob(std::int64_t n) const {
  if (n < -n_max || n > n_max) return 0.0;
  return p[static_cast<std::size_t>(n + n_max)];
}

double WindingLaw::mean() const {
  double s = 0.0;
  for (int n = -n_max; n <= n_max; ++n) s += n * prob(n);
  return s;
}

double WindingLaw::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (int n = -n_max; n <= n_max; ++n) s += (n - mu) * (n - mu) * prob(n);
  return s;
}

namespace {

int gaussian_n_max(double a, double tail) {
  // exp(-a n^2) < tail * 1e-3 beyond n_max
  return static_cast<int>(std::ceil(std::sqrt((-std::log(tail) + 7.0) / a))) + 1;
}

void normalize(std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) s += x;
  for (double& x : p) x /= s;
}

}  // namespace

WindingLaw equilibrium_winding_law(double m, double r_min, double beta, double tail) {
  if (!(m > 0) || !(r_min > 0) || !(beta > 0)) throw std::invalid_argument("winding law needs m, r_min, beta > 0");
  const double a = m * r_min * r_min * 4 * std::numbers::pi * std::numbers::pi / (2 * beta);
  WindingLaw law;
  law.n_max = gaussian_n_max(a, tail);
  for (int n = -law.n_max; n <= law.n_max; ++n) law.p.push_back(std::exp(-a * n * n));
  normalize(law.p);
  return law;
}

WindingLaw exact_winding_distribution(const SparseHamiltonian& H, const Geometry& ring, double beta,
                                      std::size_t K, double tail) {
  if (ring.kind != Geometry::Kind::ring) throw std::invalid_argument("exact winding needs a ring geometry");
  const LinkTable table(H, beta, K);
  const int M = ring.M;
  const Index off = ring.offset;
  double tau = 0.0;
  for (int j = 0; j < M; ++j) tau = std::max(tau, -H.at(off + j, off + (j + 1) % M));
  if (!(tau > 0)) throw std::invalid_argument("ring has no hopping");
  // Lifted displacement after time beta has variance about 2 tau beta sites^2.
  const double a = static_cast<double>(M * M) / (4.0 * tau * beta);
  const int n_max = gaussian_n_max(a, tail) + 2;
  const int half = (n_max + 1) * M;
  const int W = 2 * half + 1;

  std::vector<double> stay(static_cast<std::size_t>(M)), up(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) {
    stay[static_cast<std::size_t>(j)] = table.weight(off + j, off + j);
    up[static_cast<std::size_t>(j)] = table.weight(off + j, off + (j + 1) % M);
  }

  std::vector<double> logp(static_cast<std::size_t>(2 * n_max + 1), -INFINITY);
  std::vector<double> v(static_cast<std::size_t>(W)), next(static_cast<std::size_t>(W));
  for (int c = 0; c < M; ++c) {
    auto site = [&](int x) { return ((c + x) % M + M) % M; };
    std::fill(v.begin(), v.end(), 0.0);
    v[static_cast<std::size_t>(half)] = 1.0;
    double logscale = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      double norm = 0.0;
      for (int y = -half; y <= half; ++y) {
        const auto iy = static_cast<std::size_t>(y + half);
        double s = v[iy] * stay[static_cast<std::size_t>(site(y))];
        if (y > -half) s += v[iy - 1] * up[static_cast<std::size_t>(site(y - 1))];
        if (y < half) s += v[iy + 1] * up[static_cast<std::size_t>(site(y))];
        next[iy] = s;
        norm = std::max(norm, s);
      }
      for (double& x : next) x /= norm;
      logscale += std::log(norm);
      std::swap(v, next);
    }
    for (int n = -n_max; n <= n_max; ++n) {
      const double x = v[static_cast<std::size_t>(n * M + half)];
      if (x <= 0) continue;
      double& lp = logp[static_cast<std::size_t>(n + n_max)];
      const double add = std::log(x) + logscale;
      lp = lp == -INFINITY ? add : std::max(lp, add) + std::log1p(std::exp(-std::abs(lp - add)));
    }
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  WindingLaw law;
  law.n_max = n_max;
  for (double lp : logp) law.p.push_back(std::exp(lp - top));
  normalize(law.p);
  return law;
}

WindingLaw empirical_winding(const std::vector<std::int64_t>& samples) {
  if (samples.empty()) throw std::invalid_argument("no winding samples");
  std::int64_t big = 0;
  for (auto n : samples) big = std::max<std::int64_t>(big, n < 0 ? -n : n);
  WindingLaw law;
  law.n_max = static_cast<int>(big);
  law.p.assign(static_cast<std::size_t>(2 * big + 1), 0.0);
  for (auto n : samples) law.p[static_cast<std::size_t>(n + big)] += 1.0;
  normalize(law.p);
  return law;
}

double total_variation(const WindingLaw& a, const WindingLaw& b) {
  const int n = std::max(a.n_max, b.n_max);
  double s = 0.0;
  for (int k = -n; k <= n; ++k) s += std::abs(a.prob(k) - b.prob(k));
  return 0.5 * s;
}

double instanton_action(double n, double R, double m, double h, double tau) {
  return m * R * R * n * n / tau + h * tau * R;
}

Instanton instanton_time(double n, double R, double m, double h) {
  if (!(h > 0)) throw std::invalid_argument("instanton_time needs h > 0");
  const double an = std::abs(n);
  return {an * std::sqrt(R * m / h), 2 * an * std::sqrt(m * R * R * R * h)};
}

}  // namespace wlqmc
