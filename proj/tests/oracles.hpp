#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the lattice or embedding code under test.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

struct Gauss {
  int re = 0;
  int im = 0;
  friend bool operator==(const Gauss&, const Gauss&) = default;
};

using Index = std::vector<std::uint32_t>;

inline void for_each_index(std::size_t n, std::uint32_t max_degree, const std::function<void(const Index&)>& fn) {
  Index cur(n, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t pos, std::uint32_t left) {
    if (pos == n) {
      fn(cur);
      return;
    }
    for (std::uint32_t v = 0; v <= left; ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
    cur[pos] = 0;
  };
  rec(0, max_degree);
}

inline Gauss dot(const Index& mu, const std::vector<Gauss>& lambda) {
  Gauss s;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    s.re += static_cast<int>(mu[k]) * lambda[k].re;
    s.im += static_cast<int>(mu[k]) * lambda[k].im;
  }
  return s;
}

inline std::uint32_t degree(const Index& mu) {
  std::uint32_t d = 0;
  for (auto v : mu) d += v;
  return d;
}

inline bool leq(const Index& a, const Index& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
  }
  return true;
}

/// Minimal elements of {sigma : 0 < |sigma| <= max_degree, sigma . lambda = 0}.
inline std::set<Index> minimal_invariances(const std::vector<Gauss>& lambda, std::uint32_t max_degree) {
  std::vector<Index> all;
  for_each_index(lambda.size(), max_degree, [&](const Index& s) {
    if (degree(s) > 0 && dot(s, lambda) == Gauss{}) all.push_back(s);
  });
  std::set<Index> out;
  for (const auto& s : all) {
    bool minimal = true;
    for (const auto& t : all) {
      if (t != s && leq(t, s)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.insert(s);
  }
  return out;
}

/// All (mu, alpha) with 1 <= |mu| <= max_degree and mu . lambda = lambda_alpha.
inline std::vector<std::pair<Index, std::size_t>> resonances(const std::vector<Gauss>& lambda,
                                                             std::uint32_t max_degree) {
  std::vector<std::pair<Index, std::size_t>> out;
  for_each_index(lambda.size(), max_degree, [&](const Index& mu) {
    if (degree(mu) == 0) return;
    const Gauss d = dot(mu, lambda);
    for (std::size_t a = 0; a < lambda.size(); ++a) {
      if (d == lambda[a]) out.emplace_back(mu, a);
    }
  });
  return out;
}

/// Classical RK4 on a scalar linear equation x' = a x, written out directly.
inline double rk4_exp(double a, double x0, double t_final, double h) {
  double x = x0;
  double t = 0.0;
  while (t < t_final - 1e-15) {
    const double step = std::min(h, t_final - t);
    const double k1 = a * x;
    const double k2 = a * (x + 0.5 * step * k1);
    const double k3 = a * (x + 0.5 * step * k2);
    const double k4 = a * (x + step * k3);
    x += step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += step;
  }
  return x;
}

}  // namespace oracle
