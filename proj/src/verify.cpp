#include "nfsplit/verify.hpp"

#include <algorithm>
#include <cmath>

#include "nfsplit/errors.hpp"

namespace nfsplit {

CompiledField::CompiledField(const PolyVectorField& field, const SymbolTable& table) {
  rows_.resize(field.dimension());
  for (std::size_t i = 0; i < field.dimension(); ++i) {
    for (const auto& [mu, c] : field[i].terms()) {
      Term t{eval_numeric(c, table), {}};
      for (std::size_t k = 0; k < mu.size(); ++k) {
        if (mu[k] > 0) t.powers.emplace_back(k, mu[k]);
      }
      rows_[i].push_back(std::move(t));
    }
  }
}

void CompiledField::operator()(std::span<const Complex> x, std::span<Complex> dx) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Complex sum{};
    for (const auto& t : rows_[i]) {
      Complex v = t.coeff;
      for (const auto& [k, e] : t.powers) {
        for (std::uint32_t p = 0; p < e; ++p) v *= x[k];
      }
      sum += v;
    }
    dx[i] = sum;
  }
}

FieldFunction CompiledField::as_function() const {
  return [self = *this](std::span<const Complex> x, std::span<Complex> dx) { self(x, dx); };
}

namespace {

bool finite(const ComplexVector& v) {
  return std::all_of(v.begin(), v.end(), [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

Trajectory integrate(const FieldFunction& field, ComplexVector x0, double t_final, double step) {
  if (!(step > 0.0) || !(t_final > 0.0)) throw StructuralError("integration needs positive step and final time");
  const std::size_t n = x0.size();
  Trajectory traj;
  if (!finite(x0)) throw NonFinite(0.0);

  const auto full_steps = static_cast<std::size_t>(std::floor(t_final / step + 1e-9));
  std::vector<double> times;
  times.reserve(full_steps + 2);
  for (std::size_t k = 0; k <= full_steps; ++k) times.push_back(static_cast<double>(k) * step);
  if (t_final - times.back() > 1e-12 * t_final) {
    times.push_back(t_final);
  } else {
    times.back() = t_final;
  }

  ComplexVector k1(n), k2(n), k3(n), k4(n), tmp(n);
  ComplexVector x = std::move(x0);
  traj.times.push_back(times.front());
  traj.states.push_back(x);
  for (std::size_t s = 1; s < times.size(); ++s) {
    const double h = times[s] - times[s - 1];
    field(x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    field(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    field(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    field(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!finite(x)) throw NonFinite(times[s]);
    traj.times.push_back(times[s]);
    traj.states.push_back(x);
  }
  return traj;
}

// ---------------------------------------------------------------------------

namespace {

Complex monomial_value(const MultiIndex& mu, std::span<const Complex> x) {
  Complex v{1.0, 0.0};
  for (std::size_t k = 0; k < mu.size(); ++k) {
    for (std::uint32_t e = 0; e < mu[k]; ++e) v *= x[k];
  }
  return v;
}

}  // namespace

ComplexVector lift_to_manifold(const EmbeddedSystem& emb, std::span<const Complex> x0) {
  if (x0.size() != emb.n) throw StructuralError("initial point has the wrong dimension");
  ComplexVector lifted(x0.begin(), x0.end());
  for (const auto& w : emb.w_defs) lifted.push_back(monomial_value(w.mu, x0));
  for (const auto& s : emb.phi_defs) lifted.push_back(monomial_value(s, x0));
  return lifted;
}

SplitReport verify_split(const NormalFormSystem& sys, const EmbeddedSystem& emb, const SymbolTable& table,
                         std::span<const Complex> x0, const VerifyOptions& options) {
  const auto lifted = lift_to_manifold(emb, x0);
  return verify_split_from(sys, emb, table, x0, lifted, options);
}

SplitReport verify_split_from(const NormalFormSystem& sys, const EmbeddedSystem& emb, const SymbolTable& table,
                              std::span<const Complex> x0, std::span<const Complex> embedded_start,
                              const VerifyOptions& options) {
  if (embedded_start.size() != emb.total_dimension()) throw StructuralError("embedded start has the wrong dimension");
  const CompiledField original(sys.field(), table);
  const CompiledField enlarged(emb.full_field(), table);
  const auto base = integrate(original.as_function(), ComplexVector(x0.begin(), x0.end()), options.t_final, options.step);
  const auto lifted = integrate(enlarged.as_function(), ComplexVector(embedded_start.begin(), embedded_start.end()),
                                options.t_final, options.step);

  SplitReport report;
  report.tol = options.tol;
  report.steps = base.times.size() - 1;
  for (std::size_t s = 0; s < base.states.size(); ++s) {
    const auto& xo = base.states[s];
    const auto& y = lifted.states[s];
    std::span<const Complex> xe(y.data(), emb.n);
    for (std::size_t i = 0; i < emb.n; ++i) {
      report.max_projection_error = std::max(report.max_projection_error, std::abs(xo[i] - xe[i]));
    }
    for (std::size_t j = 0; j < emb.r; ++j) {
      report.max_psi_residual =
          std::max(report.max_psi_residual, std::abs(y[emb.n + j] - monomial_value(emb.w_defs[j].mu, xe)));
    }
    for (std::size_t a = 0; a < emb.m; ++a) {
      report.max_phi_residual =
          std::max(report.max_phi_residual, std::abs(y[emb.n + emb.r + a] - monomial_value(emb.phi_defs[a], xe)));
    }
  }
  report.certified = report.max_psi_residual < options.tol && report.max_phi_residual < options.tol &&
                     report.max_projection_error < options.tol;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kRootTolerance = 1e-10;

double norm_of(std::span<const Polynomial> rhs, std::span<const Complex> point, const SymbolTable& table) {
  double worst = 0.0;
  for (const auto& p : rhs) worst = std::max(worst, std::abs(evaluate(p, point, table)));
  return worst;
}

void add_unique(std::vector<std::vector<double>>& points, std::vector<double> candidate, double resolution) {
  for (const auto& p : points) {
    double dist = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) dist = std::max(dist, std::abs(p[k] - candidate[k]));
    if (dist < resolution) return;
  }
  points.push_back(std::move(candidate));
}

std::vector<std::vector<double>> search_1d(const Polynomial& g, const SymbolTable& table, double lo, double hi,
                                           double resolution) {
  const Polynomial dg = partial_derivative(g, 0);
  auto value = [&](double t) {
    const Complex pt{t, 0.0};
    return evaluate(g, std::span<const Complex>(&pt, 1), table);
  };
  auto slope = [&](double t) {
    const Complex pt{t, 0.0};
    return evaluate(dg, std::span<const Complex>(&pt, 1), table);
  };
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / resolution)));
  std::vector<double> samples(intervals + 1);
  std::vector<Complex> values(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    samples[k] = k == intervals ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(intervals);
    values[k] = value(samples[k]);
  }

  std::vector<double> candidates;
  for (std::size_t k = 0; k <= intervals; ++k) {
    if (std::abs(values[k]) < kRootTolerance) candidates.push_back(samples[k]);
  }
  for (std::size_t k = 0; k < intervals; ++k) {
    const double fa = values[k].real();
    const double fb = values[k + 1].real();
    if (!(fa * fb < 0.0)) continue;
    double a = samples[k], b = samples[k + 1], va = fa;
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double vm = value(mid).real();
      if ((vm < 0.0) == (va < 0.0)) {
        a = mid;
        va = vm;
      } else {
        b = mid;
      }
    }
    candidates.push_back(std::abs(value(a)) < std::abs(value(b)) ? a : b);
  }
  // Even-multiplicity roots do not change sign: polish local minima of |g|.
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double here = std::abs(values[k]);
    const bool left = k == 0 || here <= std::abs(values[k - 1]);
    const bool right = k == intervals || here <= std::abs(values[k + 1]);
    if (!left || !right) continue;
    double t = samples[k];
    for (int it = 0; it < 60; ++it) {
      const Complex d = slope(t);
      if (std::abs(d) == 0.0) break;
      const double next = t - (value(t) / d).real();
      if (!std::isfinite(next)) break;
      if (std::abs(next - t) < 1e-16 * std::max(1.0, std::abs(t))) {
        t = next;
        break;
      }
      t = next;
    }
    candidates.push_back(t);
  }

  std::vector<std::pair<double, double>> accepted;  // (|g|, point)
  for (double c : candidates) {
    if (c < lo || c > hi) continue;
    const double res = std::abs(value(c));
    if (res < kRootTolerance) accepted.emplace_back(res, c);
  }
  std::sort(accepted.begin(), accepted.end());
  std::vector<std::vector<double>> points;
  for (const auto& [res, c] : accepted) add_unique(points, {c}, resolution);
  std::sort(points.begin(), points.end());
  return points;
}

std::vector<std::vector<double>> search_2d(std::span<const Polynomial> rhs, const SymbolTable& table,
                                           std::span<const std::pair<double, double>> box, double resolution) {
  std::vector<std::vector<Polynomial>> jac(2, std::vector<Polynomial>(2));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) jac[i][j] = partial_derivative(rhs[i], j);
  }
  auto residual = [&](double a, double b) {
    const Complex pt[2] = {{a, 0.0}, {b, 0.0}};
    return norm_of(rhs, pt, table);
  };
  constexpr std::size_t kMaxPerAxis = 41;
  auto axis = [&](std::size_t k) {
    const auto [lo, hi] = box[k];
    const auto count = std::min<std::size_t>(kMaxPerAxis, static_cast<std::size_t>(std::ceil((hi - lo) / resolution)) + 1);
    std::vector<double> pts(std::max<std::size_t>(count, 2));
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pts.size() - 1);
    return pts;
  };
  const auto ax = axis(0);
  const auto ay = axis(1);

  std::vector<std::pair<double, std::vector<double>>> accepted;
  for (double sx : ax) {
    for (double sy : ay) {
      double a = sx, b = sy;
      double current = residual(a, b);
      for (int it = 0; it < 80 && current >= 1e-14; ++it) {
        const Complex pt[2] = {{a, 0.0}, {b, 0.0}};
        const Complex g0 = evaluate(rhs[0], pt, table), g1 = evaluate(rhs[1], pt, table);
        const Complex j00 = evaluate(jac[0][0], pt, table), j01 = evaluate(jac[0][1], pt, table);
        const Complex j10 = evaluate(jac[1][0], pt, table), j11 = evaluate(jac[1][1], pt, table);
        const Complex det = j00 * j11 - j01 * j10;
        if (std::abs(det) < 1e-300) break;
        const double da = ((j11 * g0 - j01 * g1) / det).real();
        const double db = ((j00 * g1 - j10 * g0) / det).real();
        double t = 1.0;
        bool moved = false;
        while (t > 1e-6) {
          const double na = a - t * da, nb = b - t * db;
          const double r = residual(na, nb);
          if (r < current) {
            a = na;
            b = nb;
            current = r;
            moved = true;
            break;
          }
          t *= 0.5;
        }
        if (!moved) break;
      }
      const double slack = resolution * 1e-3;
      if (current < kRootTolerance && a >= box[0].first - slack && a <= box[0].second + slack &&
          b >= box[1].first - slack && b <= box[1].second + slack) {
        accepted.push_back({current, {a, b}});
      }
    }
  }
  std::sort(accepted.begin(), accepted.end());
  std::vector<std::vector<double>> points;
  for (auto& [res, p] : accepted) add_unique(points, std::move(p), resolution);
  std::sort(points.begin(), points.end());
  return points;
}

}  // namespace

EquilibriumSearch phi_equilibria(std::span<const Polynomial> phi_rhs, const SymbolTable& table,
                                 std::span<const std::pair<double, double>> box, double resolution) {
  if (!(resolution > 0.0)) throw StructuralError("equilibrium search needs a positive resolution");
  EquilibriumSearch out;
  const std::size_t m = phi_rhs.size();
  if (m == 0) return out;
  if (m > 2) {
    out.unsupported = true;
    return out;
  }
  if (box.size() != m) throw StructuralError("search box must have one interval per phi variable");
  for (const auto& p : phi_rhs) {
    if (p.dimension() != m) throw StructuralError("phi right-hand side has the wrong dimension");
  }
  if (std::all_of(phi_rhs.begin(), phi_rhs.end(), [](const Polynomial& p) { return p.is_zero(); })) {
    out.degenerate = true;
    return out;
  }
  out.points = m == 1 ? search_1d(phi_rhs[0], table, box[0].first, box[0].second, resolution)
                      : search_2d(phi_rhs, table, box, resolution);
  return out;
}

ComplexMatrix asymptotic_linear_system(const EmbeddedSystem& emb, const SymbolTable& table,
                                       std::span<const Complex> phi0) {
  if (phi0.size() != emb.m) throw StructuralError("phi0 must have one entry per phi variable");
  const std::size_t size = emb.n + emb.r;
  ComplexMatrix out(size, ComplexVector(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t k = 0; k < size; ++k) out[i][k] = evaluate(emb.coeff_matrix[i][k], phi0, table);
  }
  return out;
}

ComplexMatrix asymptotic_linear_system(const EmbeddedSystem& emb, const SymbolTable& table,
                                       std::span<const Complex> phi0, const RealToEigen& change) {
  if (change.lambda.size() != emb.n) throw StructuralError("coordinate change does not match the x block");
  const auto eig = asymptotic_linear_system(emb, table, phi0);
  const std::size_t size = emb.n + emb.r;
  // B = diag(Lambda, I); real form is B^-1 M B.
  ComplexMatrix b(size, ComplexVector(size)), b_inv(size, ComplexVector(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t k = 0; k < size; ++k) {
      if (i < emb.n && k < emb.n) {
        b[i][k] = eval_numeric(change.lambda[i][k], table);
        b_inv[i][k] = eval_numeric(change.lambda_inv[i][k], table);
      } else if (i == k) {
        b[i][k] = b_inv[i][k] = 1.0;
      }
    }
  }
  auto mul = [size](const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix z(size, ComplexVector(size));
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t k = 0; k < size; ++k) {
        for (std::size_t j = 0; j < size; ++j) z[i][j] += x[i][k] * y[k][j];
      }
    }
    return z;
  };
  return mul(b_inv, mul(eig, b));
}

}  // namespace nfsplit
