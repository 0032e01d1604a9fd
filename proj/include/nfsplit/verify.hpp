#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nfsplit/embed.hpp"
#include "nfsplit/real_form.hpp"

namespace nfsplit {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using ComplexMatrix = std::vector<std::vector<Complex>>;

/// dx = F(x) for an autonomous system.
using FieldFunction = std::function<void(std::span<const Complex> x, std::span<Complex> dx)>;

/// Numeric evaluator for a polynomial field, coefficients rounded once.
class CompiledField {
 public:
  CompiledField(const PolyVectorField& field, const SymbolTable& table);

  std::size_t dimension() const noexcept { return rows_.size(); }
  void operator()(std::span<const Complex> x, std::span<Complex> dx) const;
  FieldFunction as_function() const;

 private:
  struct Term {
    Complex coeff;
    std::vector<std::pair<std::size_t, std::uint32_t>> powers;
  };
  std::vector<std::vector<Term>> rows_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexVector> states;
};

/// Classical fixed-step RK4 on [0, t_final]; the last step is shortened to
/// land on t_final. Throws NonFinite with the time of failure.
Trajectory integrate(const FieldFunction& field, ComplexVector x0, double t_final, double step);

struct VerifyOptions {
  double t_final = 1.0;
  double step = 1e-3;
  double tol = 1e-6;
};

struct SplitReport {
  double max_psi_residual = 0.0;      ///< max_t max_j |w_j - x^mu_j|
  double max_phi_residual = 0.0;      ///< max_t max_a |phi_a - x^sigma_a|
  double max_projection_error = 0.0;  ///< sup |x_original - x_embedded|
  double tol = 0.0;
  std::size_t steps = 0;
  bool certified = false;
};

/// Point on the invariant manifold over x0: (x0, x0^mu_j, x0^sigma_a).
ComplexVector lift_to_manifold(const EmbeddedSystem& emb, std::span<const Complex> x0);

SplitReport verify_split(const NormalFormSystem& sys, const EmbeddedSystem& emb, const SymbolTable& table,
                         std::span<const Complex> x0, const VerifyOptions& options = {});
/// Same, starting the embedded flow at an arbitrary point of W (which may lie
/// off the manifold); residuals are measured against x0's lift.
SplitReport verify_split_from(const NormalFormSystem& sys, const EmbeddedSystem& emb, const SymbolTable& table,
                              std::span<const Complex> x0, std::span<const Complex> embedded_start,
                              const VerifyOptions& options = {});

struct EquilibriumSearch {
  std::vector<std::vector<double>> points;
  bool degenerate = false;   ///< right-hand side vanishes identically
  bool unsupported = false;  ///< more than two phi variables
};

/// Real zeros of the phi-subsystem inside an axis-aligned box, each refined
/// until |rhs| < 1e-10 and deduplicated within the resolution. One variable
/// uses sampling plus bisection, two use a grid of damped Newton starts.
EquilibriumSearch phi_equilibria(std::span<const Polynomial> phi_rhs, const SymbolTable& table,
                                 std::span<const std::pair<double, double>> box, double resolution);

/// M(phi0): the coefficient matrix evaluated at a phi equilibrium.
ComplexMatrix asymptotic_linear_system(const EmbeddedSystem& emb, const SymbolTable& table,
                                       std::span<const Complex> phi0);
/// Same matrix with the x block expressed in the real coordinates of a
/// block-diagonal linear part (x = Lambda^-1 xi).
ComplexMatrix asymptotic_linear_system(const EmbeddedSystem& emb, const SymbolTable& table,
                                       std::span<const Complex> phi0, const RealToEigen& change);

}  // namespace nfsplit
