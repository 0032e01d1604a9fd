#pragma once

#include <span>
#include <vector>

#include "nfsplit/poly.hpp"
#include "nfsplit/resonance.hpp"

namespace nfsplit {

/// One block of a real block-diagonal linear part: either a 1x1 block
/// (value) or a rotation block [[re, -im], [im, re]].
struct RealBlock {
  enum class Kind { real, rotation };
  Kind kind = Kind::real;
  CoeffValue re;
  CoeffValue im;  // rotation only

  std::size_t size() const { return kind == Kind::rotation ? 2 : 1; }
};

using CoeffMatrix = std::vector<std::vector<CoeffValue>>;

/// xi = Lambda x. A rotation block maps (x1, x2) to
/// ((x1 - i x2)/2, (x1 + i x2)/2) with eigenvalues (re - i im, re + i im).
struct RealToEigen {
  CoeffMatrix lambda;
  CoeffMatrix lambda_inv;
  Spectrum spectrum;
};

RealToEigen real_to_eigen(std::span<const RealBlock> blocks, const SymbolTablePtr& table = nullptr);

CoeffMatrix multiply(const CoeffMatrix& a, const CoeffMatrix& b);
CoeffMatrix identity_matrix(std::size_t n);

/// Field in eigencoordinates: xi' = Lambda f(Lambda^-1 xi).
PolyVectorField to_eigen_coordinates(const PolyVectorField& real_field, const RealToEigen& change);
/// Inverse direction: x' = Lambda^-1 g(Lambda x).
PolyVectorField to_real_coordinates(const PolyVectorField& eigen_field, const RealToEigen& change);

}  // namespace nfsplit
