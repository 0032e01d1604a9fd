#include "nfsplit/real_form.hpp"

#include "nfsplit/errors.hpp"

namespace nfsplit {

CoeffMatrix identity_matrix(std::size_t n) {
  CoeffMatrix out(n, std::vector<CoeffValue>(n));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

CoeffMatrix multiply(const CoeffMatrix& a, const CoeffMatrix& b) {
  const std::size_t inner = b.size();
  CoeffMatrix out(a.size(), std::vector<CoeffValue>(b.empty() ? 0 : b.front().size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw StructuralError("matrix shapes do not match");
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

RealToEigen real_to_eigen(std::span<const RealBlock> blocks, const SymbolTablePtr& table) {
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  RealToEigen out{CoeffMatrix(total, std::vector<CoeffValue>(total)),
                  CoeffMatrix(total, std::vector<CoeffValue>(total)), Spectrum{}};
  const CoeffValue i = CoeffValue::imaginary_unit(table);
  const CoeffValue half = Rational(1, 2);
  std::vector<CoeffValue> lambdas;
  std::size_t o = 0;
  for (const auto& b : blocks) {
    if (b.kind == RealBlock::Kind::real) {
      out.lambda[o][o] = 1;
      out.lambda_inv[o][o] = 1;
      lambdas.push_back(b.re);
    } else {
      // xi1 = (x1 - i x2)/2, xi2 = (x1 + i x2)/2
      out.lambda[o][o] = half;
      out.lambda[o][o + 1] = -half * i;
      out.lambda[o + 1][o] = half;
      out.lambda[o + 1][o + 1] = half * i;
      out.lambda_inv[o][o] = 1;
      out.lambda_inv[o][o + 1] = 1;
      out.lambda_inv[o + 1][o] = i;
      out.lambda_inv[o + 1][o + 1] = -i;
      lambdas.push_back(b.re - i * b.im);
      lambdas.push_back(b.re + i * b.im);
    }
    o += b.size();
  }
  out.spectrum = Spectrum(std::move(lambdas));
  return out;
}

namespace {

PolyVectorField conjugate(const PolyVectorField& field, const CoeffMatrix& outer, const CoeffMatrix& inner) {
  const std::size_t n = field.dimension();
  if (outer.size() != n || inner.size() != n) throw StructuralError("coordinate change has the wrong size");
  std::vector<Polynomial> images;
  images.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Polynomial img(n);
    for (std::size_t l = 0; l < n; ++l) {
      if (!inner[k][l].is_zero()) img.add_term(MultiIndex::unit(n, l), inner[k][l]);
    }
    images.push_back(std::move(img));
  }
  std::vector<Polynomial> pulled;
  pulled.reserve(n);
  for (std::size_t k = 0; k < n; ++k) pulled.push_back(substitute(field[k], images));
  std::vector<Polynomial> out(n, Polynomial(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!outer[i][k].is_zero()) out[i] += pulled[k] * outer[i][k];
    }
  }
  return PolyVectorField(std::move(out));
}

}  // namespace

PolyVectorField to_eigen_coordinates(const PolyVectorField& real_field, const RealToEigen& change) {
  return conjugate(real_field, change.lambda, change.lambda_inv);
}

PolyVectorField to_real_coordinates(const PolyVectorField& eigen_field, const RealToEigen& change) {
  return conjugate(eigen_field, change.lambda_inv, change.lambda);
}

}  // namespace nfsplit
