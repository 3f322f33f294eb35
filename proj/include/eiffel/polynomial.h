// Copyright 2026 The EIFFeL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EIFFEL_POLYNOMIAL_H_
#define EIFFEL_POLYNOMIAL_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/field.h"

namespace eiffel {

// Dense univariate polynomial, lowest coefficient first. Trailing zero
// coefficients are dropped so that equal polynomials compare equal.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Fe> coeffs);

  const std::vector<Fe>& coeffs() const { return coeffs_; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool IsZero() const { return coeffs_.empty(); }
  Fe Coefficient(size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : Fe{0};
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  std::vector<Fe> coeffs_;
};

struct Point {
  Fe x;
  Fe y;

  friend bool operator==(Point, Point) = default;
};

Fe PolyEval(const PrimeField& field, const Polynomial& poly, Fe x);
Polynomial PolyAdd(const PrimeField& field, const Polynomial& a,
                   const Polynomial& b);
Polynomial PolySub(const PrimeField& field, const Polynomial& a,
                   const Polynomial& b);
Polynomial PolyScale(const PrimeField& field, const Polynomial& a, Fe c);

// Uses the NTT for large operands when the field supports the transform size,
// schoolbook multiplication otherwise.
Polynomial PolyMul(const PrimeField& field, const Polynomial& a,
                   const Polynomial& b);
Polynomial PolyMulSchoolbook(const PrimeField& field, const Polynomial& a,
                             const Polynomial& b);
// Fails with NotApplicable if the result size exceeds the field's two-adic
// subgroup.
absl::StatusOr<Polynomial> PolyMulNtt(const PrimeField& field,
                                      const Polynomial& a, const Polynomial& b);

// Returns (quotient, remainder). The divisor must be nonzero.
absl::StatusOr<std::pair<Polynomial, Polynomial>> PolyDivMod(
    const PrimeField& field, const Polynomial& a, const Polynomial& b);

// Unique polynomial of degree < points.size() through the points. Fails with
// DuplicateAbscissa if two points share an x coordinate.
absl::StatusOr<Polynomial> Interpolate(const PrimeField& field,
                                       std::span<const Point> points);

// prod (X - x_i)
Polynomial VanishingPolynomial(const PrimeField& field, std::span<const Fe> xs);

// In-place radix-2 transform. values.size() must be a power of two no larger
// than 2^two_adicity.
void Ntt(const PrimeField& field, std::span<Fe> values, bool inverse);

// Lagrange basis values L_k(r), k = 0..num_nodes-1, for the nodes
// 0, 1, ..., num_nodes-1. Requires num_nodes < p. Works for any r, including
// r equal to a node.
std::vector<Fe> ConsecutiveLagrangeWeights(const PrimeField& field,
                                           size_t num_nodes, Fe r);

// Given values of a polynomial of degree < N at 0..N-1, returns its values at
// N..N+count-1. Runs in O((N + count) log(N + count)) when the NTT applies.
// Requires N + count <= p.
std::vector<Fe> ExtendConsecutive(const PrimeField& field,
                                  std::span<const Fe> values, size_t count);

}  // namespace eiffel

#endif  // EIFFEL_POLYNOMIAL_H_
