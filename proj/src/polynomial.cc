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

#include "eiffel/polynomial.h"

#include <algorithm>
#include <bit>
#include <set>

#include "eiffel/status.h"

namespace eiffel {
namespace {

constexpr size_t kNttThreshold = 64;

void Trim(std::vector<Fe>& c) {
  while (!c.empty() && c.back().v == 0) c.pop_back();
}

// Factorials 0..n and their inverses.
void Factorials(const PrimeField& field, size_t n, std::vector<Fe>& fact,
                std::vector<Fe>& inv_fact) {
  fact.assign(n + 1, field.One());
  for (size_t i = 1; i <= n; ++i) {
    fact[i] = field.Mul(fact[i - 1], field.FromU64(i));
  }
  inv_fact.assign(n + 1, field.One());
  inv_fact[n] = field.Inv(fact[n]);
  for (size_t i = n; i > 0; --i) {
    inv_fact[i - 1] = field.Mul(inv_fact[i], field.FromU64(i));
  }
}

bool NttFits(const PrimeField& field, size_t size) {
  size_t n = std::bit_ceil(size);
  return std::countr_zero(n) <= field.two_adicity();
}

std::vector<Fe> ConvolveNtt(const PrimeField& field, std::span<const Fe> a,
                            std::span<const Fe> b) {
  size_t out = a.size() + b.size() - 1;
  size_t n = std::bit_ceil(out);
  std::vector<Fe> fa(n), fb(n);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  Ntt(field, fa, false);
  Ntt(field, fb, false);
  for (size_t i = 0; i < n; ++i) fa[i] = field.Mul(fa[i], fb[i]);
  Ntt(field, fa, true);
  fa.resize(out);
  return fa;
}

}  // namespace

Polynomial::Polynomial(std::vector<Fe> coeffs) : coeffs_(std::move(coeffs)) {
  Trim(coeffs_);
}

Fe PolyEval(const PrimeField& field, const Polynomial& poly, Fe x) {
  Fe acc = field.Zero();
  const std::vector<Fe>& c = poly.coeffs();
  for (size_t i = c.size(); i-- > 0;) acc = field.MulAdd(acc, x, c[i]);
  return acc;
}

Polynomial PolyAdd(const PrimeField& field, const Polynomial& a,
                   const Polynomial& b) {
  std::vector<Fe> c(std::max(a.coeffs().size(), b.coeffs().size()));
  for (size_t i = 0; i < c.size(); ++i) {
    c[i] = field.Add(a.Coefficient(i), b.Coefficient(i));
  }
  return Polynomial(std::move(c));
}

Polynomial PolySub(const PrimeField& field, const Polynomial& a,
                   const Polynomial& b) {
  std::vector<Fe> c(std::max(a.coeffs().size(), b.coeffs().size()));
  for (size_t i = 0; i < c.size(); ++i) {
    c[i] = field.Sub(a.Coefficient(i), b.Coefficient(i));
  }
  return Polynomial(std::move(c));
}

Polynomial PolyScale(const PrimeField& field, const Polynomial& a, Fe s) {
  std::vector<Fe> c = a.coeffs();
  for (Fe& x : c) x = field.Mul(x, s);
  return Polynomial(std::move(c));
}

Polynomial PolyMulSchoolbook(const PrimeField& field, const Polynomial& a,
                             const Polynomial& b) {
  if (a.IsZero() || b.IsZero()) return Polynomial();
  const std::vector<Fe>& x = a.coeffs();
  const std::vector<Fe>& y = b.coeffs();
  std::vector<Fe> c(x.size() + y.size() - 1);
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < y.size(); ++j) {
      c[i + j] = field.MulAdd(x[i], y[j], c[i + j]);
    }
  }
  return Polynomial(std::move(c));
}

absl::StatusOr<Polynomial> PolyMulNtt(const PrimeField& field,
                                      const Polynomial& a,
                                      const Polynomial& b) {
  if (a.IsZero() || b.IsZero()) return Polynomial();
  size_t out = a.coeffs().size() + b.coeffs().size() - 1;
  if (!NttFits(field, out)) {
    return MakeError(ErrorKind::kNotApplicable,
                     "PolyMulNtt: transform size exceeds the field's "
                     "two-adic subgroup");
  }
  return Polynomial(ConvolveNtt(field, a.coeffs(), b.coeffs()));
}

Polynomial PolyMul(const PrimeField& field, const Polynomial& a,
                   const Polynomial& b) {
  size_t small = std::min(a.coeffs().size(), b.coeffs().size());
  if (small >= kNttThreshold &&
      NttFits(field, a.coeffs().size() + b.coeffs().size())) {
    return *PolyMulNtt(field, a, b);
  }
  return PolyMulSchoolbook(field, a, b);
}

absl::StatusOr<std::pair<Polynomial, Polynomial>> PolyDivMod(
    const PrimeField& field, const Polynomial& a, const Polynomial& b) {
  if (b.IsZero()) {
    return absl::InvalidArgumentError("PolyDivMod: division by zero");
  }
  if (a.degree() < b.degree()) return std::make_pair(Polynomial(), a);
  std::vector<Fe> rem = a.coeffs();
  const std::vector<Fe>& d = b.coeffs();
  size_t db = d.size() - 1;
  std::vector<Fe> quot(rem.size() - db);
  Fe lead_inv = field.Inv(d.back());
  for (size_t i = quot.size(); i-- > 0;) {
    Fe q = field.Mul(rem[i + db], lead_inv);
    quot[i] = q;
    if (q.v == 0) continue;
    for (size_t j = 0; j <= db; ++j) {
      rem[i + j] = field.Sub(rem[i + j], field.Mul(q, d[j]));
    }
  }
  rem.resize(db);
  return std::make_pair(Polynomial(std::move(quot)),
                        Polynomial(std::move(rem)));
}

Polynomial VanishingPolynomial(const PrimeField& field,
                               std::span<const Fe> xs) {
  std::vector<Fe> c = {field.One()};
  c.reserve(xs.size() + 1);
  for (Fe x : xs) {
    // c <- c * (X - x)
    c.push_back(field.Zero());
    for (size_t i = c.size() - 1; i > 0; --i) {
      c[i] = field.Sub(c[i - 1], field.Mul(x, c[i]));
    }
    c[0] = field.Neg(field.Mul(x, c[0]));
  }
  return Polynomial(std::move(c));
}

absl::StatusOr<Polynomial> Interpolate(const PrimeField& field,
                                       std::span<const Point> points) {
  std::set<uint64_t> seen;
  for (const Point& pt : points) {
    if (!seen.insert(pt.x.v).second) {
      return MakeError(ErrorKind::kDuplicateAbscissa,
                       "Interpolate: two points share an x coordinate");
    }
  }
  size_t k = points.size();
  if (k == 0) return Polynomial();
  std::vector<Fe> xs(k);
  for (size_t i = 0; i < k; ++i) xs[i] = points[i].x;
  std::vector<Fe> master = VanishingPolynomial(field, xs).coeffs();

  // Denominators prod_{j != i} (x_i - x_j), inverted in one batch.
  std::vector<Fe> denom(k, field.One());
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (j != i) denom[i] = field.Mul(denom[i], field.Sub(xs[i], xs[j]));
    }
  }
  field.BatchInvert(denom);

  std::vector<Fe> result(k, field.Zero());
  std::vector<Fe> basis(k);
  for (size_t i = 0; i < k; ++i) {
    Fe w = field.Mul(points[i].y, denom[i]);
    if (w.v == 0) continue;
    // master / (X - x_i) by synthetic division, highest term first.
    Fe carry = field.Zero();
    for (size_t j = k; j > 0; --j) {
      carry = field.MulAdd(carry, xs[i], master[j]);
      basis[j - 1] = carry;
    }
    for (size_t j = 0; j < k; ++j) {
      result[j] = field.MulAdd(w, basis[j], result[j]);
    }
  }
  return Polynomial(std::move(result));
}

void Ntt(const PrimeField& field, std::span<Fe> values, bool inverse) {
  size_t n = values.size();
  if (n <= 1) return;
  int log_n = std::countr_zero(n);
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(values[i], values[j]);
  }
  for (int s = 1; s <= log_n; ++s) {
    size_t len = size_t{1} << s;
    Fe w_len = field.RootOfUnity(s);
    if (inverse) w_len = field.Inv(w_len);
    std::vector<Fe> twiddles(len / 2);
    twiddles[0] = field.One();
    for (size_t k = 1; k < len / 2; ++k) {
      twiddles[k] = field.Mul(twiddles[k - 1], w_len);
    }
    for (size_t i = 0; i < n; i += len) {
      for (size_t k = 0; k < len / 2; ++k) {
        Fe u = values[i + k];
        Fe v = field.Mul(values[i + k + len / 2], twiddles[k]);
        values[i + k] = field.Add(u, v);
        values[i + k + len / 2] = field.Sub(u, v);
      }
    }
  }
  if (inverse) {
    Fe n_inv = field.Inv(field.FromU64(n));
    for (Fe& v : values) v = field.Mul(v, n_inv);
  }
}

std::vector<Fe> ConsecutiveLagrangeWeights(const PrimeField& field,
                                           size_t num_nodes, Fe r) {
  std::vector<Fe> weights(num_nodes, field.Zero());
  if (num_nodes == 0) return weights;
  if (r.v < num_nodes) {
    weights[r.v] = field.One();
    return weights;
  }
  std::vector<Fe> fact, inv_fact;
  Factorials(field, num_nodes - 1, fact, inv_fact);
  std::vector<Fe> diffs(num_nodes);
  Fe master = field.One();
  for (size_t k = 0; k < num_nodes; ++k) {
    diffs[k] = field.Sub(r, field.FromU64(k));
    master = field.Mul(master, diffs[k]);
  }
  field.BatchInvert(diffs);
  size_t top = num_nodes - 1;
  for (size_t k = 0; k < num_nodes; ++k) {
    Fe w = field.Mul(field.Mul(master, diffs[k]),
                     field.Mul(inv_fact[k], inv_fact[top - k]));
    weights[k] = ((top - k) & 1) ? field.Neg(w) : w;
  }
  return weights;
}

std::vector<Fe> ExtendConsecutive(const PrimeField& field,
                                  std::span<const Fe> values, size_t count) {
  size_t n = values.size();
  std::vector<Fe> out(count, field.Zero());
  if (n == 0 || count == 0) return out;
  size_t top = n + count - 1;
  std::vector<Fe> fact, inv_fact;
  Factorials(field, top, fact, inv_fact);

  // f(x) = P(x) * sum_k w_k / (x - k), P(x) = prod_{j<n} (x - j).
  std::vector<Fe> a(n);
  for (size_t k = 0; k < n; ++k) {
    Fe w = field.Mul(values[k], field.Mul(inv_fact[k], inv_fact[n - 1 - k]));
    a[k] = ((n - 1 - k) & 1) ? field.Neg(w) : w;
  }
  // 1/j = (j-1)! / j!
  std::vector<Fe> b(top + 1, field.Zero());
  for (size_t j = 1; j <= top; ++j) b[j] = field.Mul(fact[j - 1], inv_fact[j]);

  std::vector<Fe> sums(count, field.Zero());
  if (std::min(n, count) >= kNttThreshold && NttFits(field, n + top + 1)) {
    std::vector<Fe> c = ConvolveNtt(field, a, b);
    for (size_t s = 0; s < count; ++s) sums[s] = c[n + s];
  } else {
    for (size_t s = 0; s < count; ++s) {
      Fe acc = field.Zero();
      for (size_t k = 0; k < n; ++k)
        acc = field.MulAdd(a[k], b[n + s - k], acc);
      sums[s] = acc;
    }
  }
  for (size_t s = 0; s < count; ++s) {
    // P(n + s) = (n + s)! / s!
    out[s] = field.Mul(sums[s], field.Mul(fact[n + s], inv_fact[s]));
  }
  return out;
}

}  // namespace eiffel
