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

#include "eiffel/predicates.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

using int128 = __int128;

int128 Abs(int128 x) { return x < 0 ? -x : x; }

// Number of bits needed to write x >= 0.
size_t BitLength(int128 x) {
  size_t bits = 0;
  while (x > 0) {
    ++bits;
    x >>= 1;
  }
  return bits;
}

int128 SquaredNorm(std::span<const int64_t> u) {
  int128 acc = 0;
  for (int64_t x : u) acc += static_cast<int128>(x) * x;
  return acc;
}

int128 Dot(std::span<const int64_t> a, std::span<const int64_t> b) {
  int128 acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc += static_cast<int128>(a[i]) * b[i];
  return acc;
}

// One inequality "0 <= slack" before circuit construction.
struct PendingInequality {
  std::function<int128(std::span<const int64_t>)> slack;
  // Slack range over the clipped input domain.
  int128 lo;
  int128 hi;
  // Largest slack of an input that satisfies the predicate.
  int128 hi_valid;
  // Emits the gates computing the slack wire.
  std::function<Wire(class Builder&)> build;
};

class Builder {
 public:
  Builder(const PrimeField& field, Circuit& circuit, size_t dim)
      : field_(field), circuit_(circuit) {
    for (size_t j = 0; j < dim; ++j) u_.push_back(static_cast<Wire>(j));
  }

  const PrimeField& field() const { return field_; }
  Circuit& circuit() { return circuit_; }

  Fe Const(int128 x) const {
    uint64_t p = field_.modulus();
    int128 r = x % static_cast<int128>(p);
    if (r < 0) r += p;
    return Fe{static_cast<uint64_t>(r)};
  }

  Wire Sum(const std::vector<Wire>& terms) {
    Wire acc = terms[0];
    for (size_t i = 1; i < terms.size(); ++i) acc = circuit_.Add(acc, terms[i]);
    return acc;
  }

  // ||u||^2, built once and shared between inequalities.
  Wire SquaredNorm() {
    if (!norm_.has_value()) {
      std::vector<Wire> squares;
      for (Wire w : u_) squares.push_back(circuit_.Mul(w, w));
      norm_ = Sum(squares);
    }
    return *norm_;
  }

  // sum_j c_j u_j without multiplication gates.
  Wire Affine(std::span<const int64_t> c, int128 scale) {
    std::vector<Wire> terms;
    for (size_t j = 0; j < u_.size(); ++j) {
      if (c[j] == 0) continue;
      terms.push_back(circuit_.MulConst(u_[j], Const(scale * c[j])));
    }
    if (terms.empty()) terms.push_back(circuit_.MulConst(u_[0], Fe{0}));
    return Sum(terms);
  }

  // a * x + b * y + c for wires x, y (y optional).
  Wire Linear(int128 a, Wire x, int128 c) {
    return circuit_.AddConst(circuit_.MulConst(x, Const(a)), Const(c));
  }

  const std::vector<Wire>& u() const { return u_; }

 private:
  const PrimeField& field_;
  Circuit& circuit_;
  std::vector<Wire> u_;
  std::optional<Wire> norm_;
};

absl::Status CheckDim(const std::vector<int64_t>& v, size_t dim,
                      const char* what) {
  if (v.size() != dim) {
    return MakeError(ErrorKind::kBadDimension,
                     absl::StrCat("CompilePredicate: ", what, " has ", v.size(),
                                  " coordinates, expected ", dim));
  }
  return absl::OkStatus();
}

void AddBand(const PredicateSpec& spec, size_t dim, int128 max_norm,
             std::vector<PendingInequality>& out) {
  int128 t = spec.norm_target, delta = spec.norm_band;
  // ||u||^2 - (T - delta) >= 0
  out.push_back({[t, delta](std::span<const int64_t> u) {
                   return SquaredNorm(u) - (t - delta);
                 },
                 -(t - delta), max_norm - (t - delta), 2 * delta,
                 [t, delta](Builder& b) {
                   return b.Linear(1, b.SquaredNorm(), -(t - delta));
                 }});
  // (T + delta) - ||u||^2 >= 0
  out.push_back({[t, delta](std::span<const int64_t> u) {
                   return (t + delta) - SquaredNorm(u);
                 },
                 (t + delta) - max_norm, t + delta, 2 * delta,
                 [t, delta](Builder& b) {
                   return b.Linear(-1, b.SquaredNorm(), t + delta);
                 }});
  (void)dim;
}

absl::Status Collect(const PredicateSpec& spec, const QuantParams& quant,
                     size_t dim, std::vector<PendingInequality>& out) {
  int128 bound = quant.max_abs();
  int128 max_norm = static_cast<int128>(dim) * bound * bound;
  switch (spec.kind) {
    case PredicateKind::kNormBound: {
      int128 r = spec.rho_sq;
      out.push_back(
          {[r](std::span<const int64_t> u) { return r - 1 - SquaredNorm(u); },
           r - 1 - max_norm, r - 1, r - 1,
           [r](Builder& b) { return b.Linear(-1, b.SquaredNorm(), r - 1); }});
      return absl::OkStatus();
    }
    case PredicateKind::kNormBall: {
      EIFFEL_RETURN_IF_ERROR(CheckDim(spec.reference, dim, "center"));
      std::vector<int64_t> v = spec.reference;
      int128 r = spec.rho_sq;
      int128 max_dist = 0;
      for (int64_t c : v) {
        int128 m = bound + Abs(c);
        max_dist += m * m;
      }
      out.push_back({[r, v](std::span<const int64_t> u) {
                       int128 acc = 0;
                       for (size_t j = 0; j < u.size(); ++j) {
                         int128 diff = static_cast<int128>(u[j]) - v[j];
                         acc += diff * diff;
                       }
                       return r - acc;
                     },
                     r - max_dist, r, r,
                     [r, v](Builder& b) {
                       std::vector<Wire> squares;
                       for (size_t j = 0; j < v.size(); ++j) {
                         Wire diff = b.circuit().AddConst(
                             b.u()[j], b.Const(-int128{v[j]}));
                         squares.push_back(b.circuit().Mul(diff, diff));
                       }
                       return b.Linear(-1, b.Sum(squares), r);
                     }});
      return absl::OkStatus();
    }
    case PredicateKind::kZenoPP: {
      EIFFEL_RETURN_IF_ERROR(CheckDim(spec.reference, dim, "gradient"));
      std::vector<int64_t> v = spec.reference;
      int128 g = spec.gamma, rho = spec.rho, e = spec.epsilon;
      int128 l1 = 0;
      for (int64_t c : v) l1 += Abs(c);
      int128 ip = Abs(g) * l1 * bound;
      int128 lo = -ip + e - (rho > 0 ? rho * max_norm : 0);
      int128 hi = ip + e + (rho < 0 ? -rho * max_norm : 0);
      out.push_back({[v, g, rho, e](std::span<const int64_t> u) {
                       return g * Dot(v, u) - rho * SquaredNorm(u) + e;
                     },
                     lo, hi, hi,
                     [v, g, rho, e](Builder& b) {
                       Wire ip_wire = b.Affine(v, g);
                       Wire norm_term =
                           b.circuit().MulConst(b.SquaredNorm(), b.Const(-rho));
                       return b.circuit().AddConst(
                           b.circuit().Add(ip_wire, norm_term), b.Const(e));
                     }});
      AddBand(spec, dim, max_norm, out);
      return absl::OkStatus();
    }
    case PredicateKind::kCosine: {
      EIFFEL_RETURN_IF_ERROR(CheckDim(spec.reference, dim, "reference"));
      std::vector<int64_t> v = spec.reference;
      int128 num = spec.cos_num, den = spec.cos_den, t = spec.norm_target;
      int128 l1 = 0;
      for (int64_t c : v) l1 += Abs(c);
      int128 ip = Abs(den) * l1 * bound;
      out.push_back({[v, num, den, t](std::span<const int64_t> u) {
                       return den * Dot(v, u) - num * t;
                     },
                     -ip - num * t, ip - num * t, ip - num * t,
                     [v, num, den, t](Builder& b) {
                       return b.circuit().AddConst(b.Affine(v, den),
                                                   b.Const(-num * t));
                     }});
      AddBand(spec, dim, max_norm, out);
      return absl::OkStatus();
    }
    case PredicateKind::kProduct: {
      if (spec.parts.empty()) {
        return MakeError(ErrorKind::kConfigError,
                         "CompilePredicate: empty product");
      }
      for (const PredicateSpec& part : spec.parts) {
        EIFFEL_RETURN_IF_ERROR(Collect(part, quant, dim, out));
      }
      return absl::OkStatus();
    }
  }
  return MakeError(ErrorKind::kConfigError, "CompilePredicate: unknown kind");
}

}  // namespace

PredicateSpec PredicateSpec::NormBound(int64_t rho_sq) {
  PredicateSpec s;
  s.kind = PredicateKind::kNormBound;
  s.rho_sq = rho_sq;
  return s;
}

PredicateSpec PredicateSpec::NormBall(std::vector<int64_t> center,
                                      int64_t rho_sq) {
  PredicateSpec s;
  s.kind = PredicateKind::kNormBall;
  s.reference = std::move(center);
  s.rho_sq = rho_sq;
  return s;
}

PredicateSpec PredicateSpec::ZenoPP(std::vector<int64_t> v, int64_t gamma,
                                    int64_t rho, int64_t epsilon,
                                    int64_t norm_target, int64_t norm_band) {
  PredicateSpec s;
  s.kind = PredicateKind::kZenoPP;
  s.reference = std::move(v);
  s.gamma = gamma;
  s.rho = rho;
  s.epsilon = epsilon;
  s.norm_target = norm_target;
  s.norm_band = norm_band;
  return s;
}

PredicateSpec PredicateSpec::Cosine(std::vector<int64_t> reference,
                                    int64_t cos_num, int64_t cos_den,
                                    int64_t norm_target, int64_t norm_band) {
  PredicateSpec s;
  s.kind = PredicateKind::kCosine;
  s.reference = std::move(reference);
  s.cos_num = cos_num;
  s.cos_den = cos_den;
  s.norm_target = norm_target;
  s.norm_band = norm_band;
  return s;
}

PredicateSpec PredicateSpec::Product(std::vector<PredicateSpec> parts) {
  PredicateSpec s;
  s.kind = PredicateKind::kProduct;
  s.parts = std::move(parts);
  return s;
}

std::string PredicateKindName(PredicateKind kind) {
  switch (kind) {
    case PredicateKind::kNormBound:
      return "norm_bound";
    case PredicateKind::kNormBall:
      return "norm_ball";
    case PredicateKind::kZenoPP:
      return "zeno";
    case PredicateKind::kCosine:
      return "cosine";
    case PredicateKind::kProduct:
      return "product";
  }
  return "unknown";
}

int64_t NormBandFor(int64_t norm_target, size_t dim) {
  double d = static_cast<double>(dim);
  return static_cast<int64_t>(
      std::ceil(2.0 * std::sqrt(static_cast<double>(norm_target) * d) + d));
}

absl::StatusOr<CompiledPredicate> CompilePredicate(const PrimeField& field,
                                                   const PredicateSpec& spec,
                                                   const QuantParams& quant,
                                                   size_t dim) {
  if (dim == 0) {
    return MakeError(ErrorKind::kBadDimension,
                     "CompilePredicate: dimension must be positive");
  }
  std::vector<PendingInequality> pending;
  EIFFEL_RETURN_IF_ERROR(Collect(spec, quant, dim, pending));

  CompiledPredicate out;
  out.dim = dim;
  int128 p = field.modulus();
  for (const PendingInequality& ineq : pending) {
    size_t bits =
        std::max<size_t>(1, BitLength(std::max<int128>(ineq.hi_valid, 0)));
    if (spec.slack_bits != 0) {
      if (spec.slack_bits < bits) {
        return MakeError(ErrorKind::kSlackOverflow,
                         absl::StrCat("CompilePredicate: ", spec.slack_bits,
                                      " slack bits cannot hold the maximum "
                                      "slack, need ",
                                      bits));
      }
      bits = spec.slack_bits;
    }
    if (bits > 62) {
      return MakeError(ErrorKind::kSlackOverflow,
                       "CompilePredicate: slack wider than 62 bits");
    }
    int128 top = (int128{1} << bits) - 1;
    if (ineq.hi >= p || top - ineq.lo >= p) {
      return MakeError(ErrorKind::kSlackOverflow,
                       "CompilePredicate: slack range wraps around the field "
                       "modulus; lower clip/scale or use a larger field");
    }
    out.inequalities.push_back({ineq.slack, bits, out.num_aux});
    out.num_aux += bits;
  }

  Circuit circuit(dim + out.num_aux);
  circuit.set_convention(OutputConvention::kZeroOnSuccess);
  Builder builder(field, circuit, dim);
  for (size_t i = 0; i < pending.size(); ++i) {
    const CompiledPredicate::Inequality& ineq = out.inequalities[i];
    Wire acc = pending[i].build(builder);
    for (size_t k = 0; k < ineq.bits; ++k) {
      Wire bit = static_cast<Wire>(dim + ineq.offset + k);
      acc = circuit.Add(
          acc, circuit.MulConst(bit, builder.Const(-(int128{1} << k))));
    }
    circuit.AddOutput(acc);
    for (size_t k = 0; k < ineq.bits; ++k) {
      Wire bit = static_cast<Wire>(dim + ineq.offset + k);
      circuit.AddOutput(circuit.Sub(field, circuit.Mul(bit, bit), bit));
    }
  }
  EIFFEL_RETURN_IF_ERROR(circuit.Validate());
  out.circuit = std::move(circuit);
  return out;
}

absl::StatusOr<std::vector<Fe>> WitnessInputs(const PrimeField& field,
                                              const CompiledPredicate& pred,
                                              std::span<const int64_t> u) {
  if (u.size() != pred.dim) {
    return MakeError(ErrorKind::kBadDimension,
                     absl::StrCat("WitnessInputs: update has ", u.size(),
                                  " coordinates, expected ", pred.dim));
  }
  std::vector<Fe> inputs = IntsToField(field, u);
  inputs.resize(pred.dim + pred.num_aux, field.Zero());
  for (const CompiledPredicate::Inequality& ineq : pred.inequalities) {
    unsigned __int128 s = static_cast<unsigned __int128>(ineq.slack(u));
    for (size_t k = 0; k < ineq.bits; ++k) {
      inputs[pred.dim + ineq.offset + k] =
          Fe{static_cast<uint64_t>((s >> k) & 1)};
    }
  }
  return inputs;
}

Wire EqualityProduct(const PrimeField& field, Circuit& circuit, Wire phi,
                     std::span<const Fe> constants) {
  Wire acc = circuit.AddConst(phi, field.Neg(constants[0]));
  for (size_t k = 1; k < constants.size(); ++k) {
    acc = circuit.Mul(acc, circuit.AddConst(phi, field.Neg(constants[k])));
  }
  return acc;
}

absl::StatusOr<Circuit> CombineCircuits(std::span<const Circuit> circuits) {
  if (circuits.empty()) {
    return MakeError(ErrorKind::kBadArity, "CombineCircuits: no circuits");
  }
  size_t num_inputs = circuits[0].num_inputs();
  Circuit out(num_inputs);
  out.set_convention(OutputConvention::kZeroOnSuccess);
  for (const Circuit& c : circuits) {
    if (c.num_inputs() != num_inputs ||
        c.convention() != OutputConvention::kZeroOnSuccess) {
      return MakeError(ErrorKind::kBadArity,
                       "CombineCircuits: circuits must share inputs and be "
                       "zero-on-success");
    }
    // Wire w of c maps to w itself for inputs, or to the re-emitted gate.
    std::vector<Wire> map(c.num_wires());
    for (size_t i = 0; i < num_inputs; ++i) map[i] = static_cast<Wire>(i);
    for (size_t k = 0; k < c.gates().size(); ++k) {
      const Gate& g = c.gates()[k];
      Wire w = 0;
      switch (g.kind) {
        case GateKind::kAdd:
          w = out.Add(map[g.left], map[g.right]);
          break;
        case GateKind::kMul:
          w = out.Mul(map[g.left], map[g.right]);
          break;
        case GateKind::kAddConst:
          w = out.AddConst(map[g.left], g.constant);
          break;
        case GateKind::kMulConst:
          w = out.MulConst(map[g.left], g.constant);
          break;
      }
      map[num_inputs + k] = w;
    }
    for (Wire o : c.outputs()) out.AddOutput(map[o]);
  }
  return out;
}

std::vector<Fe> DrawCombination(const PrimeField& field, size_t num_outputs,
                                Prng& prng) {
  std::vector<Fe> l(num_outputs);
  for (Fe& x : l) x = field.Random(prng);
  return l;
}

Fe CombineOutputs(const PrimeField& field, const Circuit& circuit,
                  const WireTrace& trace, std::span<const Fe> coeffs) {
  Fe acc = field.Zero();
  for (size_t k = 0; k < circuit.outputs().size(); ++k) {
    acc = field.MulAdd(coeffs[k], trace.values[circuit.outputs()[k]], acc);
  }
  return acc;
}

}  // namespace eiffel
