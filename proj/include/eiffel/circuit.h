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

#ifndef EIFFEL_CIRCUIT_H_
#define EIFFEL_CIRCUIT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/field.h"

namespace eiffel {

using Wire = uint32_t;

enum class GateKind { kAdd, kMul, kAddConst, kMulConst };

struct Gate {
  GateKind kind;
  Wire left;
  // Second operand of kAdd/kMul, unused otherwise.
  Wire right = 0;
  // Constant of kAddConst/kMulConst.
  Fe constant;
};

// kOneOnSuccess: a single output wire that equals 1 for valid inputs.
// kZeroOnSuccess: every output wire equals 0 for valid inputs. Verifiers check
// a random linear combination of the outputs, drawn after inputs are fixed.
enum class OutputConvention { kOneOnSuccess, kZeroOnSuccess };

// Arithmetic circuit over a prime field. Wires 0..num_inputs-1 are inputs and
// gate k drives wire num_inputs + k. Multiplication gates are numbered 1..M
// in gate order.
class Circuit {
 public:
  explicit Circuit(size_t num_inputs = 0) : num_inputs_(num_inputs) {}

  Wire Add(Wire a, Wire b);
  Wire Sub(const PrimeField& field, Wire a, Wire b);
  Wire Mul(Wire a, Wire b);
  Wire AddConst(Wire a, Fe c);
  Wire MulConst(Wire a, Fe c);

  void AddOutput(Wire w) { outputs_.push_back(w); }
  void set_convention(OutputConvention c) { convention_ = c; }

  size_t num_inputs() const { return num_inputs_; }
  size_t num_wires() const { return num_inputs_ + gates_.size(); }
  size_t num_mul_gates() const { return mul_gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  // Gate indices of the multiplication gates, in order.
  const std::vector<size_t>& mul_gates() const { return mul_gates_; }
  const std::vector<Wire>& outputs() const { return outputs_; }
  OutputConvention convention() const { return convention_; }

  // Checks wiring (operands precede their gate) and output arity.
  absl::Status Validate() const;

  // Line format: "inputs <n> output <wire> muls <M>", then one gate per line
  // ("ADD a b", "MUL a b", "ADDC a c", "MULC a c"). Further outputs follow as
  // "OUT w" lines and a zero-on-success circuit ends with "CONVENTION zero".
  std::string ToText() const;
  static absl::StatusOr<Circuit> FromText(std::string_view text,
                                          const PrimeField& field);

  friend bool operator==(const Circuit& a, const Circuit& b);

 private:
  Wire Push(Gate g);

  size_t num_inputs_;
  std::vector<Gate> gates_;
  std::vector<size_t> mul_gates_;
  std::vector<Wire> outputs_;
  OutputConvention convention_ = OutputConvention::kOneOnSuccess;
};

struct WireTrace {
  std::vector<Fe> values;
};

// Fails with BadArity when inputs.size() != num_inputs().
absl::StatusOr<WireTrace> Evaluate(const PrimeField& field,
                                   const Circuit& circuit,
                                   std::span<const Fe> inputs);

// Whether the trace satisfies the circuit's output convention.
bool IsAccepting(const Circuit& circuit, const WireTrace& trace);

}  // namespace eiffel

#endif  // EIFFEL_CIRCUIT_H_
