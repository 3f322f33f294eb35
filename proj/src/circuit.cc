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

#include "eiffel/circuit.h"

#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "eiffel/status.h"

namespace eiffel {

Wire Circuit::Push(Gate g) {
  if (g.kind == GateKind::kMul) mul_gates_.push_back(gates_.size());
  gates_.push_back(g);
  return static_cast<Wire>(num_inputs_ + gates_.size() - 1);
}

Wire Circuit::Add(Wire a, Wire b) { return Push({GateKind::kAdd, a, b, Fe{}}); }

Wire Circuit::Sub(const PrimeField& field, Wire a, Wire b) {
  return Add(a, MulConst(b, field.Neg(field.One())));
}

Wire Circuit::Mul(Wire a, Wire b) { return Push({GateKind::kMul, a, b, Fe{}}); }

Wire Circuit::AddConst(Wire a, Fe c) {
  return Push({GateKind::kAddConst, a, 0, c});
}

Wire Circuit::MulConst(Wire a, Fe c) {
  return Push({GateKind::kMulConst, a, 0, c});
}

absl::Status Circuit::Validate() const {
  for (size_t k = 0; k < gates_.size(); ++k) {
    const Gate& g = gates_[k];
    Wire self = static_cast<Wire>(num_inputs_ + k);
    bool binary = g.kind == GateKind::kAdd || g.kind == GateKind::kMul;
    if (g.left >= self || (binary && g.right >= self)) {
      return MakeError(ErrorKind::kBadArity,
                       absl::StrCat("Circuit: gate ", k,
                                    " reads a wire that is not yet defined"));
    }
  }
  if (outputs_.empty()) {
    return MakeError(ErrorKind::kBadArity, "Circuit: no output wire");
  }
  for (Wire w : outputs_) {
    if (w >= num_wires()) {
      return MakeError(ErrorKind::kBadArity, "Circuit: output out of range");
    }
  }
  if (convention_ == OutputConvention::kOneOnSuccess && outputs_.size() != 1) {
    return MakeError(ErrorKind::kBadArity,
                     "Circuit: one-on-success circuits have one output");
  }
  return absl::OkStatus();
}

std::string Circuit::ToText() const {
  std::ostringstream out;
  out << "inputs " << num_inputs_ << " output "
      << (outputs_.empty() ? 0 : outputs_[0]) << " muls " << mul_gates_.size()
      << "\n";
  for (const Gate& g : gates_) {
    switch (g.kind) {
      case GateKind::kAdd:
        out << "ADD " << g.left << " " << g.right << "\n";
        break;
      case GateKind::kMul:
        out << "MUL " << g.left << " " << g.right << "\n";
        break;
      case GateKind::kAddConst:
        out << "ADDC " << g.left << " " << g.constant.v << "\n";
        break;
      case GateKind::kMulConst:
        out << "MULC " << g.left << " " << g.constant.v << "\n";
        break;
    }
  }
  for (size_t i = 1; i < outputs_.size(); ++i)
    out << "OUT " << outputs_[i] << "\n";
  if (convention_ == OutputConvention::kZeroOnSuccess) {
    out << "CONVENTION zero\n";
  }
  return out.str();
}

absl::StatusOr<Circuit> Circuit::FromText(std::string_view text,
                                          const PrimeField& field) {
  auto bad = [](std::string_view why) {
    return MakeError(ErrorKind::kBadEncoding,
                     absl::StrCat("Circuit::FromText: ",
                                  absl::string_view(why.data(), why.size())));
  };
  std::vector<absl::string_view> lines =
      absl::StrSplit(absl::string_view(text.data(), text.size()), '\n',
                     absl::SkipWhitespace());
  if (lines.empty()) return bad("empty input");
  std::vector<absl::string_view> header =
      absl::StrSplit(lines[0], ' ', absl::SkipEmpty());
  uint64_t num_inputs, output, muls;
  if (header.size() != 6 || header[0] != "inputs" || header[2] != "output" ||
      header[4] != "muls" || !absl::SimpleAtoi(header[1], &num_inputs) ||
      !absl::SimpleAtoi(header[3], &output) ||
      !absl::SimpleAtoi(header[5], &muls)) {
    return bad("malformed header");
  }
  Circuit circuit(num_inputs);
  circuit.AddOutput(static_cast<Wire>(output));
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> tok =
        absl::StrSplit(lines[i], ' ', absl::SkipEmpty());
    if (tok.size() == 2 && tok[0] == "CONVENTION") {
      if (tok[1] == "zero") {
        circuit.set_convention(OutputConvention::kZeroOnSuccess);
      } else if (tok[1] != "one") {
        return bad("unknown convention");
      }
      continue;
    }
    uint64_t a, b;
    if (tok.size() == 2 && tok[0] == "OUT" && absl::SimpleAtoi(tok[1], &a)) {
      circuit.AddOutput(static_cast<Wire>(a));
      continue;
    }
    if (tok.size() != 3 || !absl::SimpleAtoi(tok[1], &a) ||
        !absl::SimpleAtoi(tok[2], &b)) {
      return bad(absl::StrCat("malformed line ", i + 1));
    }
    if (tok[0] == "ADD") {
      circuit.Add(static_cast<Wire>(a), static_cast<Wire>(b));
    } else if (tok[0] == "MUL") {
      circuit.Mul(static_cast<Wire>(a), static_cast<Wire>(b));
    } else if (tok[0] == "ADDC") {
      circuit.AddConst(static_cast<Wire>(a), field.FromU64(b));
    } else if (tok[0] == "MULC") {
      circuit.MulConst(static_cast<Wire>(a), field.FromU64(b));
    } else {
      return bad(absl::StrCat("unknown gate on line ", i + 1));
    }
  }
  if (circuit.num_mul_gates() != muls) return bad("mul gate count mismatch");
  EIFFEL_RETURN_IF_ERROR(circuit.Validate());
  return circuit;
}

bool operator==(const Circuit& a, const Circuit& b) {
  if (a.num_inputs_ != b.num_inputs_ || a.outputs_ != b.outputs_ ||
      a.convention_ != b.convention_ || a.gates_.size() != b.gates_.size()) {
    return false;
  }
  for (size_t k = 0; k < a.gates_.size(); ++k) {
    const Gate& x = a.gates_[k];
    const Gate& y = b.gates_[k];
    if (x.kind != y.kind || x.left != y.left) return false;
    bool binary = x.kind == GateKind::kAdd || x.kind == GateKind::kMul;
    if (binary ? x.right != y.right : x.constant != y.constant) return false;
  }
  return true;
}

absl::StatusOr<WireTrace> Evaluate(const PrimeField& field,
                                   const Circuit& circuit,
                                   std::span<const Fe> inputs) {
  if (inputs.size() != circuit.num_inputs()) {
    return MakeError(
        ErrorKind::kBadArity,
        absl::StrCat("Evaluate: circuit takes ", circuit.num_inputs(),
                     " inputs, got ", inputs.size()));
  }
  WireTrace trace;
  trace.values.reserve(circuit.num_wires());
  trace.values.assign(inputs.begin(), inputs.end());
  for (const Gate& g : circuit.gates()) {
    const std::vector<Fe>& v = trace.values;
    Fe out;
    switch (g.kind) {
      case GateKind::kAdd:
        out = field.Add(v[g.left], v[g.right]);
        break;
      case GateKind::kMul:
        out = field.Mul(v[g.left], v[g.right]);
        break;
      case GateKind::kAddConst:
        out = field.Add(v[g.left], g.constant);
        break;
      case GateKind::kMulConst:
        out = field.Mul(v[g.left], g.constant);
        break;
    }
    trace.values.push_back(out);
  }
  return trace;
}

bool IsAccepting(const Circuit& circuit, const WireTrace& trace) {
  if (circuit.convention() == OutputConvention::kOneOnSuccess) {
    return trace.values[circuit.outputs()[0]] == Fe{1};
  }
  for (Wire w : circuit.outputs()) {
    if (trace.values[w].v != 0) return false;
  }
  return true;
}

}  // namespace eiffel
