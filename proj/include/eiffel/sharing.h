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

#ifndef EIFFEL_SHARING_H_
#define EIFFEL_SHARING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/commitment.h"
#include "eiffel/field.h"
#include "eiffel/polynomial.h"
#include "eiffel/prng.h"

namespace eiffel {

struct ShareSet {
  size_t threshold = 0;
  std::vector<Point> points;

  friend bool operator==(const ShareSet&, const ShareSet&) = default;
};

// Feldman commitments psi_k = g^{c_k} to the coefficients of a sharing
// polynomial, stored back to back.
struct CheckString {
  size_t threshold = 0;
  std::vector<uint8_t> commitments;

  friend bool operator==(const CheckString&, const CheckString&) = default;
};

struct VectorSharing {
  // shares[j][k]: share of secret k at eval point j.
  std::vector<std::vector<Fe>> shares;
  std::vector<CheckString> checks;
};

struct ReconReport {
  Fe secret;
  Polynomial polynomial;
  // x coordinates of the shares that disagree with the decoded polynomial.
  std::vector<Fe> error_locations;
};

// Verifiable secret sharing over a field with commitments in a group whose
// order is the field modulus.
class Vss {
 public:
  Vss(const PrimeField& field, const CommitmentGroup& group)
      : field_(field), group_(group) {}

  const PrimeField& field() const { return field_; }
  const CommitmentGroup& group() const { return group_; }

  // Shares with a uniformly random polynomial of degree threshold - 1.
  absl::StatusOr<std::pair<ShareSet, CheckString>> Share(
      Fe secret, std::span<const Fe> eval_points, size_t threshold,
      Prng& prng) const;

  // Shares with a caller-chosen polynomial (constant term is the secret).
  absl::StatusOr<std::pair<ShareSet, CheckString>> ShareWithPolynomial(
      const Polynomial& poly, std::span<const Fe> eval_points,
      size_t threshold) const;

  // Shares every secret independently at the same eval points.
  absl::StatusOr<VectorSharing> ShareVector(std::span<const Fe> secrets,
                                            std::span<const Fe> eval_points,
                                            size_t threshold, Prng& prng) const;

  CheckString Commit(const Polynomial& poly, size_t threshold) const;

  bool Verify(Point share, const CheckString& check) const;

 private:
  const PrimeField& field_;
  const CommitmentGroup& group_;
};

// Checks eval points are nonzero and distinct and 1 <= threshold <= count.
absl::Status ValidateSharingParams(std::span<const Fe> eval_points,
                                   size_t threshold);

// Interpolates the first `threshold` shares at zero.
absl::StatusOr<Fe> Reconstruct(const PrimeField& field, const ShareSet& shares);

// Gao decoding: recovers the degree < threshold polynomial when at most
// (points - threshold) / 2 shares are wrong. Fails with DecodeFailure when no
// such polynomial exists, and never returns a polynomial that disagrees with
// more shares than that.
absl::StatusOr<ReconReport> RobustReconstruct(const PrimeField& field,
                                              std::span<const Point> points,
                                              size_t threshold);

// Decodes two independent random subsets of size threshold + 2(m - erasures)
// and accepts only when they agree. `erasures` is the number of shares known to
// be missing out of the nominal total.
absl::StatusOr<ReconReport> ProbabilisticReconstruct(
    const PrimeField& field, std::span<const Point> points, size_t threshold,
    size_t m, size_t erasures, Prng& prng);

// Splits a random permutation of the shares into `partitions` disjoint groups
// of `threshold` shares, interpolates each and returns the polynomial found by
// the most groups (at least two).
absl::StatusOr<ReconReport> PartitionReconstruct(const PrimeField& field,
                                                 std::span<const Point> points,
                                                 size_t threshold,
                                                 size_t partitions, Prng& prng);

enum class ReconStrategy { kGao, kProbabilistic, kPartition };

std::string ReconStrategyName(ReconStrategy strategy);
absl::StatusOr<ReconStrategy> ParseReconStrategy(std::string_view name);

// Parameters for ReconstructWithStrategy beyond the shares themselves.
struct ReconOptions {
  ReconStrategy strategy = ReconStrategy::kGao;
  size_t threshold = 1;
  // Corruption bound and known-missing count, for the probabilistic subsets.
  size_t m = 0;
  size_t erasures = 0;
  // Partition count for the partition strategy.
  size_t partitions = 2;
};

// Runs the selected decoder. When the probabilistic or partition check does
// not settle (disagreement, or too few shares for its subsets), falls back to
// Gao decoding and sets *fell_back.
absl::StatusOr<ReconReport> ReconstructWithStrategy(
    const PrimeField& field, std::span<const Point> points,
    const ReconOptions& options, Prng& prng, bool* fell_back = nullptr);

}  // namespace eiffel

#endif  // EIFFEL_SHARING_H_
