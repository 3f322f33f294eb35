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

#include "eiffel/sharing.h"

#include <algorithm>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

std::vector<Fe> ErrorLocations(const PrimeField& field, const Polynomial& poly,
                               std::span<const Point> points) {
  std::vector<Fe> errors;
  for (const Point& pt : points) {
    if (PolyEval(field, poly, pt.x) != pt.y) errors.push_back(pt.x);
  }
  return errors;
}

absl::Status CheckDistinct(std::span<const Point> points) {
  std::set<uint64_t> seen;
  for (const Point& pt : points) {
    if (!seen.insert(pt.x.v).second) {
      return MakeError(ErrorKind::kDuplicateAbscissa,
                       "reconstruction: duplicate share index");
    }
  }
  return absl::OkStatus();
}

std::vector<Point> Sample(std::span<const Point> points, size_t count,
                          Prng& prng) {
  std::vector<Point> pool(points.begin(), points.end());
  for (size_t i = 0; i < count; ++i) {
    size_t j = i + prng.Uniform(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

absl::Status ValidateSharingParams(std::span<const Fe> eval_points,
                                   size_t threshold) {
  if (threshold < 1 || threshold > eval_points.size()) {
    return MakeError(ErrorKind::kBadThreshold,
                     absl::StrCat("threshold ", threshold, " outside [1, ",
                                  eval_points.size(), "]"));
  }
  std::set<uint64_t> seen;
  for (Fe x : eval_points) {
    if (x.v == 0) {
      return MakeError(ErrorKind::kDuplicateAbscissa,
                       "eval point 0 would reveal the secret");
    }
    if (!seen.insert(x.v).second) {
      return MakeError(ErrorKind::kDuplicateAbscissa, "duplicate eval point");
    }
  }
  return absl::OkStatus();
}

CheckString Vss::Commit(const Polynomial& poly, size_t threshold) const {
  CheckString check;
  check.threshold = threshold;
  size_t es = group_.element_size();
  check.commitments.resize(threshold * es);
  for (size_t k = 0; k < threshold; ++k) {
    group_.Commit(poly.Coefficient(k), check.commitments.data() + k * es);
  }
  return check;
}

absl::StatusOr<std::pair<ShareSet, CheckString>> Vss::ShareWithPolynomial(
    const Polynomial& poly, std::span<const Fe> eval_points,
    size_t threshold) const {
  EIFFEL_RETURN_IF_ERROR(ValidateSharingParams(eval_points, threshold));
  if (poly.degree() >= static_cast<int>(threshold)) {
    return MakeError(ErrorKind::kBadThreshold,
                     "Vss::ShareWithPolynomial: degree must be below the "
                     "threshold");
  }
  ShareSet set;
  set.threshold = threshold;
  for (Fe x : eval_points) set.points.push_back({x, PolyEval(field_, poly, x)});
  return std::make_pair(std::move(set), Commit(poly, threshold));
}

absl::StatusOr<std::pair<ShareSet, CheckString>> Vss::Share(
    Fe secret, std::span<const Fe> eval_points, size_t threshold,
    Prng& prng) const {
  EIFFEL_RETURN_IF_ERROR(ValidateSharingParams(eval_points, threshold));
  std::vector<Fe> coeffs(threshold);
  coeffs[0] = secret;
  for (size_t k = 1; k < threshold; ++k) coeffs[k] = field_.Random(prng);
  return ShareWithPolynomial(Polynomial(std::move(coeffs)), eval_points,
                             threshold);
}

absl::StatusOr<VectorSharing> Vss::ShareVector(std::span<const Fe> secrets,
                                               std::span<const Fe> eval_points,
                                               size_t threshold,
                                               Prng& prng) const {
  EIFFEL_RETURN_IF_ERROR(ValidateSharingParams(eval_points, threshold));
  VectorSharing out;
  out.shares.assign(eval_points.size(), std::vector<Fe>(secrets.size()));
  out.checks.resize(secrets.size());
  size_t es = group_.element_size();
  std::vector<Fe> coeffs(threshold);
  for (size_t k = 0; k < secrets.size(); ++k) {
    coeffs[0] = secrets[k];
    for (size_t c = 1; c < threshold; ++c) coeffs[c] = field_.Random(prng);
    for (size_t j = 0; j < eval_points.size(); ++j) {
      Fe acc = field_.Zero();
      for (size_t c = threshold; c-- > 0;) {
        acc = field_.MulAdd(acc, eval_points[j], coeffs[c]);
      }
      out.shares[j][k] = acc;
    }
    CheckString& check = out.checks[k];
    check.threshold = threshold;
    check.commitments.resize(threshold * es);
    for (size_t c = 0; c < threshold; ++c) {
      group_.Commit(coeffs[c], check.commitments.data() + c * es);
    }
  }
  return out;
}

bool Vss::Verify(Point share, const CheckString& check) const {
  if (check.threshold == 0 ||
      check.commitments.size() != check.threshold * group_.element_size()) {
    return false;
  }
  return group_.VerifyShare(share.x.v, share.y, check.commitments.data(),
                            check.threshold);
}

absl::StatusOr<Fe> Reconstruct(const PrimeField& field,
                               const ShareSet& shares) {
  if (shares.threshold == 0) {
    return MakeError(ErrorKind::kBadThreshold, "Reconstruct: threshold is 0");
  }
  if (shares.points.size() < shares.threshold) {
    return MakeError(ErrorKind::kInsufficientShares,
                     absl::StrCat("Reconstruct: have ", shares.points.size(),
                                  " shares, need ", shares.threshold));
  }
  std::span<const Point> used(shares.points.data(), shares.threshold);
  EIFFEL_RETURN_IF_ERROR(CheckDistinct(used));
  // Lagrange at zero.
  Fe secret = field.Zero();
  for (size_t i = 0; i < used.size(); ++i) {
    Fe num = field.One();
    Fe den = field.One();
    for (size_t j = 0; j < used.size(); ++j) {
      if (j == i) continue;
      num = field.Mul(num, used[j].x);
      den = field.Mul(den, field.Sub(used[j].x, used[i].x));
    }
    secret = field.Add(secret, field.Mul(used[i].y, field.Div(num, den)));
  }
  return secret;
}

absl::StatusOr<ReconReport> RobustReconstruct(const PrimeField& field,
                                              std::span<const Point> points,
                                              size_t threshold) {
  if (threshold == 0) {
    return MakeError(ErrorKind::kBadThreshold,
                     "RobustReconstruct: threshold is 0");
  }
  size_t n = points.size();
  if (n < threshold) {
    return MakeError(ErrorKind::kInsufficientShares,
                     absl::StrCat("RobustReconstruct: have ", n,
                                  " shares, need ", threshold));
  }
  EIFFEL_ASSIGN_OR_RETURN(Polynomial g1, Interpolate(field, points));
  Polynomial f;
  if (g1.degree() < static_cast<int>(threshold)) {
    f = std::move(g1);
  } else {
    std::vector<Fe> xs(n);
    for (size_t i = 0; i < n; ++i) xs[i] = points[i].x;
    // Partial extended Euclid on (g0, g1), tracking only the g1 cofactor.
    Polynomial r_prev = VanishingPolynomial(field, xs);
    Polynomial r = std::move(g1);
    Polynomial v_prev;
    Polynomial v({field.One()});
    // Stop once deg r < (n + threshold) / 2.
    while (!r.IsZero() && 2 * r.degree() >= static_cast<int>(n + threshold)) {
      EIFFEL_ASSIGN_OR_RETURN(auto qr, PolyDivMod(field, r_prev, r));
      Polynomial v_next = PolySub(field, v_prev, PolyMul(field, qr.first, v));
      r_prev = std::move(r);
      r = std::move(qr.second);
      v_prev = std::move(v);
      v = std::move(v_next);
    }
    if (v.IsZero()) {
      return MakeError(ErrorKind::kDecodeFailure,
                       "RobustReconstruct: degenerate error locator");
    }
    EIFFEL_ASSIGN_OR_RETURN(auto qr, PolyDivMod(field, r, v));
    if (!qr.second.IsZero() ||
        qr.first.degree() >= static_cast<int>(threshold)) {
      return MakeError(ErrorKind::kDecodeFailure,
                       "RobustReconstruct: too many corrupted shares");
    }
    f = std::move(qr.first);
  }
  ReconReport report;
  report.error_locations = ErrorLocations(field, f, points);
  if (2 * report.error_locations.size() > n - threshold) {
    return MakeError(ErrorKind::kDecodeFailure,
                     "RobustReconstruct: decoded polynomial disagrees with "
                     "too many shares");
  }
  report.secret = f.Coefficient(0);
  report.polynomial = std::move(f);
  return report;
}

absl::StatusOr<ReconReport> ProbabilisticReconstruct(
    const PrimeField& field, std::span<const Point> points, size_t threshold,
    size_t m, size_t erasures, Prng& prng) {
  EIFFEL_RETURN_IF_ERROR(CheckDistinct(points));
  size_t slack = m >= erasures ? m - erasures : 0;
  size_t subset = threshold + 2 * slack;
  if (points.size() < subset) {
    return MakeError(
        ErrorKind::kInsufficientShares,
        absl::StrCat("ProbabilisticReconstruct: have ", points.size(),
                     " shares, subsets need ", subset));
  }
  std::vector<Point> first = Sample(points, subset, prng);
  std::vector<Point> second = Sample(points, subset, prng);
  EIFFEL_ASSIGN_OR_RETURN(ReconReport a,
                          RobustReconstruct(field, first, threshold));
  EIFFEL_ASSIGN_OR_RETURN(ReconReport b,
                          RobustReconstruct(field, second, threshold));
  if (!(a.polynomial == b.polynomial)) {
    return MakeError(ErrorKind::kDecodeFailure,
                     "ProbabilisticReconstruct: subsets decode differently");
  }
  a.error_locations = ErrorLocations(field, a.polynomial, points);
  return a;
}

absl::StatusOr<ReconReport> PartitionReconstruct(const PrimeField& field,
                                                 std::span<const Point> points,
                                                 size_t threshold,
                                                 size_t partitions,
                                                 Prng& prng) {
  EIFFEL_RETURN_IF_ERROR(CheckDistinct(points));
  if (threshold == 0 || partitions < 2) {
    return MakeError(ErrorKind::kBadThreshold,
                     "PartitionReconstruct: need threshold >= 1 and at least "
                     "two partitions");
  }
  if (points.size() < threshold * partitions) {
    return MakeError(ErrorKind::kInsufficientShares,
                     absl::StrCat("PartitionReconstruct: have ", points.size(),
                                  " shares, need ", threshold * partitions));
  }
  std::vector<Point> shuffled = Sample(points, threshold * partitions, prng);
  std::vector<Polynomial> polys;
  for (size_t k = 0; k < partitions; ++k) {
    std::span<const Point> part(shuffled.data() + k * threshold, threshold);
    EIFFEL_ASSIGN_OR_RETURN(Polynomial poly, Interpolate(field, part));
    polys.push_back(std::move(poly));
  }
  size_t best = 0, best_count = 0;
  bool tie = false;
  for (size_t i = 0; i < polys.size(); ++i) {
    size_t count = 0;
    for (const Polynomial& other : polys) count += (other == polys[i]);
    if (count > best_count) {
      best = i;
      best_count = count;
      tie = false;
    } else if (count == best_count && !(polys[i] == polys[best])) {
      tie = true;
    }
  }
  if (best_count < 2 || tie) {
    return MakeError(ErrorKind::kDecodeFailure,
                     "PartitionReconstruct: no unique matching pair of "
                     "partitions");
  }
  ReconReport report;
  report.polynomial = polys[best];
  report.secret = report.polynomial.Coefficient(0);
  report.error_locations = ErrorLocations(field, report.polynomial, points);
  return report;
}

std::string ReconStrategyName(ReconStrategy strategy) {
  switch (strategy) {
    case ReconStrategy::kGao:
      return "gao";
    case ReconStrategy::kProbabilistic:
      return "probabilistic";
    case ReconStrategy::kPartition:
      return "partition";
  }
  return "unknown";
}

absl::StatusOr<ReconStrategy> ParseReconStrategy(std::string_view name) {
  if (name == "gao") return ReconStrategy::kGao;
  if (name == "probabilistic") return ReconStrategy::kProbabilistic;
  if (name == "partition") return ReconStrategy::kPartition;
  return MakeError(
      ErrorKind::kConfigError,
      absl::StrCat("unknown reconstruction strategy '",
                   absl::string_view(name.data(), name.size()), "'"));
}

absl::StatusOr<ReconReport> ReconstructWithStrategy(
    const PrimeField& field, std::span<const Point> points,
    const ReconOptions& options, Prng& prng, bool* fell_back) {
  if (fell_back != nullptr) *fell_back = false;
  absl::StatusOr<ReconReport> report;
  switch (options.strategy) {
    case ReconStrategy::kGao:
      return RobustReconstruct(field, points, options.threshold);
    case ReconStrategy::kProbabilistic:
      report = ProbabilisticReconstruct(field, points, options.threshold,
                                        options.m, options.erasures, prng);
      break;
    case ReconStrategy::kPartition:
      report = PartitionReconstruct(field, points, options.threshold,
                                    options.partitions, prng);
      break;
  }
  if (report.ok()) return report;
  if (!IsErrorKind(report.status(), ErrorKind::kDecodeFailure) &&
      !IsErrorKind(report.status(), ErrorKind::kInsufficientShares)) {
    return report;
  }
  if (fell_back != nullptr) *fell_back = true;
  return RobustReconstruct(field, points, options.threshold);
}

}  // namespace eiffel
