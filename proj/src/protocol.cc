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

#include "eiffel/protocol.h"

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "eiffel/commitment.h"
#include "eiffel/crypto.h"
#include "eiffel/encoding.h"
#include "eiffel/snip.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

// Bulletin tags. The phase is the part before the slash.
constexpr char kKeysTag[] = "r1/keys";
constexpr char kValidTag[] = "r1/valid";
constexpr char kSharesTag[] = "r2/shares";
constexpr char kFlagsTag[] = "r3i/flags";
constexpr char kRequestTag[] = "arb/request";
constexpr char kRevealTag[] = "arb/reveal";
constexpr char kChallengeTag[] = "chal/cstar";
constexpr char kSummaryTag[] = "r3ii/summary";
constexpr char kOpeningTag[] = "open/de";
constexpr char kLambdaTag[] = "r3iii/lambda";
constexpr char kFinalTag[] = "final/cstar";
constexpr char kDisputeTag[] = "dispute/transcript";
constexpr char kShareSumTag[] = "r4/aggregate";
constexpr char kOutputTag[] = "out/aggregate";

enum class ClientPhase { kRound1, kRound2, kRound3, kRound4, kDone };

struct PeerChecks {
  std::vector<CheckString> inputs;
  std::vector<CheckString> proof;
};

struct ClientState {
  ClientState(PartyId id, uint64_t seed)
      : id(id), prng(Prng::Derive(seed, id)) {}

  PartyId id;
  ClientPhase round = ClientPhase::kRound1;
  Prng prng;
  Signer signer;
  KeyPair key_pair;
  std::map<PartyId, SharedKey> keys;
  std::vector<Fe> my_update;
  SnipProof my_proof;
  SplitResult split;
  // Verified (or arbitrated) bundles by prover, including the self-share.
  std::map<PartyId, ProofBundle> received_shares;
  std::set<PartyId> flags_raised;
  std::map<PartyId, LocalEvaluation> locals;
  std::optional<ClientMisbehavior> script;
  bool aborted = false;
};

struct ServerState {
  explicit ServerState(uint64_t seed) : prng(Prng::Derive(seed, kServerId)) {}

  Prng prng;
  Signer signer;
  std::map<PartyId, std::set<PartyId>> flag_lists;
  std::vector<PartyId> c_star;
  Challenge challenge;
  std::vector<Fe> z_shares;
  std::vector<Fe> aggregate;
};

std::vector<uint8_t> EncodeBundle(const ProofBundle& b) {
  ByteWriter w;
  w.PutFe(b.index);
  w.PutFeVector(b.inputs);
  w.PutFeVector(b.proof);
  return w.Take();
}

absl::StatusOr<ProofBundle> DecodeBundle(const PrimeField& field,
                                         ByteReader& r) {
  ProofBundle b;
  EIFFEL_ASSIGN_OR_RETURN(b.index, r.ReadFe(field));
  EIFFEL_ASSIGN_OR_RETURN(b.inputs, r.FeVector(field));
  EIFFEL_ASSIGN_OR_RETURN(b.proof, r.FeVector(field));
  return b;
}

void PutIds(ByteWriter& w, std::span<const PartyId> ids) {
  w.PutU32(static_cast<uint32_t>(ids.size()));
  for (PartyId id : ids) w.PutU32(id);
}

absl::StatusOr<std::vector<PartyId>> ReadIds(ByteReader& r) {
  EIFFEL_ASSIGN_OR_RETURN(uint32_t count, r.U32());
  std::vector<PartyId> ids;
  for (uint32_t k = 0; k < count; ++k) {
    EIFFEL_ASSIGN_OR_RETURN(PartyId id, r.U32());
    ids.push_back(id);
  }
  return ids;
}

void PutChecks(ByteWriter& w, std::span<const CheckString> checks) {
  w.PutU32(static_cast<uint32_t>(checks.size()));
  for (const CheckString& c : checks) EncodeCheckString(w, c);
}

absl::StatusOr<std::vector<CheckString>> ReadChecks(ByteReader& r) {
  EIFFEL_ASSIGN_OR_RETURN(uint32_t count, r.U32());
  std::vector<CheckString> out;
  for (uint32_t k = 0; k < count; ++k) {
    EIFFEL_ASSIGN_OR_RETURN(CheckString c, DecodeCheckString(r));
    out.push_back(std::move(c));
  }
  return out;
}

// Per-prover vectors of field elements, keyed by prover id.
void PutKeyedValues(ByteWriter& w,
                    const std::map<PartyId, std::vector<Fe>>& values) {
  w.PutU32(static_cast<uint32_t>(values.size()));
  for (const auto& [id, v] : values) {
    w.PutU32(id);
    w.PutFeVector(v);
  }
}

absl::StatusOr<std::map<PartyId, std::vector<Fe>>> ReadKeyedValues(
    const PrimeField& field, std::span<const uint8_t> payload) {
  ByteReader r(payload);
  EIFFEL_ASSIGN_OR_RETURN(uint32_t count, r.U32());
  std::map<PartyId, std::vector<Fe>> out;
  for (uint32_t k = 0; k < count; ++k) {
    EIFFEL_ASSIGN_OR_RETURN(PartyId id, r.U32());
    EIFFEL_ASSIGN_OR_RETURN(std::vector<Fe> v, r.FeVector(field));
    out[id] = std::move(v);
  }
  EIFFEL_RETURN_IF_ERROR(r.ExpectDone());
  return out;
}

std::vector<uint8_t> CipherAd(PartyId from, PartyId to) {
  ByteWriter w;
  w.PutString(kSharesTag);
  w.PutU32(from);
  w.PutU32(to);
  return w.Take();
}

bool Contains(std::span<const PartyId> ids, PartyId id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

struct ChallengeEntry {
  std::vector<PartyId> c_star;
  Challenge challenge;
  std::vector<Fe> z_shares;
};

absl::StatusOr<ChallengeEntry> DecodeChallenge(const PrimeField& field,
                                               std::span<const uint8_t> p) {
  ByteReader r(p);
  ChallengeEntry c;
  EIFFEL_ASSIGN_OR_RETURN(c.c_star, ReadIds(r));
  EIFFEL_ASSIGN_OR_RETURN(c.challenge.r, r.ReadFe(field));
  EIFFEL_ASSIGN_OR_RETURN(c.challenge.output_coeffs, r.FeVector(field));
  EIFFEL_ASSIGN_OR_RETURN(c.z_shares, r.FeVector(field));
  EIFFEL_RETURN_IF_ERROR(r.ExpectDone());
  return c;
}

class Simulation {
 public:
  Simulation(const PrimeField& field, const ProtocolConfig& config,
             const ProtocolInputs& in, std::unique_ptr<CommitmentGroup> group,
             std::unique_ptr<CryptoSuite> crypto)
      : field_(field),
        config_(config),
        in_(in),
        group_(std::move(group)),
        crypto_(std::move(crypto)),
        vss_(field, *group_),
        server_(config.seed) {
    for (PartyId id = 1; id <= config.n; ++id) {
      clients_.emplace_back(id, config.seed);
      auto it = in.script.clients.find(id);
      if (it != in.script.clients.end()) clients_.back().script = it->second;
    }
    result_.parties.resize(config.n + 1);
  }

  absl::StatusOr<RunResult> Run() {
    EIFFEL_RETURN_IF_ERROR(Setup());
    EIFFEL_RETURN_IF_ERROR(Round1());
    EIFFEL_RETURN_IF_ERROR(Round2());
    EIFFEL_RETURN_IF_ERROR(FlagRound());
    EIFFEL_RETURN_IF_ERROR(Arbitration());
    EIFFEL_RETURN_IF_ERROR(PublishChallenge());
    EIFFEL_RETURN_IF_ERROR(Summaries());
    if (config_.path == SummaryPath::kBeaver && !result_.aborted) {
      EIFFEL_RETURN_IF_ERROR(Openings());
    }
    if (!result_.aborted) EIFFEL_RETURN_IF_ERROR(VerifyAll());
    if (!result_.aborted) EIFFEL_RETURN_IF_ERROR(Disputes());
    if (!result_.aborted) EIFFEL_RETURN_IF_ERROR(Round4());
    if (config_.audit_exposure) EIFFEL_RETURN_IF_ERROR(Audit());
    result_.transcript = board_.ExportTranscript();
    return std::move(result_);
  }

 private:
  ClientState& client(PartyId id) { return clients_[id - 1]; }
  bool InCStar(PartyId id) const { return Contains(server_.c_star, id); }
  void AddToCStar(PartyId id) {
    if (!InCStar(id)) server_.c_star.push_back(id);
  }

  // Runs f with its field operations charged to party id.
  template <typename F>
  absl::Status AsParty(PartyId id, F&& f) {
    ScopedOpCounter counter;
    absl::Status s = f();
    OpCounts& ops = result_.parties[id].ops;
    ops.mul += counter.counts().mul;
    ops.inv += counter.counts().inv;
    ops.group += counter.counts().group;
    return s;
  }

  const Signer& SignerOf(PartyId id) {
    return id == kServerId ? server_.signer : client(id).signer;
  }

  absl::Status Post(PartyId author, std::string_view tag,
                    std::vector<uint8_t> payload, bool conditional = false) {
    EIFFEL_ASSIGN_OR_RETURN(uint64_t seq, board_.Post(SignerOf(author), author,
                                                      tag, std::move(payload)));
    (void)seq;
    PartyMetrics& pm = result_.parties[author];
    std::optional<BulletinEntry> e = board_.Find(author, tag);
    pm.bytes_sent[std::string(PhaseOf(tag))] += EncodeEntry(*e).size();
    (conditional ? pm.conditional_steps : pm.steps)
        .push_back(
            absl::StrCat("send ", absl::string_view(tag.data(), tag.size())));
    return absl::OkStatus();
  }

  void Received(PartyId party, std::string_view what,
                bool conditional = false) {
    PartyMetrics& pm = result_.parties[party];
    (conditional ? pm.conditional_steps : pm.steps)
        .push_back(
            absl::StrCat("recv ", absl::string_view(what.data(), what.size())));
  }

  absl::Status Seal(std::string_view phase) {
    return board_.Seal(server_.signer, phase).status();
  }

  static absl::Status Advance(ClientState& c, ClientPhase from,
                              ClientPhase to) {
    if (c.round != from) {
      return absl::InternalError(
          absl::StrCat("client ", c.id, " advanced out of order"));
    }
    c.round = to;
    return absl::OkStatus();
  }

  void Abort(std::string reason) {
    result_.aborted = true;
    result_.abort_reason = std::move(reason);
    result_.aggregate.clear();
    result_.accepted.clear();
  }

  ReconOptions Options(size_t threshold, size_t nominal, size_t points) const {
    ReconOptions o;
    o.strategy = config_.recon;
    o.threshold = threshold;
    o.m = config_.m;
    o.erasures = nominal > points ? nominal - points : 0;
    o.partitions = std::max<size_t>(1, points / threshold);
    return o;
  }

  size_t LambdaThreshold() const {
    return config_.path == SummaryPath::kBeaver ? config_.m + 1
                                                : 2 * config_.m + 1;
  }

  // --- Setup and Round 1 ---

  absl::Status Setup() {
    server_.signer = Signer::Generate(server_.prng);
    EIFFEL_RETURN_IF_ERROR(
        board_.Register(kServerId, server_.signer.public_key(),
                        server_.signer.Sign(RegistrationMessage(kServerId))));
    for (ClientState& c : clients_) {
      c.signer = Signer::Generate(c.prng);
      EIFFEL_RETURN_IF_ERROR(
          board_.Register(c.id, c.signer.public_key(),
                          c.signer.Sign(RegistrationMessage(c.id))));
    }
    return absl::OkStatus();
  }

  absl::Status Round1() {
    for (ClientState& c : clients_) {
      EIFFEL_RETURN_IF_ERROR(AsParty(c.id, [&] {
        c.key_pair = crypto_->GenerateKeyPair(c.prng);
        ByteWriter w;
        w.PutBytes(c.key_pair.public_key);
        return Post(c.id, kKeysTag, w.Take());
      }));
    }
    ByteWriter w;
    w.PutString(in_.circuit.ToText());
    w.PutU32(static_cast<uint32_t>(in_.dim));
    EIFFEL_RETURN_IF_ERROR(Post(kServerId, kValidTag, w.Take()));
    EIFFEL_RETURN_IF_ERROR(Seal("r1"));

    for (ClientState& c : clients_) {
      EIFFEL_RETURN_IF_ERROR(AsParty(c.id, [&]() -> absl::Status {
        Received(c.id, "r1");
        std::optional<BulletinEntry> valid = board_.Find(kServerId, kValidTag);
        ByteReader r(valid->payload);
        EIFFEL_ASSIGN_OR_RETURN(std::string text, r.String());
        EIFFEL_ASSIGN_OR_RETURN(Circuit circuit,
                                Circuit::FromText(text, field_));
        if (!(circuit == in_.circuit)) {
          return absl::InternalError("published circuit does not round-trip");
        }
        for (const BulletinEntry& e : board_.Read(kKeysTag)) {
          if (e.author == c.id) continue;
          ByteReader kr(e.payload);
          absl::StatusOr<std::vector<uint8_t>> pk = kr.Bytes();
          if (!pk.ok()) continue;
          absl::StatusOr<SharedKey> key =
              crypto_->Agree(c.key_pair.secret_key, *pk);
          if (key.ok()) c.keys[e.author] = *key;
        }
        return Advance(c, ClientPhase::kRound1, ClientPhase::kRound2);
      }));
    }
    return absl::OkStatus();
  }

  // --- Round 2 ---

  absl::Status Round2() {
    for (ClientState& c : clients_) {
      EIFFEL_RETURN_IF_ERROR(AsParty(c.id, [&]() -> absl::Status {
        c.my_update = in_.inputs[c.id - 1];
        if (c.script.has_value() && c.script->forge_proof) {
          EIFFEL_ASSIGN_OR_RETURN(
              WireTrace forged,
              ForgeAcceptingTrace(field_, in_.circuit, c.my_update));
          c.my_proof = ProveFromTrace(field_, in_.circuit, forged, c.prng);
        } else {
          EIFFEL_ASSIGN_OR_RETURN(
              auto proved, Prove(field_, in_.circuit, c.my_update, c.prng));
          c.my_proof = std::move(proved.second);
        }
        EIFFEL_ASSIGN_OR_RETURN(
            c.split, SplitProof(vss_, c.my_update, c.my_proof, c.id, config_.n,
                                config_.m, c.prng));
        c.received_shares[c.id] = c.split.bundles[c.id - 1];
        ByteWriter w;
        PutChecks(w, c.split.input_checks);
        PutChecks(w, c.split.proof_checks);
        w.PutU32(static_cast<uint32_t>(config_.n - 1));
        for (PartyId j = 1; j <= config_.n; ++j) {
          if (j == c.id) continue;
          ProofBundle bundle = c.split.bundles[j - 1];
          if (c.script.has_value() && Contains(c.script->bad_shares_to, j)) {
            bundle.inputs[0] = field_.Add(bundle.inputs[0], field_.One());
          }
          w.PutU32(j);
          auto key = c.keys.find(j);
          w.PutBytes(key == c.keys.end()
                         ? std::vector<uint8_t>()
                         : crypto_->Encrypt(key->second, EncodeBundle(bundle),
                                            CipherAd(c.id, j), c.prng));
        }
        return Post(c.id, kSharesTag, w.Take());
      }));
    }
    return Seal("r2");
  }

  absl::StatusOr<PeerChecks> ChecksOf(PartyId author) {
    std::optional<BulletinEntry> e = board_.Find(author, kSharesTag);
    if (!e.has_value()) {
      return MakeError(ErrorKind::kBadEncoding, "missing share entry");
    }
    ByteReader r(e->payload);
    PeerChecks checks;
    EIFFEL_ASSIGN_OR_RETURN(checks.inputs, ReadChecks(r));
    EIFFEL_ASSIGN_OR_RETURN(checks.proof, ReadChecks(r));
    return checks;
  }

  // The bundle addressed to `me` in author's Round 2 entry, if it decrypts,
  // decodes and verifies.
  std::optional<ProofBundle> OpenShares(const ClientState& me, PartyId author) {
    std::optional<BulletinEntry> e = board_.Find(author, kSharesTag);
    auto key = me.keys.find(author);
    if (!e.has_value() || key == me.keys.end()) return std::nullopt;
    ByteReader r(e->payload);
    absl::StatusOr<std::vector<CheckString>> in_checks = ReadChecks(r);
    absl::StatusOr<std::vector<CheckString>> pf_checks =
        in_checks.ok() ? ReadChecks(r) : in_checks.status();
    absl::StatusOr<uint32_t> count =
        pf_checks.ok() ? r.U32() : pf_checks.status();
    if (!count.ok()) return std::nullopt;
    for (uint32_t k = 0; k < *count; ++k) {
      absl::StatusOr<uint32_t> to = r.U32();
      absl::StatusOr<std::vector<uint8_t>> ct =
          to.ok() ? r.Bytes()
                  : absl::StatusOr<std::vector<uint8_t>>(to.status());
      if (!ct.ok()) return std::nullopt;
      if (*to != me.id) continue;
      std::optional<std::vector<uint8_t>> plain =
          crypto_->Decrypt(key->second, *ct, CipherAd(author, me.id));
      if (!plain.has_value()) return std::nullopt;
      ByteReader br(*plain);
      absl::StatusOr<ProofBundle> bundle = DecodeBundle(field_, br);
      if (!bundle.ok() || !br.done() || bundle->index != Fe{me.id} ||
          bundle->inputs.size() != in_.circuit.num_inputs() ||
          bundle->proof.size() != ProofLength(in_.circuit.num_mul_gates()) ||
          !VerifyBundle(vss_, *bundle, *in_checks, *pf_checks, true)) {
        return std::nullopt;
      }
      return *bundle;
    }
    return std::nullopt;
  }

  // --- Round 3(i): flags and arbitration ---

  absl::Status FlagRound() {
    for (ClientState& c : clients_) {
      EIFFEL_RETURN_IF_ERROR(AsParty(c.id, [&]() -> absl::Status {
        EIFFEL_RETURN_IF_ERROR(
            Advance(c, ClientPhase::kRound2, ClientPhase::kRound3));
        Received(c.id, "r2");
        bool colluding = c.script.has_value();
        for (PartyId j = 1; j <= config_.n; ++j) {
          if (j == c.id) continue;
          std::optional<ProofBundle> bundle = OpenShares(c, j);
          if (bundle.has_value()) {
            c.received_shares[j] = std::move(*bundle);
          } else if (!colluding || !in_.script.clients.contains(j)) {
            c.flags_raised.insert(j);
          }
        }
        if (colluding) {
          c.flags_raised.insert(c.script->false_flags.begin(),
                                c.script->false_flags.end());
        }
        ByteWriter w;
        PutIds(w, std::vector<PartyId>(c.flags_raised.begin(),
                                       c.flags_raised.end()));
        return Post(c.id, kFlagsTag, w.Take());
      }));
    }
    EIFFEL_RETURN_IF_ERROR(Seal("r3i"));

    return AsParty(kServerId, [&]() -> absl::Status {
      Received(kServerId, "r3i");
      std::map<PartyId, std::vector<PartyId>> raised;
      for (const BulletinEntry& e : board_.Read(kFlagsTag)) {
        ByteReader r(e.payload);
        absl::StatusOr<std::vector<PartyId>> ids = ReadIds(r);
        if (!ids.ok()) continue;
        std::set<PartyId> unique;
        for (PartyId j : *ids) {
          if (j >= 1 && j <= config_.n && j != e.author) unique.insert(j);
        }
        raised[e.author].assign(unique.begin(), unique.end());
        for (PartyId j : unique) server_.flag_lists[j].insert(e.author);
      }
      for (PartyId i = 1; i <= config_.n; ++i) {
        if (raised[i].size() >= config_.m + 1) AddToCStar(i);
      }
      for (PartyId j = 1; j <= config_.n; ++j) {
        if (server_.flag_lists[j].size() >= config_.m + 1) AddToCStar(j);
      }
      return absl::OkStatus();
    });
  }

  absl::Status Arbitration() {
    // (flagged client, flagger) pairs whose shares must be revealed.
    std::vector<std::pair<PartyId, PartyId>> requests;
    for (const auto& [j, flaggers] : server_.flag_lists) {
      if (InCStar(j)) continue;
      for (PartyId i : flaggers) {
        if (!InCStar(i)) requests.emplace_back(j, i);
      }
    }
    if (requests.empty()) return absl::OkStatus();
    ByteWriter rw;
    rw.PutU32(static_cast<uint32_t>(requests.size()));
    for (auto [j, i] : requests) {
      rw.PutU32(j);
      rw.PutU32(i);
    }
    EIFFEL_RETURN_IF_ERROR(Post(kServerId, kRequestTag, rw.Take(), true));

    std::map<PartyId, std::vector<PartyId>> by_author;
    for (auto [j, i] : requests) by_author[j].push_back(i);
    for (auto& [j, flaggers] : by_author) {
      ClientState& c = client(j);
      EIFFEL_RETURN_IF_ERROR(AsParty(j, [&] {
        Received(j, "arb/request", true);
        ByteWriter w;
        w.PutU32(static_cast<uint32_t>(flaggers.size()));
        for (PartyId i : flaggers) {
          ProofBundle bundle = c.split.bundles[i - 1];
          if (c.script.has_value() && !c.script->reveal_correct &&
              Contains(c.script->bad_shares_to, i)) {
            bundle.inputs[0] = field_.Add(bundle.inputs[0], field_.One());
          }
          w.PutU32(i);
          w.PutBytes(EncodeBundle(bundle));
        }
        return Post(j, kRevealTag, w.Take(), true);
      }));
    }
    EIFFEL_RETURN_IF_ERROR(Seal("arb"));

    // Everyone checks reveals against the author's commitments; the server
    // rules and flaggers adopt what verifies.
    auto revealed = [&](PartyId j, PartyId i) -> std::optional<ProofBundle> {
      std::optional<BulletinEntry> e = board_.Find(j, kRevealTag);
      absl::StatusOr<PeerChecks> checks = ChecksOf(j);
      if (!e.has_value() || !checks.ok()) return std::nullopt;
      ByteReader r(e->payload);
      absl::StatusOr<uint32_t> count = r.U32();
      for (uint32_t k = 0; count.ok() && k < *count; ++k) {
        absl::StatusOr<uint32_t> to = r.U32();
        absl::StatusOr<std::vector<uint8_t>> bytes =
            to.ok() ? r.Bytes()
                    : absl::StatusOr<std::vector<uint8_t>>(to.status());
        if (!bytes.ok()) return std::nullopt;
        if (*to != i) continue;
        ByteReader br(*bytes);
        absl::StatusOr<ProofBundle> b = DecodeBundle(field_, br);
        if (!b.ok() || b->index != Fe{i} ||
            b->inputs.size() != in_.circuit.num_inputs() ||
            b->proof.size() != ProofLength(in_.circuit.num_mul_gates()) ||
            !VerifyBundle(vss_, *b, checks->inputs, checks->proof, true)) {
          return std::nullopt;
        }
        return *b;
      }
      return std::nullopt;
    };
    EIFFEL_RETURN_IF_ERROR(AsParty(kServerId, [&] {
      Received(kServerId, "arb/reveal", true);
      for (auto [j, i] : requests) {
        if (!revealed(j, i).has_value()) AddToCStar(j);
      }
      return absl::OkStatus();
    }));
    std::set<PartyId> flaggers;
    for (auto [j, i] : requests) flaggers.insert(i);
    for (PartyId i : flaggers) {
      EIFFEL_RETURN_IF_ERROR(AsParty(i, [&] {
        Received(i, "arb/reveal", true);
        for (auto [j, flagger] : requests) {
          if (flagger != i) continue;
          std::optional<ProofBundle> b = revealed(j, i);
          if (b.has_value()) client(i).received_shares[j] = std::move(*b);
        }
        return absl::OkStatus();
      }));
    }
    return absl::OkStatus();
  }

  absl::Status PublishChallenge() {
    EIFFEL_RETURN_IF_ERROR(AsParty(kServerId, [&]() -> absl::Status {
      server_.challenge = DrawChallenge(field_, in_.circuit, server_.prng);
      if (config_.path == SummaryPath::kMultiplicative) {
        std::vector<Fe> xs;
        for (PartyId i = 1; i <= config_.n; ++i) xs.push_back(Fe{i});
        EIFFEL_ASSIGN_OR_RETURN(
            auto z, vss_.Share(field_.One(), xs, config_.m + 1, server_.prng));
        for (const Point& p : z.first.points) server_.z_shares.push_back(p.y);
      }
      ByteWriter w;
      PutIds(w, server_.c_star);
      w.PutFe(server_.challenge.r);
      w.PutFeVector(server_.challenge.output_coeffs);
      w.PutFeVector(server_.z_shares);
      return Post(kServerId, kChallengeTag, w.Take());
    }));
    result_.cstar_after_flags = server_.c_star;
    return absl::OkStatus();
  }

  // --- Round 3(ii) and 3(iii) ---

  absl::Status Summaries() {
    std::optional<BulletinEntry> entry = board_.Find(kServerId, kChallengeTag);
    EIFFEL_ASSIGN_OR_RETURN(ChallengeEntry chal,
                            DecodeChallenge(field_, entry->payload));
    for (ClientState& c : clients_) {
      EIFFEL_RETURN_IF_ERROR(AsParty(c.id, [&]() -> absl::Status {
        Received(c.id, "chal");
        if (Contains(chal.c_star, c.id)) {
          c.round = ClientPhase::kDone;
          return absl::OkStatus();
        }
        ChallengeWeights weights =
            PrepareChallenge(field_, in_.circuit, chal.challenge.r);
        std::map<PartyId, std::vector<Fe>> out;
        for (PartyId j = 1; j <= config_.n; ++j) {
          if (j == c.id || Contains(chal.c_star, j)) continue;
          auto bundle = c.received_shares.find(j);
          if (bundle == c.received_shares.end()) continue;
          EIFFEL_ASSIGN_OR_RETURN(
              LocalEvaluation local,
              EvaluateLocal(field_, in_.circuit, bundle->second, chal.challenge,
                            weights));
          c.locals[j] = local;
          if (c.script.has_value() &&
              Contains(c.script->withhold_summaries, j)) {
            continue;
          }
          std::vector<Fe> values;
          if (config_.path == SummaryPath::kBeaver) {
            BeaverOpeningShares de = BeaverShares(field_, local);
            values = {local.w_out, de.d, de.e};
          } else {
            values = {local.w_out,
                      MultiplicativeLambdaShare(field_, local, chal.challenge.r,
                                                chal.z_shares[c.id - 1])};
          }
          if (c.script.has_value() && c.script->corrupt_summary_shares) {
            for (Fe& v : values) v = field_.Random(c.prng);
          }
          out[j] = std::move(values);
        }
        ByteWriter w;
        PutKeyedValues(w, out);
        return Post(c.id, kSummaryTag, w.Take());
      }));
    }
    return Seal("r3ii");
  }

  // Values posted under `tag` by each verifier, by prover.
  std::map<PartyId, std::map<PartyId, std::vector<Fe>>> CollectByProver(
      std::string_view tag, size_t width) {
    std::map<PartyId, std::map<PartyId, std::vector<Fe>>> out;
    for (const BulletinEntry& e : board_.Read(tag)) {
      absl::StatusOr<std::map<PartyId, std::vector<Fe>>> values =
          ReadKeyedValues(field_, e.payload);
      if (!values.ok()) continue;
      for (auto& [prover, v] : *values) {
        if (v.size() == width) out[prover][e.author] = std::move(v);
      }
    }
    return out;
  }

  absl::Status Openings() {
    std::map<PartyId, std::vector<Fe>> openings;
    bool failed = false;
    EIFFEL_RETURN_IF_ERROR(AsParty(kServerId, [&]() -> absl::Status {
      Received(kServerId, "r3ii");
      auto summaries = CollectByProver(kSummaryTag, 3);
      for (PartyId j = 1; j <= config_.n; ++j) {
        if (InCStar(j)) continue;
        std::vector<Point> d_pts, e_pts;
        for (const auto& [i, v] : summaries[j]) {
          if (i == j || InCStar(i)) continue;
          d_pts.push_back({Fe{i}, v[1]});
          e_pts.push_back({Fe{i}, v[2]});
        }
        ReconOptions opt = Options(config_.m + 1, config_.n - 1, d_pts.size());
        absl::StatusOr<ReconReport> d =
            ReconstructWithStrategy(field_, d_pts, opt, server_.prng);
        absl::StatusOr<ReconReport> e =
            ReconstructWithStrategy(field_, e_pts, opt, server_.prng);
        if (!d.ok() || !e.ok()) {
          failed = true;
          Abort(absl::StrCat("decoding d, e for prover ", j, ": ",
                             (!d.ok() ? d.status() : e.status()).message()));
          return absl::OkStatus();
        }
        openings[j] = {d->secret, e->secret};
      }
      ByteWriter w;
      PutKeyedValues(w, openings);
      return Post(kServerId, kOpeningTag, w.Take());
    }));
    if (failed) return absl::OkStatus();

    for (ClientState& c : clients_) {
      if (c.round == ClientPhase::kDone) continue;
      EIFFEL_RETURN_IF_ERROR(AsParty(c.id, [&]() -> absl::Status {
        Received(c.id, "open");
        std::optional<BulletinEntry> e = board_.Find(kServerId, kOpeningTag);
        EIFFEL_ASSIGN_OR_RETURN(auto opened,
                                ReadKeyedValues(field_, e->payload));
        std::map<PartyId, std::vector<Fe>> out;
        for (const auto& [j, local] : c.locals) {
          auto de = opened.find(j);
          if (de == opened.end() || de->second.size() != 2) continue;
          if (c.script.has_value() &&
              Contains(c.script->withhold_summaries, j)) {
            continue;
          }
          Fe lambda = BeaverLambdaShare(field_, local, server_.challenge.r,
                                        de->second[0], de->second[1]);
          if (c.script.has_value() && c.script->corrupt_summary_shares) {
            lambda = field_.Random(c.prng);
          }
          out[j] = {lambda};
        }
        ByteWriter w;
        PutKeyedValues(w, out);
        return Post(c.id, kLambdaTag, w.Take());
      }));
    }
    return Seal("r3iii");
  }

  // Summary shares of one prover as they appear on the bulletin.
  struct ProverShares {
    std::vector<Point> w_out;
    std::vector<Point> lambda;
    // Verifiers that should have posted for this prover but did not.
    std::vector<PartyId> missing;
  };

  std::map<PartyId, ProverShares> SharesFromBulletin(
      std::span<const PartyId> excluded) {
    bool beaver = config_.path == SummaryPath::kBeaver;
    auto summaries = CollectByProver(kSummaryTag, beaver ? 3 : 2);
    std::map<PartyId, std::map<PartyId, std::vector<Fe>>> lambdas;
    if (beaver) lambdas = CollectByProver(kLambdaTag, 1);
    std::map<PartyId, ProverShares> out;
    for (PartyId j = 1; j <= config_.n; ++j) {
      if (Contains(excluded, j)) continue;
      ProverShares& s = out[j];
      for (PartyId i = 1; i <= config_.n; ++i) {
        if (i == j || Contains(excluded, i)) continue;
        auto w = summaries[j].find(i);
        bool has_lambda = beaver ? lambdas[j].contains(i) : true;
        if (w == summaries[j].end() || !has_lambda) {
          s.missing.push_back(i);
          continue;
        }
        s.w_out.push_back({Fe{i}, w->second[0]});
        s.lambda.push_back({Fe{i}, beaver ? lambdas[j][i][0] : w->second[1]});
      }
    }
    return out;
  }

  absl::Status VerifyAll() {
    std::vector<PartyId> excluded = result_.cstar_after_flags;
    EIFFEL_RETURN_IF_ERROR(AsParty(kServerId, [&]() -> absl::Status {
      Received(kServerId,
               config_.path == SummaryPath::kBeaver ? "r3iii" : "r3ii");
      std::map<PartyId, ProverShares> shares = SharesFromBulletin(excluded);
      std::set<PartyId> withholders;
      std::vector<PartyId> rejected;
      Fe expected = ExpectedOutput(in_.circuit);
      for (auto& [j, s] : shares) {
        withholders.insert(s.missing.begin(), s.missing.end());
        ReconOptions w_opt =
            Options(config_.m + 1, config_.n - 1, s.w_out.size());
        ReconOptions l_opt =
            Options(LambdaThreshold(), config_.n - 1, s.lambda.size());
        absl::StatusOr<SummaryCheck> check = VerifySummaries(
            field_, s.w_out, s.lambda, expected, w_opt, l_opt, server_.prng);
        if (!check.ok()) {
          Abort(absl::StrCat("verifying prover ", j, ": ",
                             check.status().message()));
          return absl::OkStatus();
        }
        ProverDecision d;
        d.prover = j;
        d.accepted = check->verdict == SnipVerdict::kAccepted;
        d.fell_back = check->fell_back;
        d.w_out = check->w_out.secret;
        d.lambda = check->lambda.secret;
        if (config_.gao_shadow && config_.recon != ReconStrategy::kGao) {
          w_opt.strategy = l_opt.strategy = ReconStrategy::kGao;
          absl::StatusOr<SummaryCheck> gao = VerifySummaries(
              field_, s.w_out, s.lambda, expected, w_opt, l_opt, server_.prng);
          d.agrees_with_gao = gao.ok() && gao->w_out.secret == d.w_out &&
                              gao->lambda.secret == d.lambda;
        }
        if (!d.accepted) rejected.push_back(j);
        result_.decisions.push_back(d);
      }
      for (PartyId j : rejected) AddToCStar(j);
      for (PartyId i : withholders) AddToCStar(i);
      result_.cstar_after_verification = server_.c_star;
      std::vector<PartyId> published = server_.c_star;
      if (in_.script.server_drop_honest.has_value()) {
        PartyId victim = *in_.script.server_drop_honest;
        if (!Contains(published, victim)) published.push_back(victim);
      }
      result_.final_cstar = published;
      ByteWriter w;
      PutIds(w, published);
      return Post(kServerId, kFinalTag, w.Take());
    }));
    return absl::OkStatus();
  }

  // --- Round 4 ---

  // Recomputes from the bulletin alone whether `prover` was listed in the
  // final C* although it passed every check.
  bool DisputeHolds(PartyId prover, const DisputeTranscript& transcript) {
    std::optional<BulletinEntry> chal = board_.Find(kServerId, kChallengeTag);
    absl::StatusOr<ChallengeEntry> c = DecodeChallenge(field_, chal->payload);
    if (!c.ok() || Contains(c->c_star, prover)) return false;
    std::map<PartyId, ProverShares> shares = SharesFromBulletin(c->c_star);
    // The prover must have posted every summary it owed.
    for (const auto& [j, s] : shares) {
      if (Contains(s.missing, prover)) return false;
    }
    const ProverShares& own = shares[prover];
    if (own.w_out != transcript.w_out_shares ||
        own.lambda != transcript.lambda_shares) {
      return false;
    }
    Prng unused(0);
    ReconOptions w_opt{ReconStrategy::kGao, config_.m + 1};
    ReconOptions l_opt{ReconStrategy::kGao, LambdaThreshold()};
    absl::StatusOr<SummaryCheck> check =
        VerifySummaries(field_, own.w_out, own.lambda,
                        ExpectedOutput(in_.circuit), w_opt, l_opt, unused);
    return check.ok() && check->verdict == SnipVerdict::kAccepted;
  }

  static std::vector<uint8_t> EncodeDispute(const DisputeTranscript& t) {
    ByteWriter w;
    w.PutU32(t.prover);
    for (const auto* pts : {&t.w_out_shares, &t.lambda_shares}) {
      w.PutU32(static_cast<uint32_t>(pts->size()));
      for (const Point& p : *pts) {
        w.PutFe(p.x);
        w.PutFe(p.y);
      }
    }
    return w.Take();
  }

  absl::StatusOr<DisputeTranscript> DecodeDispute(
      std::span<const uint8_t> payload) {
    ByteReader r(payload);
    DisputeTranscript t;
    EIFFEL_ASSIGN_OR_RETURN(t.prover, r.U32());
    for (auto* pts : {&t.w_out_shares, &t.lambda_shares}) {
      EIFFEL_ASSIGN_OR_RETURN(uint32_t count, r.U32());
      for (uint32_t k = 0; k < count; ++k) {
        Point p;
        EIFFEL_ASSIGN_OR_RETURN(p.x, r.ReadFe(field_));
        EIFFEL_ASSIGN_OR_RETURN(p.y, r.ReadFe(field_));
        pts->push_back(p);
      }
    }
    EIFFEL_RETURN_IF_ERROR(r.ExpectDone());
    return t;
  }

  absl::Status Disputes() {
    std::optional<BulletinEntry> fin = board_.Find(kServerId, kFinalTag);
    ByteReader fr(fin->payload);
    EIFFEL_ASSIGN_OR_RETURN(std::vector<PartyId> final_cstar, ReadIds(fr));
    bool any = false;
    for (ClientState& c : clients_) {
      EIFFEL_RETURN_IF_ERROR(AsParty(c.id, [&]() -> absl::Status {
        Received(c.id, "final");
        if (c.round != ClientPhase::kDone) {
          EIFFEL_RETURN_IF_ERROR(
              Advance(c, ClientPhase::kRound3, ClientPhase::kRound4));
        }
        if (c.script.has_value() || !Contains(final_cstar, c.id)) {
          return absl::OkStatus();
        }
        std::optional<BulletinEntry> chal =
            board_.Find(kServerId, kChallengeTag);
        EIFFEL_ASSIGN_OR_RETURN(ChallengeEntry ce,
                                DecodeChallenge(field_, chal->payload));
        if (Contains(ce.c_star, c.id)) return absl::OkStatus();
        ProverShares own = SharesFromBulletin(ce.c_star)[c.id];
        DisputeTranscript t{c.id, own.w_out, own.lambda};
        if (!DisputeHolds(c.id, t)) return absl::OkStatus();
        any = true;
        c.aborted = true;
        return Post(c.id, kDisputeTag, EncodeDispute(t), true);
      }));
    }
    if (!any) return absl::OkStatus();
    EIFFEL_RETURN_IF_ERROR(Seal("dispute"));
    std::vector<BulletinEntry> disputes = board_.Read(kDisputeTag);
    for (ClientState& c : clients_) {
      if (c.script.has_value() || c.aborted) continue;
      EIFFEL_RETURN_IF_ERROR(AsParty(c.id, [&]() -> absl::Status {
        Received(c.id, "dispute", true);
        for (const BulletinEntry& e : disputes) {
          absl::StatusOr<DisputeTranscript> t = DecodeDispute(e.payload);
          if (t.ok() && t->prover == e.author && DisputeHolds(e.author, *t)) {
            c.aborted = true;
          }
        }
        return absl::OkStatus();
      }));
    }
    for (const BulletinEntry& e : disputes)
      result_.disputes.push_back(e.author);
    Abort(absl::StrCat("upheld dispute by client ", disputes[0].author));
    return absl::OkStatus();
  }

  absl::Status Round4() {
    std::vector<PartyId> accepted;
    for (PartyId i = 1; i <= config_.n; ++i) {
      if (!Contains(result_.final_cstar, i)) accepted.push_back(i);
    }
    for (PartyId i : accepted) {
      ClientState& c = client(i);
      EIFFEL_RETURN_IF_ERROR(AsParty(i, [&]() -> absl::Status {
        std::vector<Fe> sum(in_.dim, Fe{0});
        for (PartyId j : accepted) {
          auto b = c.received_shares.find(j);
          if (b == c.received_shares.end()) {
            return absl::InternalError(
                absl::StrCat("client ", i, " has no shares of ", j));
          }
          for (size_t k = 0; k < in_.dim; ++k) {
            sum[k] = field_.Add(sum[k], b->second.inputs[k]);
          }
        }
        if (c.script.has_value() && c.script->corrupt_aggregate_share) {
          for (Fe& v : sum) v = field_.Random(c.prng);
        }
        ByteWriter w;
        w.PutFeVector(sum);
        return Post(i, kShareSumTag, w.Take());
      }));
    }
    EIFFEL_RETURN_IF_ERROR(Seal("r4"));

    bool failed = false;
    EIFFEL_RETURN_IF_ERROR(AsParty(kServerId, [&]() -> absl::Status {
      Received(kServerId, "r4");
      std::vector<std::pair<PartyId, std::vector<Fe>>> sums;
      for (const BulletinEntry& e : board_.Read(kShareSumTag)) {
        ByteReader r(e.payload);
        absl::StatusOr<std::vector<Fe>> v = r.FeVector(field_);
        if (v.ok() && v->size() == in_.dim && Contains(accepted, e.author)) {
          sums.emplace_back(e.author, std::move(*v));
        }
      }
      ReconOptions opt = Options(config_.m + 1, config_.n, sums.size());
      if (opt.strategy == ReconStrategy::kProbabilistic) {
        opt.strategy = ReconStrategy::kGao;
      }
      ReconOptions gao = opt;
      gao.strategy = ReconStrategy::kGao;
      server_.aggregate.assign(in_.dim, Fe{0});
      std::vector<Point> pts(sums.size());
      for (size_t k = 0; k < in_.dim; ++k) {
        for (size_t s = 0; s < sums.size(); ++s) {
          pts[s] = {Fe{sums[s].first}, sums[s].second[k]};
        }
        absl::StatusOr<ReconReport> rec =
            ReconstructWithStrategy(field_, pts, opt, server_.prng);
        if (!rec.ok()) {
          failed = true;
          Abort(absl::StrCat("decoding aggregate coordinate ", k, ": ",
                             rec.status().message()));
          return absl::OkStatus();
        }
        server_.aggregate[k] = rec->secret;
        if (config_.gao_shadow && opt.strategy != ReconStrategy::kGao) {
          absl::StatusOr<ReconReport> check =
              ReconstructWithStrategy(field_, pts, gao, server_.prng);
          if (!check.ok() || check->secret != rec->secret) {
            result_.aggregate_agrees_with_gao = false;
          }
        }
      }
      ByteWriter w;
      w.PutFeVector(server_.aggregate);
      return Post(kServerId, kOutputTag, w.Take());
    }));
    if (failed) return absl::OkStatus();
    for (ClientState& c : clients_) {
      Received(c.id, "out");
      if (c.round == ClientPhase::kRound4) c.round = ClientPhase::kDone;
    }
    result_.accepted = accepted;
    result_.aggregate = server_.aggregate;
    return absl::OkStatus();
  }

  // --- Privacy audit ---

  absl::Status Audit() {
    std::set<PartyId> coalition(in_.malicious.begin(), in_.malicious.end());
    for (const auto& [id, b] : in_.script.clients) coalition.insert(id);
    std::map<PartyId, std::vector<uint8_t>> public_keys;
    for (const BulletinEntry& e : board_.Read(kKeysTag)) {
      ByteReader r(e.payload);
      absl::StatusOr<std::vector<uint8_t>> pk = r.Bytes();
      if (pk.ok()) public_keys[e.author] = *pk;
    }
    size_t worst = 0;
    for (PartyId j = 1; j <= config_.n; ++j) {
      if (coalition.contains(j)) continue;
      std::set<PartyId> exposed;
      std::optional<BulletinEntry> e = board_.Find(j, kSharesTag);
      if (e.has_value()) {
        ByteReader r(e->payload);
        EIFFEL_RETURN_IF_ERROR(ReadChecks(r).status());
        EIFFEL_RETURN_IF_ERROR(ReadChecks(r).status());
        EIFFEL_ASSIGN_OR_RETURN(uint32_t count, r.U32());
        for (uint32_t k = 0; k < count; ++k) {
          EIFFEL_ASSIGN_OR_RETURN(uint32_t to, r.U32());
          EIFFEL_ASSIGN_OR_RETURN(std::vector<uint8_t> ct, r.Bytes());
          for (PartyId c : coalition) {
            absl::StatusOr<SharedKey> key =
                crypto_->Agree(client(c).key_pair.secret_key, public_keys[j]);
            if (key.ok() &&
                crypto_->Decrypt(*key, ct, CipherAd(j, to)).has_value()) {
              exposed.insert(to);
            }
          }
        }
      }
      std::optional<BulletinEntry> reveal = board_.Find(j, kRevealTag);
      if (reveal.has_value()) {
        ByteReader r(reveal->payload);
        EIFFEL_ASSIGN_OR_RETURN(uint32_t count, r.U32());
        for (uint32_t k = 0; k < count; ++k) {
          EIFFEL_ASSIGN_OR_RETURN(uint32_t to, r.U32());
          EIFFEL_RETURN_IF_ERROR(r.Bytes().status());
          exposed.insert(to);
        }
      }
      worst = std::max(worst, exposed.size());
    }
    result_.max_share_exposure = worst;
    return absl::OkStatus();
  }

  const PrimeField& field_;
  const ProtocolConfig& config_;
  const ProtocolInputs& in_;
  std::unique_ptr<CommitmentGroup> group_;
  std::unique_ptr<CryptoSuite> crypto_;
  Vss vss_;
  Bulletin board_;
  std::vector<ClientState> clients_;
  ServerState server_;
  RunResult result_;
};

}  // namespace

std::string SummaryPathName(SummaryPath path) {
  return path == SummaryPath::kBeaver ? "beaver" : "multiplicative";
}

absl::StatusOr<SummaryPath> ParseSummaryPath(std::string_view name) {
  if (name == "beaver") return SummaryPath::kBeaver;
  if (name == "multiplicative") return SummaryPath::kMultiplicative;
  return MakeError(
      ErrorKind::kConfigError,
      absl::StrCat("ParseSummaryPath: unknown path '",
                   absl::string_view(name.data(), name.size()), "'"));
}

absl::Status ValidateProtocolConfig(const ProtocolConfig& config) {
  const size_t n = config.n;
  const size_t m = config.m;
  if (n < 4 || m >= (n - 1) / 3) {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("ValidateProtocolConfig: need n >= 4 and "
                                  "m < floor((n - 1) / 3), got n = ",
                                  n, ", m = ", m));
  }
  if (config.recon == ReconStrategy::kPartition && (m + 2) * (m + 2) > n) {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("ValidateProtocolConfig: partition "
                                  "reconstruction needs m <= sqrt(n) - 2, got "
                                  "n = ",
                                  n, ", m = ", m));
  }
  if (config.path == SummaryPath::kMultiplicative && 4 * m >= n - 1) {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("ValidateProtocolConfig: the multiplicative "
                                  "path needs m < (n - 1) / 4, got n = ",
                                  n, ", m = ", m));
  }
  if (config.crypto != "test" && config.crypto != "standard") {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("ValidateProtocolConfig: unknown crypto '",
                                  config.crypto, "'"));
  }
  return absl::OkStatus();
}

StepCounts ExpectedSteps(SummaryPath path) {
  return path == SummaryPath::kBeaver ? StepCounts{12, 9} : StepCounts{10, 7};
}

absl::StatusOr<RunResult> RunProtocol(const PrimeField& field,
                                      const ProtocolConfig& config,
                                      const ProtocolInputs& inputs) {
  EIFFEL_RETURN_IF_ERROR(ValidateProtocolConfig(config));
  EIFFEL_RETURN_IF_ERROR(ValidateScript(inputs.script, config.n, config.m));
  if (inputs.inputs.size() != config.n) {
    return MakeError(
        ErrorKind::kConfigError,
        absl::StrCat("RunProtocol: expected ", config.n, " client inputs, got ",
                     inputs.inputs.size()));
  }
  if (inputs.dim > inputs.circuit.num_inputs()) {
    return MakeError(ErrorKind::kBadDimension,
                     "RunProtocol: dim exceeds the circuit input count");
  }
  std::set<PartyId> adversary(inputs.malicious.begin(), inputs.malicious.end());
  for (const auto& [id, b] : inputs.script.clients) adversary.insert(id);
  if (adversary.size() > config.m) {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("RunProtocol: ", adversary.size(),
                                  " malicious clients exceed m = ", config.m));
  }
  EIFFEL_ASSIGN_OR_RETURN(std::unique_ptr<CommitmentGroup> group,
                          config.production_group ? MakeProductionGroup(field)
                                                  : MakeToyGroup(field));
  EIFFEL_ASSIGN_OR_RETURN(std::unique_ptr<CryptoSuite> crypto,
                          MakeCryptoSuite(config.crypto));
  Simulation sim(field, config, inputs, std::move(group), std::move(crypto));
  return sim.Run();
}

}  // namespace eiffel
