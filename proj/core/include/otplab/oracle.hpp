#pragma once

// Adversary interface over a simulated deployment (a "world"): Execute,
// Send, Corrupt and Test queries, plus the tracing game driver and its
// advantage estimator.
//
// A world is single-threaded. Independent games use independent worlds.
// Queries index sessions by a world clock i that only moves forward; a
// session that has already been run is returned verbatim from the
// transcript store.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "otplab/chen.hpp"
#include "otplab/errors.hpp"
#include "otplab/group_model.hpp"
#include "otplab/ideal.hpp"
#include "otplab/outcome.hpp"
#include "otplab/rng.hpp"
#include "otplab/rotiv.hpp"

namespace otplab::oracle {

struct TagId {
  std::uint32_t value = 0;
  friend auto operator<=>(const TagId&, const TagId&) = default;
};

struct OwnerId {
  std::uint32_t value = 0;
  friend auto operator<=>(const OwnerId&, const OwnerId&) = default;
};

// Sender of a Send query.
struct AdversaryId {
  friend auto operator<=>(const AdversaryId&, const AdversaryId&) = default;
};

using Party = std::variant<TagId, OwnerId, AdversaryId>;

// ---------------------------------------------------------------------------
// Test challenge

// One-shot challenge: the challenger hides bit b, the target tag is shown
// under label b and the decoy under 1 - b.
template <class View>
class TestChallenge {
 public:
  TestChallenge(View view, int hidden_bit) : view_(std::move(view)), bit_(hidden_bit) {}

  const View& view() const { return view_; }

  // Returns whether `label` names the target. Throws ContractError on a
  // second submission.
  bool submit(int label) {
    if (submitted_) throw ContractError("test challenge already answered");
    submitted_ = true;
    return label == bit_;
  }

  bool answered() const { return submitted_; }

  // Challenger-side access to b, only after the guess is in.
  int reveal() const {
    if (!submitted_) throw ContractError("hidden bit requested before the guess");
    return bit_;
  }

 private:
  View view_;
  int bit_;
  bool submitted_ = false;
};

// ---------------------------------------------------------------------------
// Chen world

struct StartSession {
  TagId tag;
};
struct Verdict {
  bool accepted = false;
};
struct Silence {};

using ChenMessage =
    std::variant<StartSession, chen::Challenge, chen::TagResponse, Verdict, Silence>;

// Session as seen on the air at one instance. masked_cert is set when the
// session was the authentication phase of an ownership transfer, whose
// final message (t_{i+1} xor k_{i+1}) travels in the clear.
struct ChenObservedSession {
  chen::ChenAuthTranscript auth;
  std::optional<prim::Word> masked_cert;
};

struct ChenChallengeView {
  std::uint64_t instance = 0;
  // [label][k] = session at instance + k.
  std::array<std::vector<ChenObservedSession>, 2> sessions;
};

class ChenWorld {
 public:
  ChenWorld(prim::WordSpec spec, std::uint64_t seed);

  const prim::WordSpec& spec() const { return spec_; }
  std::uint64_t clock() const { return clock_; }

  // --- challenger-side setup --------------------------------------------
  OwnerId add_owner(const std::string& name);
  TagId issue_tag(OwnerId owner);
  OwnerId owner_of(TagId tag) const;
  // Full three-phase transfer at the next instance.
  chen::ChenTransferTranscript transfer(TagId tag, OwnerId to);
  // The next execute() of `tag` at `instance` runs a transfer to `to`
  // instead of a plain session.
  void schedule_transfer(TagId tag, OwnerId to, std::uint64_t instance);
  // What `owner` currently knows about `tag` (possibly stale).
  const chen::ChenOwnerState& owner_view(OwnerId owner, TagId tag) const;
  const chen::ChenTagState& tag_state(TagId tag) const;
  const chen::ChenIssuer& issuer() const { return issuer_; }

  // --- adversary queries --------------------------------------------------
  // Honest session between tag and owner at instance i.
  ChenObservedSession execute(TagId tag, OwnerId owner, std::uint64_t i);
  ChenMessage send(Party from, Party to, std::uint64_t i, const ChenMessage& m);
  chen::ChenTagState corrupt(TagId tag) const { return tag_state(tag); }
  // Runs (or replays) sessions of both tags with their owners at
  // instances i .. i + instances - 1.
  TestChallenge<ChenChallengeView> test(std::uint64_t i, TagId target, TagId decoy,
                                        unsigned instances = 1);

 private:
  struct TagEntry {
    chen::ChenTagState state;
    OwnerId owner;
  };
  struct OwnerEntry {
    ideal::PartyId id;
    std::map<TagId, chen::ChenOwnerState> known;
    std::map<TagId, chen::Challenge> pending;
  };

  void advance_to(std::uint64_t i);
  TagEntry& tag_entry(TagId tag);
  const TagEntry& tag_entry(TagId tag) const;
  OwnerEntry& owner_entry(OwnerId owner);
  const OwnerEntry& owner_entry(OwnerId owner) const;

  prim::WordSpec spec_;
  Rng rng_;
  ideal::IdealLedger ledger_;
  chen::ChenIssuer issuer_;
  std::vector<TagEntry> tags_;
  std::vector<OwnerEntry> owners_;
  std::map<std::pair<TagId, std::uint64_t>, OwnerId> scheduled_;
  std::map<std::tuple<TagId, OwnerId, std::uint64_t>, ChenObservedSession> store_;
  std::uint64_t clock_ = 0;
};

// ---------------------------------------------------------------------------
// ROTIV world

using RotivTranscript = std::variant<rotiv::SessionTranscript, rotiv::TransferTranscript>;

using RotivMessage =
    std::variant<rotiv::Nonce, rotiv::TagResponse, rotiv::UpdateMessage, Verdict, Silence>;

// Tag contents plus the static issuer values reachable by tampering.
struct RotivCorruption {
  rotiv::RotivTagState state;
  group::Scalar t;
  group::GroupElement psi;
};

struct RotivChallengeView {
  std::uint64_t instance = 0;
  // [label] = mutual-authentication session at `instance`.
  std::array<rotiv::SessionTranscript, 2> sessions;
};

class RotivWorld {
 public:
  RotivWorld(std::uint64_t q, std::uint64_t seed, rotiv::TransferOptions options = {});

  const group::PairingParams& params() const { return params_; }
  const group::GroupElement& pk_issuer() const { return issuer_.pk; }
  std::uint64_t clock() const { return clock_; }

  // --- challenger-side setup --------------------------------------------
  OwnerId add_owner(const std::string& name);
  TagId issue_tag(OwnerId owner);
  OwnerId owner_of(TagId tag) const;
  // Ownership transfer at the next instance; stored redacted.
  rotiv::TransferTranscript transfer(TagId tag, OwnerId to);
  const rotiv::Owner& owner(OwnerId owner) const;
  const rotiv::RotivTagState& tag_state(TagId tag) const;
  // psi of a tag, as recorded by the issuer.
  const group::GroupElement& issued_psi(TagId tag) const;

  // --- adversary queries --------------------------------------------------
  // Transcript at (tag, owner, i). Runs a mutual authentication when i is in
  // the future; transfer transcripts come back with the secure-channel
  // payload removed.
  RotivTranscript execute(TagId tag, OwnerId owner, std::uint64_t i);
  RotivMessage send(Party from, Party to, std::uint64_t i, const RotivMessage& m);
  RotivCorruption corrupt(TagId tag) const;
  TestChallenge<RotivChallengeView> test(std::uint64_t i, TagId target, TagId decoy);

 private:
  struct TagEntry {
    rotiv::RotivTagState state;
    OwnerId owner;
    group::Scalar t;
    group::GroupElement psi;
    // N_O and N_T of a session opened through send().
    std::optional<std::pair<rotiv::Nonce, rotiv::Nonce>> pending;
  };

  void advance_to(std::uint64_t i);
  TagEntry& tag_entry(TagId tag);
  const TagEntry& tag_entry(TagId tag) const;
  rotiv::Owner& owner_entry(OwnerId owner);

  group::PairingParams params_;
  Rng rng_;
  rotiv::IssuerKeys issuer_;
  rotiv::TransferOptions options_;
  std::vector<TagEntry> tags_;
  std::vector<rotiv::Owner> owners_;
  std::map<std::tuple<TagId, OwnerId, std::uint64_t>, RotivTranscript> store_;
  std::uint64_t clock_ = 0;
};

// ---------------------------------------------------------------------------
// Games

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for a binomial proportion (z = 1.96 for 95%).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

// Interval on 2|p - 1/2| induced by a Wilson interval on p.
Interval advantage_interval(const Interval& p);

struct TrialRecord {
  std::uint64_t trial = 0;
  Guess raw_guess = Guess::Undetermined;
  int guess = 0;  // after resolving Undetermined by a coin flip
  int truth = 0;
  bool correct = false;
  std::uint64_t iterations = 0;
  std::string fingerprint;  // of recovered secrets, empty if none
  std::vector<std::string> flags;
  AttackOutcome outcome;
  // Simulator values the recovered secrets should match. Filled in by the
  // challenger; never visible to the attack.
  RecoveredSecrets ground_truth;
};

struct GameResult {
  std::uint64_t trials = 0;
  std::uint64_t correct = 0;
  std::uint64_t undetermined = 0;
  double success_rate = 0.0;  // correct / trials
  double advantage = 0.0;     // 2 |correct / trials - 1/2|
  Interval advantage_ci;
  Interval success_ci;
  std::vector<TrialRecord> records;  // ordered by trial index
  std::vector<std::string> flags;    // union of per-trial flags, sorted
};

GameResult summarize(std::vector<TrialRecord> records);

// One self-contained game instance. Must be deterministic in (index, rng)
// and must not share mutable state with other indices.
using TrialFn = std::function<TrialRecord(std::uint64_t index, Rng& rng)>;

// Runs `trials` independent games; trial k is seeded with
// Rng::derive_seed(seed, k), so results do not depend on `jobs`.
GameResult run_game(const TrialFn& trial, std::uint64_t trials, std::uint64_t seed,
                    unsigned jobs = 1);

}  // namespace otplab::oracle
