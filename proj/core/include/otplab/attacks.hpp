#pragma once

// The four attacks: passive ROTIV tracing by a past owner, the same tracing
// after a Corrupt query, Chen tracing by a past owner through a bounded
// search over the k* chain, and Chen key recovery plus tag impersonation.

#include <cstdint>
#include <optional>

#include "otplab/chen.hpp"
#include "otplab/group_model.hpp"
#include "otplab/oracle.hpp"
#include "otplab/outcome.hpp"
#include "otplab/rotiv.hpp"

namespace otplab::attacks {

// Deviation identifiers attached to outcomes and reports.
inline constexpr const char* kFlagIdentityCheck = "identity-check-deviation";
inline constexpr const char* kFlagLoopFromZero = "chen-loop-from-zero";

// ---------------------------------------------------------------------------
// ROTIV

struct RotivAdversaryKnowledge {
  group::Scalar delta;
  group::GroupElement psi;
  group::GroupElement pk_issuer;
};

// Knowledge a past owner keeps from its reference (k_old, k_new, delta, psi).
RotivAdversaryKnowledge rotiv_owner_knowledge(const rotiv::OwnerTagRef& ref,
                                              const group::GroupElement& pk_issuer);

// e(v, g2) == e(h(delta), pk_I) * e(v / psi, g2), evaluated as written.
bool rotiv_trace_check(const group::PairingParams& params, const RotivAdversaryKnowledge& know,
                       const rotiv::StateParam& s);

// Runs the check on label 0's s_j and label 1's s'_j. Label 0 passing and
// label 1 failing gives Zero; label 0 failing and label 1 passing gives
// One; otherwise Undetermined (both results are kept in outcome.check) and
// the outcome carries kFlagIdentityCheck. Uses only the challenge view.
AttackOutcome rotiv_trace_distinguish(const group::PairingParams& params,
                                      const RotivAdversaryKnowledge& know,
                                      const oracle::RotivChallengeView& view);

// Corrupt the tag and lift (t, h(t)^x) out of what it exposes.
RotivAdversaryKnowledge rotiv_corrupt_trace(const oracle::RotivWorld& world, oracle::TagId tag);

// ---------------------------------------------------------------------------
// Chen

struct ChenAdversaryKnowledge {
  prim::Word id_t;
  prim::Word k_i;
  prim::Word k_star_i;
  std::uint64_t tau = 64;
  // Also try c = 0 (the adversary still holds the current k*). Not part of
  // the original procedure; outcomes are flagged when it is enabled.
  bool start_at_zero = false;
};

// Throws ConfigError unless tau < 2^w.
void validate_tau(const prim::WordSpec& spec, std::uint64_t tau);

ChenAdversaryKnowledge chen_knowledge_from(const prim::WordSpec& spec,
                                           const chen::ChenOwnerState& snapshot, std::uint64_t tau,
                                           bool start_at_zero = false);

// Tests whether (tr_j, tr_j1) are consecutive sessions of the known tag:
// for c = 1..tau, k* = PRNG^c(k*_i), X_j = CRC(k* ^ N_T), X_{j+1} =
// CRC(PRNG(k*) ^ N'_T), accept when Z_{j+1} == CRC(k* ^ ID ^ dX ^ dY).
// First accepting c wins. On acceptance guess is Zero ("this candidate")
// and recovered.k_star = k*_j; otherwise Undetermined.
AttackOutcome chen_trace(const prim::WordSpec& spec, const ChenAdversaryKnowledge& know,
                         const chen::ChenAuthTranscript& tr_j,
                         const chen::ChenAuthTranscript& tr_j1);

// Label 0 first, then label 1. Needs two sessions per label.
AttackOutcome chen_trace_distinguish(const prim::WordSpec& spec, const ChenAdversaryKnowledge& know,
                                     const oracle::ChenChallengeView& view);

// k_next = Y_{j+1} ^ PRNG(k*_j) ^ ID ^ X_{j+1}: the tag's key after session
// j+1. Throws ContractError when the outcome carries no k*_j.
prim::Word chen_recover_keys(const prim::WordSpec& spec, const AttackOutcome& outcome,
                             const ChenAdversaryKnowledge& know,
                             const chen::ChenAuthTranscript& tr_j1);

// Tag secrets the impersonator answers with.
struct ImpersonationKeys {
  prim::Word id_t;
  prim::Word k;       // current tag key
  prim::Word k_star;  // current tag k*
};

// Keys after session j+1 given k*_j and the recovered k_{j+2}.
ImpersonationKeys impersonation_keys(const prim::WordSpec& spec, prim::Word id_t, prim::Word k_star_j,
                                     prim::Word k_next);

struct ImpersonationResult {
  prim::Word t_next;            // unmasked certificate
  bool challenge_verified = false;  // A checked out under the impersonator's k
  bool accepted = false;            // owner accepted the fabricated response
};

// Unmasks t_{i+1} = masked ^ k, then asks `verifier` to interrogate
// `claimed` through Send and answers the challenge with a fabricated
// (N_T, Y, Z) built from `keys`.
ImpersonationResult chen_impersonate(oracle::ChenWorld& world, oracle::OwnerId verifier,
                                     oracle::TagId claimed, std::uint64_t instance,
                                     const ImpersonationKeys& keys, prim::Word masked_cert, Rng& rng);

}  // namespace otplab::attacks
