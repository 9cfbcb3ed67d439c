#pragma once

// Concrete game instances: each TrialFn builds a fresh world, lets the
// adversary learn what its role allows, issues the Test challenge and
// scores the distinguisher's answer. Undetermined answers are resolved by
// a fair coin from the trial's own generator.

#include <cstdint>
#include <functional>

#include "otplab/attacks.hpp"
#include "otplab/oracle.hpp"

namespace otplab::games {

inline constexpr const char* kFlagCoinFlip = "undetermined-resolved-by-coin";
inline constexpr const char* kFlagConsecutiveTest = "test-over-consecutive-instances";

// ---------------------------------------------------------------------------
// Chen

struct ChenGameParams {
  prim::WordSpec spec{16};
  std::uint64_t tau = 64;
  // Sessions between the adversary's last known state and instance j,
  // drawn uniformly from [gap_min, gap_max].
  std::uint64_t gap_min = 1;
  std::uint64_t gap_max = 16;
  bool start_at_zero = false;
};

using ChenDistinguisher =
    std::function<AttackOutcome(const prim::WordSpec&, const attacks::ChenAdversaryKnowledge&,
                                const oracle::ChenChallengeView&, Rng&)>;

ChenDistinguisher chen_trace_distinguisher();
ChenDistinguisher chen_random_distinguisher();

// Past owner A hands the target to L; L runs `gap` sessions; Test at (j, j+1).
// ground_truth.k_star holds the target's k*_j.
oracle::TrialFn chen_trace_game(const ChenGameParams& params,
                                ChenDistinguisher distinguisher = chen_trace_distinguisher());

// Runs the trace procedure with the target's knowledge on a decoy's two
// consecutive sessions only. `correct` marks a false accept.
oracle::TrialFn chen_decoy_false_accept(const ChenGameParams& params);

struct ChenImpersonationParams {
  ChenGameParams game;
  // Negative control: answer with the adversary's stale snapshot instead of
  // recovered keys.
  bool stale_keys = false;
};

// As chen_trace_game, but session j+1 of the target is the authentication
// phase of a transfer L -> M. The adversary traces, recovers k_{j+2} and
// t_{j+2}, then answers M's next challenge. `correct` marks that the
// adversary verified M's challenge and M accepted the forged response.
oracle::TrialFn chen_impersonation_game(const ChenImpersonationParams& params);

// ---------------------------------------------------------------------------
// ROTIV

struct RotivGameParams {
  std::uint64_t q = group::kDefaultModulus;
  // Adversary learns (t, h(t)^x) through Corrupt instead of having owned
  // the tag.
  bool corrupt = false;
  rotiv::TransferOptions options;
};

using RotivDistinguisher =
    std::function<AttackOutcome(const group::PairingParams&, const attacks::RotivAdversaryKnowledge&,
                                const oracle::RotivChallengeView&, Rng&)>;

RotivDistinguisher rotiv_trace_distinguisher();
RotivDistinguisher rotiv_random_distinguisher();

// Past owner A (or a corrupting adversary) knows the target's static values;
// the target moves to L, runs an isolated session plus a few more; Test at j.
oracle::TrialFn rotiv_trace_game(const RotivGameParams& params,
                                 RotivDistinguisher distinguisher = rotiv_trace_distinguisher());

}  // namespace otplab::games
