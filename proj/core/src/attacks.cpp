#include "otplab/attacks.hpp"

#include "otplab/errors.hpp"

namespace otplab::attacks {

using prim::Word;

RotivAdversaryKnowledge rotiv_owner_knowledge(const rotiv::OwnerTagRef& ref,
                                              const group::GroupElement& pk_issuer) {
  return {ref.delta, ref.psi, pk_issuer};
}

bool rotiv_trace_check(const group::PairingParams& params, const RotivAdversaryKnowledge& know,
                       const rotiv::StateParam& s) {
  const group::GroupElement g2 = params.g2();
  const group::GroupElement lhs = params.pairing(s.v, g2);
  const group::GroupElement rhs = params.mul(params.pairing(params.hash_to_g1(know.delta), know.pk_issuer),
                                             params.pairing(params.div(s.v, know.psi), g2));
  return lhs == rhs;
}

AttackOutcome rotiv_trace_distinguish(const group::PairingParams& params,
                                      const RotivAdversaryKnowledge& know,
                                      const oracle::RotivChallengeView& view) {
  AttackOutcome out;
  const bool c0 = rotiv_trace_check(params, know, view.sessions[0].response.s);
  const bool c1 = rotiv_trace_check(params, know, view.sessions[1].response.s);
  out.check[0] = c0;
  out.check[1] = c1;
  out.iterations_used = 2;
  if (c0 && !c1) {
    out.guess = Guess::Zero;
  } else if (!c0 && c1) {
    out.guess = Guess::One;
  } else {
    out.guess = Guess::Undetermined;
    out.flags.emplace_back(kFlagIdentityCheck);
  }
  return out;
}

RotivAdversaryKnowledge rotiv_corrupt_trace(const oracle::RotivWorld& world, oracle::TagId tag) {
  const oracle::RotivCorruption c = world.corrupt(tag);
  return {c.t, c.psi, world.pk_issuer()};
}

void validate_tau(const prim::WordSpec& spec, std::uint64_t tau) {
  if (tau >= spec.cardinality()) {
    throw ConfigError("tau = " + std::to_string(tau) + " must stay below 2^" +
                      std::to_string(spec.bits()) +
                      " (the search is only meaningful while far fewer sessions than key values have passed)");
  }
}

ChenAdversaryKnowledge chen_knowledge_from(const prim::WordSpec& spec,
                                           const chen::ChenOwnerState& snapshot, std::uint64_t tau,
                                           bool start_at_zero) {
  validate_tau(spec, tau);
  return {snapshot.id_t, snapshot.k, snapshot.k_star, tau, start_at_zero};
}

AttackOutcome chen_trace(const prim::WordSpec& spec, const ChenAdversaryKnowledge& know,
                         const chen::ChenAuthTranscript& tr_j,
                         const chen::ChenAuthTranscript& tr_j1) {
  validate_tau(spec, know.tau);
  AttackOutcome out;
  if (know.start_at_zero) out.flags.emplace_back(kFlagLoopFromZero);

  const Word delta_y = tr_j.y ^ tr_j1.y;
  Word k_star = know.start_at_zero ? know.k_star_i : spec.prng_step(know.k_star_i);
  const std::uint64_t first = know.start_at_zero ? 0 : 1;
  for (std::uint64_t c = first; c <= know.tau; ++c) {
    ++out.iterations_used;
    const Word x_j = spec.crc(k_star ^ tr_j.n_tag);
    const Word x_j1 = spec.crc(spec.prng_step(k_star) ^ tr_j1.n_tag);
    const Word delta_x = x_j ^ x_j1;
    if (tr_j1.z == spec.crc(k_star ^ know.id_t ^ delta_x ^ delta_y)) {
      out.guess = Guess::Zero;
      out.recovered.k_star = k_star;
      return out;
    }
    k_star = spec.prng_step(k_star);
  }
  out.guess = Guess::Undetermined;
  return out;
}

AttackOutcome chen_trace_distinguish(const prim::WordSpec& spec, const ChenAdversaryKnowledge& know,
                                     const oracle::ChenChallengeView& view) {
  for (const auto& label : view.sessions) {
    if (label.size() < 2) throw ContractError("chen tracing needs sessions at j and j+1");
  }
  AttackOutcome first = chen_trace(spec, know, view.sessions[0][0].auth, view.sessions[0][1].auth);
  if (first.guess == Guess::Zero) return first;
  AttackOutcome second = chen_trace(spec, know, view.sessions[1][0].auth, view.sessions[1][1].auth);
  second.iterations_used += first.iterations_used;
  if (second.guess == Guess::Zero) second.guess = Guess::One;
  return second;
}

Word chen_recover_keys(const prim::WordSpec& spec, const AttackOutcome& outcome,
                       const ChenAdversaryKnowledge& know, const chen::ChenAuthTranscript& tr_j1) {
  if (!outcome.recovered.k_star) throw ContractError("key recovery needs a successful trace");
  const Word k_star_j1 = spec.prng_step(*outcome.recovered.k_star);
  const Word x_j1 = chen::response_x(spec, tr_j1.n_tag, k_star_j1);
  return chen::extract_key(tr_j1.y, k_star_j1, know.id_t, x_j1);
}

ImpersonationKeys impersonation_keys(const prim::WordSpec& spec, Word id_t, Word k_star_j, Word k_next) {
  return {id_t, k_next, spec.prng_step(spec.prng_step(k_star_j))};
}

ImpersonationResult chen_impersonate(oracle::ChenWorld& world, oracle::OwnerId verifier,
                                     oracle::TagId claimed, std::uint64_t instance,
                                     const ImpersonationKeys& keys, Word masked_cert, Rng& rng) {
  const prim::WordSpec& spec = world.spec();
  ImpersonationResult out;
  out.t_next = masked_cert ^ keys.k;

  const oracle::ChenMessage ch_msg =
      world.send(oracle::AdversaryId{}, verifier, instance, oracle::StartSession{claimed});
  const auto& challenge = std::get<chen::Challenge>(ch_msg);
  out.challenge_verified = chen::challenge_mac(spec, keys.k, challenge.n_owner) == challenge.a;

  const Word n_tag = spec.random(rng);
  const Word x = chen::response_x(spec, n_tag, keys.k_star);
  const Word k_fake = spec.random(rng);
  const Word y = chen::transport_y(keys.k_star, keys.id_t, x, k_fake);
  const Word z = chen::response_z(spec, x, keys.k, y);

  const oracle::ChenMessage verdict =
      world.send(oracle::AdversaryId{}, verifier, instance, chen::TagResponse{n_tag, y, z});
  out.accepted = std::get<oracle::Verdict>(verdict).accepted;
  return out;
}

}  // namespace otplab::attacks
