#include "otplab/games.hpp"

#include "otplab/errors.hpp"

namespace otplab::games {

using oracle::TrialRecord;
using prim::Word;

namespace {

int resolve(Guess g, Rng& rng, TrialRecord& rec) {
  rec.raw_guess = g;
  switch (g) {
    case Guess::Zero:
      return 0;
    case Guess::One:
      return 1;
    case Guess::Undetermined:
      break;
  }
  rec.flags.emplace_back(kFlagCoinFlip);
  return rng.coin() ? 1 : 0;
}

std::string fingerprint_of(const prim::WordSpec& spec, const RecoveredSecrets& s) {
  if (!s.k_star && !s.k_next && !s.t_next) return {};
  ByteWriter w;
  for (const auto& v : {s.k_star, s.k_next, s.t_next}) {
    w.u8(v ? 1 : 0);
    if (v) spec.encode(w, *v);
  }
  return prim::fingerprint(w.bytes());
}

void take_outcome(TrialRecord& rec, AttackOutcome outcome) {
  rec.iterations = outcome.iterations_used;
  rec.flags.insert(rec.flags.end(), outcome.flags.begin(), outcome.flags.end());
  rec.outcome = std::move(outcome);
}

struct ChenSetup {
  oracle::ChenWorld world;
  oracle::OwnerId adversary;
  oracle::OwnerId owner;
  oracle::TagId target;
  oracle::TagId decoy;
  attacks::ChenAdversaryKnowledge knowledge;
};

// A owns the target for a while, hands it to L, then L runs `gap` sessions.
// The decoy belongs to L throughout.
ChenSetup chen_setup(const ChenGameParams& p, Rng& rng) {
  if (p.gap_min > p.gap_max) throw ConfigError("gap_min exceeds gap_max");
  ChenSetup s{oracle::ChenWorld(p.spec, rng.next()), {}, {}, {}, {}, {}};
  s.adversary = s.world.add_owner("adversary");
  s.owner = s.world.add_owner("owner");
  s.target = s.world.issue_tag(s.adversary);
  s.decoy = s.world.issue_tag(s.owner);

  const std::uint64_t early = rng.uniform_between(0, 2);
  for (std::uint64_t k = 0; k < early; ++k) s.world.execute(s.target, s.adversary, s.world.clock() + 1);
  s.world.transfer(s.target, s.owner);
  s.knowledge = attacks::chen_knowledge_from(p.spec, s.world.owner_view(s.adversary, s.target), p.tau,
                                             p.start_at_zero);

  const std::uint64_t gap = rng.uniform_between(p.gap_min, p.gap_max);
  const std::uint64_t decoy_sessions = rng.uniform_between(0, p.gap_max);
  for (std::uint64_t k = 0; k < std::max(gap, decoy_sessions); ++k) {
    const std::uint64_t i = s.world.clock() + 1;
    if (k < gap) s.world.execute(s.target, s.owner, i);
    if (k < decoy_sessions) s.world.execute(s.decoy, s.owner, i);
  }
  return s;
}

}  // namespace

ChenDistinguisher chen_trace_distinguisher() {
  return [](const prim::WordSpec& spec, const attacks::ChenAdversaryKnowledge& know,
            const oracle::ChenChallengeView& view, Rng&) {
    return attacks::chen_trace_distinguish(spec, know, view);
  };
}

ChenDistinguisher chen_random_distinguisher() {
  return [](const prim::WordSpec&, const attacks::ChenAdversaryKnowledge&, const oracle::ChenChallengeView&,
            Rng& rng) {
    AttackOutcome out;
    out.guess = rng.coin() ? Guess::One : Guess::Zero;
    return out;
  };
}

oracle::TrialFn chen_trace_game(const ChenGameParams& params, ChenDistinguisher distinguisher) {
  attacks::validate_tau(params.spec, params.tau);
  return [params, distinguisher](std::uint64_t, Rng& rng) {
    ChenSetup s = chen_setup(params, rng);
    TrialRecord rec;
    rec.ground_truth.k_star = s.world.tag_state(s.target).k_star;
    auto challenge = s.world.test(s.world.clock() + 1, s.target, s.decoy, 2);
    rec.flags.emplace_back(kFlagConsecutiveTest);
    AttackOutcome outcome = distinguisher(params.spec, s.knowledge, challenge.view(), rng);
    rec.guess = resolve(outcome.guess, rng, rec);
    rec.correct = challenge.submit(rec.guess);
    rec.truth = challenge.reveal();
    rec.fingerprint = fingerprint_of(params.spec, outcome.recovered);
    take_outcome(rec, std::move(outcome));
    return rec;
  };
}

oracle::TrialFn chen_decoy_false_accept(const ChenGameParams& params) {
  attacks::validate_tau(params.spec, params.tau);
  return [params](std::uint64_t, Rng& rng) {
    ChenSetup s = chen_setup(params, rng);
    const std::uint64_t j = s.world.clock() + 1;
    const auto tr_j = s.world.execute(s.decoy, s.owner, j).auth;
    const auto tr_j1 = s.world.execute(s.decoy, s.owner, j + 1).auth;
    AttackOutcome outcome = attacks::chen_trace(params.spec, s.knowledge, tr_j, tr_j1);
    TrialRecord rec;
    rec.raw_guess = outcome.guess;
    rec.guess = outcome.guess == Guess::Zero ? 0 : 1;
    rec.truth = 1;  // the candidate is never the target
    rec.correct = outcome.guess == Guess::Zero;
    rec.fingerprint = fingerprint_of(params.spec, outcome.recovered);
    take_outcome(rec, std::move(outcome));
    return rec;
  };
}

oracle::TrialFn chen_impersonation_game(const ChenImpersonationParams& params) {
  attacks::validate_tau(params.game.spec, params.game.tau);
  return [params](std::uint64_t, Rng& rng) {
    const prim::WordSpec& spec = params.game.spec;
    ChenSetup s = chen_setup(params.game, rng);
    const oracle::OwnerId next = s.world.add_owner("next-owner");
    const std::uint64_t j = s.world.clock() + 1;
    s.world.schedule_transfer(s.target, next, j + 1);

    TrialRecord rec;
    rec.ground_truth.k_star = s.world.tag_state(s.target).k_star;
    auto challenge = s.world.test(j, s.target, s.decoy, 2);
    rec.flags.emplace_back(kFlagConsecutiveTest);
    rec.ground_truth.k_next = s.world.tag_state(s.target).k;
    rec.ground_truth.t_next = s.world.issuer().certificate(s.world.tag_state(s.target).id_t);

    const oracle::ChenChallengeView& view = challenge.view();
    AttackOutcome outcome = attacks::chen_trace_distinguish(spec, s.knowledge, view);
    const int label = resolve(outcome.guess, rng, rec);
    rec.guess = label;
    challenge.submit(label);
    rec.truth = challenge.reveal();

    // The adversary impersonates whichever candidate it traced.
    const auto& traced = view.sessions[static_cast<std::size_t>(label)];
    const std::optional<Word> masked = traced[1].masked_cert;
    attacks::ImpersonationKeys keys{s.knowledge.id_t, s.knowledge.k_i, s.knowledge.k_star_i};
    bool usable = true;
    if (!params.stale_keys) {
      if (outcome.guess == Guess::Undetermined || !masked) {
        usable = false;
      } else {
        const Word k_next = attacks::chen_recover_keys(spec, outcome, s.knowledge, traced[1].auth);
        keys = attacks::impersonation_keys(spec, s.knowledge.id_t, *outcome.recovered.k_star, k_next);
        outcome.recovered.k_next = k_next;
      }
    }
    if (usable) {
      const Word masked_cert = masked.value_or(Word{0});
      const attacks::ImpersonationResult result = attacks::chen_impersonate(
          s.world, next, s.target, s.world.clock() + 1, keys, masked_cert, rng);
      if (!params.stale_keys) outcome.recovered.t_next = result.t_next;
      rec.correct = result.challenge_verified && result.accepted;
    }
    rec.fingerprint = fingerprint_of(spec, outcome.recovered);
    take_outcome(rec, std::move(outcome));
    return rec;
  };
}

RotivDistinguisher rotiv_trace_distinguisher() {
  return [](const group::PairingParams& params, const attacks::RotivAdversaryKnowledge& know,
            const oracle::RotivChallengeView& view, Rng&) {
    return attacks::rotiv_trace_distinguish(params, know, view);
  };
}

RotivDistinguisher rotiv_random_distinguisher() {
  return [](const group::PairingParams&, const attacks::RotivAdversaryKnowledge&,
            const oracle::RotivChallengeView&, Rng& rng) {
    AttackOutcome out;
    out.guess = rng.coin() ? Guess::One : Guess::Zero;
    return out;
  };
}

oracle::TrialFn rotiv_trace_game(const RotivGameParams& params, RotivDistinguisher distinguisher) {
  group::PairingParams check(params.q);
  (void)check;
  return [params, distinguisher](std::uint64_t, Rng& rng) {
    oracle::RotivWorld world(params.q, rng.next(), params.options);
    const oracle::OwnerId first = world.add_owner("adversary");
    const oracle::OwnerId owner = world.add_owner("owner");
    const oracle::TagId target = world.issue_tag(first);
    const oracle::TagId decoy = world.issue_tag(owner);

    const std::uint64_t early = rng.uniform_between(0, 2);
    for (std::uint64_t k = 0; k < early; ++k) world.execute(target, first, world.clock() + 1);

    attacks::RotivAdversaryKnowledge know;
    if (!params.corrupt) {
      // The first owner's database holds exactly this tag.
      know = attacks::rotiv_owner_knowledge(world.owner(first).refs().front(), world.pk_issuer());
    }
    world.transfer(target, owner);
    // Isolated mutual authentication by the new owner, then ordinary traffic.
    world.execute(target, owner, world.clock() + 1);
    if (params.corrupt) know = attacks::rotiv_corrupt_trace(world, target);
    const std::uint64_t later = rng.uniform_between(0, 3);
    for (std::uint64_t k = 0; k < later; ++k) {
      const std::uint64_t i = world.clock() + 1;
      world.execute(target, owner, i);
      world.execute(decoy, owner, i);
    }

    auto challenge = world.test(world.clock() + 1, target, decoy);
    AttackOutcome outcome = distinguisher(world.params(), know, challenge.view(), rng);
    TrialRecord rec;
    rec.guess = resolve(outcome.guess, rng, rec);
    rec.correct = challenge.submit(rec.guess);
    rec.truth = challenge.reveal();
    take_outcome(rec, std::move(outcome));
    return rec;
  };
}

}  // namespace otplab::games
