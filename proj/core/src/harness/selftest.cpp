#include "otplab/harness/selftest.hpp"

#include <chrono>
#include <ostream>

#include "otplab/attacks.hpp"
#include "otplab/chen.hpp"
#include "otplab/errors.hpp"
#include "otplab/games.hpp"
#include "otplab/harness/reference.hpp"
#include "otplab/rotiv.hpp"

namespace otplab::harness {

namespace {

Bytes random_bytes(Rng& rng, std::size_t max_len) {
  Bytes b(rng.uniform(max_len + 1));
  rng.fill(b);
  return b;
}

std::string crc16_check(bool corrupt, Rng rng) {
  prim::Crc16Table table = prim::crc16_table();
  if (corrupt) table[0x5A] ^= 0x0100;
  if (prim::crc16_with(table, as_bytes("123456789")) != 0x29B1) return "check value 0x29B1 not reproduced";
  for (int n = 0; n < 2000; ++n) {
    const Bytes b = random_bytes(rng, 64);
    if (prim::crc16_with(table, b) != reference::crc16_bitwise(b)) return "differs from bit-serial oracle";
  }
  return {};
}

std::string crc32_check(Rng rng) {
  if (prim::crc32(as_bytes("123456789")) != 0xCBF43926U) return "check value 0xCBF43926 not reproduced";
  for (int n = 0; n < 2000; ++n) {
    const Bytes b = random_bytes(rng, 64);
    if (prim::crc32(b) != reference::crc32_bitwise(b)) return "differs from bit-serial oracle";
  }
  return {};
}

std::string prng_additivity(Rng rng) {
  for (unsigned w : {8U, 16U, 32U}) {
    const prim::WordSpec spec(w);
    for (int n = 0; n < 1000; ++n) {
      const prim::Word s = spec.random(rng);
      const std::uint64_t a = rng.uniform(200);
      const std::uint64_t b = rng.uniform(200);
      if (spec.prng_iter(spec.prng_iter(s, a), b) != spec.prng_iter(s, a + b)) {
        return "prng_iter(prng_iter(s, a), b) != prng_iter(s, a + b) at w = " + std::to_string(w);
      }
    }
  }
  return {};
}

std::string lfsr_period() {
  for (unsigned w : {8U, 16U}) {
    const prim::WordSpec spec(w);
    const prim::Word start{1};
    prim::Word s = spec.prng_step(start);
    std::uint64_t period = 1;
    while (s != start && period <= spec.cardinality()) {
      s = spec.prng_step(s);
      ++period;
    }
    if (period != spec.cardinality() - 1) {
      return "period " + std::to_string(period) + " at w = " + std::to_string(w);
    }
  }
  return {};
}

std::string bilinearity(Rng rng) {
  for (std::uint64_t q : {group::kDefaultModulus, std::uint64_t{101}}) {
    const group::PairingParams p(q);
    for (int n = 0; n < 1000; ++n) {
      const group::Scalar a = p.random_scalar(rng);
      const group::Scalar b = p.random_scalar(rng);
      const auto lhs = p.pairing(p.pow(p.g1(), a), p.pow(p.g2(), b));
      if (lhs != p.pow(p.gT(), p.mul(a, b))) return "e(g1^a, g2^b) != gT^(ab) at q = " + std::to_string(q);
    }
  }
  return {};
}

std::string rotiv_honest(Rng rng) {
  const group::PairingParams params;
  for (int n = 0; n < 50; ++n) {
    const rotiv::IssuerKeys issuer = rotiv::setup_issuer(params, rng);
    rotiv::Owner cur(ideal::PartyId{"a"}, rotiv::make_owner_keys(params, rng));
    rotiv::Owner nxt(ideal::PartyId{"b"}, rotiv::make_owner_keys(params, rng));
    rotiv::IssuedTag issued = rotiv::init_tag(params, issuer, params.random_nonzero_scalar(rng), rng);
    cur.store(issued.ref);
    const auto tr = rotiv::run_ownership_transfer(params, issuer.pk, cur, nxt, issued.tag, rng);
    if (!tr.checks.all()) return "transfer check " + rotiv::to_string(tr.checks.first_failure()) + " failed";
    const rotiv::OwnerTagRef* ref = nxt.find(issued.ref.psi);
    if (ref == nullptr || ref->k_new != issued.tag.k) return "keys out of sync after transfer";
    rotiv::run_mutual_authentication(params, nxt, issued.tag, rng);
  }
  return {};
}

std::string rotiv_identity(Rng rng) {
  const group::PairingParams params;
  const rotiv::IssuerKeys issuer = rotiv::setup_issuer(params, rng);
  const group::Scalar t = params.random_nonzero_scalar(rng);
  const attacks::RotivAdversaryKnowledge know{t, params.pow(params.hash_to_g1(t), issuer.x), issuer.pk};
  for (int n = 0; n < 1000; ++n) {
    const rotiv::StateParam s{params.pow(params.g1(), params.random_scalar(rng)),
                              params.pow(params.g1(), params.random_scalar(rng))};
    if (!attacks::rotiv_trace_check(params, know, s)) return "check false for some v";
  }
  return {};
}

std::string chen_honest(Rng rng) {
  const prim::WordSpec spec(16);
  ideal::IdealLedger ledger(rng.next());
  const ideal::PartyId issuer_id{"issuer"};
  ledger.register_party(issuer_id);
  chen::ChenIssuer issuer(spec, issuer_id, rng.next());
  std::vector<ideal::PartyId> owners;
  for (int n = 0; n < 4; ++n) {
    owners.push_back(ideal::PartyId{"owner-" + std::to_string(n)});
    ledger.register_party(owners.back());
  }
  auto [tag, owner] = issuer.issue_tag(owners[0], prim::Word{0x1234});
  for (int n = 0; n < 100; ++n) chen::run_chen_session(spec, owner, tag, rng);
  if (owner.k != tag.k || owner.k_star != tag.k_star) return "desynchronized after sessions";
  for (int n = 1; n < 4; ++n) {
    auto [tr, next] = chen::run_chen_transfer(spec, ledger, issuer, owner, owners[n], tag, rng);
    owner = next;
    if (owner.t != issuer.certificate(tag.id_t)) return "certificate not recovered";
    if (owner.k != tag.k || owner.k_star != tag.k_star) return "desynchronized after transfer";
  }
  return {};
}

std::string chen_trace(std::uint64_t seed) {
  games::ChenGameParams p;
  const auto result = oracle::run_game(games::chen_trace_game(p), 60, seed);
  if (result.advantage < 0.9) return "advantage " + std::to_string(result.advantage);
  for (const auto& rec : result.records) {
    if (rec.correct && rec.raw_guess != Guess::Undetermined &&
        rec.outcome.recovered.k_star != rec.ground_truth.k_star) {
      return "recovered k* differs from ground truth";
    }
  }
  return {};
}

std::string chen_impersonation(std::uint64_t seed) {
  games::ChenImpersonationParams p;
  const auto hit = oracle::run_game(games::chen_impersonation_game(p), 30, seed);
  if (hit.correct != hit.trials) return std::to_string(hit.correct) + "/30 accepted";
  p.stale_keys = true;
  const auto stale = oracle::run_game(games::chen_impersonation_game(p), 30, seed);
  if (stale.correct > 1) return "stale keys accepted " + std::to_string(stale.correct) + "/30";
  return {};
}

std::string tau_bound() {
  try {
    attacks::validate_tau(prim::WordSpec(8), 512);
  } catch (const ConfigError&) {
    return {};
  }
  return "tau = 512 accepted at w = 8";
}

std::string random_baseline(std::uint64_t seed) {
  const auto r = oracle::run_game(games::chen_trace_game({}, games::chen_random_distinguisher()), 400, seed);
  if (r.advantage >= 0.2) return "advantage " + std::to_string(r.advantage);
  return {};
}

}  // namespace

std::vector<SelftestCheck> selftest_checks(const SelftestOptions& o) {
  const std::uint64_t s = o.seed;
  return {
      {"crc16 oracle", [=] { return crc16_check(o.corrupt_crc_table, Rng(Rng::derive_seed(s, 1))); }},
      {"crc32 oracle", [=] { return crc32_check(Rng(Rng::derive_seed(s, 2))); }},
      {"prng additivity", [=] { return prng_additivity(Rng(Rng::derive_seed(s, 3))); }},
      {"lfsr period", [] { return lfsr_period(); }},
      {"pairing bilinearity", [=] { return bilinearity(Rng(Rng::derive_seed(s, 4))); }},
      {"rotiv honest transfer", [=] { return rotiv_honest(Rng(Rng::derive_seed(s, 5))); }},
      {"rotiv identity property", [=] { return rotiv_identity(Rng(Rng::derive_seed(s, 6))); }},
      {"chen honest chain", [=] { return chen_honest(Rng(Rng::derive_seed(s, 7))); }},
      {"chen trace completeness", [=] { return chen_trace(Rng::derive_seed(s, 8)); }},
      {"chen impersonation", [=] { return chen_impersonation(Rng::derive_seed(s, 9)); }},
      {"tau bound", [] { return tau_bound(); }},
      {"random baseline", [=] { return random_baseline(Rng::derive_seed(s, 10)); }},
  };
}

int run_selftest(const SelftestOptions& options, std::ostream& out) {
  int failures = 0;
  for (const auto& check : selftest_checks(options)) {
    std::string reason;
    const auto start = std::chrono::steady_clock::now();
    try {
      reason = check.run();
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (reason.empty()) {
      out << "PASS " << check.name << " (" << ms.count() << " ms)\n";
    } else {
      ++failures;
      out << "FAIL " << check.name << ": " << reason << "\n";
    }
  }
  out << (failures == 0 ? "selftest passed" : "selftest failed") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace otplab::harness
