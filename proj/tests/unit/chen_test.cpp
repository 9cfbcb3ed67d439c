#include <gtest/gtest.h>

#include "otplab/chen.hpp"
#include "otplab/errors.hpp"

namespace otplab::chen {
namespace {

TEST(ChenSession, KnownVector) {
  const WordSpec spec(16);
  ChenTagState tag{Word{0x1234}, Word{0}, Word{0xBEEF}, Word{0x0F0F}};
  ChenOwnerState owner{ideal::PartyId{"o"}, Word{0}, Word{0xBEEF}, Word{0x0F0F}, Word{0x1234}};

  const Challenge ch = owner_challenge(spec, owner, Word{0x5555});
  EXPECT_EQ(ch.a.value, 0xA08CU);
  EXPECT_EQ(response_x(spec, Word{0xA5A5}, Word{0x0F0F}).value, 0xFB1AU);
  const auto resp = tag_respond(spec, tag, ch, Word{0xA5A5});
  ASSERT_TRUE(resp.has_value());
  EXPECT_EQ(resp->y.value, 0x6B84U);
  EXPECT_EQ(resp->z.value, 0xE3CBU);
  EXPECT_EQ(tag.k.value, 0x8DA5U);
  EXPECT_EQ(tag.k_star.value, 0x8787U);

  EXPECT_EQ(owner_verify_response(spec, owner, ch, *resp).value, 0x8DA5U);
  EXPECT_EQ(owner.k, tag.k);
  EXPECT_EQ(owner.k_star, tag.k_star);
}

TEST(ChenSession, TransportIsAnInvolution) {
  const WordSpec spec(16);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Word ks = spec.random(rng), id = spec.random(rng), x = spec.random(rng), kn = spec.random(rng);
    ASSERT_EQ(extract_key(transport_y(ks, id, x, kn), ks, id, x), kn);
  }
}

class ChenChainTest : public ::testing::TestWithParam<unsigned> {
 protected:
  WordSpec spec{GetParam()};
  Rng rng{77};
  ideal::IdealLedger ledger{1};
  ideal::PartyId issuer_id{"issuer"};
  ChenIssuer issuer{spec, issuer_id, 9};
};

TEST_P(ChenChainTest, LongChainStaysSynchronized) {
  auto [tag, owner] = issuer.issue_tag(ideal::PartyId{"o"}, Word{1});
  for (int i = 0; i < 500; ++i) {
    run_chen_session(spec, owner, tag, rng);
    ASSERT_EQ(owner.k, tag.k);
    ASSERT_EQ(owner.k_star, tag.k_star);
  }
}

TEST_P(ChenChainTest, TransfersRecoverCertificate) {
  std::vector<ideal::PartyId> owners;
  for (int i = 0; i < 6; ++i) {
    owners.push_back(ideal::PartyId{"o" + std::to_string(i)});
    ledger.register_party(owners.back());
  }
  auto [tag, owner] = issuer.issue_tag(owners[0], Word{2});
  for (int i = 1; i < 6; ++i) {
    const Word t_before = owner.t;
    auto [tr, next] = run_chen_transfer(spec, ledger, issuer, owner, owners[static_cast<std::size_t>(i)], tag, rng);
    EXPECT_NE(next.t, t_before);
    EXPECT_EQ(next.t, issuer.certificate(tag.id_t));
    EXPECT_EQ(tr.bundle.masked_cert ^ tag.k, next.t);  // certificate masked with k_{i+1}
    EXPECT_EQ(tag.h_t, tag_hash(spec, next.t));
    EXPECT_EQ(next.k, tag.k);
    EXPECT_EQ(next.k_star, tag.k_star);
    // The previous owner keeps its now-stale view of the same keys.
    EXPECT_EQ(owner.k, tag.k);
    EXPECT_EQ(owner.t, t_before);
    owner = next;
    run_chen_session(spec, owner, tag, rng);
  }
  EXPECT_EQ(issuer.log().size(), 5U);
}

INSTANTIATE_TEST_SUITE_P(Widths, ChenChainTest, ::testing::Values(8U, 16U, 32U));

TEST(ChenSession, TagIgnoresBadChallenge) {
  const WordSpec spec(16);
  ChenTagState tag{Word{1}, Word{0}, Word{0x1111}, Word{0x2222}};
  const ChenTagState before = tag;
  Challenge ch{Word{0x3333}, Word{0}};
  ch.a = challenge_mac(spec, Word{0x1112}, ch.n_owner);
  EXPECT_FALSE(tag_respond(spec, tag, ch, Word{5}).has_value());
  EXPECT_EQ(tag.k, before.k);
  EXPECT_EQ(tag.k_star, before.k_star);
}

TEST(ChenSession, OwnerRejectsBadResponseWithoutUpdating) {
  const WordSpec spec(16);
  ChenTagState tag{Word{1}, Word{0}, Word{0x1111}, Word{0x2222}};
  ChenOwnerState owner{ideal::PartyId{"o"}, Word{0}, Word{0x1111}, Word{0x2222}, Word{1}};
  const Challenge ch = owner_challenge(spec, owner, Word{9});
  TagResponse resp = *tag_respond(spec, tag, ch, Word{10});
  resp.z = resp.z ^ Word{1};
  const ChenOwnerState before = owner;
  try {
    owner_verify_response(spec, owner, ch, resp);
    FAIL() << "expected AuthenticationError";
  } catch (const AuthenticationError& e) {
    EXPECT_EQ(e.step(), 3U);
  }
  EXPECT_EQ(owner.k, before.k);
  EXPECT_EQ(owner.k_star, before.k_star);
}

TEST(ChenSession, DesynchronizedTagFailsAtStepTwo) {
  const WordSpec spec(16);
  Rng rng(4);
  ChenTagState tag{Word{1}, Word{0}, Word{0x1111}, Word{0x2222}};
  ChenOwnerState owner{ideal::PartyId{"o"}, Word{0}, Word{0x1111}, Word{0x2222}, Word{1}};
  // Lose the tag's answer once: the tag has moved on, the owner has not.
  const Challenge ch = owner_challenge(spec, owner, rng);
  ASSERT_TRUE(tag_respond(spec, tag, ch, rng).has_value());
  try {
    run_chen_session(spec, owner, tag, rng);
    FAIL() << "expected ProtocolError";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.step(), 2U);
  }
}

TEST(ChenSession, ConsecutiveZRelation) {
  // Z_{j+1} = CRC(k*_j ^ ID ^ X_j ^ X_{j+1} ^ Y_j ^ Y_{j+1}), independent of k.
  const WordSpec spec(16);
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    ChenTagState tag{spec.random(rng), Word{0}, spec.random(rng), spec.random(rng)};
    ChenOwnerState owner{ideal::PartyId{"o"}, Word{0}, tag.k, tag.k_star, tag.id_t};
    const Word ks_j = tag.k_star;
    const ChenAuthTranscript a = run_chen_session(spec, owner, tag, rng);
    const ChenAuthTranscript b = run_chen_session(spec, owner, tag, rng);
    const Word x_j = response_x(spec, a.n_tag, ks_j);
    const Word x_j1 = response_x(spec, b.n_tag, spec.prng_step(ks_j));
    ASSERT_EQ(b.z, spec.crc(ks_j ^ owner.id_t ^ x_j ^ x_j1 ^ a.y ^ b.y));
  }
}

TEST(ChenTransfer, RequiringIsAddressedToNextOwner) {
  const WordSpec spec(16);
  ideal::IdealLedger ledger(3);
  const ideal::PartyId a{"a"}, b{"b"}, c{"c"};
  for (const auto& p : {a, b, c}) ledger.register_party(p);
  ChenIssuer issuer(spec, ideal::PartyId{"i"}, 4);
  auto [tag, owner] = issuer.issue_tag(a, Word{7});
  const RequiringMessage msg = requiring_phase(spec, ledger, owner, b);
  EXPECT_EQ(open_requiring(spec, ledger, b, msg).t, owner.t);
  EXPECT_THROW(open_requiring(spec, ledger, c, msg), AuthorizationError);

  // A forged C_i carrying a signature over a different recipient.
  const ideal::IdealSignature sg = ledger.sign(a, certificate_claim(spec, owner.t, c));
  ByteWriter w;
  spec.encode(w, owner.t);
  w.u64(sg.handle);
  const RequiringMessage forged{a, ledger.encrypt(b, w.bytes())};
  try {
    open_requiring(spec, ledger, b, forged);
    FAIL() << "expected ProtocolError";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.step(), 1U);
  }
}

TEST(ChenTransfer, IssuerRejectsBadRequests) {
  const WordSpec spec(16);
  ideal::IdealLedger ledger(3);
  const ideal::PartyId a{"a"}, b{"b"};
  ledger.register_party(a);
  ledger.register_party(b);
  ChenIssuer issuer(spec, ideal::PartyId{"i"}, 4);
  auto [tag, owner] = issuer.issue_tag(a, Word{7});
  const auto sg_a = ledger.sign(a, certificate_claim(spec, owner.t, b));
  const auto sg_b = ledger.sign(b, owner_pair_claim(a, b));
  const IssuerRequest good{a, b, sg_a, sg_b, owner.t, tag.id_t, Word{0x77}};

  IssuerRequest bad = good;
  bad.t = owner.t ^ Word{1};
  EXPECT_THROW(issuer.handle(ledger, bad), ProtocolError);
  bad = good;
  bad.sg_next = sg_a;
  EXPECT_THROW(issuer.handle(ledger, bad), ProtocolError);
  bad = good;
  bad.id_t = Word{8};
  EXPECT_THROW(issuer.handle(ledger, bad), ProtocolError);
  EXPECT_EQ(issuer.certificate(tag.id_t), owner.t);

  const IssuerResponse resp = issuer.handle(ledger, good);
  EXPECT_EQ(resp.masked_cert ^ Word{0x77}, issuer.certificate(tag.id_t));
  EXPECT_EQ(resp.h_t_next, tag_hash(spec, issuer.certificate(tag.id_t)));
  EXPECT_EQ(issuer.log().size(), 4U);
  EXPECT_FALSE(issuer.log()[0].response.has_value());
  EXPECT_TRUE(issuer.log()[3].response.has_value());
  // Replaying the old certificate now fails.
  EXPECT_THROW(issuer.handle(ledger, good), ProtocolError);
}

TEST(ChenTransfer, IssuerLookupAndDuplicateIds) {
  const WordSpec spec(8);
  ChenIssuer issuer(spec, ideal::PartyId{"i"}, 4);
  issuer.issue_tag(ideal::PartyId{"a"}, Word{3});
  EXPECT_THROW(issuer.issue_tag(ideal::PartyId{"a"}, Word{3}), ContractError);
  EXPECT_THROW(issuer.certificate(Word{4}), LookupError);
}

TEST(ChenTagHash, KnownValues) {
  EXPECT_EQ(tag_hash(WordSpec(16), Word{0x1234}).value, 0x7F74U);
  EXPECT_EQ(tag_hash(WordSpec(8), Word{0x12}).value, 0x19U);
  EXPECT_EQ(tag_hash(WordSpec(32), Word{0xDEADBEEF}).value, 0x7C66930BU);
}

}  // namespace
}  // namespace otplab::chen
