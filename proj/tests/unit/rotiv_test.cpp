#include <gtest/gtest.h>

#include "otplab/errors.hpp"
#include "otplab/rotiv.hpp"

namespace otplab::rotiv {
namespace {

class RotivTest : public ::testing::Test {
 protected:
  PairingParams params;
  Rng rng{2024};
  IssuerKeys issuer = setup_issuer(params, rng);
  Owner current{ideal::PartyId{"current"}, make_owner_keys(params, rng)};
  Owner next{ideal::PartyId{"next"}, make_owner_keys(params, rng)};
  IssuedTag issued = init_tag(params, issuer, params.random_nonzero_scalar(rng), rng);
  RotivTagState& tag = issued.tag;

  void SetUp() override { current.store(issued.ref); }

  // Keys the owner would use for its next session with the tag.
  const OwnerTagRef& ref_of(const Owner& o) const { return *o.find(issued.ref.psi); }
};

TEST_F(RotivTest, IssuedStateIsConsistent) {
  EXPECT_TRUE(tag.s.u.is_identity());
  EXPECT_EQ(tag.s.v, issued.ref.psi);
  EXPECT_EQ(issued.ref.k_old, issued.ref.k_new);
  EXPECT_EQ(issued.ref.k_new, tag.k);
  EXPECT_TRUE(verify_issuer_static(params, issued.ref.delta, issued.ref.psi, issuer.pk));
  EXPECT_EQ(issuer.pk, params.pow(params.g2(), issuer.x));
}

TEST_F(RotivTest, IssuerStaticRejectsForgery) {
  EXPECT_FALSE(verify_issuer_static(params, params.add(issued.ref.delta, Scalar{1}), issued.ref.psi, issuer.pk));
  EXPECT_FALSE(verify_issuer_static(params, issued.ref.delta, params.mul(issued.ref.psi, params.g1()), issuer.pk));
  EXPECT_FALSE(verify_issuer_static(params, issued.ref.delta, params.g2(), issuer.pk));
}

TEST_F(RotivTest, HonestTransferPassesEveryCheck) {
  const TransferTranscript tr = run_ownership_transfer(params, issuer.pk, current, next, tag, rng);
  EXPECT_TRUE(tr.checks.all());
  EXPECT_EQ(tr.checks.first_failure(), TransferCheck::Ok);
  EXPECT_TRUE(tr.tag_accepted_update);
  EXPECT_EQ(tr.slot, KeySlot::New);
  ASSERT_NE(next.find(issued.ref.psi), nullptr);
  EXPECT_EQ(ref_of(next).k_new, tag.k);
  EXPECT_EQ(ref_of(next).k_old, issued.ref.k_new);
  EXPECT_EQ(ref_of(current).k_new, tag.k);
  // New state decrypts to psi under the new owner's alpha only.
  EXPECT_EQ(recover_psi(params, tag.s, next.keys().alpha), issued.ref.psi);
  EXPECT_NE(recover_psi(params, tag.s, current.keys().alpha), issued.ref.psi);
  EXPECT_FALSE(tag.s.u.is_identity());
}

TEST_F(RotivTest, NewOwnerRunsSessionsAfterTransfer) {
  run_ownership_transfer(params, issuer.pk, current, next, tag, rng);
  for (int i = 0; i < 5; ++i) {
    const StateParam before = tag.s;
    const SessionTranscript s = run_mutual_authentication(params, next, tag, rng);
    EXPECT_EQ(s.slot, KeySlot::New);
    EXPECT_TRUE(s.tag_accepted_update);
    EXPECT_NE(tag.s, before);
    EXPECT_EQ(ref_of(next).k_new, tag.k);
  }
}

TEST_F(RotivTest, KeyChainFollowsOwnerNonce) {
  const Key k0 = tag.k;
  const TransferTranscript tr = run_ownership_transfer(params, issuer.pk, current, next, tag, rng);
  EXPECT_EQ(tag.k, derive_next_key(k0, tr.n_owner));
}

TEST_F(RotivTest, DroppedFinalMessageRecoversThroughOldKey) {
  TransferOptions opt;
  opt.drop_final = true;
  const Key k0 = tag.k;
  const TransferTranscript tr = run_ownership_transfer(params, issuer.pk, current, next, tag, rng, opt);
  EXPECT_FALSE(tr.update.has_value());
  EXPECT_FALSE(tr.tag_accepted_update);
  EXPECT_EQ(tag.k, k0);
  const SessionTranscript s = run_mutual_authentication(params, next, tag, rng);
  EXPECT_EQ(s.slot, KeySlot::Old);
  EXPECT_EQ(ref_of(next).k_new, tag.k);
  EXPECT_EQ(run_mutual_authentication(params, next, tag, rng).slot, KeySlot::New);
}

TEST_F(RotivTest, LiteralReencryptionLocksOutNewOwner) {
  TransferOptions opt;
  opt.literal_reencryption = true;
  run_ownership_transfer(params, issuer.pk, current, next, tag, rng, opt);
  EXPECT_THROW(run_mutual_authentication(params, next, tag, rng), IdentificationError);
}

TEST_F(RotivTest, AuthenticationDetectsWrongPsiAndMac) {
  const Nonce n_o = random_nonce(rng);
  TagResponse msg = tag_respond(tag, n_o, rng);
  EXPECT_EQ(curowner_authenticate(params, issued.ref, current.keys().alpha, msg, n_o), KeySlot::New);

  OwnerTagRef other = issued.ref;
  other.psi = params.mul(other.psi, params.g1());
  try {
    curowner_authenticate(params, other, current.keys().alpha, msg, n_o);
    FAIL() << "expected IdentificationError";
  } catch (const IdentificationError& e) {
    EXPECT_EQ(e.step(), 3U);
  }

  msg.m[0] ^= 1;
  EXPECT_THROW(curowner_authenticate(params, issued.ref, current.keys().alpha, msg, n_o), AuthenticationError);
  msg.m[0] ^= 1;
  EXPECT_THROW(curowner_authenticate(params, issued.ref, current.keys().alpha, msg, random_nonce(rng)),
               AuthenticationError);
}

TEST_F(RotivTest, TransferVerificationFlagsEachTamperedField) {
  const Nonce n_o = random_nonce(rng);
  const TagResponse msg = tag_respond(tag, n_o, rng);
  const Blinding b = newowner_blind(params, msg.s, rng);
  const Key k1 = derive_next_key(tag.k, n_o);
  const Release rel = curowner_release(params, issued.ref, current.keys().alpha, b.a_v, tag.k, k1);
  const GroupElement& pk2 = current.keys().pk2;
  ASSERT_TRUE(newowner_verify_transfer(params, rel.ref_v, rel.ref, issuer.pk, pk2, b.r_v, msg.s).all());

  Release bad = rel;
  bad.ref.delta = params.add(bad.ref.delta, Scalar{1});
  EXPECT_EQ(newowner_verify_transfer(params, bad.ref_v, bad.ref, issuer.pk, pk2, b.r_v, msg.s).first_failure(),
            TransferCheck::RefStatic);

  bad = rel;
  bad.ref_v.a = params.add(bad.ref_v.a, Scalar{1});
  EXPECT_EQ(newowner_verify_transfer(params, bad.ref_v, bad.ref, issuer.pk, pk2, b.r_v, msg.s).first_failure(),
            TransferCheck::IssuerEquation);

  bad = rel;
  bad.ref_v.c = params.mul(bad.ref_v.c, params.g1());
  EXPECT_EQ(newowner_verify_transfer(params, bad.ref_v, bad.ref, issuer.pk, pk2, b.r_v, msg.s).first_failure(),
            TransferCheck::BlindingEquation);

  // A state whose v does not encrypt the claimed psi.
  StateParam wrong = msg.s;
  wrong.v = params.mul(wrong.v, params.g1());
  const auto v = newowner_verify_transfer(params, rel.ref_v, rel.ref, issuer.pk, pk2, b.r_v, wrong);
  EXPECT_TRUE(v.blinding_eq);
  EXPECT_FALSE(v.state_eq);
  EXPECT_EQ(v.first_failure(), TransferCheck::StateEquation);
}

TEST_F(RotivTest, TransferFromWrongOwnerFailsAtIdentification) {
  Owner stranger(ideal::PartyId{"stranger"}, make_owner_keys(params, rng));
  try {
    run_ownership_transfer(params, issuer.pk, stranger, next, tag, rng);
    FAIL() << "expected IdentificationError";
  } catch (const IdentificationError& e) {
    EXPECT_EQ(e.step(), 3U);
  }
  EXPECT_EQ(next.size(), 0U);
}

TEST_F(RotivTest, TagRejectsForgedUpdate) {
  const Nonce n_o = random_nonce(rng);
  const TagResponse msg = tag_respond(tag, n_o, rng);
  UpdateMessage upd = newowner_reencrypt_and_update(params, issued.ref.psi, next.keys().alpha, tag.k, msg.n_tag, rng);
  const RotivTagState before = tag;
  UpdateMessage forged = upd;
  forged.s.v = params.mul(forged.s.v, params.g1());
  EXPECT_FALSE(tag_finalize(tag, forged, n_o, msg.n_tag));
  EXPECT_EQ(tag.k, before.k);
  EXPECT_EQ(tag.s, before.s);
  EXPECT_TRUE(tag_finalize(tag, upd, n_o, msg.n_tag));
}

TEST_F(RotivTest, SerializationRedactsSecureChannel) {
  const TransferTranscript tr = run_ownership_transfer(params, issuer.pk, current, next, tag, rng);
  const Bytes open = serialize(tr, false);
  const Bytes redacted = serialize(tr, true);
  EXPECT_NE(open, redacted);
  EXPECT_EQ(serialize(tr, true), redacted);
  TransferTranscript other = tr;
  other.handoff->ref.k_new[0] ^= 1;
  EXPECT_EQ(serialize(other, true), redacted);
  EXPECT_NE(serialize(other, false), open);
}

TEST_F(RotivTest, OwnerDatabaseReplacesByPsi) {
  Owner o(ideal::PartyId{"o"}, make_owner_keys(params, rng));
  o.store(issued.ref);
  OwnerTagRef updated = issued.ref;
  updated.k_new[0] ^= 0xFF;
  o.store(updated);
  EXPECT_EQ(o.size(), 1U);
  EXPECT_EQ(o.find(issued.ref.psi)->k_new, updated.k_new);
  EXPECT_EQ(o.find(params.g1()), nullptr);
  EXPECT_EQ(o.find(params.g2()), nullptr);
}

TEST(RotivSmallGroup, TransfersWorkAtQ101) {
  const PairingParams params(101);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const IssuerKeys issuer = setup_issuer(params, rng);
    Owner a(ideal::PartyId{"a"}, make_owner_keys(params, rng));
    Owner b(ideal::PartyId{"b"}, make_owner_keys(params, rng));
    IssuedTag t = init_tag(params, issuer, params.random_nonzero_scalar(rng), rng);
    a.store(t.ref);
    const auto tr = run_ownership_transfer(params, issuer.pk, a, b, t.tag, rng);
    ASSERT_TRUE(tr.checks.all());
  }
}

}  // namespace
}  // namespace otplab::rotiv
