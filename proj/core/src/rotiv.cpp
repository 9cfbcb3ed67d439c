#include "otplab/rotiv.hpp"

#include "otplab/errors.hpp"

namespace otplab::rotiv {

namespace {

ByteView view(const Key& k) { return ByteView(k.data(), k.size()); }

Bytes encode_state(const StateParam& s) {
  ByteWriter w;
  encode(w, s);
  return std::move(w).take();
}

}  // namespace

Nonce random_nonce(Rng& rng) {
  Nonce n{};
  rng.fill(n);
  return n;
}

void encode(ByteWriter& w, const StateParam& s) {
  group::encode(w, s.u);
  group::encode(w, s.v);
}

IssuerKeys setup_issuer(const PairingParams& params, Rng& rng) {
  const Scalar x = params.random_nonzero_scalar(rng);
  return {x, params.pow(params.g1(), x), params.pow(params.g2(), x)};
}

OwnerKeys make_owner_keys(const PairingParams& params, Rng& rng) {
  const Scalar alpha = params.random_nonzero_scalar(rng);
  return {alpha, params.pow(params.g1(), params.mul(alpha, alpha)), params.pow(params.g2(), alpha)};
}

IssuedTag init_tag(const PairingParams& params, const IssuerKeys& issuer, Scalar t, Rng& rng) {
  Key k0{};
  rng.fill(k0);
  const GroupElement psi = params.pow(params.hash_to_g1(t), issuer.x);
  IssuedTag out;
  out.tag.k = k0;
  out.tag.s = StateParam{params.identity(group::GroupId::G1), psi};
  out.ref = OwnerTagRef{k0, k0, t, psi};
  return out;
}

bool verify_issuer_static(const PairingParams& params, Scalar delta, const GroupElement& psi,
                          const GroupElement& pk_issuer) {
  if (psi.group != group::GroupId::G1) return false;
  return params.pairing(params.hash_to_g1(delta), pk_issuer) == params.pairing(psi, params.g2());
}

Mac response_mac(const Key& k, const Nonce& n_owner, const Nonce& n_tag, const StateParam& s) {
  const Bytes enc = encode_state(s);
  return prim::keyed_hash(view(k), {ByteView(n_owner), ByteView(n_tag), ByteView(enc)});
}

Mac update_mac(const Key& k, const Nonce& n_tag, const StateParam& s_next) {
  const Bytes enc = encode_state(s_next);
  return prim::keyed_hash(view(k), {ByteView(n_tag), ByteView(enc)});
}

Key derive_next_key(const Key& k, const Nonce& n_owner) {
  return prim::keyed_hash(view(k), {ByteView(n_owner)});
}

TagResponse tag_respond(const RotivTagState& tag, const Nonce& n_owner, Rng& rng) {
  TagResponse r;
  r.n_tag = random_nonce(rng);
  r.s = tag.s;
  r.m = response_mac(tag.k, n_owner, r.n_tag, tag.s);
  return r;
}

Blinding newowner_blind(const PairingParams& params, const StateParam& s, Rng& rng) {
  const Scalar r_v = params.random_nonzero_scalar(rng);
  return {r_v, params.pow(s.u, r_v)};
}

GroupElement recover_psi(const PairingParams& params, const StateParam& s, Scalar alpha) {
  return params.div(s.v, params.pow(s.u, params.mul(alpha, alpha)));
}

KeySlot curowner_authenticate(const PairingParams& params, const OwnerTagRef& ref, Scalar alpha,
                              const TagResponse& msg, const Nonce& n_owner) {
  if (recover_psi(params, msg.s, alpha) != ref.psi) {
    throw IdentificationError(3, "recovered psi is not in the owner database");
  }
  if (response_mac(ref.k_new, n_owner, msg.n_tag, msg.s) == msg.m) return KeySlot::New;
  if (response_mac(ref.k_old, n_owner, msg.n_tag, msg.s) == msg.m) return KeySlot::Old;
  throw AuthenticationError(3, "m_i matches neither k_new nor k_old");
}

Release curowner_release(const PairingParams& params, const OwnerTagRef& ref, Scalar alpha,
                         const GroupElement& a_v, const Key& k_current, const Key& k_next) {
  Release out;
  out.ref_v = RefV{ref.delta, ref.psi, params.pow(a_v, alpha)};
  out.ref = OwnerTagRef{k_current, k_next, ref.delta, ref.psi};
  return out;
}

std::string to_string(TransferCheck c) {
  switch (c) {
    case TransferCheck::Ok:
      return "ok";
    case TransferCheck::RefStatic:
      return "reference static values fail the issuer check";
    case TransferCheck::IssuerEquation:
      return "e(h(A), pk_I) != e(B, g2)";
    case TransferCheck::BlindingEquation:
      return "e(C, g2) != e(A_v, g2^alpha_n)";
    case TransferCheck::StateEquation:
      return "e(v_i, g2)^r_v != e(B, g2)^r_v e(C, g2^alpha_n)";
  }
  return "?";
}

TransferCheck TransferVerification::first_failure() const {
  if (!ref_static) return TransferCheck::RefStatic;
  if (!issuer_eq) return TransferCheck::IssuerEquation;
  if (!blinding_eq) return TransferCheck::BlindingEquation;
  if (!state_eq) return TransferCheck::StateEquation;
  return TransferCheck::Ok;
}

TransferVerification newowner_verify_transfer(const PairingParams& params, const RefV& ref_v,
                                              const OwnerTagRef& ref, const GroupElement& pk_issuer,
                                              const GroupElement& pk2_current, Scalar r_v,
                                              const StateParam& s) {
  const GroupElement g2 = params.g2();
  const GroupElement a_v = params.pow(s.u, r_v);
  TransferVerification out;
  out.ref_static = verify_issuer_static(params, ref.delta, ref.psi, pk_issuer);
  out.issuer_eq = params.pairing(params.hash_to_g1(ref_v.a), pk_issuer) == params.pairing(ref_v.b, g2);
  out.blinding_eq = params.pairing(ref_v.c, g2) == params.pairing(a_v, pk2_current);
  const GroupElement lhs = params.pow(params.pairing(s.v, g2), r_v);
  const GroupElement rhs = params.mul(params.pow(params.pairing(ref_v.b, g2), r_v),
                                      params.pairing(ref_v.c, pk2_current));
  out.state_eq = lhs == rhs;
  return out;
}

UpdateMessage newowner_reencrypt_and_update(const PairingParams& params, const GroupElement& psi,
                                            Scalar alpha_exec, const Key& k_current,
                                            const Nonce& n_tag, Rng& rng) {
  // r = 0 would leave u = 1 and expose psi directly.
  const Scalar r = params.random_nonzero_scalar(rng);
  const GroupElement g1 = params.g1();
  UpdateMessage out;
  out.s.u = params.pow(g1, r);
  out.s.v = params.mul(psi, params.pow(g1, params.mul(params.mul(alpha_exec, alpha_exec), r)));
  out.m = update_mac(k_current, n_tag, out.s);
  return out;
}

bool tag_finalize(RotivTagState& tag, const UpdateMessage& msg, const Nonce& n_owner,
                  const Nonce& n_tag) {
  if (update_mac(tag.k, n_tag, msg.s) != msg.m) return false;
  tag.s = msg.s;
  tag.k = derive_next_key(tag.k, n_owner);
  return true;
}

void Owner::store(const OwnerTagRef& ref) { db_[ref.psi.exponent.value] = ref; }

const OwnerTagRef* Owner::find(const GroupElement& psi) const {
  if (psi.group != group::GroupId::G1) return nullptr;
  auto it = db_.find(psi.exponent.value);
  return it == db_.end() ? nullptr : &it->second;
}

std::vector<OwnerTagRef> Owner::refs() const {
  std::vector<OwnerTagRef> out;
  out.reserve(db_.size());
  for (const auto& [_, ref] : db_) out.push_back(ref);
  return out;
}

namespace {

// Identification and key-slot selection against an owner's database.
std::pair<OwnerTagRef, KeySlot> owner_authenticate(const PairingParams& params, const Owner& owner,
                                                   const TagResponse& msg, const Nonce& n_owner,
                                                   std::size_t step) {
  const GroupElement psi = recover_psi(params, msg.s, owner.keys().alpha);
  const OwnerTagRef* ref = owner.find(psi);
  if (ref == nullptr) {
    throw IdentificationError(step, "owner '" + owner.id().name + "' has no record for the recovered psi");
  }
  try {
    return {*ref, curowner_authenticate(params, *ref, owner.keys().alpha, msg, n_owner)};
  } catch (const AuthenticationError&) {
    throw AuthenticationError(step, "m_i matches neither k_new nor k_old");
  }
}

}  // namespace

Bytes serialize(const TransferTranscript& t, bool redact) {
  ByteWriter w;
  w.str("rotiv/transfer");
  w.u8(1).raw(t.n_owner);
  w.u8(2).raw(t.response.n_tag);
  encode(w, t.response.s);
  w.raw(t.response.m);
  w.u8(3).raw(t.forward.m);
  encode(w, t.forward.s);
  w.raw(t.forward.n_tag);
  group::encode(w, t.forward.a_v);
  w.u8(4);
  if (!t.handoff) {
    w.str("absent");
  } else if (redact) {
    w.str("secure-channel");
  } else {
    const SecureHandoff& h = *t.handoff;
    w.u64(h.ref_v.a.value);
    group::encode(w, h.ref_v.b);
    group::encode(w, h.ref_v.c);
    w.raw(h.ref.k_old).raw(h.ref.k_new).u64(h.ref.delta.value);
    group::encode(w, h.ref.psi);
  }
  w.u8(5);
  if (t.update) {
    w.raw(t.update->m);
    encode(w, t.update->s);
  } else {
    w.str("dropped");
  }
  return std::move(w).take();
}

Bytes serialize(const SessionTranscript& t) {
  ByteWriter w;
  w.str("rotiv/session");
  w.u8(1).raw(t.n_owner);
  w.u8(2).raw(t.response.n_tag);
  encode(w, t.response.s);
  w.raw(t.response.m);
  w.u8(3);
  if (t.update) {
    w.raw(t.update->m);
    encode(w, t.update->s);
  } else {
    w.str("dropped");
  }
  return std::move(w).take();
}

TransferTranscript run_ownership_transfer(const PairingParams& params, const GroupElement& pk_issuer,
                                          Owner& current, Owner& next, RotivTagState& tag, Rng& rng,
                                          const TransferOptions& options) {
  TransferTranscript tr;

  // 1. N_O to the tag and the current owner.
  tr.n_owner = random_nonce(rng);

  // 2. Tag answers the new owner.
  tr.response = tag_respond(tag, tr.n_owner, rng);

  // 3. New owner blinds u_i and forwards everything to the current owner,
  //    who identifies and authenticates the tag.
  const Blinding blinding = newowner_blind(params, tr.response.s, rng);
  tr.forward = ForwardMessage{tr.response.m, tr.response.s, tr.response.n_tag, blinding.a_v};
  auto [ref, slot] = owner_authenticate(params, current, tr.response, tr.n_owner, 3);
  tr.slot = slot;
  const Key k_current = slot == KeySlot::New ? ref.k_new : ref.k_old;
  const Key k_next = derive_next_key(k_current, tr.n_owner);

  // 4. Secure hand-off of ref and refV; new owner checks them.
  const Release release =
      curowner_release(params, ref, current.keys().alpha, tr.forward.a_v, k_current, k_next);
  tr.handoff = SecureHandoff{release.ref_v, release.ref};
  tr.checks = newowner_verify_transfer(params, release.ref_v, release.ref, pk_issuer,
                                       current.keys().pk2, blinding.r_v, tr.response.s);
  if (!tr.checks.all()) throw ProtocolError(4, to_string(tr.checks.first_failure()));

  // 5. New owner refreshes the tag state and key.
  const Scalar alpha_exec =
      options.literal_reencryption ? current.keys().alpha : next.keys().alpha;
  UpdateMessage update = newowner_reencrypt_and_update(params, release.ref_v.b, alpha_exec,
                                                       k_current, tr.response.n_tag, rng);
  next.store(release.ref);
  current.store(release.ref);
  if (!options.drop_final) {
    tr.update = update;
    tr.tag_accepted_update = tag_finalize(tag, update, tr.n_owner, tr.response.n_tag);
    if (!tr.tag_accepted_update) throw AuthenticationError(5, "tag rejected m_{i+1}");
  }
  return tr;
}

SessionTranscript run_mutual_authentication(const PairingParams& params, Owner& owner,
                                            RotivTagState& tag, Rng& rng, bool drop_final) {
  SessionTranscript tr;
  tr.n_owner = random_nonce(rng);
  tr.response = tag_respond(tag, tr.n_owner, rng);
  auto [ref, slot] = owner_authenticate(params, owner, tr.response, tr.n_owner, 2);
  tr.slot = slot;
  const Key k_current = slot == KeySlot::New ? ref.k_new : ref.k_old;
  const Key k_next = derive_next_key(k_current, tr.n_owner);
  UpdateMessage update = newowner_reencrypt_and_update(params, ref.psi, owner.keys().alpha,
                                                       k_current, tr.response.n_tag, rng);
  owner.store(OwnerTagRef{k_current, k_next, ref.delta, ref.psi});
  if (!drop_final) {
    tr.update = update;
    tr.tag_accepted_update = tag_finalize(tag, update, tr.n_owner, tr.response.n_tag);
    if (!tr.tag_accepted_update) throw AuthenticationError(3, "tag rejected m_{j+1}");
  }
  return tr;
}

}  // namespace otplab::rotiv
