#include "otplab/chen.hpp"

#include "otplab/errors.hpp"

namespace otplab::chen {

Word tag_hash(const WordSpec& spec, Word t) {
  const Bytes enc = spec.encode(t);
  const prim::Digest d = prim::keyed_hash({}, {as_bytes("issuer-id"), ByteView(enc)});
  std::uint64_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | d[static_cast<std::size_t>(i)];
  return spec.truncate(v);
}

Bytes serialize(const WordSpec& spec, const ChenAuthTranscript& t) {
  ByteWriter w;
  for (Word v : {t.n_owner, t.a, t.n_tag, t.y, t.z}) spec.encode(w, v);
  return std::move(w).take();
}

Word challenge_mac(const WordSpec& spec, Word k, Word n_owner) { return spec.crc(k ^ n_owner); }

Word response_x(const WordSpec& spec, Word n_tag, Word k_star) { return spec.crc(n_tag ^ k_star); }

Word response_z(const WordSpec& spec, Word x, Word k, Word y) { return spec.crc(x ^ k ^ y); }

Word transport_y(Word k_star, Word id_t, Word x, Word k_next) { return k_star ^ id_t ^ x ^ k_next; }

Word extract_key(Word y, Word k_star, Word id_t, Word x) { return y ^ k_star ^ id_t ^ x; }

Word fresh_key(const WordSpec& spec, Word k, Word n_tag) { return spec.prng_step(k ^ n_tag); }

Challenge owner_challenge(const WordSpec& spec, const ChenOwnerState& owner, Word n_owner) {
  return Challenge{n_owner, challenge_mac(spec, owner.k, n_owner)};
}

Challenge owner_challenge(const WordSpec& spec, const ChenOwnerState& owner, Rng& rng) {
  return owner_challenge(spec, owner, spec.random(rng));
}

std::optional<TagResponse> tag_respond(const WordSpec& spec, ChenTagState& tag,
                                       const Challenge& challenge, Word n_tag) {
  if (challenge_mac(spec, tag.k, challenge.n_owner) != challenge.a) return std::nullopt;
  const Word x = response_x(spec, n_tag, tag.k_star);
  const Word k_next = fresh_key(spec, tag.k, n_tag);
  const Word y = transport_y(tag.k_star, tag.id_t, x, k_next);
  const Word z = response_z(spec, x, tag.k, y);
  tag.k = k_next;
  tag.k_star = spec.prng_step(tag.k_star);
  return TagResponse{n_tag, y, z};
}

std::optional<TagResponse> tag_respond(const WordSpec& spec, ChenTagState& tag,
                                       const Challenge& challenge, Rng& rng) {
  return tag_respond(spec, tag, challenge, spec.random(rng));
}

Word owner_verify_response(const WordSpec& spec, ChenOwnerState& owner, const Challenge& challenge,
                           const TagResponse& msg) {
  (void)challenge;
  const Word x = response_x(spec, msg.n_tag, owner.k_star);
  if (response_z(spec, x, owner.k, msg.y) != msg.z) {
    throw AuthenticationError(3, "Z_i does not verify");
  }
  const Word k_next = extract_key(msg.y, owner.k_star, owner.id_t, x);
  owner.k = k_next;
  owner.k_star = spec.prng_step(owner.k_star);
  return k_next;
}

ChenAuthTranscript run_chen_session(const WordSpec& spec, ChenOwnerState& owner, ChenTagState& tag,
                                    Rng& rng) {
  const Challenge ch = owner_challenge(spec, owner, rng);
  const std::optional<TagResponse> resp = tag_respond(spec, tag, ch, rng);
  if (!resp) throw AuthenticationError(2, "tag rejected A_i");
  owner_verify_response(spec, owner, ch, *resp);
  return ChenAuthTranscript{ch.n_owner, ch.a, resp->n_tag, resp->y, resp->z};
}

Bytes certificate_claim(const WordSpec& spec, Word t, const ideal::PartyId& recipient) {
  ByteWriter w;
  w.str("cert");
  spec.encode(w, t);
  w.framed(as_bytes(recipient.name));
  return std::move(w).take();
}

Bytes owner_pair_claim(const ideal::PartyId& current, const ideal::PartyId& next) {
  ByteWriter w;
  w.str("owners").framed(as_bytes(current.name)).framed(as_bytes(next.name));
  return std::move(w).take();
}

namespace {

Bytes encode_requiring_payload(const WordSpec& spec, Word t, const ideal::IdealSignature& sg) {
  ByteWriter w;
  spec.encode(w, t);
  w.u64(sg.handle);
  return std::move(w).take();
}

}  // namespace

RequiringMessage requiring_phase(const WordSpec& spec, ideal::IdealLedger& ledger,
                                 const ChenOwnerState& current, const ideal::PartyId& next) {
  const ideal::IdealSignature sg =
      ledger.sign(current.id_owner, certificate_claim(spec, current.t, next));
  const Bytes payload = encode_requiring_payload(spec, current.t, sg);
  return RequiringMessage{current.id_owner, ledger.encrypt(next, payload)};
}

RequiringContents open_requiring(const WordSpec& spec, const ideal::IdealLedger& ledger,
                                 const ideal::PartyId& next, const RequiringMessage& msg) {
  const Bytes payload = ledger.decrypt(next, msg.c);
  if (payload.size() != spec.byte_width() + 8) throw ProtocolError(1, "malformed C_i payload");
  std::uint64_t t = 0;
  for (std::size_t i = spec.byte_width(); i-- > 0;) t = (t << 8) | payload[i];
  std::uint64_t handle = 0;
  for (std::size_t i = 8; i-- > 0;) handle = (handle << 8) | payload[spec.byte_width() + i];
  RequiringContents out{spec.make(t), ideal::IdealSignature{handle}};
  if (!ledger.verify(msg.id_current, certificate_claim(spec, out.t, next), out.sg_current)) {
    throw ProtocolError(1, "SG_{O_n} does not verify for " + next.name);
  }
  return out;
}

std::pair<ChenTagState, ChenOwnerState> ChenIssuer::issue_tag(const ideal::PartyId& owner, Word id_t) {
  if (certificates_.contains(id_t.value)) {
    throw ContractError("tag id already issued: " + std::to_string(id_t.value));
  }
  const Word t = spec_.random(rng_);
  const Word k = spec_.random(rng_);
  const Word k_star = spec_.random(rng_);
  certificates_[id_t.value] = t;
  return {ChenTagState{id_t, tag_hash(spec_, t), k, k_star}, ChenOwnerState{owner, t, k, k_star, id_t}};
}

Word ChenIssuer::certificate(Word id_t) const {
  auto it = certificates_.find(id_t.value);
  if (it == certificates_.end()) throw LookupError("issuer has no tag " + std::to_string(id_t.value));
  return it->second;
}

IssuerResponse ChenIssuer::handle(const ideal::IdealLedger& ledger, const IssuerRequest& request) {
  log_.push_back(Record{request, std::nullopt});
  auto it = certificates_.find(request.id_t.value);
  if (it == certificates_.end()) throw ProtocolError(2, "issuer: unknown tag");
  if (it->second != request.t) throw ProtocolError(2, "issuer: t_i does not match the issued certificate");
  if (!ledger.verify(request.id_current, certificate_claim(spec_, request.t, request.id_next),
                     request.sg_current)) {
    throw ProtocolError(2, "issuer: SG_{O_n} invalid");
  }
  if (!ledger.verify(request.id_next, owner_pair_claim(request.id_current, request.id_next),
                     request.sg_next)) {
    throw ProtocolError(2, "issuer: SG_{O_{n+1}} invalid");
  }
  Word t_next = spec_.random(rng_);
  while (t_next == request.t) t_next = spec_.random(rng_);
  it->second = t_next;
  IssuerResponse resp{t_next ^ request.k_next, tag_hash(spec_, t_next)};
  log_.back().response = resp;
  return resp;
}

TransferPhaseResult ownership_transfer_phase(const WordSpec& spec, ideal::IdealLedger& ledger,
                                             ChenIssuer& issuer, const ChenOwnerState& current,
                                             const ideal::PartyId& next,
                                             const RequiringMessage& requiring, Word k_next,
                                             ChenTagState& tag) {
  const RequiringContents contents = open_requiring(spec, ledger, next, requiring);
  const ideal::IdealSignature sg_next = ledger.sign(next, owner_pair_claim(current.id_owner, next));

  IssuerRequest request{current.id_owner, next,     contents.sg_current, sg_next,
                        contents.t,       current.id_t, k_next};
  const IssuerResponse resp = issuer.handle(ledger, request);

  // O_n writes h(t_{i+1}) into the tag and forwards the masked certificate.
  tag.h_t = resp.h_t_next;

  TransferPhaseResult out;
  out.bundle = TransferBundle{requiring.c, contents.sg_current, sg_next, resp.masked_cert, resp.h_t_next};
  out.new_owner = ChenOwnerState{next, resp.masked_cert ^ k_next, current.k, current.k_star, current.id_t};
  return out;
}

std::pair<ChenTransferTranscript, ChenOwnerState> run_chen_transfer(
    const WordSpec& spec, ideal::IdealLedger& ledger, ChenIssuer& issuer, ChenOwnerState& current,
    const ideal::PartyId& next, ChenTagState& tag, Rng& rng) {
  ChenTransferTranscript tr;
  tr.requiring = requiring_phase(spec, ledger, current, next);
  tr.auth = run_chen_session(spec, current, tag, rng);
  TransferPhaseResult phase =
      ownership_transfer_phase(spec, ledger, issuer, current, next, tr.requiring, current.k, tag);
  tr.bundle = phase.bundle;
  return {tr, phase.new_owner};
}

}  // namespace otplab::chen
