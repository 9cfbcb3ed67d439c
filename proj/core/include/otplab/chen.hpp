#pragma once

// Chen et al.'s three-phase ownership transfer for EPC Gen2 tags:
// requiring (ideal sign+encrypt of the certificate t_i), authentication
// (CRC/PRNG only on the tag) and ownership transfer through the issuer.
//
// Key generation inside the authentication phase: the tag draws
// k_{i+1} = PRNG(k_i xor N_T) and transports it in
//   Y_i = k*_i xor ID_T xor X_i xor k_{i+1},
// the owner recovers it as Y_i xor k*_i xor ID_T xor X_i after checking
//   Z_i = CRC(X_i xor k_i xor Y_i), X_i = CRC(N_T xor k*_i).

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "otplab/bytes.hpp"
#include "otplab/ideal.hpp"
#include "otplab/primitives.hpp"
#include "otplab/rng.hpp"

namespace otplab::chen {

using prim::Word;
using prim::WordSpec;

struct ChenTagState {
  Word id_t;
  Word h_t;  // truncated hash of the issuer identification
  Word k;
  Word k_star;
};

struct ChenOwnerState {
  ideal::PartyId id_owner;
  Word t;  // issuer identification t_i
  Word k;
  Word k_star;
  Word id_t;
};

// h(t) truncated to w bits, as stored on the tag.
Word tag_hash(const WordSpec& spec, Word t);

// ---------------------------------------------------------------------------
// Authentication phase

struct Challenge {
  Word n_owner;
  Word a;
};

struct TagResponse {
  Word n_tag;
  Word y;
  Word z;
};

// (N_O, A, N_T, Y, Z) exactly as exchanged.
struct ChenAuthTranscript {
  Word n_owner;
  Word a;
  Word n_tag;
  Word y;
  Word z;

  friend bool operator==(const ChenAuthTranscript&, const ChenAuthTranscript&) = default;
};

Bytes serialize(const WordSpec& spec, const ChenAuthTranscript& t);

// A = CRC(k xor N_O).
Word challenge_mac(const WordSpec& spec, Word k, Word n_owner);
// X = CRC(N_T xor k*).
Word response_x(const WordSpec& spec, Word n_tag, Word k_star);
// Z = CRC(X xor k xor Y).
Word response_z(const WordSpec& spec, Word x, Word k, Word y);
// Y = k* xor ID xor X xor k_next.
Word transport_y(Word k_star, Word id_t, Word x, Word k_next);
// Inverse of transport_y: k_next = Y xor k* xor ID xor X.
Word extract_key(Word y, Word k_star, Word id_t, Word x);
// k_{i+1} = PRNG(k_i xor N_T).
Word fresh_key(const WordSpec& spec, Word k, Word n_tag);

Challenge owner_challenge(const WordSpec& spec, const ChenOwnerState& owner, Rng& rng);
Challenge owner_challenge(const WordSpec& spec, const ChenOwnerState& owner, Word n_owner);

// Verifies A against the tag key; on success answers and advances
// (k, k*) <- (k_{i+1}, PRNG(k*)). Returns nullopt (tag silent, no update)
// if A does not verify.
std::optional<TagResponse> tag_respond(const WordSpec& spec, ChenTagState& tag,
                                       const Challenge& challenge, Rng& rng);
std::optional<TagResponse> tag_respond(const WordSpec& spec, ChenTagState& tag,
                                       const Challenge& challenge, Word n_tag);

// Checks Z, extracts k_{i+1}, advances the owner's keys and returns the new
// key. Throws AuthenticationError (no update) on a Z mismatch.
Word owner_verify_response(const WordSpec& spec, ChenOwnerState& owner, const Challenge& challenge,
                           const TagResponse& msg);

// One full authentication session. Throws ProtocolError: step 2 when the
// tag stays silent, step 3 on owner-side rejection.
ChenAuthTranscript run_chen_session(const WordSpec& spec, ChenOwnerState& owner, ChenTagState& tag,
                                    Rng& rng);

// ---------------------------------------------------------------------------
// Requiring and ownership-transfer phases

struct RequiringMessage {
  ideal::PartyId id_current;
  ideal::IdealCiphertext c;
};

// Encoding of the signed payload (t_i, ID_{O_{n+1}}).
Bytes certificate_claim(const WordSpec& spec, Word t, const ideal::PartyId& recipient);

// C_i = E_{pk_{O_{n+1}}}(t_i, Sign_{O_n}(t_i, ID_{O_{n+1}})).
RequiringMessage requiring_phase(const WordSpec& spec, ideal::IdealLedger& ledger,
                                 const ChenOwnerState& current, const ideal::PartyId& next);

struct RequiringContents {
  Word t;
  ideal::IdealSignature sg_current;
};

// New owner side: decrypt C_i and check the current owner's signature over
// (t_i, own id). Throws AuthorizationError if C_i is not addressed to `next`
// and ProtocolError(1) on a bad signature.
RequiringContents open_requiring(const WordSpec& spec, const ideal::IdealLedger& ledger,
                                 const ideal::PartyId& next, const RequiringMessage& msg);

struct IssuerRequest {
  ideal::PartyId id_current;
  ideal::PartyId id_next;
  ideal::IdealSignature sg_current;
  ideal::IdealSignature sg_next;
  Word t;
  Word id_t;    // which tag; implicit in the message flow
  Word k_next;  // attached by O_n when forwarding; masks the new certificate
};

struct IssuerResponse {
  Word masked_cert;  // t_{i+1} xor k_{i+1}
  Word h_t_next;     // h(t_{i+1})
};

// In-process issuer endpoint. Keeps the current certificate of every tag it
// issued and a request/response log.
class ChenIssuer {
 public:
  ChenIssuer(WordSpec spec, ideal::PartyId id, std::uint64_t seed)
      : spec_(spec), id_(std::move(id)), rng_(seed) {}

  const ideal::PartyId& id() const { return id_; }

  // Registers a new tag owned by `owner`; returns the tag's initial state and
  // the owner's view of it.
  std::pair<ChenTagState, ChenOwnerState> issue_tag(const ideal::PartyId& owner, Word id_t);

  // Validates both signatures and that t matches the issued certificate.
  // Throws ProtocolError(2) when rejected.
  IssuerResponse handle(const ideal::IdealLedger& ledger, const IssuerRequest& request);

  // Current certificate for a tag. Throws LookupError.
  Word certificate(Word id_t) const;

  struct Record {
    IssuerRequest request;
    std::optional<IssuerResponse> response;
  };
  const std::vector<Record>& log() const { return log_; }

 private:
  WordSpec spec_;
  ideal::PartyId id_;
  Rng rng_;
  std::map<std::uint32_t, Word> certificates_;
  std::vector<Record> log_;
};

Bytes owner_pair_claim(const ideal::PartyId& current, const ideal::PartyId& next);

// Everything the ownership-transfer phase puts on the wire.
struct TransferBundle {
  ideal::IdealCiphertext c_i;
  ideal::IdealSignature sg_current;
  ideal::IdealSignature sg_next;
  Word masked_cert;  // forwarded O_n -> O_{n+1}
  Word h_t_next;     // written into the tag by O_n
};

struct TransferPhaseResult {
  TransferBundle bundle;
  ChenOwnerState new_owner;  // holds t_{i+1}, k_{i+1}, k*_{i+1}
};

// Transfer phase: O_{n+1} opens C_i, signs (ID_{O_n}, ID_{O_{n+1}}),
// the request travels via O_n (who attaches k_next) to the issuer, O_n writes
// h(t_{i+1}) into the tag and forwards the masked certificate, O_{n+1}
// unmasks it with k_next.
TransferPhaseResult ownership_transfer_phase(const WordSpec& spec, ideal::IdealLedger& ledger,
                                             ChenIssuer& issuer, const ChenOwnerState& current,
                                             const ideal::PartyId& next,
                                             const RequiringMessage& requiring, Word k_next,
                                             ChenTagState& tag);

struct ChenTransferTranscript {
  RequiringMessage requiring;
  ChenAuthTranscript auth;
  TransferBundle bundle;
};

// Requiring, authentication and transfer phases back to back. `current` is
// updated by the authentication phase and keeps its (now stale) knowledge;
// the returned state belongs to the new owner.
std::pair<ChenTransferTranscript, ChenOwnerState> run_chen_transfer(
    const WordSpec& spec, ideal::IdealLedger& ledger, ChenIssuer& issuer, ChenOwnerState& current,
    const ideal::PartyId& next, ChenTagState& tag, Rng& rng);

}  // namespace otplab::chen
