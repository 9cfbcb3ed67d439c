#pragma once

// ROTIV: issuer-verifiable ownership transfer with an HMAC-style tag
// authentication and an ElGamal-style tag state s = (u, v) = (g1^r, psi * g1^(a^2 r)),
// where psi = h(t)^x identifies the issuer's record for the tag.
//
// Free functions implement the individual protocol steps; Owner and the two
// run_* drivers orchestrate whole sessions. Tag-side steps never throw (a tag
// that rejects a message stays silent); owner-side steps throw subclasses of
// ProtocolError carrying the failing step index.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otplab/bytes.hpp"
#include "otplab/group_model.hpp"
#include "otplab/ideal.hpp"
#include "otplab/primitives.hpp"
#include "otplab/rng.hpp"

namespace otplab::rotiv {

using group::GroupElement;
using group::PairingParams;
using group::Scalar;

inline constexpr std::size_t kKeySize = prim::kDigestSize;
inline constexpr std::size_t kNonceSize = 16;

using Key = std::array<std::uint8_t, kKeySize>;
using Nonce = std::array<std::uint8_t, kNonceSize>;
using Mac = prim::Digest;

Nonce random_nonce(Rng& rng);

struct IssuerKeys {
  Scalar x;
  GroupElement g1_x;  // g1^x, part of sk_I
  GroupElement pk;    // g2^x
};

struct OwnerKeys {
  Scalar alpha;
  GroupElement pk1;  // g1^(alpha^2)
  GroupElement pk2;  // g2^alpha
};

// s = (u, v).
struct StateParam {
  GroupElement u;
  GroupElement v;

  friend bool operator==(const StateParam&, const StateParam&) = default;
};

void encode(ByteWriter& w, const StateParam& s);

struct RotivTagState {
  Key k{};
  StateParam s;
};

// ref = (k_old, k_new, delta, psi). delta = t and psi = h(t)^x are static.
struct OwnerTagRef {
  Key k_old{};
  Key k_new{};
  Scalar delta;
  GroupElement psi;
};

// refV = (A, B, C) = (t, h(t)^x, A_v^alpha_n).
struct RefV {
  Scalar a;
  GroupElement b;
  GroupElement c;
};

IssuerKeys setup_issuer(const PairingParams& params, Rng& rng);
OwnerKeys make_owner_keys(const PairingParams& params, Rng& rng);

struct IssuedTag {
  RotivTagState tag;
  OwnerTagRef ref;
};

// Tag gets (k0, (1, h(t)^x)); the first owner gets (k0, k0, t, h(t)^x).
IssuedTag init_tag(const PairingParams& params, const IssuerKeys& issuer, Scalar t, Rng& rng);

// e(h(delta), pk_I) == e(psi, g2).
bool verify_issuer_static(const PairingParams& params, Scalar delta, const GroupElement& psi,
                          const GroupElement& pk_issuer);

// ---------------------------------------------------------------------------
// Session steps

struct TagResponse {
  Nonce n_tag{};
  StateParam s;
  Mac m{};
};

// m_i = h_k(N_O, N_T, s_i).
Mac response_mac(const Key& k, const Nonce& n_owner, const Nonce& n_tag, const StateParam& s);
// m_{i+1} = h_k(N_T, s_{i+1}).
Mac update_mac(const Key& k, const Nonce& n_tag, const StateParam& s_next);
// k_{i+1} = h_k(N_O), the PRF-based key update.
Key derive_next_key(const Key& k, const Nonce& n_owner);

TagResponse tag_respond(const RotivTagState& tag, const Nonce& n_owner, Rng& rng);

struct Blinding {
  Scalar r_v;
  GroupElement a_v;  // u_i^r_v
};

Blinding newowner_blind(const PairingParams& params, const StateParam& s, Rng& rng);

// psi candidate v / u^(alpha^2).
GroupElement recover_psi(const PairingParams& params, const StateParam& s, Scalar alpha);

enum class KeySlot { New, Old };

// Identification by psi then MAC check against k_new, then k_old. Throws
// IdentificationError on a psi mismatch and AuthenticationError when
// neither key reproduces m_i.
KeySlot curowner_authenticate(const PairingParams& params, const OwnerTagRef& ref, Scalar alpha,
                              const TagResponse& msg, const Nonce& n_owner);

struct Release {
  RefV ref_v;
  OwnerTagRef ref;  // (k_i, k_{i+1}, t, psi), handed to the new owner
};

Release curowner_release(const PairingParams& params, const OwnerTagRef& ref, Scalar alpha,
                         const GroupElement& a_v, const Key& k_current, const Key& k_next);

enum class TransferCheck {
  Ok,
  RefStatic,        // static values of the handed-over ref fail the issuer check
  IssuerEquation,   // e(h(A), pk_I) = e(B, g2)
  BlindingEquation, // e(C, g2) = e(A_v, g2^alpha_n)
  StateEquation,    // e(v_i, g2)^r_v = e(B, g2)^r_v e(C, g2^alpha_n)
};

std::string to_string(TransferCheck c);

struct TransferVerification {
  bool ref_static = false;
  bool issuer_eq = false;
  bool blinding_eq = false;
  bool state_eq = false;

  bool all() const { return ref_static && issuer_eq && blinding_eq && state_eq; }
  // First failing check in evaluation order, or Ok.
  TransferCheck first_failure() const;
};

TransferVerification newowner_verify_transfer(const PairingParams& params, const RefV& ref_v,
                                              const OwnerTagRef& ref, const GroupElement& pk_issuer,
                                              const GroupElement& pk2_current, Scalar r_v,
                                              const StateParam& s);

struct UpdateMessage {
  StateParam s;
  Mac m{};
};

// s_{i+1} = (g1^r, psi * g1^(alpha^2 r)) with a fresh nonzero r.
UpdateMessage newowner_reencrypt_and_update(const PairingParams& params, const GroupElement& psi,
                                            Scalar alpha_exec, const Key& k_current,
                                            const Nonce& n_tag, Rng& rng);

// Checks m_{i+1} under the tag's current key; on success installs s_{i+1}
// and k_{i+1}. Returns false and leaves the tag untouched otherwise.
bool tag_finalize(RotivTagState& tag, const UpdateMessage& msg, const Nonce& n_owner,
                  const Nonce& n_tag);

// ---------------------------------------------------------------------------
// Entities and sessions

class Owner {
 public:
  Owner(ideal::PartyId id, OwnerKeys keys) : id_(std::move(id)), keys_(keys) {}

  const ideal::PartyId& id() const { return id_; }
  const OwnerKeys& keys() const { return keys_; }

  // Inserts or replaces the reference for ref.psi.
  void store(const OwnerTagRef& ref);
  const OwnerTagRef* find(const GroupElement& psi) const;
  std::size_t size() const { return db_.size(); }
  std::vector<OwnerTagRef> refs() const;

 private:
  ideal::PartyId id_;
  OwnerKeys keys_;
  std::map<std::uint64_t, OwnerTagRef> db_;  // keyed by psi exponent
};

struct TransferOptions {
  // Re-encrypt s_{i+1} under the current owner's alpha as literally written
  // instead of the executing (new) owner's. The new owner then cannot
  // identify the tag afterwards.
  bool literal_reencryption = false;
  // Drop the final (m_{i+1}, s_{i+1}) message before it reaches the tag.
  bool drop_final = false;
};

// Hand-off over the secure channel. Absent from every public view.
struct SecureHandoff {
  RefV ref_v;
  OwnerTagRef ref;
};

struct ForwardMessage {
  Mac m{};
  StateParam s;
  Nonce n_tag{};
  GroupElement a_v;
};

// The five ownership-transfer messages in order:
//   1. O_{n+1} -> T, O_n : N_O
//   2. T -> O_{n+1}      : N_T, s_i, m_i
//   3. O_{n+1} -> O_n    : m_i, s_i, N_T, A_v
//   4. O_n -> O_{n+1}    : ref, refV           (secure channel)
//   5. O_{n+1} -> T      : m_{i+1}, s_{i+1}    (missing when dropped)
struct TransferTranscript {
  Nonce n_owner{};
  TagResponse response;
  ForwardMessage forward;
  std::optional<SecureHandoff> handoff;
  std::optional<UpdateMessage> update;

  KeySlot slot = KeySlot::New;
  TransferVerification checks;
  bool tag_accepted_update = false;
};

// Plain owner/tag mutual authentication with state refresh.
//   1. O -> T : N_O
//   2. T -> O : N_T, s_j, m_j
//   3. O -> T : m_{j+1}, s_{j+1}
struct SessionTranscript {
  Nonce n_owner{};
  TagResponse response;
  std::optional<UpdateMessage> update;
  KeySlot slot = KeySlot::New;
  bool tag_accepted_update = false;
};

// Canonical byte logs. With redact set, the secure-channel payload is
// replaced by a fixed marker.
Bytes serialize(const TransferTranscript& t, bool redact = true);
Bytes serialize(const SessionTranscript& t);

// Runs the full transfer: the current owner authenticates the tag, hands
// the reference to `next`, which verifies it and refreshes the tag. On
// success `next` holds (k_i, k_{i+1}, t, psi) and `current` keeps the same
// reference. Throws ProtocolError (step = failing message index).
TransferTranscript run_ownership_transfer(const PairingParams& params, const GroupElement& pk_issuer,
                                          Owner& current, Owner& next, RotivTagState& tag, Rng& rng,
                                          const TransferOptions& options = {});

SessionTranscript run_mutual_authentication(const PairingParams& params, Owner& owner,
                                            RotivTagState& tag, Rng& rng, bool drop_final = false);

}  // namespace otplab::rotiv
