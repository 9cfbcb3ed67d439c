#include "otplab/harness/demo.hpp"

#include <ostream>
#include <sstream>

#include "otplab/chen.hpp"
#include "otplab/errors.hpp"
#include "otplab/rotiv.hpp"

namespace otplab::harness {

namespace {

std::string hex(const group::GroupElement& e) {
  std::ostringstream os;
  os << "G" << static_cast<int>(e.group) << ":" << std::hex << e.exponent.value;
  return os.str();
}

template <std::size_t N>
std::string hex(const std::array<std::uint8_t, N>& a) {
  return to_hex(ByteView(a.data(), a.size()));
}

std::string hex(const rotiv::StateParam& s) { return "(" + hex(s.u) + ", " + hex(s.v) + ")"; }

std::string hex(prim::Word w, unsigned bits) {
  std::ostringstream os;
  os << std::hex;
  os.width(static_cast<std::streamsize>(bits / 4));
  os.fill('0');
  os << w.value;
  return os.str();
}

void line(std::ostream& out, const std::string& label, const std::string& route, const std::string& body) {
  out << "  " << label << "  " << route << " : " << body << "\n";
}

int rotiv_demo(const DemoOptions& opt, std::ostream& out) {
  const group::PairingParams params(opt.q);
  Rng rng(opt.seed);
  const rotiv::IssuerKeys issuer = rotiv::setup_issuer(params, rng);
  rotiv::Owner current(ideal::PartyId{"O_n"}, rotiv::make_owner_keys(params, rng));
  rotiv::Owner next(ideal::PartyId{"O_n+1"}, rotiv::make_owner_keys(params, rng));
  rotiv::IssuedTag issued = rotiv::init_tag(params, issuer, params.random_nonzero_scalar(rng), rng);
  current.store(issued.ref);
  rotiv::RotivTagState tag = issued.tag;

  out << "rotiv ownership transfer (q = " << params.q() << ", seed = " << opt.seed << ")\n";
  rotiv::TransferOptions options;
  options.drop_final = opt.drop_message;
  options.literal_reencryption = opt.literal_reencryption;
  const rotiv::TransferTranscript tr =
      rotiv::run_ownership_transfer(params, issuer.pk, current, next, tag, rng, options);

  line(out, "[1]", "O_n+1 -> T, O_n", "N_O = " + hex(tr.n_owner));
  line(out, "[2]", "T -> O_n+1     ", "N_T = " + hex(tr.response.n_tag) + ", s_i = " + hex(tr.response.s) +
                                          ", m_i = " + hex(tr.response.m));
  line(out, "[3]", "O_n+1 -> O_n   ", "m_i, s_i, N_T, A_v = " + hex(tr.forward.a_v));
  if (opt.reveal) {
    const rotiv::SecureHandoff& h = *tr.handoff;
    line(out, "[4]", "O_n -> O_n+1   ", "refV = (" + std::to_string(h.ref_v.a.value) + ", " + hex(h.ref_v.b) +
                                             ", " + hex(h.ref_v.c) + "), ref.k_new = " + hex(h.ref.k_new));
  } else {
    line(out, "[4]", "O_n -> O_n+1   ", "ref, refV over the secure channel (hidden, use --reveal)");
  }
  out << "  checks: ref-static " << tr.checks.ref_static << ", issuer " << tr.checks.issuer_eq << ", blinding "
      << tr.checks.blinding_eq << ", state " << tr.checks.state_eq << "\n";
  if (!tr.update) {
    line(out, "[5]", "O_n+1 -> T     ", "(dropped)");
    throw ProtocolError(5, "m_{i+1}, s_{i+1} never reached the tag; tag state not refreshed");
  }
  line(out, "[5]", "O_n+1 -> T     ", "m_i+1 = " + hex(tr.update->m) + ", s_i+1 = " + hex(tr.update->s));

  out << "rotiv mutual authentication with the new owner\n";
  const rotiv::SessionTranscript s = rotiv::run_mutual_authentication(params, next, tag, rng);
  line(out, "[1]", "O -> T", "N_O = " + hex(s.n_owner));
  line(out, "[2]", "T -> O", "N_T = " + hex(s.response.n_tag) + ", s_j = " + hex(s.response.s) +
                                 ", m_j = " + hex(s.response.m));
  line(out, "[3]", "O -> T", "m_j+1 = " + hex(s.update->m) + ", s_j+1 = " + hex(s.update->s));
  const rotiv::OwnerTagRef* ref = next.find(issued.ref.psi);
  if (ref == nullptr || ref->k_new != tag.k) throw ProtocolError(3, "owner and tag keys out of sync");
  out << "  keys synchronized\n";
  return 0;
}

int chen_demo(const DemoOptions& opt, std::ostream& out) {
  const prim::WordSpec spec(opt.word_width);
  const unsigned w = spec.bits();
  Rng rng(opt.seed);
  ideal::IdealLedger ledger(rng.next());
  const ideal::PartyId current_id{"O_n"};
  const ideal::PartyId next_id{"O_n+1"};
  const ideal::PartyId issuer_id{"TTP"};
  for (const auto& p : {current_id, next_id, issuer_id}) ledger.register_party(p);
  chen::ChenIssuer issuer(spec, issuer_id, rng.next());
  auto [tag, current] = issuer.issue_tag(current_id, spec.random(rng));

  out << "chen ownership transfer (w = " << w << ", seed = " << opt.seed << ")\n";
  const chen::RequiringMessage req = chen::requiring_phase(spec, ledger, current, next_id);
  line(out, "[requiring]", "O_n -> O_n+1", "ID_O_n = " + req.id_current.name + ", C_i = #" +
                                               std::to_string(req.c.handle));

  const chen::Challenge ch = chen::owner_challenge(spec, current, rng);
  line(out, "[auth 1]   ", "O_n -> T    ", "N_O = " + hex(ch.n_owner, w) + ", A = " + hex(ch.a, w));
  const std::optional<chen::TagResponse> resp = chen::tag_respond(spec, tag, ch, rng);
  if (!resp) throw ProtocolError(2, "tag rejected A");
  if (opt.drop_message) {
    line(out, "[auth 2]   ", "T -> O_n    ", "(dropped)");
    throw ProtocolError(2, "N_T, Y, Z never reached the owner; tag and owner keys diverged");
  }
  line(out, "[auth 2]   ", "T -> O_n    ", "N_T = " + hex(resp->n_tag, w) + ", Y = " + hex(resp->y, w) +
                                                ", Z = " + hex(resp->z, w));
  const prim::Word k_next = chen::owner_verify_response(spec, current, ch, *resp);

  const chen::TransferPhaseResult phase =
      chen::ownership_transfer_phase(spec, ledger, issuer, current, next_id, req, k_next, tag);
  line(out, "[transfer] ", "O_n+1 -> O_n", "Sg_O_n+1 = #" + std::to_string(phase.bundle.sg_next.handle));
  line(out, "[transfer] ", "O_n -> TTP  ", "C_i, Sg_O_n = #" + std::to_string(phase.bundle.sg_current.handle) +
                                                ", Sg_O_n+1");
  line(out, "[transfer] ", "TTP -> O_n  ", "t_i+1 ^ k_i+1 = " + hex(phase.bundle.masked_cert, w) +
                                                ", h(t_i+1) = " + hex(phase.bundle.h_t_next, w));
  line(out, "[transfer] ", "O_n -> T    ", "h(t_i+1) written");
  line(out, "[transfer] ", "O_n -> O_n+1", "t_i+1 ^ k_i+1 = " + hex(phase.bundle.masked_cert, w));

  chen::ChenOwnerState owner = phase.new_owner;
  if (owner.t != issuer.certificate(tag.id_t)) throw ProtocolError(5, "unmasked certificate differs from issuer's");
  if (tag.h_t != chen::tag_hash(spec, owner.t)) throw ProtocolError(5, "tag hash does not match t_i+1");
  out << "  certificate recovered, tag hash matches\n";

  out << "chen authentication with the new owner\n";
  const chen::ChenAuthTranscript s = chen::run_chen_session(spec, owner, tag, rng);
  line(out, "[auth 1]", "O -> T", "N_O = " + hex(s.n_owner, w) + ", A = " + hex(s.a, w));
  line(out, "[auth 2]", "T -> O", "N_T = " + hex(s.n_tag, w) + ", Y = " + hex(s.y, w) + ", Z = " + hex(s.z, w));
  if (owner.k != tag.k || owner.k_star != tag.k_star) throw ProtocolError(3, "owner and tag keys out of sync");
  out << "  keys synchronized\n";
  if (opt.reveal) out << "  k = " << hex(tag.k, w) << ", k* = " << hex(tag.k_star, w) << "\n";
  return 0;
}

}  // namespace

int run_demo(const DemoOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.protocol == Protocol::Rotiv) {
      group::PairingParams check(options.q);
      (void)check;
    } else {
      prim::WordSpec check(options.word_width);
      (void)check;
    }
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    return options.protocol == Protocol::Rotiv ? rotiv_demo(options, out) : chen_demo(options, out);
  } catch (const ProtocolError& e) {
    out << "FAILED: " << e.what() << "\n";
    err << "protocol failure (" << e.what() << ")\n";
    return 1;
  }
}

}  // namespace otplab::harness
