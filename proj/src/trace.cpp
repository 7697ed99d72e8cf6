#include "aggsig/trace.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace aggsig {

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Sign: return "Sign";
    case EventKind::VfyAgg: return "VfyAgg";
    case EventKind::Running: return "Running";
    case EventKind::Commit: return "Commit";
    case EventKind::RegisterHonest: return "RegisterHonest";
    case EventKind::RegisterDishonest: return "RegisterDishonest";
    case EventKind::RegisterRogue: return "RegisterRogue";
    case EventKind::OracleChoice: return "OracleChoice";
    case EventKind::Send: return "Send";
    case EventKind::Recv: return "Recv";
  }
  return "?";
}

std::string make_actor(const std::string& role, const std::string& identity, int session) {
  return role + ":" + identity + "#" + std::to_string(session);
}

std::string actor_role(const std::string& actor) {
  auto pos = actor.find(':');
  return pos == std::string::npos ? actor : actor.substr(0, pos);
}

std::string actor_identity(const std::string& actor) {
  auto colon = actor.find(':');
  if (colon == std::string::npos) return actor;
  auto hash = actor.find('#', colon);
  return actor.substr(colon + 1, hash == std::string::npos ? std::string::npos
                                                           : hash - colon - 1);
}

std::string TraceEvent::render() const {
  std::ostringstream os;
  os << position << " " << actor << " " << event_kind_name(kind);
  switch (kind) {
    case EventKind::Sign:
      os << " msg=" << term.render() << " pk=" << aux.render();
      break;
    case EventKind::VfyAgg:
      os << " agg=" << agg.render() << " pairs=" << pairs_key(pairs).render()
         << " result=" << (result ? "true" : "false");
      break;
    case EventKind::Running:
    case EventKind::Commit:
      os << " claimant=" << claimant << " partner=" << (partner.empty() ? "-" : partner)
         << " payload=" << payload.render();
      break;
    case EventKind::RegisterHonest:
    case EventKind::RegisterDishonest:
      os << " pk=" << term.render();
      break;
    case EventKind::RegisterRogue:
      os << " pk=" << term.render() << " target=" << aux.render();
      break;
    case EventKind::OracleChoice:
      os << " query=" << aux.render() << " value=" << (result ? "true" : "false");
      break;
    case EventKind::Send:
    case EventKind::Recv:
      os << " term=" << term.render();
      break;
  }
  return os.str();
}

std::string TraceEvent::render_json() const {
  nlohmann::json j;
  j["schema"] = "trace-v1";
  j["position"] = position;
  j["actor"] = actor;
  j["label"] = event_kind_name(kind);
  switch (kind) {
    case EventKind::Sign:
      j["msg"] = term.render();
      j["pk"] = aux.render();
      break;
    case EventKind::VfyAgg: {
      j["agg"] = agg.render();
      nlohmann::json arr = nlohmann::json::array();
      for (const VfyPair& p : pairs) {
        nlohmann::json e;
        e["msg"] = p.msg.render();
        e["pk"] = p.pk.render();
        if (!p.index.null()) e["index"] = p.index.render();
        arr.push_back(e);
      }
      j["pairs"] = arr;
      j["result"] = result;
      break;
    }
    case EventKind::Running:
    case EventKind::Commit:
      j["claimant"] = claimant;
      j["partner"] = partner;
      j["payload"] = payload.render();
      break;
    case EventKind::RegisterHonest:
    case EventKind::RegisterDishonest:
      j["pk"] = term.render();
      break;
    case EventKind::RegisterRogue:
      j["pk"] = term.render();
      j["target"] = aux.render();
      break;
    case EventKind::OracleChoice:
      j["query"] = aux.render();
      j["value"] = result;
      break;
    case EventKind::Send:
    case EventKind::Recv:
      j["term"] = term.render();
      break;
  }
  return j.dump();
}

std::string Bounds::render() const {
  std::ostringstream os;
  os << "sessions<=" << max_sessions_per_role << " agg<=" << max_agg_size
     << " depth<=" << deduction_depth << " trace<=" << max_trace_length
     << " adv-aggs<=" << adv_aggregations << " dishonest<=" << dishonest_keys
     << " rogue<=" << rogue_keys;
  return os.str();
}

Lemma Lemma::message_authenticity() {
  return Lemma{Kind::MessageAuthenticity, "message-authenticity", "", "", "", true};
}

Lemma Lemma::weak_agreement(const std::string& claimant_role, const std::string& name) {
  return Lemma{Kind::WeakAgreement, name, claimant_role, "", "", true};
}

Lemma Lemma::no_splitting_zero() {
  return Lemma{Kind::NoSplittingZero, "no-splitting-zero", "", "", "", true};
}

Lemma Lemma::no_rogue_key(const std::string& verifier_role) {
  return Lemma{Kind::NoRogueKey, "no-rogue-key", verifier_role, "", "", true};
}

Lemma Lemma::aliveness(const std::string& claimant_role, const std::string& partner_role,
                       const std::string& name) {
  return Lemma{Kind::Aliveness, name, claimant_role, partner_role, "", true};
}

Lemma Lemma::agreement(const std::string& claimant_role, const std::string& partner_role,
                       const std::string& payload_tag, bool match_partner,
                       const std::string& name) {
  return Lemma{Kind::NonInjectiveAgreement, name, claimant_role, partner_role,
               payload_tag, match_partner};
}

namespace {

bool role_matches(const TraceEvent& e, const std::string& role) {
  return role.empty() || actor_role(e.actor) == role;
}

bool signed_before(const std::vector<TraceEvent>& trace, int position, const Term& msg,
                   const Term& pk, bool anywhere) {
  for (const TraceEvent& e : trace) {
    if (!anywhere && e.position >= position) break;
    if (e.kind == EventKind::Sign && e.term == msg && e.aux == pk) return true;
  }
  return false;
}

std::vector<Term> msg_multiset(const std::vector<VfyPair>& pairs) {
  std::vector<Term> msgs;
  for (const VfyPair& p : pairs) msgs.push_back(p.msg);
  std::sort(msgs.begin(), msgs.end(), TermLess{});
  return msgs;
}

bool payload_tagged(const Term& payload, const std::string& tag) {
  return !payload.null() && payload.kind() == TermKind::Tuple && payload.arity() >= 1 &&
         payload.arg(0).kind() == TermKind::PublicName && payload.arg(0).label() == tag;
}

std::optional<std::string> check(const std::vector<TraceEvent>& trace, const Lemma& lemma,
                                 const KeyRegistry& registry) {
  switch (lemma.kind) {
    case Lemma::Kind::MessageAuthenticity: {
      for (const TraceEvent& e : trace) {
        if (e.kind != EventKind::VfyAgg || !e.result) continue;
        for (const VfyPair& p : e.pairs) {
          if (!registry.is_honest(p.pk)) continue;
          if (!signed_before(trace, e.position, p.msg, p.pk, /*anywhere=*/false)) {
            return "accepted (" + p.msg.render() + ", " + p.pk.render() +
                   ") with no prior signature by the honest key";
          }
        }
      }
      return std::nullopt;
    }
    case Lemma::Kind::WeakAgreement: {
      for (const TraceEvent& e : trace) {
        if (e.kind != EventKind::Commit || !role_matches(e, lemma.claimant_role)) continue;
        if (e.partner.empty() || !registry.is_honest_identity(e.partner)) continue;
        bool running = false;
        for (const TraceEvent& r : trace) {
          if (r.kind == EventKind::Running && r.claimant == e.partner &&
              r.partner == e.claimant) {
            running = true;
            break;
          }
        }
        if (!running) {
          return e.claimant + " committed to " + e.partner +
                 " who never ran apparently with " + e.claimant;
        }
      }
      return std::nullopt;
    }
    case Lemma::Kind::NoSplittingZero: {
      for (std::size_t i = 0; i < trace.size(); ++i) {
        const TraceEvent& a = trace[i];
        if (a.kind != EventKind::VfyAgg || !a.result) continue;
        for (std::size_t j = i + 1; j < trace.size(); ++j) {
          const TraceEvent& b = trace[j];
          if (b.kind != EventKind::VfyAgg || !b.result) continue;
          if (!(a.agg == b.agg)) continue;
          if (msg_multiset(a.pairs) != msg_multiset(b.pairs)) {
            return "aggregate " + a.agg.render() + " verified for two message multisets";
          }
        }
      }
      return std::nullopt;
    }
    case Lemma::Kind::NoRogueKey: {
      for (const TraceEvent& e : trace) {
        if (e.kind != EventKind::VfyAgg || !e.result) continue;
        if (!role_matches(e, lemma.claimant_role)) continue;
        if (!registry.is_honest_identity(actor_identity(e.actor))) continue;
        for (const VfyPair& p : e.pairs) {
          if (!registry.is_honest(p.pk)) continue;
          if (!signed_before(trace, e.position, p.msg, p.pk, /*anywhere=*/true)) {
            return "honest verifier accepted (" + p.msg.render() + ", " + p.pk.render() +
                   ") never signed by that key";
          }
        }
      }
      return std::nullopt;
    }
    case Lemma::Kind::Aliveness: {
      for (const TraceEvent& e : trace) {
        if (e.kind != EventKind::Commit || !role_matches(e, lemma.claimant_role)) continue;
        if (e.partner.empty() || !registry.is_honest_identity(e.partner)) continue;
        bool acted = false;
        for (const TraceEvent& other : trace) {
          if (actor_identity(other.actor) == e.partner &&
              (lemma.partner_role.empty() || actor_role(other.actor) == lemma.partner_role)) {
            acted = true;
            break;
          }
        }
        if (!acted) {
          return e.claimant + " committed to " + e.partner + " who never acted as " +
                 lemma.partner_role;
        }
      }
      return std::nullopt;
    }
    case Lemma::Kind::NonInjectiveAgreement: {
      for (const TraceEvent& e : trace) {
        if (e.kind != EventKind::Commit || !role_matches(e, lemma.claimant_role)) continue;
        if (!payload_tagged(e.payload, lemma.payload_tag)) continue;
        if (e.partner.empty() || !registry.is_honest_identity(e.partner)) continue;
        bool agreed = false;
        for (const TraceEvent& r : trace) {
          if (r.kind != EventKind::Running || r.claimant != e.partner) continue;
          if (!lemma.partner_role.empty() && actor_role(r.actor) != lemma.partner_role)
            continue;
          if (lemma.match_partner && r.partner != e.claimant) continue;
          if (r.payload == e.payload) {
            agreed = true;
            break;
          }
        }
        if (!agreed) {
          return e.claimant + " committed to " + e.partner + " on " + e.payload.render() +
                 " without a matching run";
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

bool lemma_violated(const std::vector<TraceEvent>& trace, const Lemma& lemma,
                    const KeyRegistry& registry) {
  return check(trace, lemma, registry).has_value();
}

std::optional<std::string> violation_reason(const std::vector<TraceEvent>& trace,
                                            const Lemma& lemma, const KeyRegistry& registry) {
  return check(trace, lemma, registry);
}

}  // namespace aggsig
