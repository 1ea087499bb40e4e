#pragma once

// Mobility-agent hierarchy: each system has one gateway foreign agent (GFA),
// each GFA several foreign agents (FAs), each FA several base stations.
// Handoff classification follows from where two base stations sit in it.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "handoff/errors.hpp"

namespace handoff {

enum class HandoffType { LinkLayer, IntraSystem, InterSystem };

inline std::string_view to_string(HandoffType t) {
  switch (t) {
    case HandoffType::LinkLayer: return "link_layer";
    case HandoffType::IntraSystem: return "intra";
    case HandoffType::InterSystem: return "inter";
  }
  return "unknown";
}

inline std::optional<HandoffType> handoff_type_from_string(std::string_view s) {
  if (s == "link_layer" || s == "link" || s == "LinkLayer") return HandoffType::LinkLayer;
  if (s == "intra" || s == "intra_system" || s == "IntraSystem") return HandoffType::IntraSystem;
  if (s == "inter" || s == "inter_system" || s == "InterSystem") return HandoffType::InterSystem;
  return std::nullopt;
}

struct ForeignAgentRecord {
  std::string fa_id;
  std::vector<std::string> bs_ids;
};

struct SystemRecord {
  std::string system_id;
  std::string gfa_id;
  std::optional<std::string> home_agent;  // annotation only
  std::vector<ForeignAgentRecord> fas;
};

class NetworkTopology {
 public:
  struct Location {
    std::size_t system;
    std::size_t fa;
  };

  explicit NetworkTopology(std::vector<SystemRecord> systems) : systems_(std::move(systems)) {
    std::unordered_set<std::string> system_ids, gfa_ids, fa_ids;
    for (std::size_t s = 0; s < systems_.size(); ++s) {
      const auto& sys = systems_[s];
      if (sys.system_id.empty()) throw InvalidParameter("empty system id");
      if (sys.gfa_id.empty()) throw InvalidParameter("empty GFA id in system " + sys.system_id);
      if (!system_ids.insert(sys.system_id).second) {
        throw InvalidParameter("duplicate system id '" + sys.system_id + "'");
      }
      if (!gfa_ids.insert(sys.gfa_id).second) {
        throw InvalidParameter("duplicate GFA id '" + sys.gfa_id + "'");
      }
      for (std::size_t f = 0; f < sys.fas.size(); ++f) {
        const auto& fa = sys.fas[f];
        if (fa.fa_id.empty()) throw InvalidParameter("empty FA id in system " + sys.system_id);
        if (!fa_ids.insert(fa.fa_id).second) {
          throw InvalidParameter("duplicate FA id '" + fa.fa_id + "'");
        }
        for (const auto& bs : fa.bs_ids) {
          if (bs.empty()) throw InvalidParameter("empty BS id under FA " + fa.fa_id);
          if (!index_.emplace(bs, Location{s, f}).second) {
            throw InvalidParameter("duplicate BS id '" + bs + "'");
          }
        }
      }
    }
  }

  const std::vector<SystemRecord>& systems() const noexcept { return systems_; }
  bool contains(const std::string& bs) const { return index_.contains(bs); }
  std::size_t base_station_count() const noexcept { return index_.size(); }

  Location locate(const std::string& bs) const {
    const auto it = index_.find(bs);
    if (it == index_.end()) throw UnknownBaseStation(bs);
    return it->second;
  }

  const std::string& fa_of(const std::string& bs) const {
    const Location loc = locate(bs);
    return systems_[loc.system].fas[loc.fa].fa_id;
  }
  const std::string& gfa_of(const std::string& bs) const {
    return systems_[locate(bs).system].gfa_id;
  }

 private:
  std::vector<SystemRecord> systems_;
  std::unordered_map<std::string, Location> index_;
};

/// Same FA: link layer.  Same GFA, different FA: intra-system.  Otherwise
/// inter-system.
inline HandoffType classify_handoff(const NetworkTopology& topo, const std::string& from_bs,
                                    const std::string& to_bs) {
  const auto from = topo.locate(from_bs);
  const auto to = topo.locate(to_bs);
  if (from_bs == to_bs) {
    throw InvalidParameter("handoff from '" + from_bs + "' to itself");
  }
  if (from.system != to.system) return HandoffType::InterSystem;
  if (from.fa != to.fa) return HandoffType::IntraSystem;
  return HandoffType::LinkLayer;
}

struct DelayProfile {
  double intra_s = 1.5;
  double inter_s = 3.0;
  std::optional<double> link_layer_s;

  void validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(intra_s)) throw InvalidParameter("intra_s must be > 0");
    if (!positive(inter_s)) throw InvalidParameter("inter_s must be > 0");
    if (link_layer_s && !positive(*link_layer_s)) {
      throw InvalidParameter("link_layer_s must be > 0");
    }
    if (inter_s < intra_s) throw InvalidParameter("inter_s must be >= intra_s");
  }
};

inline double delay_for(const DelayProfile& profile, HandoffType kind) {
  profile.validate();
  switch (kind) {
    case HandoffType::IntraSystem: return profile.intra_s;
    case HandoffType::InterSystem: return profile.inter_s;
    case HandoffType::LinkLayer:
      if (!profile.link_layer_s) {
        throw UnsupportedType("no link-layer delay configured; link-layer handoff is not modelled");
      }
      return *profile.link_layer_s;
  }
  throw UnsupportedType("unknown handoff type");
}

// Two systems as in the reference architecture: BS10/BS11 share an FA,
// BS12 sits under a second FA of the same GFA, BS20 belongs to another system.
inline NetworkTopology reference_topology() {
  return NetworkTopology({
      SystemRecord{"system1", "GFA1", "HA", {{"FA1", {"BS10", "BS11"}}, {"FA2", {"BS12", "BS13"}}}},
      SystemRecord{"system2", "GFA2", std::nullopt, {{"FA3", {"BS20", "BS21"}}, {"FA4", {"BS22"}}}},
  });
}

}  // namespace handoff
