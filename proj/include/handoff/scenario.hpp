#pragma once

// Scenario and sweep configuration documents (JSON).
//
// Scenario keys:
//   cell_radius_m   number, required
//   overlap_m       number, required
//   speed           number (m/s) or {"vmin": number, "vmax": number}
//   delay_s         number                       } exactly one of these
//   handoff_type    "link_layer"|"intra"|"inter" }
//   delay_profile   {"intra_s", "inter_s", "link_layer_s"}, optional
//   topology        {"systems": [{"system_id", "gfa_id", "home_agent"?,
//                                 "fas": [{"fa_id", "bs_ids": [..]}]}]}
//   mc              {"samples", "seed", "batches"}, optional
//
// Malformed text raises ParseError.  Unknown keys, wrong types and invalid
// values raise ValidationError carrying the dotted path of the offending key.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "handoff/analytic.hpp"
#include "handoff/errors.hpp"
#include "handoff/experiments.hpp"
#include "handoff/geometry.hpp"
#include "handoff/montecarlo.hpp"
#include "handoff/topology.hpp"

namespace handoff {

using Json = nlohmann::json;

struct Scenario {
  double cell_radius_m = 0.0;
  double overlap_m = 0.0;
  SpeedModel speed = SpeedModel::fixed(1.0);
  std::optional<double> delay_s;
  std::optional<HandoffType> handoff_type;
  DelayProfile delay_profile;
  std::optional<NetworkTopology> topology;
  std::optional<mc::SimControls> mc;
  bool mc_seed_given = false;

  CellGeometry geometry() const { return CellGeometry(cell_radius_m, overlap_m); }

  // Explicit delay, or the profile's delay for the handoff type.
  double delay() const {
    return delay_s ? *delay_s : delay_for(delay_profile, *handoff_type);
  }
};

namespace config {

inline std::string child(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path.empty() ? "<root>" : path, "expected an object");
}

inline void reject_unknown(const Json& j, const std::string& path,
                           std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(child(path, key), "unknown key");
  }
}

inline const Json& required(const Json& j, const std::string& path, std::string_view key) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) throw ValidationError(child(path, key), "missing required key");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ValidationError(path, "expected a finite number");
  return x;
}

inline double positive(const Json& j, const std::string& path) {
  const double x = number(j, path);
  if (x <= 0.0) throw ValidationError(path, "must be > 0");
  return x;
}

inline std::uint64_t count(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) throw ValidationError(path, "must be >= 0");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw ValidationError(path, "expected a non-negative integer");
}

inline std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string");
  std::string s = j.get<std::string>();
  if (s.empty()) throw ValidationError(path, "must not be empty");
  return s;
}

inline std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array of numbers");
  if (j.empty()) throw ValidationError(path, "must not be empty");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index(path, i)));
  return out;
}

inline Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

inline SpeedModel parse_speed(const Json& j, const std::string& path) {
  if (j.is_number()) return SpeedModel::fixed(positive(j, path));
  if (!j.is_object()) throw ValidationError(path, "expected a number or {vmin, vmax}");
  reject_unknown(j, path, {"vmin", "vmax"});
  const double vmin = positive(required(j, path, "vmin"), child(path, "vmin"));
  const double vmax = positive(required(j, path, "vmax"), child(path, "vmax"));
  if (vmax <= vmin) throw ValidationError(child(path, "vmax"), "must be > vmin");
  return SpeedModel::uniform(vmin, vmax);
}

inline HandoffType parse_handoff_type(const Json& j, const std::string& path) {
  const auto t = handoff_type_from_string(text(j, path));
  if (!t) throw ValidationError(path, "expected one of link_layer, intra, inter");
  return *t;
}

inline DelayProfile parse_delay_profile(const Json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"intra_s", "inter_s", "link_layer_s"});
  DelayProfile p;
  if (j.contains("intra_s")) p.intra_s = positive(j["intra_s"], child(path, "intra_s"));
  if (j.contains("inter_s")) p.inter_s = positive(j["inter_s"], child(path, "inter_s"));
  if (j.contains("link_layer_s")) {
    p.link_layer_s = positive(j["link_layer_s"], child(path, "link_layer_s"));
  }
  if (p.inter_s < p.intra_s) throw ValidationError(child(path, "inter_s"), "must be >= intra_s");
  return p;
}

inline NetworkTopology parse_topology(const Json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"systems"});
  const std::string sys_path = child(path, "systems");
  const Json& systems = required(j, path, "systems");
  if (!systems.is_array()) throw ValidationError(sys_path, "expected an array");

  std::vector<SystemRecord> records;
  std::set<std::string> seen;
  auto unique = [&](const std::string& id, const std::string& p) {
    if (!seen.insert(id).second) throw ValidationError(p, "duplicate identifier '" + id + "'");
  };
  for (std::size_t s = 0; s < systems.size(); ++s) {
    const std::string sp = index(sys_path, s);
    const Json& js = systems[s];
    require_object(js, sp);
    reject_unknown(js, sp, {"system_id", "gfa_id", "home_agent", "fas"});
    SystemRecord rec;
    rec.system_id = text(required(js, sp, "system_id"), child(sp, "system_id"));
    unique("system:" + rec.system_id, child(sp, "system_id"));
    rec.gfa_id = text(required(js, sp, "gfa_id"), child(sp, "gfa_id"));
    unique("gfa:" + rec.gfa_id, child(sp, "gfa_id"));
    if (js.contains("home_agent")) rec.home_agent = text(js["home_agent"], child(sp, "home_agent"));
    const std::string fas_path = child(sp, "fas");
    const Json& fas = required(js, sp, "fas");
    if (!fas.is_array()) throw ValidationError(fas_path, "expected an array");
    for (std::size_t f = 0; f < fas.size(); ++f) {
      const std::string fp = index(fas_path, f);
      require_object(fas[f], fp);
      reject_unknown(fas[f], fp, {"fa_id", "bs_ids"});
      ForeignAgentRecord fa;
      fa.fa_id = text(required(fas[f], fp, "fa_id"), child(fp, "fa_id"));
      unique("fa:" + fa.fa_id, child(fp, "fa_id"));
      const std::string bp = child(fp, "bs_ids");
      const Json& bs = required(fas[f], fp, "bs_ids");
      if (!bs.is_array()) throw ValidationError(bp, "expected an array");
      for (std::size_t b = 0; b < bs.size(); ++b) {
        fa.bs_ids.push_back(text(bs[b], index(bp, b)));
        unique("bs:" + fa.bs_ids.back(), index(bp, b));
      }
      rec.fas.push_back(std::move(fa));
    }
    records.push_back(std::move(rec));
  }
  try {
    return NetworkTopology(std::move(records));
  } catch (const InvalidParameter& e) {
    throw ValidationError(path, e.what());
  }
}

// Unset seed leaves `seed_given` false and the seed at 1.
inline mc::SimControls parse_mc(const Json& j, const std::string& path, bool* seed_given) {
  require_object(j, path);
  reject_unknown(j, path, {"samples", "seed", "batches"});
  mc::SimControls ctl;
  if (j.contains("samples")) ctl.samples = count(j["samples"], child(path, "samples"));
  if (ctl.samples < 1) throw ValidationError(child(path, "samples"), "must be >= 1");
  if (seed_given) *seed_given = j.contains("seed");
  if (j.contains("seed")) ctl.seed = count(j["seed"], child(path, "seed"));
  if (j.contains("batches")) {
    ctl.batches = count(j["batches"], child(path, "batches"));
    if (ctl.batches < 1) throw ValidationError(child(path, "batches"), "must be >= 1");
    if (ctl.batches > ctl.samples) {
      throw ValidationError(child(path, "batches"), "must not exceed samples");
    }
  } else {
    ctl.batches = std::min<std::uint64_t>(ctl.batches, ctl.samples);
  }
  return ctl;
}

}  // namespace config

inline Scenario scenario_from_json(const Json& j) {
  using namespace config;
  require_object(j, "");
  reject_unknown(j, "", {"cell_radius_m", "overlap_m", "speed", "delay_s", "handoff_type",
                         "delay_profile", "topology", "mc"});
  Scenario sc;
  sc.cell_radius_m = positive(required(j, "", "cell_radius_m"), "cell_radius_m");
  sc.overlap_m = number(required(j, "", "overlap_m"), "overlap_m");
  if (sc.overlap_m < 0.0) throw ValidationError("overlap_m", "must be >= 0");
  if (sc.overlap_m >= CellGeometry::max_overlap(sc.cell_radius_m)) {
    throw ValidationError("overlap_m", "must be < sqrt(3)/2 * cell_radius_m = " +
                                           std::to_string(CellGeometry::max_overlap(sc.cell_radius_m)));
  }
  sc.speed = parse_speed(required(j, "", "speed"), "speed");

  const bool has_delay = j.contains("delay_s");
  const bool has_type = j.contains("handoff_type");
  if (has_delay == has_type) {
    throw ValidationError(has_delay ? "handoff_type" : "delay_s",
                          "exactly one of delay_s and handoff_type is required");
  }
  if (j.contains("delay_profile")) {
    sc.delay_profile = parse_delay_profile(j["delay_profile"], "delay_profile");
  }
  if (has_delay) {
    sc.delay_s = number(j["delay_s"], "delay_s");
    if (*sc.delay_s < 0.0) throw ValidationError("delay_s", "must be >= 0");
  } else {
    sc.handoff_type = parse_handoff_type(j["handoff_type"], "handoff_type");
    if (*sc.handoff_type == HandoffType::LinkLayer && !sc.delay_profile.link_layer_s) {
      throw ValidationError("handoff_type",
                            "link_layer requires delay_profile.link_layer_s to be set");
    }
  }
  if (j.contains("topology")) sc.topology = parse_topology(j["topology"], "topology");
  if (j.contains("mc")) sc.mc = parse_mc(j["mc"], "mc", &sc.mc_seed_given);
  return sc;
}

inline Scenario parse_scenario(std::string_view text) {
  return scenario_from_json(config::parse_text(text));
}

// Sweep keys: kind, cell_radii_m, overlaps_m, speeds_mps, delays_s |
// handoff_types (+ delay_profile), axis {start, stop, steps, relative}, mc.
inline SweepSpec sweep_from_json(const Json& j, bool* seed_given = nullptr) {
  using namespace config;
  require_object(j, "");
  reject_unknown(j, "", {"kind", "cell_radii_m", "overlaps_m", "speeds_mps", "delays_s",
                         "handoff_types", "delay_profile", "axis", "mc"});
  SweepSpec spec;
  const auto kind = sweep_kind_from_string(text(required(j, "", "kind"), "kind"));
  if (!kind) {
    throw ValidationError("kind", "expected false_vs_overlap, failure_vs_speed or failure_vs_delay");
  }
  spec.kind = *kind;
  if (j.contains("cell_radii_m")) spec.cell_radii_m = numbers(j["cell_radii_m"], "cell_radii_m");
  for (std::size_t i = 0; i < spec.cell_radii_m.size(); ++i) {
    if (spec.cell_radii_m[i] <= 0.0) throw ValidationError(index("cell_radii_m", i), "must be > 0");
  }
  if (j.contains("overlaps_m")) spec.overlaps_m = numbers(j["overlaps_m"], "overlaps_m");
  if (j.contains("speeds_mps")) spec.speeds_mps = numbers(j["speeds_mps"], "speeds_mps");
  if (j.contains("delays_s") && j.contains("handoff_types")) {
    throw ValidationError("handoff_types", "give either delays_s or handoff_types");
  }
  if (j.contains("delays_s")) spec.delays_s = numbers(j["delays_s"], "delays_s");
  if (j.contains("handoff_types")) {
    const DelayProfile profile = j.contains("delay_profile")
                                     ? parse_delay_profile(j["delay_profile"], "delay_profile")
                                     : DelayProfile{};
    const Json& types = j["handoff_types"];
    if (!types.is_array() || types.empty()) {
      throw ValidationError("handoff_types", "expected a non-empty array");
    }
    spec.delays_s.clear();
    for (std::size_t i = 0; i < types.size(); ++i) {
      const std::string p = index("handoff_types", i);
      try {
        spec.delays_s.push_back(delay_for(profile, parse_handoff_type(types[i], p)));
      } catch (const UnsupportedType& e) {
        throw ValidationError(p, e.what());
      }
    }
  }
  const Json& axis = required(j, "", "axis");
  require_object(axis, "axis");
  reject_unknown(axis, "axis", {"start", "stop", "steps", "relative"});
  spec.axis.start = number(required(axis, "axis", "start"), "axis.start");
  spec.axis.stop = number(required(axis, "axis", "stop"), "axis.stop");
  spec.axis.steps = count(required(axis, "axis", "steps"), "axis.steps");
  if (spec.axis.steps < 2) throw ValidationError("axis.steps", "must be >= 2");
  if (axis.contains("relative")) {
    if (!axis["relative"].is_boolean()) throw ValidationError("axis.relative", "expected a boolean");
    spec.axis.relative = axis["relative"].get<bool>();
  }
  if (j.contains("mc")) spec.mc = parse_mc(j["mc"], "mc", seed_given);
  try {
    validate(spec);
  } catch (const InvalidParameter& e) {
    throw ValidationError("<root>", e.what());
  }
  return spec;
}

inline SweepSpec parse_sweep_spec(std::string_view text, bool* seed_given = nullptr) {
  return sweep_from_json(config::parse_text(text), seed_given);
}

}  // namespace handoff
