#pragma once

// Front end for the handoff_lab tool.  Subcommands: analytic, simulate,
// sweep, adapt, classify.
//
// Exit status: 0 on success, 2 for invalid input (command line, files,
// values), 1 for failures while computing.  Diagnostics go to `err`; results
// go to the sink selected by --out (standard output by default).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "handoff/analytic.hpp"
#include "handoff/errors.hpp"
#include "handoff/experiments.hpp"
#include "handoff/montecarlo.hpp"
#include "handoff/output.hpp"
#include "handoff/rng.hpp"
#include "handoff/scenario.hpp"
#include "handoff/topology.hpp"
#include "handoff/version.hpp"

namespace handoff::cli {

inline constexpr const char* kSeedEnv = "HANDOFF_LAB_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

enum class Format { Csv, Svg };

// ---- command bodies (no I/O besides the given stream) ----------------------

inline std::vector<std::string> analytic_header(const Scenario& sc) {
  std::vector<std::string> h{"cell_radius_m", "overlap_m"};
  if (sc.speed.is_fixed()) {
    h.emplace_back("speed_mps");
  } else {
    h.emplace_back("vmin_mps");
    h.emplace_back("vmax_mps");
  }
  for (const char* c : {"delay_s", "false_handoff", "t_min_s", "t_max_s", "failure"}) {
    h.emplace_back(c);
  }
  return h;
}

// t_min/t_max span the crossing times over the whole speed range.
inline std::vector<double> analytic_values(const Scenario& sc) {
  const CellGeometry g = sc.geometry();
  const double tau = sc.delay();
  std::vector<double> row{sc.cell_radius_m, sc.overlap_m};
  double failure = 0.0;
  if (sc.speed.is_fixed()) {
    row.push_back(sc.speed.as_fixed().speed_mps);
    failure = handoff_failure_probability(g, sc.speed.as_fixed().speed_mps, tau);
  } else {
    row.push_back(sc.speed.as_uniform().vmin_mps);
    row.push_back(sc.speed.as_uniform().vmax_mps);
    failure = expected_failure_over_speed(g, sc.speed, tau);
  }
  row.push_back(tau);
  row.push_back(false_handoff_probability(g));
  row.push_back(crossing_time_support(g, sc.speed.max_mps()).t_min_s);
  row.push_back(crossing_time_support(g, sc.speed.min_mps()).t_max_s);
  row.push_back(failure);
  return row;
}

inline std::vector<std::string> formatted(const std::vector<double>& xs) {
  std::vector<std::string> out;
  for (double x : xs) out.push_back(io::format_number(x));
  return out;
}

inline void write_analytic(std::ostream& os, const Scenario& sc,
                           std::optional<double> beta_rad = std::nullopt) {
  auto header = analytic_header(sc);
  auto row = formatted(analytic_values(sc));
  if (beta_rad) {
    if (!sc.speed.is_fixed()) throw InvalidParameter("--beta-deg needs a fixed speed");
    header.emplace_back("crossing_time_s");
    row.push_back(io::format_number(
        crossing_time(sc.geometry(), sc.speed.as_fixed().speed_mps, *beta_rad)));
  }
  io::write_csv_row(os, header);
  io::write_csv_row(os, row);
}

inline void write_simulate(std::ostream& os, const Scenario& sc, const mc::SimControls& ctl,
                           const mc::Execution& exec = {}) {
  const CellGeometry g = sc.geometry();
  mc::SimControls false_ctl = ctl;
  false_ctl.seed = rng::derive_seed(ctl.seed, 0);
  mc::SimControls fail_ctl = ctl;
  fail_ctl.seed = rng::derive_seed(ctl.seed, 1);
  const mc::Estimate pa = mc::estimate_false_handoff(g, false_ctl, exec);
  const mc::Estimate pf = mc::estimate_failure_over_speed(g, sc.speed, sc.delay(), fail_ctl, exec);

  auto header = analytic_header(sc);
  for (const char* c : {"false_handoff_estimate", "false_handoff_std_err", "failure_estimate",
                        "failure_std_err", "samples", "seed"}) {
    header.emplace_back(c);
  }
  auto row = formatted(analytic_values(sc));
  for (double x : {pa.p_hat, pa.std_err, pf.p_hat, pf.std_err}) {
    row.push_back(io::format_number(x));
  }
  row.push_back(std::to_string(ctl.samples));
  row.push_back(std::to_string(ctl.seed));
  io::write_csv_row(os, header);
  io::write_csv_row(os, row);
}

inline void write_sweep(std::ostream& os, const SweepTable& table, Format format,
                        bool provenance) {
  if (format == Format::Svg) {
    io::write_svg(os, table);
  } else {
    io::write_csv(os, table, provenance);
  }
}

inline void write_adapt(std::ostream& os, const Scenario& sc, double target_pf) {
  if (!sc.speed.is_fixed()) throw InvalidParameter("adapt needs a fixed speed");
  const AdaptResult r =
      adapt_overlap(sc.cell_radius_m, sc.speed.as_fixed().speed_mps, sc.delay(), target_pf);
  io::write_csv_row(os, {"cell_radius_m", "speed_mps", "delay_s", "target_failure", "overlap_m",
                         "false_handoff", "failure"});
  io::write_csv_row(os, formatted({sc.cell_radius_m, sc.speed.as_fixed().speed_mps, sc.delay(),
                                   target_pf, r.overlap_m, r.false_handoff, r.failure}));
}

inline void write_classify(std::ostream& os, const NetworkTopology& topo,
                           const DelayProfile& profile, const std::string& from,
                           const std::string& to) {
  const HandoffType kind = classify_handoff(topo, from, to);
  const double delay = delay_for(profile, kind);
  io::write_csv_row(os, {"from_bs", "to_bs", "handoff_type", "delay_s"});
  io::write_csv_row(os, {from, to, std::string(to_string(kind)), io::format_number(delay)});
}

// ---- argument handling -----------------------------------------------------

struct Options {
  std::string scenario_path;
  std::optional<double> cell_radius_m, overlap_m, speed_mps, speed_kmh, vmin_mps, vmax_mps;
  std::optional<double> delay_s, beta_deg, target_pf;
  std::optional<std::string> handoff_type;
  std::optional<std::uint64_t> samples, seed, batches;
  unsigned threads = 0;
  std::string out = "-";
  std::string format = "csv";
  bool provenance = false;
  std::string spec_path;
  std::string from_bs, to_bs;
  std::optional<double> intra_s, inter_s, link_layer_s;
};

inline std::string read_file(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(what, "cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::uint64_t env_seed() {
  const char* raw = std::getenv(kSeedEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultSeed;
  std::uint64_t v = 0;
  const std::string s(raw);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError(kSeedEnv, "expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

// Flags override keys of the scenario file; the merged document is then
// validated as a whole, so errors name scenario keys.
inline Json merged_scenario(const Options& o) {
  Json j = Json::object();
  if (!o.scenario_path.empty()) {
    j = config::parse_text(read_file(o.scenario_path, "--scenario"));
    if (!j.is_object()) throw ValidationError("<root>", "expected an object");
  }
  if (o.cell_radius_m) j["cell_radius_m"] = *o.cell_radius_m;
  if (o.overlap_m) j["overlap_m"] = *o.overlap_m;
  if (o.speed_mps) j["speed"] = *o.speed_mps;
  if (o.speed_kmh) j["speed"] = *o.speed_kmh / 3.6;
  if (o.vmin_mps || o.vmax_mps) {
    if (!j.contains("speed") || !j["speed"].is_object()) j["speed"] = Json::object();
    if (o.vmin_mps) j["speed"]["vmin"] = *o.vmin_mps;
    if (o.vmax_mps) j["speed"]["vmax"] = *o.vmax_mps;
  }
  if (o.delay_s) {
    j.erase("handoff_type");
    j["delay_s"] = *o.delay_s;
  }
  if (o.handoff_type) {
    j.erase("delay_s");
    j["handoff_type"] = *o.handoff_type;
  }
  if (o.intra_s) j["delay_profile"]["intra_s"] = *o.intra_s;
  if (o.inter_s) j["delay_profile"]["inter_s"] = *o.inter_s;
  if (o.link_layer_s) j["delay_profile"]["link_layer_s"] = *o.link_layer_s;
  if (o.samples || o.seed || o.batches) {
    if (!j.contains("mc")) j["mc"] = Json::object();
    if (o.samples) j["mc"]["samples"] = *o.samples;
    if (o.seed) j["mc"]["seed"] = *o.seed;
    if (o.batches) j["mc"]["batches"] = *o.batches;
  }
  return j;
}

inline void apply_default_seed(mc::SimControls& ctl, bool seed_given) {
  if (!seed_given) ctl.seed = env_seed();
}

inline Format parse_format(const std::string& s, bool svg_allowed) {
  if (s == "csv") return Format::Csv;
  if (s == "svg") {
    if (!svg_allowed) throw ValidationError("--format", "svg output is only available for sweep");
    return Format::Svg;
  }
  throw ValidationError("--format", "expected csv or svg");
}

inline void add_scenario_flags(CLI::App* cmd, Options& o, bool with_mc) {
  cmd->add_option("--scenario", o.scenario_path, "Scenario file (JSON)");
  cmd->add_option("--cell-radius-m", o.cell_radius_m, "Cell radius a in metres");
  cmd->add_option("--overlap-m", o.overlap_m, "Overlap L in metres");
  cmd->add_option("--speed-mps", o.speed_mps, "Fixed terminal speed in m/s");
  cmd->add_option("--speed-kmh", o.speed_kmh, "Fixed terminal speed in km/h");
  cmd->add_option("--vmin-mps", o.vmin_mps, "Lower bound of a uniform speed range");
  cmd->add_option("--vmax-mps", o.vmax_mps, "Upper bound of a uniform speed range");
  cmd->add_option("--delay-s", o.delay_s, "Handoff signalling delay in seconds");
  cmd->add_option("--handoff-type", o.handoff_type, "link_layer, intra or inter");
  cmd->add_option("--intra-s", o.intra_s, "Intra-system delay (default 1.5)");
  cmd->add_option("--inter-s", o.inter_s, "Inter-system delay (default 3.0)");
  cmd->add_option("--link-layer-s", o.link_layer_s, "Link-layer delay (no default)");
  if (with_mc) {
    cmd->add_option("--samples", o.samples, "Monte Carlo samples");
    cmd->add_option("--seed", o.seed, std::string("Base seed (default $") + kSeedEnv + " or 1)");
    cmd->add_option("--batches", o.batches, "Monte Carlo batches (substreams)");
    cmd->add_option("--threads", o.threads, "Worker threads; 0 = all cores");
  }
  cmd->add_option("--out", o.out, "Output path, '-' for standard output");
  cmd->add_option("--format", o.format, "csv or svg");
}

inline void emit(const std::string& sink, const std::string& payload, std::ostream& out) {
  if (sink == "-" || sink.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(sink, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + sink + "' for writing");
  f << payload;
  if (!f) throw Error("write to '" + sink + "' failed");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Handoff failure model: closed forms, Monte Carlo checks and sweeps",
               "handoff_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;

  auto* analytic = app.add_subcommand("analytic", "Closed-form P_a, crossing-time support, P_f");
  add_scenario_flags(analytic, o, false);
  analytic->add_option("--beta-deg", o.beta_deg, "Also report the crossing time at this angle");

  auto* simulate = app.add_subcommand("simulate", "Closed forms plus Monte Carlo estimates");
  add_scenario_flags(simulate, o, true);

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep table");
  sweep->add_option("--spec", o.spec_path, "Sweep specification file (JSON)")->required();
  sweep->add_option("--samples", o.samples, "Override mc.samples (enables the overlay)");
  sweep->add_option("--seed", o.seed, "Override mc.seed");
  sweep->add_option("--batches", o.batches, "Override mc.batches");
  sweep->add_option("--threads", o.threads, "Worker threads; 0 = all cores");
  sweep->add_option("--out", o.out, "Output path, '-' for standard output");
  sweep->add_option("--format", o.format, "csv or svg");
  sweep->add_flag("--provenance", o.provenance, "Prefix CSV with '#' provenance lines");

  auto* adapt = app.add_subcommand("adapt", "Overlap needed to reach a target P_f");
  add_scenario_flags(adapt, o, false);
  adapt->add_option("--target-pf", o.target_pf, "Target failure probability")->required();

  auto* classify = app.add_subcommand("classify", "Classify a handoff and select its delay");
  classify->add_option("--scenario", o.scenario_path,
                       "File with a 'topology' key (default: built-in two-system layout)");
  classify->add_option("--from-bs", o.from_bs, "Source base station")->required();
  classify->add_option("--to-bs", o.to_bs, "Target base station")->required();
  classify->add_option("--intra-s", o.intra_s, "Intra-system delay (default 1.5)");
  classify->add_option("--inter-s", o.inter_s, "Inter-system delay (default 3.0)");
  classify->add_option("--link-layer-s", o.link_layer_s, "Link-layer delay (no default)");
  classify->add_option("--out", o.out, "Output path, '-' for standard output");
  classify->add_option("--format", o.format, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return 2;
  }

  std::ostringstream buffer;
  const mc::Execution exec{o.threads};
  try {
    if (analytic->parsed()) {
      parse_format(o.format, false);
      const Scenario sc = scenario_from_json(merged_scenario(o));
      std::optional<double> beta;
      if (o.beta_deg) beta = *o.beta_deg * kPi / 180.0;
      write_analytic(buffer, sc, beta);
    } else if (simulate->parsed()) {
      parse_format(o.format, false);
      Json j = merged_scenario(o);
      if (!j.contains("mc")) j["mc"] = Json::object();
      const Scenario sc = scenario_from_json(j);
      mc::SimControls ctl = *sc.mc;
      apply_default_seed(ctl, sc.mc_seed_given);
      write_simulate(buffer, sc, ctl, exec);
    } else if (sweep->parsed()) {
      const Format fmt = parse_format(o.format, true);
      Json j = config::parse_text(read_file(o.spec_path, "--spec"));
      if (j.is_object() && (o.samples || o.seed || o.batches)) {
        if (!j.contains("mc")) j["mc"] = Json::object();
        if (o.samples) j["mc"]["samples"] = *o.samples;
        if (o.seed) j["mc"]["seed"] = *o.seed;
        if (o.batches) j["mc"]["batches"] = *o.batches;
      }
      bool seed_given = false;
      SweepSpec spec = sweep_from_json(j, &seed_given);
      if (spec.mc) apply_default_seed(*spec.mc, seed_given);
      write_sweep(buffer, run_sweep(spec, exec), fmt, o.provenance);
    } else if (adapt->parsed()) {
      parse_format(o.format, false);
      const Scenario sc = scenario_from_json(merged_scenario(o));
      write_adapt(buffer, sc, *o.target_pf);
    } else if (classify->parsed()) {
      parse_format(o.format, false);
      std::optional<NetworkTopology> topo;
      DelayProfile profile;
      Json profile_json = Json::object();
      if (!o.scenario_path.empty()) {
        const Json j = config::parse_text(read_file(o.scenario_path, "--scenario"));
        config::require_object(j, "");
        topo = config::parse_topology(config::required(j, "", "topology"), "topology");
        if (j.contains("delay_profile")) profile_json = j["delay_profile"];
      } else {
        topo = reference_topology();
      }
      if (o.intra_s) profile_json["intra_s"] = *o.intra_s;
      if (o.inter_s) profile_json["inter_s"] = *o.inter_s;
      if (o.link_layer_s) profile_json["link_layer_s"] = *o.link_layer_s;
      profile = config::parse_delay_profile(profile_json, "delay_profile");
      write_classify(buffer, *topo, profile, o.from_bs, o.to_bs);
    }
    emit(o.out, buffer.str(), out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace handoff::cli
