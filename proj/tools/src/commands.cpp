#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "singlab/errors.hpp"
#include "singlab/measure_lab.hpp"
#include "singlab/planar_field.hpp"
#include "singlab/report_json.hpp"
#include "singlab/singularity_metrics.hpp"
#include "singlab/slices.hpp"
#include "singlab/text_io.hpp"
#include "singlab/topology.hpp"

namespace singlab::cli {

namespace {

using Files = std::vector<std::pair<std::string, std::string>>;

struct Outcome {
  Json result;
  Files extra;               // (file suffix, contents) besides the JSON report
  std::optional<GridField> grid;   // lfplot only; written as CSV and SVG
  bool inconclusive = false;
};

double num(const Json& c, const std::string& p) { return at_path(c, p).get<double>(); }
std::size_t size(const Json& c, const std::string& p) { return at_path(c, p).get<std::size_t>(); }
std::string str(const Json& c, const std::string& p) { return at_path(c, p).get<std::string>(); }
Vec2 vec2(const Json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

std::vector<double> list(const Json& c, const std::string& p) {
  std::vector<double> out;
  for (const auto& v : at_path(c, p)) out.push_back(v.get<double>());
  return out;
}

std::vector<Vec2> points(const Json& j) {
  std::vector<Vec2> out;
  for (const auto& p : j) out.push_back(vec2(p));
  return out;
}

DataMapSpec map_spec(const Json& c) {
  const Json& m = at_path(c, "map");
  const MapKind kind = *parse_map_kind(m["kind"].get<std::string>());
  const double tol = m["tie_tol"].get<double>();
  switch (kind) {
    case MapKind::LsLine: return DataMapSpec::ls_line(tol);
    case MapKind::PcLine: return DataMapSpec::pc_line(tol);
    case MapKind::LadLine: return DataMapSpec::lad_line(tol);
    case MapKind::AugMean: {
      AugMeanParams p;
      for (const auto& w : m["weights"]) p.weights.push_back(w.get<double>());
      p.w0 = m["w0"].get<double>();
      p.augmentation = vec2(m["augmentation"]);
      return DataMapSpec::augmented_mean(p, tol);
    }
    case MapKind::DiskDecision: return DataMapSpec::disk_decision(vec2(m["center"]), m["radius"].get<double>());
    case MapKind::RadialOscillator: return DataMapSpec::radial_oscillator();
  }
  fail(ErrorCode::ContractViolation, "unhandled map kind");
}

SliceSpec slice_spec(const Json& c) {
  SliceSpec s;
  s.n_points = size(c, "slice.n_points");
  s.center = points(at_path(c, "slice.center"));
  s.spread = list(c, "slice.spread");
  s.grid_resolution = size(c, "slice.grid_resolution");
  return s.resolved();
}

EvalMode eval_mode(const Json& c) {
  const std::string m = str(c, "mode");
  if (m == "calibrated") return EvalMode::Calibrated;
  if (m == "standard") return EvalMode::Standard;
  return EvalMode::Raw;
}

WindingOptions winding_options(const Json& c) {
  WindingOptions w;
  w.max_refine = static_cast<int>(size(c, "winding.max_refine"));
  w.max_evaluations = size(c, "winding.max_evaluations");
  return w;
}

Dataset dataset(const Json& c) {
  const std::string source = str(c, "dataset.source");
  if (source == "slice") return embed_slice(vec2(at_path(c, "dataset.slice_u")), slice_spec(c));
  if (source == "points") return PlaneDataset(points(at_path(c, "dataset.points")));
  if (source == "csv") {
    try {
      return read_plane_csv(str(c, "dataset.csv"));
    } catch (const Error& e) {
      throw SchemaError("dataset.csv", e.what());
    }
  }
  if (source == "angles") {
    const auto a = list(c, "dataset.angles");
    return CircleDataset::from_angles(a);
  }
  return EuclideanPoint(vec2(at_path(c, "dataset.point")));
}

// Winding and localization report their certification failures as results.
bool is_result_error(const Error& e) {
  return e.code() == ErrorCode::Inconclusive || e.code() == ErrorCode::LoopHitsSingularity;
}

Json failure(const Error& e) {
  return Json{{"status", std::string(to_string(e.code()))}, {"message", e.what()}};
}

Outcome lfplot(const Json& c) {
  Outcome o;
  o.grid = render_lf_field(slice_spec(c), map_spec(c));
  std::map<std::string, std::size_t> by_status;
  for (const auto& cell : o.grid->cells) ++by_status[status_label(cell.outcome)];
  o.result = Json{{"cells", o.grid->cells.size()}, {"resolution", o.grid->resolution}, {"status_counts", by_status}};
  return o;
}

Outcome winding(const Json& c) {
  const auto spec = slice_spec(c);
  const auto map = map_spec(c);
  const auto opts = winding_options(c);
  const double shrink = num(c, "shrink");
  const std::size_t m = size(c, "m");
  Outcome o;
  try {
    WindingReport rep;
    if (shrink == 1.0) {
      rep = winding_number(boundary_loop(spec, m), map, eval_mode(c), opts);
    } else {
      const SliceField field(spec, map, eval_mode(c));
      rep = winding_on_circle(field, {0.0, 0.0}, shrink, m, opts);
    }
    o.result = Json{{"status", "OK"}, {"winding", rep}};
  } catch (const Error& e) {
    if (!is_result_error(e)) throw;
    o.result = failure(e);
    o.inconclusive = true;
  }
  return o;
}

Outcome localize(const Json& c) {
  const SliceField field(slice_spec(c), map_spec(c), eval_mode(c));
  LocalizerOptions opts;
  opts.eps = num(c, "eps");
  opts.max_jitter = static_cast<int>(size(c, "max_jitter"));
  opts.seed = at_path(c, "seed").get<std::uint64_t>();
  opts.winding = winding_options(c);
  const Rect region{vec2(at_path(c, "region.lo")), vec2(at_path(c, "region.hi"))};
  Outcome o;
  try {
    const auto res = localize_singularities(field, region, opts);
    const bool all_inconclusive =
        !res.boxes.empty() && std::all_of(res.boxes.begin(), res.boxes.end(), [](const LocalizerBox& b) {
          return b.status == BoxStatus::Inconclusive;
        });
    o.result = Json{{"status", all_inconclusive ? "INCONCLUSIVE" : "OK"},
                    {"region_degree", res.region_degree},
                    {"boxes", res.boxes}};
    o.inconclusive = all_inconclusive;
  } catch (const Error& e) {
    if (!is_result_error(e)) throw;
    o.result = failure(e);
    o.inconclusive = true;
  }
  return o;
}

Outcome oscillate(const Json& c, bool with_severity) {
  const auto profile = oscillation(map_spec(c), dataset(c), list(c, "radii"), size(c, "samples"),
                                   at_path(c, "seed").get<std::uint64_t>());
  Outcome o;
  o.result = Json{{"profile", profile}};
  if (with_severity) o.result["severity"] = to_string(classify_severity(profile, num(c, "mesh")));
  return o;
}

Outcome derivprofile(const Json& c) {
  Outcome o;
  const std::string target = str(c, "target");
  if (target == "oscillator") {
    Json checks = Json::array();
    for (const auto& n : at_path(c, "oscillator_n")) {
      checks.push_back(radial_oscillator_arc_check(n.get<int>(), num(c, "oscillator_h_fd")));
    }
    o.result = Json{{"oscillator_checks", checks}};
    return o;
  }
  ProfileOptions opts;
  opts.h_fd = num(c, "h_fd");
  opts.bend = num(c, "bend");
  opts.max_jitter = static_cast<int>(size(c, "max_jitter"));
  opts.seed = at_path(c, "seed").get<std::uint64_t>();
  const Vec2 p = vec2(at_path(c, "singular_point"));
  const auto etas = list(c, "etas");
  DerivativeProfile profile;
  if (target == "synthetic") {
    profile = derivative_blowup_profile(SyntheticArgField::half_angle(), p, etas, opts);
  } else {
    const SliceField field(slice_spec(c), map_spec(c));
    profile = derivative_blowup_profile(field, p, etas, opts);
  }
  std::string csv = "eta,avg_derivative,avg_distance\n";
  for (const auto& e : profile.entries) {
    csv += format_double(e.eta) + ',' + format_double(e.avg_derivative) + ',' + format_double(e.avg_distance) + '\n';
  }
  o.result = Json{{"profile", profile}};
  o.extra.emplace_back(".csv", std::move(csv));
  return o;
}

Outcome tube(const Json& c) {
  const auto fixture = tube_fixture(str(c, "fixture"));
  const Box unit = Box::square(0.0, 1.0);
  TubeOptions opts;
  opts.deltas = list(c, "deltas");
  opts.mc_samples = size(c, "mc_samples");
  opts.seed = at_path(c, "seed").get<std::uint64_t>();
  opts.support = fixture.support;
  const auto rep = tube_volume(fixture.distance, unit, opts);
  const auto est = box_count_dimension(fixture.cells, unit, list(c, "meshes"));
  Json bounds = Json::array();
  std::ostringstream csv;
  csv << "delta,volume,stderr,hits,lower_bound\n";
  for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
    const double lb = 0.5 * fixture.geometric_constant * std::pow(rep.deltas[i], 2 - fixture.set_dimension) *
                      est.measure_at_dim;
    bounds.push_back(Json{{"delta", rep.deltas[i]}, {"lower_bound", lb}, {"holds", rep.volumes[i] >= lb}});
    csv << format_double(rep.deltas[i]) << ',' << format_double(rep.volumes[i]) << ','
        << format_double(rep.stderrs[i]) << ',' << rep.hits[i] << ',' << format_double(lb) << '\n';
  }
  Outcome o;
  o.result = Json{{"fixture",
                   Json{{"name", fixture.name},
                        {"set_dimension", fixture.set_dimension},
                        {"geometric_constant", fixture.geometric_constant},
                        {"exact_measure", fixture.exact_measure}}},
                  {"tube", rep},
                  {"measure_estimate", est},
                  {"lower_bound_checks", bounds}};
  o.extra.emplace_back(".csv", csv.str());
  return o;
}

Outcome cdf(const Json& c) {
  CdfOptions opts;
  opts.n_points = size(c, "n_points");
  opts.n_samples = size(c, "n_samples");
  opts.seed = at_path(c, "seed").get<std::uint64_t>();
  opts.q_lo = num(c, "q_lo");
  opts.q_hi = num(c, "q_hi");
  opts.bootstrap = size(c, "bootstrap");
  const auto rep = distance_cdf(map_spec(c), opts);
  std::string csv = "distance\n";
  for (double d : rep.sorted_distances) {
    csv += format_double(d);
    csv += '\n';
  }
  Outcome o;
  o.result = cdf_summary(rep);
  o.extra.emplace_back(".csv", std::move(csv));
  return o;
}

Outcome dimension(const Json& c) {
  Box domain{list(c, "domain.lo"), list(c, "domain.hi")};
  const auto meshes = list(c, "meshes");
  Outcome o;
  if (str(c, "source") == "decision_boundary") {
    o.result = Json{{"estimate", decision_boundary_dimension(map_spec(c), domain, meshes)}};
  } else {
    o.result = Json{{"estimate", box_count_dimension(tube_fixture(str(c, "fixture")).cells, domain, meshes)}};
  }
  return o;
}

Outcome tradeoff(const Json& c) {
  std::vector<TradeoffPreset> presets;
  for (const auto& p : at_path(c, "presets")) {
    TradeoffPreset t;
    t.name = p["name"].get<std::string>();
    for (const auto& w : p["weights"]) t.params.weights.push_back(w.get<double>());
    t.params.w0 = p["w0"].get<double>();
    t.params.augmentation = vec2(at_path(c, "augmentation"));
    presets.push_back(std::move(t));
  }
  TradeoffOptions opts;
  opts.cloud_samples = size(c, "cloud_samples");
  opts.mesh_sizes = list(c, "meshes");
  Outcome o;
  o.result = tradeoff_experiment(presets, size(c, "n_points"), at_path(c, "seed").get<std::uint64_t>(), opts);
  return o;
}

// Everything except execution knobs, so reports compare equal across thread
// counts and output locations.
Json echoed(const Json& c) {
  Json e = c;
  e.erase("threads");
  e.erase("out_dir");
  return e;
}

}  // namespace

int run_command(const Json& config, const std::filesystem::path& out_dir, std::ostream& log) {
  const std::string command = config.at("command").get<std::string>();
  const std::string name = config.at("name").get<std::string>();
  Outcome o;
  if (command == "lfplot") {
    o = lfplot(config);
  } else if (command == "winding") {
    o = winding(config);
  } else if (command == "localize") {
    o = localize(config);
  } else if (command == "oscillate" || command == "severity") {
    o = oscillate(config, command == "severity");
  } else if (command == "derivprofile") {
    o = derivprofile(config);
  } else if (command == "tube") {
    o = tube(config);
  } else if (command == "cdf") {
    o = cdf(config);
  } else if (command == "dimension") {
    o = dimension(config);
  } else if (command == "tradeoff") {
    o = tradeoff(config);
  } else {
    throw SchemaError("command", "unknown command '" + command + "'");
  }

  const auto report = out_dir / (name + ".json");
  if (o.grid) {
    write_lf_csv(*o.grid, out_dir / (name + ".csv"));
    write_lf_svg(*o.grid, out_dir / (name + ".svg"));
    log << "wrote " << (out_dir / (name + ".csv")).string() << '\n';
    log << "wrote " << (out_dir / (name + ".svg")).string() << '\n';
  }
  for (const auto& [suffix, text] : o.extra) {
    write_text_file(out_dir / (name + suffix), text);
    log << "wrote " << (out_dir / (name + suffix)).string() << '\n';
  }
  write_text_file(report, render_report(echoed(config), o.result));
  log << "wrote " << report.string() << '\n';
  return o.inconclusive ? kInconclusive : kOk;
}

}  // namespace singlab::cli
