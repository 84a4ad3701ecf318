#include "singlab/report_json.hpp"

#include <cmath>

namespace singlab {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json vec2(Vec2 v) { return Json::array({number(v.x), number(v.y)}); }

}  // namespace

void to_json(Json& j, const WindingReport& r) {
  j = Json{{"degree", r.degree},
           {"samples_used", r.samples_used},
           {"min_gap", number(r.min_gap)},
           {"refined", r.refined},
           {"certified", r.certified},
           {"total_angle", number(r.total_angle)},
           {"lift_residual", number(r.lift_residual)}};
}

void to_json(Json& j, const LocalizerBox& b) {
  j = Json{{"center", vec2(b.center)},
           {"half_width", number(b.half_width)},
           {"degree", b.degree},
           {"depth", b.depth},
           {"status", to_string(b.status)}};
}

void to_json(Json& j, const LocalizerResult& r) {
  j = Json{{"region_degree", r.region_degree}, {"boxes", r.boxes}};
}

void to_json(Json& j, const DistanceResult& r) {
  j = Json{{"distance", number(r.distance)}, {"method", to_string(r.method)}, {"surrogate", number(r.surrogate)}};
}

void to_json(Json& j, const OscillationProfile& p) {
  Json undefined = Json::array();
  for (bool b : p.all_undefined) undefined.push_back(b);
  j = Json{{"radii", numbers(p.radii)},
           {"diameters", numbers(p.diameters)},
           {"all_undefined", undefined},
           {"samples_per_radius", p.samples_per_radius},
           {"seed", p.seed}};
}

void to_json(Json& j, const DerivativeEntry& e) {
  j = Json{{"eta", number(e.eta)},
           {"avg_derivative", number(e.avg_derivative)},
           {"avg_distance", number(e.avg_distance)},
           {"constant", number(e.constant)},
           {"attempts", e.attempts},
           {"flagged", e.flagged}};
}

void to_json(Json& j, const DerivativeProfile& p) {
  j = Json{{"entries", p.entries}, {"fitted_exponent", number(p.fitted_exponent)}, {"constant", number(p.constant)}};
}

void to_json(Json& j, const OscillatorArcCheck& c) {
  j = Json{{"n", c.n},
           {"t_n", number(c.t_n)},
           {"avg_derivative", number(c.avg_derivative)},
           {"ratio", number(c.ratio)},
           {"max_pointwise", number(c.max_pointwise)},
           {"pointwise_bound", number(c.pointwise_bound)}};
}

void to_json(Json& j, const DimensionEstimate& e) {
  j = Json{{"estimator", "box_count"},
           {"mesh_sizes", numbers(e.mesh_sizes)},
           {"occupied_counts", e.occupied_counts},
           {"dimension", number(e.dimension)},
           {"measure_dimension", e.measure_dimension},
           {"measure_at_dim", number(e.measure_at_dim)},
           {"degenerate", e.degenerate}};
}

void to_json(Json& j, const TubeReport& r) {
  j = Json{{"deltas", numbers(r.deltas)},
           {"volumes", numbers(r.volumes)},
           {"stderrs", numbers(r.stderrs)},
           {"hits", r.hits},
           {"dropped_deltas", numbers(r.dropped_deltas)},
           {"fitted_codim", number(r.fitted_codim)},
           {"mc_samples", r.mc_samples},
           {"seed", r.seed}};
}

void to_json(Json& j, const TailFit& f) {
  j = Json{{"exponent", number(f.exponent)},
           {"stderr", number(f.std_error)},
           {"quantile_window", Json::array({number(f.q_lo), number(f.q_hi)})},
           {"points_used", f.points_used}};
}

void to_json(Json& j, const TradeoffEntry& e) {
  j = Json{{"preset_name", e.preset_name},
           {"w0", number(e.w0)},
           {"weight_sum", number(e.weight_sum)},
           {"dist_S_to_P", number(e.dist_S_to_P)},
           {"measure_estimate", number(e.measure_estimate)},
           {"dimension", number(e.dimension)},
           {"cloud_size", e.cloud_size},
           {"flagged", e.flagged},
           {"flag_reason", e.flag_reason}};
}

void to_json(Json& j, const TradeoffReport& r) {
  j = Json{{"n_points", r.n_points}, {"seed", r.seed}, {"entries", r.entries}};
}

Json cdf_summary(const CdfReport& r) {
  return Json{{"map_kind", std::string(to_string(r.map_kind))},
              {"n_points", r.n_points},
              {"n_samples", r.n_samples},
              {"seed", r.seed},
              {"method", to_string(r.method)},
              {"tail_fit", r.tail_fit}};
}

std::string render_report(const Json& config, const Json& result) {
  return Json{{"config", config}, {"result", result}}.dump(2) + "\n";
}

}  // namespace singlab
