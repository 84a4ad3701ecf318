#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "singlab/data_maps.hpp"

namespace singlab::cli {

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Element templates for lists whose default is empty.
const std::map<std::string, Json>& element_templates() {
  static const std::map<std::string, Json> t = {
      {"slice.center", Json::array({0.0, 0.0})},
      {"dataset.points", Json::array({0.0, 0.0})},
  };
  return t;
}

Json map_block(const std::string& kind) {
  return Json{{"kind", kind},
              {"tie_tol", 1e-12},
              {"weights", Json::array({1.0, 1.0, 1.0})},
              {"w0", 0.5},
              {"augmentation", Json::array({0.0, -1.0})},
              {"center", Json::array({0.0, 0.0})},
              {"radius", 0.5}};
}

Json slice_block() {
  return Json{{"n_points", 3u}, {"center", Json::array()}, {"spread", Json::array()}, {"grid_resolution", 16u}};
}

Json winding_block() {
  return Json{{"max_refine", 48u}, {"max_evaluations", 4000000u}};
}

Json dataset_block() {
  return Json{{"source", "slice"},
              {"slice_u", Json::array({0.0, 0.0})},
              {"points", Json::array()},
              {"csv", ""},
              {"angles", Json::array()},
              {"point", Json::array({0.0, 0.0})}};
}

Json unit_box(double lo, double hi) {
  return Json{{"lo", Json::array({lo, lo})}, {"hi", Json::array({hi, hi})}};
}

// Check `value` against `model` and return the normalized value.
Json conform(const Json& model, const Json& value, const std::string& path);

Json conform_object(const Json& model, const Json& value, const std::string& path) {
  if (!value.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
  Json out = model;
  for (const auto& [key, v] : value.items()) {
    const std::string p = join(path, key);
    if (!model.contains(key)) throw SchemaError(p, "unknown key");
    out[key] = conform(model[key], v, p);
  }
  return out;
}

Json conform(const Json& model, const Json& value, const std::string& path) {
  switch (model.type()) {
    case Json::value_t::object:
      return conform_object(model, value, path);
    case Json::value_t::array: {
      if (!value.is_array()) throw SchemaError(path, "expected a list");
      Json element = Json(0.0);
      const auto& t = element_templates();
      if (auto it = t.find(path); it != t.end()) {
        element = it->second;
      } else if (!model.empty()) {
        element = model.front();
      }
      Json out = Json::array();
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (element.is_array()) {
          if (!value[i].is_array() || value[i].size() != element.size()) {
            throw SchemaError(p, "expected a list of " + std::to_string(element.size()) + " numbers");
          }
        }
        out.push_back(conform(element, value[i], p));
      }
      return out;
    }
    case Json::value_t::number_unsigned:
    case Json::value_t::number_integer:
      if (value.is_number_unsigned()) return value;
      if (value.is_number_integer() && value.get<std::int64_t>() >= 0) return Json(value.get<std::uint64_t>());
      throw SchemaError(path, "expected a non-negative integer");
    case Json::value_t::number_float:
      if (!value.is_number()) throw SchemaError(path, "expected a number");
      if (!std::isfinite(value.get<double>())) throw SchemaError(path, "expected a finite number");
      return Json(value.get<double>());
    case Json::value_t::boolean:
      if (!value.is_boolean()) throw SchemaError(path, "expected true or false");
      return value;
    case Json::value_t::string:
      if (!value.is_string()) throw SchemaError(path, "expected a string");
      return value;
    default:
      throw SchemaError(path, "unsupported value");
  }
}

// ---- range checks -------------------------------------------------------

double num(const Json& c, const std::string& path) { return at_path(c, path).get<double>(); }
std::uint64_t uint(const Json& c, const std::string& path) { return at_path(c, path).get<std::uint64_t>(); }
std::string str(const Json& c, const std::string& path) { return at_path(c, path).get<std::string>(); }

void positive(const Json& c, const std::string& path) {
  if (!(num(c, path) > 0.0)) throw SchemaError(path, "must be positive");
}

void one_of(const Json& c, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::string v = str(c, path);
  std::string list;
  for (const char* a : allowed) {
    if (v == a) return;
    list += list.empty() ? a : std::string(", ") + a;
  }
  throw SchemaError(path, "'" + v + "' is not one of: " + list);
}

void positive_list(const Json& c, const std::string& path, std::size_t min_size) {
  const auto& v = at_path(c, path);
  if (v.size() < min_size) throw SchemaError(path, "needs at least " + std::to_string(min_size) + " values");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i].get<double>() > 0.0)) throw SchemaError(path + "[" + std::to_string(i) + "]", "must be positive");
  }
}

void decreasing(const Json& c, const std::string& path) {
  const auto& v = at_path(c, path);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i].get<double>() < v[i - 1].get<double>())) {
      throw SchemaError(path + "[" + std::to_string(i) + "]", "values must be strictly decreasing");
    }
  }
}

void mesh_list(const Json& c, const std::string& path) {
  positive_list(c, path, 4);
  decreasing(c, path);
  const auto& v = at_path(c, path);
  if (std::log10(v.front().get<double>() / v.back().get<double>()) < 1.5 - 1e-9) {
    throw SchemaError(path, "mesh sizes must span at least 1.5 decades");
  }
}

bool is_line_fitter(const std::string& kind) { return kind == "LS_LINE" || kind == "PC_LINE" || kind == "LAD_LINE"; }

void check_map(const Json& c, bool line_only) {
  const std::string kind = str(c, "map.kind");
  if (!parse_map_kind(kind)) {
    throw SchemaError("map.kind", "'" + kind + "' is not a known map (LS_LINE, PC_LINE, LAD_LINE, AUG_MEAN, "
                                               "DISK_DECISION, RADIAL_OSCILLATOR)");
  }
  if (line_only && !is_line_fitter(kind)) throw SchemaError("map.kind", "this command needs a line fitter");
  if (!(num(c, "map.tie_tol") >= 0.0)) throw SchemaError("map.tie_tol", "must be non-negative");
  if (kind == "AUG_MEAN") {
    positive_list(c, "map.weights", 1);
    if (!(num(c, "map.w0") >= 0.0)) throw SchemaError("map.w0", "must be non-negative");
    const auto& a = at_path(c, "map.augmentation");
    if (std::abs(std::hypot(a[0].get<double>(), a[1].get<double>()) - 1.0) > 1e-9) {
      throw SchemaError("map.augmentation", "must be a unit vector");
    }
  }
  if (kind == "DISK_DECISION") positive(c, "map.radius");
}

void check_slice(const Json& c) {
  const auto n = uint(c, "slice.n_points");
  if (n < 2) throw SchemaError("slice.n_points", "must be at least 2");
  const auto& center = at_path(c, "slice.center");
  if (!center.empty() && center.size() != n) throw SchemaError("slice.center", "needs n_points points or none");
  const auto& spread = at_path(c, "slice.spread");
  if (!spread.empty() && spread.size() != n) throw SchemaError("slice.spread", "needs n_points values or none");
  if (uint(c, "slice.grid_resolution") < 4) throw SchemaError("slice.grid_resolution", "must be at least 4");
}

void check_winding(const Json& c) {
  if (uint(c, "winding.max_refine") < 1) throw SchemaError("winding.max_refine", "must be at least 1");
  if (uint(c, "winding.max_evaluations") < 16) throw SchemaError("winding.max_evaluations", "must be at least 16");
}

void check_dataset(const Json& c) {
  const std::string kind = str(c, "map.kind");
  const std::string source = str(c, "dataset.source");
  one_of(c, "dataset.source", {"slice", "points", "csv", "angles", "point"});
  if (is_line_fitter(kind)) {
    if (source != "slice" && source != "points" && source != "csv") {
      throw SchemaError("dataset.source", "line fitters take 'slice', 'points' or 'csv'");
    }
  } else if (kind == "AUG_MEAN") {
    if (source != "angles") throw SchemaError("dataset.source", "AUG_MEAN takes 'angles'");
    if (at_path(c, "dataset.angles").size() != at_path(c, "map.weights").size()) {
      throw SchemaError("dataset.angles", "needs one angle per weight");
    }
  } else if (source != "point") {
    throw SchemaError("dataset.source", kind + " takes 'point'");
  }
  if (source == "slice") {
    check_slice(c);
    const auto& u = at_path(c, "dataset.slice_u");
    if (std::hypot(u[0].get<double>(), u[1].get<double>()) > 1.0) {
      throw SchemaError("dataset.slice_u", "must lie in the closed unit disk");
    }
  }
  if (source == "points" && at_path(c, "dataset.points").size() < 2) {
    throw SchemaError("dataset.points", "needs at least two points");
  }
  if (source == "csv" && str(c, "dataset.csv").empty()) throw SchemaError("dataset.csv", "path is empty");
}

void check_box(const Json& c, const std::string& path, bool square) {
  const auto& lo = at_path(c, path + ".lo");
  const auto& hi = at_path(c, path + ".hi");
  for (std::size_t a = 0; a < 2; ++a) {
    if (!(lo[a].get<double>() < hi[a].get<double>())) throw SchemaError(path + ".hi", "must exceed lo");
  }
  if (square && std::abs((hi[0].get<double>() - lo[0].get<double>()) - (hi[1].get<double>() - lo[1].get<double>())) >
                    1e-12) {
    throw SchemaError(path + ".hi", "region must be a square");
  }
}

void check_quantiles(const Json& c) {
  const double lo = num(c, "q_lo");
  const double hi = num(c, "q_hi");
  if (!(lo > 0.0)) throw SchemaError("q_lo", "must be positive");
  if (!(lo < hi)) throw SchemaError("q_hi", "must exceed q_lo");
  if (hi > 0.1) throw SchemaError("q_hi", "must be at most 0.1");
}

void check(const std::string& command, const Json& c) {
  const std::string declared = str(c, "command");
  if (!declared.empty() && declared != command) {
    throw SchemaError("command", "config is for '" + declared + "' but '" + command + "' was run");
  }
  const std::string name = str(c, "name");
  if (name.find_first_of("/\\") != std::string::npos || name == "." || name == "..") {
    throw SchemaError("name", "must be a plain file stem without directories");
  }
  if (command == "lfplot") {
    check_map(c, true);
    check_slice(c);
  } else if (command == "winding") {
    check_map(c, true);
    check_slice(c);
    check_winding(c);
    one_of(c, "mode", {"raw", "calibrated", "standard"});
    if (uint(c, "m") < 3) throw SchemaError("m", "must be at least 3");
    const double s = num(c, "shrink");
    if (!(s > 0.0 && s <= 1.0)) throw SchemaError("shrink", "must lie in (0, 1]");
  } else if (command == "localize") {
    check_map(c, true);
    check_slice(c);
    check_winding(c);
    one_of(c, "mode", {"raw", "calibrated", "standard"});
    check_box(c, "region", true);
    positive(c, "eps");
  } else if (command == "oscillate" || command == "severity") {
    check_map(c, false);
    check_dataset(c);
    positive_list(c, "radii", command == "severity" ? 3 : 1);
    decreasing(c, "radii");
    if (uint(c, "samples") < 16) throw SchemaError("samples", "must be at least 16");
    if (command == "severity") positive(c, "mesh");
  } else if (command == "derivprofile") {
    one_of(c, "target", {"slice", "synthetic", "oscillator"});
    if (str(c, "target") == "slice") {
      check_map(c, true);
      check_slice(c);
    }
    positive_list(c, "etas", 2);
    decreasing(c, "etas");
    positive(c, "h_fd");
    positive(c, "oscillator_h_fd");
    for (const auto& n : at_path(c, "oscillator_n")) {
      if (n.get<double>() < 0.0 || n.get<double>() != std::floor(n.get<double>()) || n.get<double>() > 20) {
        throw SchemaError("oscillator_n", "entries must be integers in [0, 20]");
      }
    }
  } else if (command == "tube") {
    one_of(c, "fixture", {"point", "segment", "circle"});
    positive_list(c, "deltas", 2);
    for (std::size_t i = 0; i < at_path(c, "deltas").size(); ++i) {
      if (!(at_path(c, "deltas")[i].get<double>() < 0.25)) {
        throw SchemaError("deltas[" + std::to_string(i) + "]", "must be below a quarter of the unit box");
      }
    }
    if (uint(c, "mc_samples") < 10000) throw SchemaError("mc_samples", "must be at least 10000");
    mesh_list(c, "meshes");
  } else if (command == "cdf") {
    check_map(c, false);
    if (str(c, "map.kind") == "RADIAL_OSCILLATOR") throw SchemaError("map.kind", "has no distance to its singular set");
    if (uint(c, "n_points") < 1) throw SchemaError("n_points", "must be at least 1");
    if (str(c, "map.kind") == "AUG_MEAN" && at_path(c, "map.weights").size() != uint(c, "n_points")) {
      throw SchemaError("map.weights", "needs n_points weights");
    }
    if (uint(c, "n_samples") < 10000) throw SchemaError("n_samples", "must be at least 10000");
    check_quantiles(c);
    if (uint(c, "bootstrap") == 1) throw SchemaError("bootstrap", "must be 0 or at least 2");
  } else if (command == "dimension") {
    one_of(c, "source", {"decision_boundary", "fixture"});
    if (str(c, "source") == "decision_boundary") {
      check_map(c, false);
      if (str(c, "map.kind") != "DISK_DECISION") throw SchemaError("map.kind", "decision boundaries need DISK_DECISION");
    } else {
      one_of(c, "fixture", {"point", "segment", "circle"});
    }
    check_box(c, "domain", false);
    mesh_list(c, "meshes");
  } else if (command == "tradeoff") {
    const auto n = uint(c, "n_points");
    if (n < 1) throw SchemaError("n_points", "must be at least 1");
    const auto& presets = at_path(c, "presets");
    if (presets.empty()) throw SchemaError("presets", "needs at least one preset");
    for (std::size_t i = 0; i < presets.size(); ++i) {
      const std::string p = "presets[" + std::to_string(i) + "]";
      if (presets[i]["name"].get<std::string>().empty()) throw SchemaError(p + ".name", "must not be empty");
      if (presets[i]["weights"].size() != n) throw SchemaError(p + ".weights", "needs n_points weights");
      for (const auto& w : presets[i]["weights"]) {
        if (!(w.get<double>() > 0.0)) throw SchemaError(p + ".weights", "weights must be positive");
      }
      if (!(presets[i]["w0"].get<double>() >= 0.0)) throw SchemaError(p + ".w0", "must be non-negative");
    }
    const auto& a = at_path(c, "augmentation");
    if (std::abs(std::hypot(a[0].get<double>(), a[1].get<double>()) - 1.0) > 1e-9) {
      throw SchemaError("augmentation", "must be a unit vector");
    }
    if (uint(c, "cloud_samples") < 100) throw SchemaError("cloud_samples", "must be at least 100");
    mesh_list(c, "meshes");
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"lfplot",       "winding", "localize", "oscillate", "severity",
                                                 "derivprofile", "tube",    "cdf",      "dimension", "tradeoff"};
  return names;
}

Json default_config(const std::string& command) {
  Json c{{"command", ""}, {"seed", 42u}, {"threads", 0u}, {"out_dir", ""}, {"name", ""}};
  if (command == "lfplot") {
    c["map"] = map_block("PC_LINE");
    c["slice"] = slice_block();
  } else if (command == "winding") {
    c["map"] = map_block("PC_LINE");
    c["slice"] = slice_block();
    c["winding"] = winding_block();
    c["mode"] = "raw";
    c["m"] = 64u;
    c["shrink"] = 0.999;
  } else if (command == "localize") {
    c["map"] = map_block("PC_LINE");
    c["slice"] = slice_block();
    c["winding"] = winding_block();
    c["mode"] = "raw";
    c["region"] = unit_box(-0.7, 0.7);
    c["eps"] = 1e-3;
    c["max_jitter"] = 8u;
  } else if (command == "oscillate" || command == "severity") {
    c["map"] = map_block("PC_LINE");
    c["slice"] = slice_block();
    c["dataset"] = dataset_block();
    c["radii"] = Json::array({0.1, 0.01, 0.001});
    c["samples"] = 256u;
    if (command == "severity") c["mesh"] = 0.3;
  } else if (command == "derivprofile") {
    c["target"] = "slice";
    c["map"] = map_block("PC_LINE");
    c["slice"] = slice_block();
    c["singular_point"] = Json::array({0.0, 0.0});
    c["etas"] = Json::array({1e-1, 3e-2, 1e-2, 3e-3, 1e-3});
    c["h_fd"] = 1e-6;
    c["bend"] = 0.2;
    c["max_jitter"] = 8u;
    c["oscillator_n"] = Json::array({0u, 1u, 2u});
    c["oscillator_h_fd"] = 1e-8;
  } else if (command == "tube") {
    c["fixture"] = "point";
    c["deltas"] = Json::array({1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1});
    c["mc_samples"] = 100000u;
    c["meshes"] = Json::array({0.1, 0.05, 0.02, 0.01, 0.005, 0.003});
  } else if (command == "cdf") {
    c["map"] = map_block("LS_LINE");
    c["map"]["weights"] = Json::array({1.0, 1.0, 1.0, 1.0});
    c["n_points"] = 4u;
    c["n_samples"] = 100000u;
    c["q_lo"] = 0.002;
    c["q_hi"] = 0.05;
    c["bootstrap"] = 50u;
  } else if (command == "dimension") {
    c["source"] = "decision_boundary";
    c["map"] = map_block("DISK_DECISION");
    c["fixture"] = "circle";
    c["domain"] = unit_box(-0.5, 0.5);
    c["meshes"] = Json::array({0.032, 0.016, 0.008, 0.004, 0.002, 0.001});
  } else if (command == "tradeoff") {
    c["n_points"] = 3u;
    c["augmentation"] = Json::array({0.0, -1.0});
    c["presets"] = Json::array({Json{{"name", "UNIFORM"}, {"weights", {1.0, 1.0, 1.0}}, {"w0", 0.5}},
                                Json{{"name", "CONCENTRATED"}, {"weights", {1.0, 1.0, 1.0}}, {"w0", 8.0}}});
    c["cloud_samples"] = 20000u;
    c["meshes"] = Json::array({0.8, 0.4, 0.2, 0.1, 0.05, 0.025});
  } else {
    throw SchemaError("command", "unknown command '" + command + "'");
  }
  return c;
}

void apply_override(Json& overlay, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw SchemaError(assignment, "override must look like path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* node = &overlay;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw SchemaError(path, "empty path component");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    Json& next = (*node)[key];
    if (!next.is_object()) next = Json::object();
    node = &next;
    start = dot + 1;
  }
}

namespace {

void merge_into(Json& base, const Json& overlay) {
  for (const auto& [key, v] : overlay.items()) {
    if (v.is_object() && base.contains(key) && base[key].is_object()) {
      merge_into(base[key], v);
    } else {
      base[key] = v;
    }
  }
}

}  // namespace

Json resolve_config(const std::string& command, const Json& file_config, const std::vector<std::string>& overrides) {
  const Json defaults = default_config(command);
  if (!file_config.is_null() && !file_config.is_object()) throw SchemaError("<root>", "config must be a JSON object");
  Json user = file_config.is_null() ? Json::object() : file_config;
  Json overlay = Json::object();
  for (const auto& o : overrides) apply_override(overlay, o);
  merge_into(user, overlay);
  Json resolved = conform(defaults, user, "");
  check(command, resolved);
  resolved["command"] = command;
  if (resolved["name"].get<std::string>().empty()) resolved["name"] = command;
  return resolved;
}

const Json& at_path(const Json& config, const std::string& path) {
  const Json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    node = &node->at(key);
    if (dot == std::string::npos) return *node;
    start = dot + 1;
  }
}

}  // namespace singlab::cli
