#include "singlab/slices.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "singlab/errors.hpp"
#include "singlab/parallel.hpp"
#include "singlab/text_io.hpp"

namespace singlab {

SliceSpec SliceSpec::resolved() const {
  require(n_points >= 2, ErrorCode::ContractViolation, "slice needs n_points >= 2");
  SliceSpec out = *this;
  if (out.center.empty()) {
    for (std::size_t i = 0; i < n_points; ++i) {
      out.center.push_back(unit_vector(kPi / 2 + kTwoPi * static_cast<double>(i) / static_cast<double>(n_points)));
    }
  }
  if (out.spread.empty()) {
    for (std::size_t i = 0; i < n_points; ++i) {
      out.spread.push_back(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n_points - 1));
    }
  }
  require(out.center.size() == n_points && out.spread.size() == n_points, ErrorCode::ContractViolation,
          "slice center and spread must have n_points entries");
  PlaneDataset check(out.center);  // validates finiteness
  (void)check;
  return out;
}

double SliceSpec::lipschitz() const {
  const SliceSpec s = resolved();
  double c2 = 0.0;
  double s2 = 0.0;
  for (const auto& p : s.center) c2 += p.squared_norm();
  for (double v : s.spread) s2 += v * v;
  return std::sqrt(c2) + std::sqrt(s2);
}

namespace {
constexpr double kBoundarySnap = 4.0 * std::numeric_limits<double>::epsilon();
}  // namespace

PlaneDataset embed_slice(Vec2 u, const SliceSpec& spec) {
  double r = u.norm();
  require(std::isfinite(r), ErrorCode::ContractViolation, "slice parameter must be finite");
  require(r <= 1.0 + kBoundarySnap, ErrorCode::DomainError, "slice parameter lies outside the unit disk");
  // unit_vector(psi) has norm 1 only up to rounding; boundary points must
  // embed with no trace of the center so that they are exactly collinear.
  if (std::abs(r - 1.0) <= kBoundarySnap) r = 1.0;
  const SliceSpec s = spec.resolved();
  std::vector<Vec2> pts(s.n_points);
  for (std::size_t i = 0; i < s.n_points; ++i) pts[i] = (1.0 - r) * s.center[i] + s.spread[i] * u;
  return PlaneDataset(std::move(pts));
}

void Loop::validate() const {
  require(samples.size() >= 3, ErrorCode::ContractViolation, "a loop needs at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& next = samples[(i + 1) % samples.size()];
    require(dataset_distance(samples[i], next) > 0.0, ErrorCode::ContractViolation,
            "consecutive loop samples must be distinct");
  }
}

void ParameterLoop::validate() const {
  require(vertices.size() >= 3, ErrorCode::ContractViolation, "a loop needs at least 3 vertices");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    require(!(vertices[i] == vertices[(i + 1) % vertices.size()]), ErrorCode::ContractViolation,
            "consecutive loop vertices must be distinct");
  }
}

Loop boundary_loop(const SliceSpec& spec, std::size_t m) {
  require(m >= 3, ErrorCode::ContractViolation, "boundary loop needs m >= 3");
  Loop loop;
  loop.samples.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double psi = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
    loop.samples.emplace_back(embed_slice(unit_vector(psi), spec));
  }
  return loop;
}

SliceField::SliceField(SliceSpec spec, DataMapSpec map, EvalMode mode)
    : spec_(spec.resolved()), map_(std::move(map)), mode_(mode), lipschitz_(spec_.lipschitz()) {
  require(map_.kind == MapKind::LsLine || map_.kind == MapKind::PcLine || map_.kind == MapKind::LadLine,
          ErrorCode::Unsupported, "slice fields carry line fitters only");
}

SliceField SliceField::standard(SliceSpec spec) {
  return SliceField(std::move(spec), DataMapSpec::pc_line(), EvalMode::Standard);
}

FeatureKind SliceField::feature_kind() const { return FeatureKind::LineDirection; }

EvalOutcome SliceField::eval(Vec2 u) const { return evaluate_mode(map_, mode_, embed_slice(u, spec_)); }

std::optional<double> SliceField::drift_bound(Vec2 u, const EvalOutcome&, double radius) const {
  return drift_bound_mode(map_, mode_, embed_slice(u, spec_), lipschitz_ * radius);
}

GridField render_lf_field(const SliceSpec& spec, const DataMapSpec& map) {
  const SliceSpec s = spec.resolved();
  const std::size_t res = s.grid_resolution;
  require(res >= 4, ErrorCode::ContractViolation, "grid_resolution must be >= 4");
  std::vector<Vec2> nodes;
  nodes.reserve(1 + (res - 1) * res);
  nodes.push_back({0.0, 0.0});
  for (std::size_t i = 1; i < res; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(res - 1);
    for (std::size_t j = 0; j < res; ++j) {
      const double psi = kTwoPi * static_cast<double>(j) / static_cast<double>(res);
      // exact unit norm on the outer ring keeps those datasets exactly collinear
      nodes.push_back(i + 1 == res ? unit_vector(psi) : r * unit_vector(psi));
    }
  }
  std::vector<std::optional<EvalOutcome>> outcomes(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) {
    outcomes[k] = evaluate(map, embed_slice(nodes[k], s));
  });
  GridField field;
  field.resolution = res;
  field.cells.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) field.cells.push_back({nodes[k], *outcomes[k]});
  return field;
}

std::string status_label(const EvalOutcome& outcome) {
  if (outcome.is_defined()) return "DEFINED";
  return "UNDEFINED_" + std::string(to_string(outcome.reason()));
}

void write_lf_csv(const GridField& field, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "u_x,u_y,theta_or_nan,gap,status\n";
  for (const auto& c : field.cells) {
    const double theta = c.outcome.is_defined() ? feature_angle(c.outcome.feature())
                                                : std::numeric_limits<double>::quiet_NaN();
    out << format_double(c.u.x) << ',' << format_double(c.u.y) << ',' << format_double(theta) << ','
        << format_double(c.outcome.gap()) << ',' << status_label(c.outcome) << '\n';
  }
  write_text_file(path, out.str());
}

void write_lf_svg(const GridField& field, const std::filesystem::path& path) {
  constexpr double kSize = 600.0;
  constexpr double kScale = kSize / 2.4;  // disk of radius 1 plus margin
  const double cell = 1.0 / static_cast<double>(field.resolution - 1);
  const double half = 0.4 * cell;
  auto px = [&](double v) { return format_fixed(kSize / 2 + kScale * v, 3); };
  auto py = [&](double v) { return format_fixed(kSize / 2 - kScale * v, 3); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" "
         "viewBox=\"0 0 600 600\">\n"
      << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n"
      << "<circle cx=\"300\" cy=\"300\" r=\"" << format_fixed(kScale, 3)
      << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
  for (const auto& c : field.cells) {
    if (c.outcome.is_defined()) {
      const Vec2 d = half * unit_vector(feature_angle(c.outcome.feature()));
      out << "<line x1=\"" << px(c.u.x - d.x) << "\" y1=\"" << py(c.u.y - d.y) << "\" x2=\""
          << px(c.u.x + d.x) << "\" y2=\"" << py(c.u.y + d.y) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    } else {
      out << "<circle cx=\"" << px(c.u.x) << "\" cy=\"" << py(c.u.y)
          << "\" r=\"3\" fill=\"red\"/>\n";
    }
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

}  // namespace singlab
