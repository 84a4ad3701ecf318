#include "singlab/topology.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <tuple>

#include "singlab/errors.hpp"
#include "singlab/parallel.hpp"
#include "singlab/random.hpp"

namespace singlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double period_of(FeatureKind kind) {
  const auto p = feature_period(kind);
  if (!p) {
    fail(ErrorCode::UnsupportedFeature,
         std::string("winding numbers need a circle-like feature, got ") + to_string(kind));
  }
  return *p;
}

struct LiftStats {
  std::size_t evaluations = 0;
  double min_gap = kInf;
  bool refined = false;
  bool certified = true;
};

// Lifts one edge parametrized by s in [0, 1]. `eval` and `drift` see edge
// parameters; the caller guarantees the endpoint outcomes are defined.
class EdgeLifter {
 public:
  using EvalFn = std::function<EvalOutcome(double)>;
  using DriftFn = std::function<std::optional<double>(double, const EvalOutcome&, double)>;

  EdgeLifter(EvalFn eval, DriftFn drift, double period, const WindingOptions& options, LiftStats& stats)
      : eval_(std::move(eval)), drift_(std::move(drift)), period_(period), options_(options), stats_(stats) {}

  double lift(const EvalOutcome& fa, const EvalOutcome& fb) { return lift(0.0, 1.0, fa, fb, 0); }

 private:
  double lift(double a, double b, const EvalOutcome& fa, const EvalOutcome& fb, int depth) {
    const double inc = signed_increment(fa.feature(), fb.feature());
    const double quarter = period_ / 4.0;
    const auto da = drift_(a, fa, b - a);
    if (da) {
      if (*da < quarter) return inc;
      const auto db = drift_(b, fb, b - a);
      if (db && *db < quarter) return inc;
    } else {
      stats_.certified = false;
      if (std::abs(inc) < quarter) return inc;
    }
    if (depth >= options_.max_refine || stats_.evaluations >= options_.max_evaluations) {
      fail(ErrorCode::Inconclusive, "loop refinement budget exhausted before the lift was certified");
    }
    stats_.refined = true;
    const double m = 0.5 * (a + b);
    const EvalOutcome fm = eval_(m);
    ++stats_.evaluations;
    if (!fm.is_defined()) fail(ErrorCode::LoopHitsSingularity, "loop passes through an undefined point");
    stats_.min_gap = std::min(stats_.min_gap, fm.gap());
    return lift(a, m, fa, fm, depth + 1) + lift(m, b, fm, fb, depth + 1);
  }

  EvalFn eval_;
  DriftFn drift_;
  double period_;
  const WindingOptions& options_;
  LiftStats& stats_;
};

WindingReport finish(double total, double period, const LiftStats& stats) {
  WindingReport r;
  r.total_angle = total;
  r.degree = static_cast<int>(std::lround(total / period));
  r.lift_residual = std::abs(total - r.degree * period);
  r.samples_used = stats.evaluations;
  r.min_gap = stats.min_gap;
  r.refined = stats.refined;
  r.certified = stats.certified;
  require(r.lift_residual <= 1e-6 * period, ErrorCode::Inconclusive, "lifted angle is not a whole number of turns");
  return r;
}

void check_vertex(const EvalOutcome& out, LiftStats& stats) {
  if (!out.is_defined()) fail(ErrorCode::LoopHitsSingularity, "loop vertex evaluates undefined");
  stats.min_gap = std::min(stats.min_gap, out.gap());
}

// Increment of a planar field along the segment p -> q. The computation always
// runs from the lexicographically smaller endpoint, so a segment shared by two
// boxes yields exactly opposite increments.
double lift_segment(const PlanarField& field, Vec2 p, Vec2 q, const EvalOutcome& fp, const EvalOutcome& fq,
                    double period, const WindingOptions& options, LiftStats& stats) {
  const bool swap = std::tie(q.x, q.y) < std::tie(p.x, p.y);
  const Vec2 a = swap ? q : p;
  const Vec2 b = swap ? p : q;
  const Vec2 d = b - a;
  const double len = d.norm();
  EdgeLifter lifter(
      [&](double s) { return field.eval(a + s * d); },
      [&](double s, const EvalOutcome& out, double ds) { return field.drift_bound(a + s * d, out, ds * len); },
      period, options, stats);
  const double inc = swap ? lifter.lift(fq, fp) : lifter.lift(fp, fq);
  return swap ? -inc : inc;
}

WindingReport polygon_winding(const PlanarField& field, const std::vector<Vec2>& vertices,
                              const WindingOptions& options) {
  const double period = period_of(field.feature_kind());
  LiftStats stats;
  std::vector<EvalOutcome> values;
  values.reserve(vertices.size());
  for (const auto& v : vertices) {
    values.push_back(field.eval(v));
    ++stats.evaluations;
    check_vertex(values.back(), stats);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const std::size_t n = (k + 1) % vertices.size();
    total += lift_segment(field, vertices[k], vertices[n], values[k], values[n], period, options, stats);
  }
  return finish(total, period, stats);
}

Dataset interpolate(const Dataset& a, const Dataset& b, double s) {
  if (const auto* pa = std::get_if<PlaneDataset>(&a)) {
    const auto& pb = std::get<PlaneDataset>(b);
    std::vector<Vec2> pts(pa->size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = (*pa)[i] + s * (pb[i] - (*pa)[i]);
    return PlaneDataset(std::move(pts));
  }
  if (const auto* ca = std::get_if<CircleDataset>(&a)) {
    const auto& cb = std::get<CircleDataset>(b);
    std::vector<Vec2> pts(ca->size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double arc = std::atan2(cross((*ca)[i], cb[i]), dot((*ca)[i], cb[i]));
      pts[i] = unit_vector(std::atan2((*ca)[i].y, (*ca)[i].x) + s * arc);
    }
    return CircleDataset(std::move(pts));
  }
  const auto& ea = std::get<EuclideanPoint>(a);
  const auto& eb = std::get<EuclideanPoint>(b);
  std::vector<double> c(ea.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = ea.coords()[i] + s * (eb.coords()[i] - ea.coords()[i]);
  return EuclideanPoint(std::move(c));
}

class DatasetLoopSource final : public LoopSource {
 public:
  DatasetLoopSource(const Loop& loop, const DataMapSpec& map, EvalMode mode)
      : loop_(loop), map_(map), mode_(mode) {
    loop_.validate();
    for (std::size_t k = 0; k < loop_.samples.size(); ++k) {
      lengths_.push_back(dataset_distance(loop_.samples[k], next(k)));
    }
  }
  std::size_t edge_count() const override { return loop_.samples.size(); }
  EvalOutcome eval(std::size_t edge, double s) const override {
    return evaluate_mode(map_, mode_, point(edge, s));
  }
  std::optional<double> drift(std::size_t edge, double s, const EvalOutcome&, double ds) const override {
    return drift_bound_mode(map_, mode_, point(edge, s), ds * lengths_[edge]);
  }

 private:
  const Dataset& next(std::size_t k) const { return loop_.samples[(k + 1) % loop_.samples.size()]; }
  Dataset point(std::size_t edge, double s) const {
    if (s == 0.0) return loop_.samples[edge];
    if (s == 1.0) return next(edge);
    return interpolate(loop_.samples[edge], next(edge), s);
  }

  const Loop& loop_;
  const DataMapSpec& map_;
  EvalMode mode_;
  std::vector<double> lengths_;
};

class CircleLoopSource final : public LoopSource {
 public:
  CircleLoopSource(const PlanarField& field, Vec2 center, double radius, std::size_t m)
      : field_(field), center_(center), radius_(radius), m_(m) {
    require(radius > 0.0 && m >= 3, ErrorCode::ContractViolation, "circle loop needs radius > 0 and m >= 3");
  }
  std::size_t edge_count() const override { return m_; }
  EvalOutcome eval(std::size_t edge, double s) const override { return field_.eval(at(edge, s)); }
  std::optional<double> drift(std::size_t edge, double s, const EvalOutcome& out, double ds) const override {
    // chord length never exceeds the arc length
    return field_.drift_bound(at(edge, s), out, ds * radius_ * kTwoPi / static_cast<double>(m_));
  }

 private:
  Vec2 at(std::size_t edge, double s) const {
    const double k = std::fmod(static_cast<double>(edge) + s, static_cast<double>(m_));
    return center_ + radius_ * unit_vector(kTwoPi * k / static_cast<double>(m_));
  }

  const PlanarField& field_;
  Vec2 center_;
  double radius_;
  std::size_t m_;
};

}  // namespace

WindingReport winding_number(const LoopSource& loop, const WindingOptions& options) {
  const std::size_t m = loop.edge_count();
  require(m >= 3, ErrorCode::ContractViolation, "a loop needs at least 3 edges");
  LiftStats stats;
  std::vector<EvalOutcome> vertices;
  vertices.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    vertices.push_back(loop.eval(k, 0.0));
    ++stats.evaluations;
    check_vertex(vertices.back(), stats);
  }
  const double period = period_of(kind_of(vertices.front().feature()));
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    EdgeLifter lifter([&](double s) { return loop.eval(k, s); },
                      [&](double s, const EvalOutcome& out, double ds) { return loop.drift(k, s, out, ds); },
                      period, options, stats);
    total += lifter.lift(vertices[k], vertices[(k + 1) % m]);
  }
  return finish(total, period, stats);
}

WindingReport winding_number(const Loop& loop, const DataMapSpec& map, EvalMode mode,
                             const WindingOptions& options) {
  return winding_number(DatasetLoopSource(loop, map, mode), options);
}

WindingReport winding_number(const ParameterLoop& loop, const PlanarField& field, const WindingOptions& options) {
  loop.validate();
  return polygon_winding(field, loop.vertices, options);
}

WindingReport winding_on_circle(const PlanarField& field, Vec2 center, double radius, std::size_t m,
                                const WindingOptions& options) {
  period_of(field.feature_kind());
  return winding_number(CircleLoopSource(field, center, radius, m), options);
}

WindingReport rect_degree(const PlanarField& field, const Rect& rect, const WindingOptions& options) {
  require(rect.lo.x < rect.hi.x && rect.lo.y < rect.hi.y, ErrorCode::ContractViolation, "empty rectangle");
  return polygon_winding(field, {rect.lo, {rect.hi.x, rect.lo.y}, rect.hi, {rect.lo.x, rect.hi.y}}, options);
}

const char* to_string(BoxStatus status) {
  return status == BoxStatus::Certified ? "CERTIFIED" : "INCONCLUSIVE";
}

namespace {

class Localizer {
 public:
  Localizer(const PlanarField& field, const LocalizerOptions& options) : field_(field), options_(options) {}

  std::vector<LocalizerBox> run(const Rect& rect, int degree, int depth) const {
    if (rect.half_width() <= options_.eps) return {box(rect, degree, depth, BoxStatus::Certified)};
    for (int attempt = 0; attempt <= options_.max_jitter; ++attempt) {
      const auto children = split(rect, depth, attempt);
      std::array<int, 4> degrees{};
      bool ok = true;
      int sum = 0;
      for (std::size_t c = 0; c < 4 && ok; ++c) {
        try {
          degrees[c] = rect_degree(field_, children[c], options_.winding).degree;
          sum += degrees[c];
        } catch (const Error& e) {
          if (e.code() != ErrorCode::LoopHitsSingularity && e.code() != ErrorCode::Inconclusive) throw;
          ok = false;
        }
      }
      if (!ok || sum != degree) continue;

      std::vector<std::vector<LocalizerBox>> found(4);
      auto explore = [&](std::size_t c) {
        if (degrees[c] != 0) found[c] = run(children[c], degrees[c], depth + 1);
      };
      if (depth < 2) {
        parallel_for(4, explore);
      } else {
        for (std::size_t c = 0; c < 4; ++c) explore(c);
      }
      std::vector<LocalizerBox> out;
      for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
      return out;
    }
    return {box(rect, degree, depth, BoxStatus::Inconclusive)};
  }

 private:
  static LocalizerBox box(const Rect& r, int degree, int depth, BoxStatus status) {
    return {r.center(), r.half_width(), degree, depth, status};
  }

  std::array<Rect, 4> split(const Rect& r, int depth, int attempt) const {
    Vec2 cut = r.center();
    if (attempt > 0) {
      std::uint64_t key = derive_seed(options_.seed, static_cast<std::uint64_t>(depth));
      key = derive_seed(key, std::bit_cast<std::uint64_t>(r.lo.x));
      key = derive_seed(key, std::bit_cast<std::uint64_t>(r.lo.y));
      Rng rng(derive_seed(key, static_cast<std::uint64_t>(attempt)));
      cut.x += 0.1 * (r.hi.x - r.lo.x) * uniform(rng, -1.0, 1.0);
      cut.y += 0.1 * (r.hi.y - r.lo.y) * uniform(rng, -1.0, 1.0);
    }
    return {Rect{r.lo, cut}, Rect{{cut.x, r.lo.y}, {r.hi.x, cut.y}}, Rect{{r.lo.x, cut.y}, {cut.x, r.hi.y}},
            Rect{cut, r.hi}};
  }

  const PlanarField& field_;
  const LocalizerOptions& options_;
};

}  // namespace

LocalizerResult localize_singularities(const PlanarField& field, const Rect& region,
                                       const LocalizerOptions& options) {
  period_of(field.feature_kind());
  require(options.eps > 0.0, ErrorCode::ContractViolation, "eps must be positive");
  LocalizerResult result;
  result.region_degree = rect_degree(field, region, options.winding).degree;
  if (result.region_degree == 0) return result;
  result.boxes = Localizer(field, options).run(region, result.region_degree, 0);
  std::sort(result.boxes.begin(), result.boxes.end(), [](const LocalizerBox& a, const LocalizerBox& b) {
    return std::tie(a.center.x, a.center.y, a.half_width) < std::tie(b.center.x, b.center.y, b.half_width);
  });
  return result;
}

}  // namespace singlab
