#include "singlab/singularity_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "penalty.hpp"
#include "singlab/errors.hpp"
#include "singlab/parallel.hpp"
#include "singlab/random.hpp"

namespace singlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kRestarts = 4;

// Traceless part of the 1/n covariance of flattened plane coordinates, and its
// Jacobian; both vanish exactly on the eigenvalue-tie surface.
Eigen::Vector2d pc_constraint(const Eigen::VectorXd& p) {
  const auto n = p.size() / 2;
  double mx = 0.0;
  double my = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mx += p[2 * i];
    my += p[2 * i + 1];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cxx = 0.0;
  double cyy = 0.0;
  double cxy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dx = p[2 * i] - mx;
    const double dy = p[2 * i + 1] - my;
    cxx += dx * dx;
    cyy += dy * dy;
    cxy += dx * dy;
  }
  return {0.5 * (cxx - cyy) / static_cast<double>(n), cxy / static_cast<double>(n)};
}

Eigen::MatrixXd pc_constraint_jacobian(const Eigen::VectorXd& p) {
  const auto n = p.size() / 2;
  const double nn = static_cast<double>(n);
  double mx = 0.0;
  double my = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mx += p[2 * i];
    my += p[2 * i + 1];
  }
  mx /= nn;
  my /= nn;
  Eigen::MatrixXd jac(2, p.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dx = p[2 * i] - mx;
    const double dy = p[2 * i + 1] - my;
    jac(0, 2 * i) = dx / nn;
    jac(0, 2 * i + 1) = -dy / nn;
    jac(1, 2 * i) = dy / nn;
    jac(1, 2 * i + 1) = dx / nn;
  }
  return jac;
}

// Best feasible endpoint over the plain start and a few perturbed restarts.
std::optional<double> project(const detail::PenaltyModel& model, const Eigen::VectorXd& origin, double scale,
                              std::uint64_t seed, const std::function<double(const Eigen::VectorXd&)>& metric) {
  std::optional<double> best;
  Rng rng(derive_seed(seed, 0x5eed));
  for (int r = 0; r <= kRestarts; ++r) {
    Eigen::VectorXd start = origin;
    if (r > 0) {
      for (Eigen::Index i = 0; i < start.size(); ++i) start[i] += scale * standard_normal(rng);
    }
    const auto end = detail::penalty_continuation(model, start);
    if (!end) continue;
    const double d = metric(*end);
    if (!best || d < *best) best = d;
  }
  return best;
}

DistanceResult pc_distance(const PlaneDataset& x, bool refine, std::uint64_t seed) {
  const auto m = central_moments(x);
  const double n = static_cast<double>(x.size());
  const double surrogate = std::hypot(0.5 * (m.sxx - m.syy), m.sxy) / n;
  DistanceResult out{surrogate, DistanceMethod::Surrogate, surrogate};
  if (!refine) return out;
  const auto flat = x.flatten();
  const Eigen::VectorXd origin = Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
  detail::PenaltyModel model{Eigen::MatrixXd::Identity(origin.size(), origin.size()), origin, pc_constraint,
                             pc_constraint_jacobian};
  const auto d = project(model, origin, std::max(surrogate, 1e-3), seed,
                         [&](const Eigen::VectorXd& p) { return (p - origin).norm(); });
  if (d) out = {*d, DistanceMethod::Projected, surrogate};
  return out;
}

DistanceResult aug_distance(const CircleDataset& x, const AugMeanParams& params, bool refine, std::uint64_t seed) {
  Vec2 rho = params.w0 * params.augmentation;
  for (std::size_t i = 0; i < x.size(); ++i) rho = rho + params.weights[i] * x[i];
  const double wsum = std::accumulate(params.weights.begin(), params.weights.end(), 0.0);
  const double surrogate = rho.norm() / wsum;
  DistanceResult out{surrogate, DistanceMethod::Surrogate, surrogate};
  if (!refine) return out;
  const auto angles = x.angles();
  const auto n = static_cast<Eigen::Index>(angles.size());
  const Eigen::VectorXd origin = Eigen::Map<const Eigen::VectorXd>(angles.data(), n);
  auto constraint = [&params](const Eigen::VectorXd& t) {
    Eigen::Vector2d r(params.w0 * params.augmentation.x, params.w0 * params.augmentation.y);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      r[0] += params.weights[static_cast<std::size_t>(i)] * std::cos(t[i]);
      r[1] += params.weights[static_cast<std::size_t>(i)] * std::sin(t[i]);
    }
    return r;
  };
  auto jacobian = [&params](const Eigen::VectorXd& t) {
    Eigen::MatrixXd j(2, t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      j(0, i) = -params.weights[static_cast<std::size_t>(i)] * std::sin(t[i]);
      j(1, i) = params.weights[static_cast<std::size_t>(i)] * std::cos(t[i]);
    }
    return j;
  };
  detail::PenaltyModel model{Eigen::MatrixXd::Identity(n, n), origin, constraint, jacobian};
  const auto d = project(model, origin, std::max(surrogate, 1e-3), seed, [&](const Eigen::VectorXd& t) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = wrap_to_pi(t[i] - origin[i]);
      s += a * a;
    }
    return std::sqrt(s);
  });
  if (d) out = {*d, DistanceMethod::Projected, surrogate};
  return out;
}

}  // namespace

const char* to_string(DistanceMethod method) {
  switch (method) {
    case DistanceMethod::Exact: return "EXACT";
    case DistanceMethod::Surrogate: return "SURROGATE";
    case DistanceMethod::Projected: return "PROJECTED";
  }
  return "?";
}

DistanceResult distance_to_singular(const DataMapSpec& map, const Dataset& x, bool refine, std::uint64_t seed) {
  switch (map.kind) {
    case MapKind::LsLine: {
      const double d = std::sqrt(central_moments(std::get<PlaneDataset>(x)).sxx);
      return {d, DistanceMethod::Exact, d};
    }
    case MapKind::PcLine:
      return pc_distance(std::get<PlaneDataset>(x), refine, seed);
    case MapKind::LadLine: {
      const auto out = eval_lad_line(std::get<PlaneDataset>(x), map.tie_tol);
      const double g = out.gap();
      return {g, DistanceMethod::Surrogate, g};
    }
    case MapKind::AugMean:
      map.validate();
      return aug_distance(std::get<CircleDataset>(x), map.aug, refine, seed);
    case MapKind::DiskDecision: {
      const double g = eval_disk_decision(std::get<EuclideanPoint>(x), map).gap();
      return {g, DistanceMethod::Exact, g};
    }
    case MapKind::RadialOscillator:
      break;
  }
  fail(ErrorCode::Unsupported, std::string("no distance rule for ") + std::string(to_string(map.kind)));
}

namespace {

Dataset sample_in_ball(const Dataset& x, double radius, Rng& rng) {
  auto ball = [&](std::size_t dim) {
    std::vector<double> v(dim);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& c : v) {
        c = standard_normal(rng);
        norm += c * c;
      }
    } while (norm == 0.0);
    const double scale = radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(dim)) / std::sqrt(norm);
    for (auto& c : v) c *= scale;
    return v;
  };
  if (const auto* p = std::get_if<PlaneDataset>(&x)) {
    auto flat = p->flatten();
    const auto v = ball(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i) flat[i] += v[i];
    return PlaneDataset::from_flat(flat);
  }
  if (const auto* c = std::get_if<CircleDataset>(&x)) {
    auto angles = c->angles();
    const auto v = ball(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) angles[i] += v[i];
    return CircleDataset::from_angles(angles);
  }
  const auto& e = std::get<EuclideanPoint>(x);
  std::vector<double> coords(e.coords().begin(), e.coords().end());
  const auto v = ball(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += v[i];
  return EuclideanPoint(std::move(coords));
}

}  // namespace

OscillationProfile oscillation(const DataMapSpec& map, const Dataset& x, const std::vector<double>& radii,
                               std::size_t k_samples, std::uint64_t seed) {
  require(!radii.empty(), ErrorCode::ContractViolation, "oscillation needs at least one radius");
  require(k_samples >= 16, ErrorCode::ContractViolation, "oscillation needs k_samples >= 16");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(std::isfinite(radii[i]) && radii[i] > 0.0, ErrorCode::ContractViolation, "radii must be positive");
    require(i == 0 || radii[i] < radii[i - 1], ErrorCode::ContractViolation, "radii must be strictly decreasing");
  }
  OscillationProfile prof;
  prof.radii = radii;
  prof.samples_per_radius = k_samples;
  prof.seed = seed;
  prof.diameters.assign(radii.size(), kNaN);
  std::vector<char> empty(radii.size(), 0);
  parallel_for(radii.size(), [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    std::vector<Feature> values;
    values.reserve(k_samples);
    for (std::size_t k = 0; k < k_samples; ++k) {
      try {
        const auto out = evaluate(map, sample_in_ball(x, radii[r], rng));
        if (out.is_defined()) values.push_back(out.feature());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DomainError) throw;   // sample left the map's domain
      }
    }
    if (values.empty()) {
      empty[r] = 1;
      return;
    }
    double diam = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = i + 1; j < values.size(); ++j) diam = std::max(diam, feature_distance(values[i], values[j]));
    }
    prof.diameters[r] = diam;
  });
  prof.all_undefined.assign(empty.begin(), empty.end());
  return prof;
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Severe: return "SEVERE";
    case Severity::NonSevere: return "NON_SEVERE";
    case Severity::Undecided: return "UNDECIDED";
  }
  return "?";
}

Severity classify_severity(const OscillationProfile& profile, double mesh) {
  require(profile.diameters.size() >= 3, ErrorCode::ContractViolation, "severity needs at least 3 radii");
  require(mesh > 0.0, ErrorCode::ContractViolation, "mesh must be positive");
  const auto& d = profile.diameters;
  const double smallest = d.back();
  const double second = d[d.size() - 2];
  if (smallest >= 2.0 * mesh) return Severity::Severe;
  if (smallest <= 0.5 * mesh && second <= 0.5 * mesh) return Severity::NonSevere;
  return Severity::Undecided;
}

double derivative_norm(const PlanarField& field, Vec2 u, double h) {
  require(h > 0.0, ErrorCode::ContractViolation, "finite-difference step must be positive");
  auto at = [&](Vec2 v) {
    auto out = field.eval(v);
    if (!out.is_defined()) fail(ErrorCode::CurveHitsSingularity, "finite-difference node is undefined");
    return out;
  };
  const double gx = signed_increment(at(u - Vec2{h, 0.0}).feature(), at(u + Vec2{h, 0.0}).feature()) / (2.0 * h);
  const double gy = signed_increment(at(u - Vec2{0.0, h}).feature(), at(u + Vec2{0.0, h}).feature()) / (2.0 * h);
  return std::hypot(gx, gy);
}

namespace {

// Break points on [0, 1] for a segment a -> a + d: the ends, plus a geometric
// grading toward the point closest to the anchor. Near a point singularity the
// gradient grows like 1/distance, so each graded piece holds a bounded share
// of the integral and stays cheap for the adaptive rule.
std::vector<double> graded_breaks(Vec2 a, Vec2 d, const std::optional<Vec2>& anchor) {
  std::vector<double> br = {0.0, 1.0};
  if (!anchor) return br;
  const double len2 = d.squared_norm();
  const double s_star = std::clamp(dot(*anchor - a, d) / len2, 0.0, 1.0);
  const double rho = (a + s_star * d - *anchor).norm() / std::sqrt(len2);
  for (double w = 0.5; w > rho && w > 1e-15; w *= 0.5) {
    if (s_star + w < 1.0) br.push_back(s_star + w);
    if (s_star - w > 0.0) br.push_back(s_star - w);
  }
  if (s_star > 0.0 && s_star < 1.0) br.push_back(s_star);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

}  // namespace

double average_derivative_along_curve(const PlanarField& field, const std::vector<Vec2>& curve,
                                      const CurveOptions& options) {
  require(curve.size() >= 2, ErrorCode::ContractViolation, "a curve needs at least two vertices");
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto step_at = [&](Vec2 u) {
    return options.step_anchor ? options.h_fd * (u - *options.step_anchor).norm() : options.h_fd;
  };
  double integral = 0.0;
  double length = 0.0;
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const Vec2 a = curve[k];
    const Vec2 d = curve[k + 1] - a;
    const double len = d.norm();
    if (len == 0.0) continue;
    const auto br = graded_breaks(a, d, options.step_anchor);
    for (std::size_t j = 0; j + 1 < br.size(); ++j) {
      const double s0 = br[j];
      const double width = br[j + 1] - s0;
      // Integrate over a unit parameter so the rule's tolerance test does not
      // depend on the piece's length.
      auto integrand = [&](double t) {
        const Vec2 u = a + (s0 + t * width) * d;
        return derivative_norm(field, u, step_at(u));
      };
      integral += width * len * Quad::integrate(integrand, 0.0, 1.0, options.max_depth, options.rel_tol);
    }
    length += len;
  }
  require(length > 0.0, ErrorCode::ContractViolation, "curve has zero length");
  return integral / length;
}

double average_distance_along_curve(const std::vector<Vec2>& curve, Vec2 point) {
  double integral = 0.0;
  double length = 0.0;
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const double len = (curve[k + 1] - curve[k]).norm();
    if (len == 0.0) continue;
    const Vec2 a = curve[k] - point;
    const Vec2 b = curve[k + 1] - point;
    const double xa[2] = {a.x, a.y};
    const double xb[2] = {b.x, b.y};
    integral += len * segment_average_norm(xa, xb);
    length += len;
  }
  require(length > 0.0, ErrorCode::ContractViolation, "curve has zero length");
  return integral / length;
}

std::vector<Vec2> blowup_arc(Vec2 center, double eta, double phi, double bend) {
  const double turn = phi + kPi - bend;
  return {center + 0.4 * eta * unit_vector(phi), center + 0.4 * eta * unit_vector(turn),
          center + 0.8 * eta * unit_vector(turn + kPi / 2)};
}

DerivativeProfile derivative_blowup_profile(const PlanarField& field, Vec2 singular_point,
                                            const std::vector<double>& etas, const ProfileOptions& options) {
  require(!etas.empty(), ErrorCode::ContractViolation, "profile needs at least one eta");
  for (std::size_t i = 0; i < etas.size(); ++i) {
    require(etas[i] > 0.0 && (i == 0 || etas[i] < etas[i - 1]), ErrorCode::ContractViolation,
            "etas must be positive and strictly decreasing");
  }
  DerivativeProfile prof;
  prof.entries.resize(etas.size());
  parallel_for(etas.size(), [&](std::size_t e) {
    DerivativeEntry& entry = prof.entries[e];
    entry.eta = etas[e];
    Rng rng(derive_seed(options.seed, e));
    double phi = 0.3;
    double bend = options.bend;
    for (int attempt = 0; attempt <= options.max_jitter; ++attempt) {
      entry.attempts = attempt + 1;
      if (attempt > 0) {
        phi = uniform(rng, 0.0, kTwoPi);
        bend = options.bend * uniform(rng, 0.75, 1.25);
      }
      const auto arc = blowup_arc(singular_point, entry.eta, phi, bend);
      try {
        CurveOptions co;
        co.h_fd = options.h_fd;
        co.step_anchor = singular_point;
        entry.avg_derivative = average_derivative_along_curve(field, arc, co);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::CurveHitsSingularity) throw;
        continue;
      }
      entry.avg_distance = average_distance_along_curve(arc, singular_point);
      entry.constant = std::min(entry.avg_derivative * entry.eta, entry.avg_distance / entry.eta);
      return;
    }
    entry.flagged = true;
  });

  std::vector<double> lx;
  std::vector<double> ly;
  prof.constant = std::numeric_limits<double>::infinity();
  for (const auto& entry : prof.entries) {
    if (entry.flagged || entry.avg_derivative <= 0.0) continue;
    lx.push_back(std::log(entry.eta));
    ly.push_back(std::log(entry.avg_derivative));
    prof.constant = std::min(prof.constant, entry.constant);
  }
  if (lx.size() >= 2) {
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    prof.fitted_exponent = sxy / sxx;
  } else {
    prof.fitted_exponent = kNaN;
  }
  return prof;
}

std::vector<Vec2> oscillator_arc(int n, std::size_t semicircle_segments) {
  require(n >= 0 && semicircle_segments >= 2, ErrorCode::ContractViolation, "invalid oscillator arc request");
  // Both ends sit just inside the branch points t_n and t_{n+1}, where g has kinks.
  const double outer = oscillator_t(n) * (1.0 - 1e-6);
  const double inner = oscillator_t(n + 1) * (1.0 + 1e-6);
  std::vector<Vec2> arc;
  for (std::size_t k = 0; k <= semicircle_segments; ++k) {
    arc.push_back(outer * unit_vector(kPi * static_cast<double>(k) / static_cast<double>(semicircle_segments)));
  }
  arc.push_back({-inner, 0.0});
  return arc;
}

OscillatorArcCheck radial_oscillator_arc_check(int n, double h_fd) {
  OscillatorArcCheck c;
  c.n = n;
  c.t_n = oscillator_t(n);
  const auto arc = oscillator_arc(n);
  CurveOptions co;
  co.h_fd = h_fd;
  co.step_anchor = Vec2{0.0, 0.0};
  c.avg_derivative = average_derivative_along_curve(RadialOscillatorField{}, arc, co);
  c.ratio = c.avg_derivative * c.t_n;
  // t |g'(t)| = 1 / |log(t/e)| grows with t, so its maximum sits at the
  // outermost radius reached by the arc.
  double t_max = 0.0;
  for (const auto& v : arc) t_max = std::max(t_max, v.norm());
  c.max_pointwise = t_max * oscillator_abs_g_prime(t_max);
  c.pointwise_bound = 1.0 / std::abs(std::log(c.t_n) - 1.0);
  return c;
}

}  // namespace singlab
