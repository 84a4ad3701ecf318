#include "singlab/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "penalty.hpp"
#include "singlab/errors.hpp"
#include "singlab/parallel.hpp"
#include "singlab/random.hpp"

namespace singlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kChunk = 4096;

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

std::size_t cells_along(double extent, double delta) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(extent / delta - 1e-9)));
}

void check_meshes(const std::vector<double>& mesh_sizes) {
  require(mesh_sizes.size() >= 4, ErrorCode::ContractViolation, "box counting needs at least four mesh sizes");
  for (std::size_t i = 0; i < mesh_sizes.size(); ++i) {
    require(mesh_sizes[i] > 0.0 && (i == 0 || mesh_sizes[i] < mesh_sizes[i - 1]), ErrorCode::ContractViolation,
            "mesh sizes must be positive and strictly decreasing");
  }
  require(std::log10(mesh_sizes.front() / mesh_sizes.back()) >= 1.5 - 1e-9, ErrorCode::ContractViolation,
          "mesh sizes must span at least 1.5 decades");
}

DimensionEstimate finish_estimate(const std::vector<double>& meshes, std::vector<std::size_t> counts, std::size_t d) {
  DimensionEstimate est;
  est.mesh_sizes = meshes;
  est.occupied_counts = std::move(counts);
  est.degenerate = std::all_of(est.occupied_counts.begin(), est.occupied_counts.end(),
                               [&](std::size_t c) { return c == est.occupied_counts.front(); });
  if (est.degenerate) {
    est.dimension = 0.0;
  } else {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < meshes.size(); ++i) {
      if (est.occupied_counts[i] == 0) continue;
      lx.push_back(std::log(1.0 / meshes[i]));
      ly.push_back(std::log(static_cast<double>(est.occupied_counts[i])));
    }
    est.dimension = lx.size() >= 2 ? ls_slope(lx, ly) : 0.0;
  }
  const double s = std::clamp(std::round(est.dimension), 0.0, static_cast<double>(d));
  est.measure_dimension = static_cast<int>(s);
  const double dmin = meshes.back();
  est.measure_at_dim = omega_s(s) * static_cast<double>(est.occupied_counts.back()) *
                       std::pow(dmin * std::sqrt(static_cast<double>(d)) / 2.0, s);
  return est;
}

}  // namespace

PointCloud PointCloud::from_vec2(const std::vector<Vec2>& pts) {
  PointCloud c(2);
  for (const auto& p : pts) {
    const double v[2] = {p.x, p.y};
    c.add(v);
  }
  return c;
}

void PointCloud::add(std::span<const double> p) {
  require(p.size() == dim_, ErrorCode::ContractViolation, "point has the wrong dimension");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

double PointCloud::distance(std::size_t i, std::size_t j) const {
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = coords_[i * dim_ + k] - coords_[j * dim_ + k];
    s += d * d;
  }
  return std::sqrt(s);
}

std::size_t packing_number(const PointCloud& cloud, double delta) {
  require(cloud.size() > 0 && delta > 0.0, ErrorCode::ContractViolation, "packing needs points and delta > 0");
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const bool separated = std::all_of(centers.begin(), centers.end(),
                                       [&](std::size_t c) { return cloud.distance(i, c) > delta; });
    if (separated) centers.push_back(i);
  }
  return centers.size();
}

std::size_t covering_number(const PointCloud& cloud, double delta) {
  require(cloud.size() > 0 && delta > 0.0, ErrorCode::ContractViolation, "covering needs points and delta > 0");
  const std::size_t n = cloud.size();
  std::vector<std::vector<std::size_t>> near(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (cloud.distance(i, j) <= delta) near[i].push_back(j);
    }
  }
  std::vector<std::size_t> gain(n);
  for (std::size_t i = 0; i < n; ++i) gain[i] = near[i].size();
  std::vector<char> covered(n, 0);
  std::size_t remaining = n;
  std::size_t picks = 0;
  while (remaining > 0) {
    const auto best = static_cast<std::size_t>(std::max_element(gain.begin(), gain.end()) - gain.begin());
    ++picks;
    for (std::size_t j : near[best]) {
      if (covered[j]) continue;
      covered[j] = 1;
      --remaining;
      for (std::size_t k : near[j]) --gain[k];   // distances are symmetric
    }
  }
  return std::min(picks, packing_number(cloud, delta));
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

void Box::validate() const {
  require(!lo.empty() && lo.size() == hi.size(), ErrorCode::ContractViolation, "box bounds must match in size");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    require(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] < hi[i], ErrorCode::ContractViolation,
            "box must have positive extent");
  }
}

DimensionEstimate box_count_dimension(const CellPredicate& member, const Box& domain,
                                      const std::vector<double>& mesh_sizes) {
  domain.validate();
  check_meshes(mesh_sizes);
  const std::size_t d = domain.dim();
  std::vector<std::size_t> counts;
  for (double delta : mesh_sizes) {
    std::vector<std::size_t> m(d);
    for (std::size_t a = 0; a < d; ++a) m[a] = cells_along(domain.hi[a] - domain.lo[a], delta);
    std::size_t inner = 1;
    for (std::size_t a = 1; a < d; ++a) inner *= m[a];
    std::vector<std::size_t> per_slab(m[0], 0);
    parallel_for(m[0], [&](std::size_t i0) {
      std::vector<double> lo(d);
      std::vector<double> hi(d);
      std::vector<std::size_t> idx(d, 0);
      idx[0] = i0;
      std::size_t count = 0;
      for (std::size_t k = 0; k < inner; ++k) {
        std::size_t rest = k;
        for (std::size_t a = d; a-- > 1;) {
          idx[a] = rest % m[a];
          rest /= m[a];
        }
        for (std::size_t a = 0; a < d; ++a) {
          lo[a] = domain.lo[a] + static_cast<double>(idx[a]) * delta;
          hi[a] = std::min(domain.hi[a], lo[a] + delta);
        }
        if (member(lo, hi)) ++count;
      }
      per_slab[i0] = count;
    });
    counts.push_back(std::accumulate(per_slab.begin(), per_slab.end(), std::size_t{0}));
  }
  return finish_estimate(mesh_sizes, std::move(counts), d);
}

DimensionEstimate box_count_dimension(const PointCloud& cloud, const Box& domain,
                                      const std::vector<double>& mesh_sizes) {
  domain.validate();
  check_meshes(mesh_sizes);
  require(cloud.dim() == domain.dim(), ErrorCode::ContractViolation, "cloud and domain dimensions differ");
  const std::size_t d = domain.dim();
  std::vector<std::size_t> counts;
  for (double delta : mesh_sizes) {
    std::vector<std::size_t> m(d);
    for (std::size_t a = 0; a < d; ++a) m[a] = cells_along(domain.hi[a] - domain.lo[a], delta);
    std::vector<std::uint64_t> keys;
    keys.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.point(i);
      std::uint64_t key = 0;
      bool inside = true;
      for (std::size_t a = 0; a < d; ++a) {
        if (p[a] < domain.lo[a] || p[a] > domain.hi[a]) {
          inside = false;
          break;
        }
        const auto c = std::min<std::size_t>(m[a] - 1, static_cast<std::size_t>((p[a] - domain.lo[a]) / delta));
        key = key * m[a] + c;
      }
      if (inside) keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    counts.push_back(static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin()));
  }
  return finish_estimate(mesh_sizes, std::move(counts), d);
}

DimensionEstimate decision_boundary_dimension(const DataMapSpec& map, const Box& domain,
                                              const std::vector<double>& mesh_sizes) {
  domain.validate();
  check_meshes(mesh_sizes);
  require(domain.dim() == 2, ErrorCode::ContractViolation, "decision boundaries are counted in the plane");
  std::vector<std::size_t> counts;
  for (double delta : mesh_sizes) {
    const std::size_t mx = cells_along(domain.hi[0] - domain.lo[0], delta);
    const std::size_t my = cells_along(domain.hi[1] - domain.lo[1], delta);
    auto vx = [&](std::size_t i) { return std::min(domain.hi[0], domain.lo[0] + static_cast<double>(i) * delta); };
    auto vy = [&](std::size_t j) { return std::min(domain.hi[1], domain.lo[1] + static_cast<double>(j) * delta); };
    std::vector<int> bits((mx + 1) * (my + 1));
    parallel_for(mx + 1, [&](std::size_t i) {
      for (std::size_t j = 0; j <= my; ++j) {
        const auto out = evaluate(map, EuclideanPoint(Vec2{vx(i), vy(j)}));
        bits[i * (my + 1) + j] = out.is_defined() ? std::get<Decision>(out.feature()).bit : -1;
      }
    });
    std::size_t count = 0;
    for (std::size_t i = 0; i < mx; ++i) {
      for (std::size_t j = 0; j < my; ++j) {
        const int a = bits[i * (my + 1) + j];
        if (a != bits[(i + 1) * (my + 1) + j] || a != bits[i * (my + 1) + j + 1] ||
            a != bits[(i + 1) * (my + 1) + j + 1]) {
          ++count;
        }
      }
    }
    counts.push_back(count);
  }
  return finish_estimate(mesh_sizes, std::move(counts), 2);
}

TubeReport tube_volume(const DistanceFn& dist, const Box& domain, const TubeOptions& options) {
  domain.validate();
  require(!options.deltas.empty(), ErrorCode::ContractViolation, "tube volume needs deltas");
  require(options.mc_samples >= 10000, ErrorCode::ContractViolation, "tube volume needs mc_samples >= 10^4");
  const std::size_t d = domain.dim();
  if (options.support) {
    require(options.support->dim() == d, ErrorCode::ContractViolation, "support box has the wrong dimension");
  }
  TubeReport rep;
  rep.mc_samples = options.mc_samples;
  rep.seed = options.seed;
  const std::size_t chunks = (options.mc_samples + kChunk - 1) / kChunk;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t di = 0; di < options.deltas.size(); ++di) {
    const double delta = options.deltas[di];
    for (std::size_t a = 0; a < d; ++a) {
      require(delta > 0.0 && delta < (domain.hi[a] - domain.lo[a]) / 4.0, ErrorCode::ContractViolation,
              "deltas must lie in (0, box size / 4)");
    }
    Box region = domain;
    if (options.support) {
      for (std::size_t a = 0; a < d; ++a) {
        region.lo[a] = std::max(domain.lo[a], options.support->lo[a] - delta);
        region.hi[a] = std::min(domain.hi[a], options.support->hi[a] + delta);
      }
    }
    std::vector<std::size_t> chunk_hits(chunks, 0);
    const std::uint64_t delta_seed = derive_seed(options.seed, di);
    parallel_for(chunks, [&](std::size_t c) {
      Rng rng(derive_seed(delta_seed, c));
      const std::size_t begin = c * kChunk;
      const std::size_t end = std::min(options.mc_samples, begin + kChunk);
      std::vector<double> x(d);
      std::size_t hits = 0;
      for (std::size_t s = begin; s < end; ++s) {
        for (std::size_t a = 0; a < d; ++a) x[a] = uniform(rng, region.lo[a], region.hi[a]);
        if (dist(x) <= delta) ++hits;
      }
      chunk_hits[c] = hits;
    });
    const std::size_t hits = std::accumulate(chunk_hits.begin(), chunk_hits.end(), std::size_t{0});
    if (hits == 0) {
      rep.dropped_deltas.push_back(delta);
      continue;
    }
    const double n = static_cast<double>(options.mc_samples);
    const double p = static_cast<double>(hits) / n;
    const double vol = region.volume();
    rep.deltas.push_back(delta);
    rep.hits.push_back(hits);
    rep.volumes.push_back(vol * p);
    rep.stderrs.push_back(vol * std::sqrt(p * (1.0 - p) / n));
    lx.push_back(std::log(delta));
    ly.push_back(std::log(vol * p));
  }
  rep.fitted_codim = lx.size() >= 2 ? ls_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

TubeFixture tube_fixture(const std::string& name) {
  TubeFixture f;
  f.name = name;
  if (name == "point") {
    f.set_dimension = 0;
    f.geometric_constant = kPi;
    f.exact_measure = 1.0;
    f.distance = [](std::span<const double> x) { return std::hypot(x[0] - 0.5, x[1] - 0.5); };
    f.cells = [](std::span<const double> lo, std::span<const double> hi) {
      return lo[0] <= 0.5 && 0.5 < hi[0] && lo[1] <= 0.5 && 0.5 < hi[1];
    };
    f.support = Box::square(0.5, 0.5);
  } else if (name == "segment") {
    f.set_dimension = 1;
    f.geometric_constant = 2.0;
    f.exact_measure = 0.5;
    f.distance = [](std::span<const double> x) {
      const double cx = std::clamp(x[0], 0.25, 0.75);
      return std::hypot(x[0] - cx, x[1] - 0.5);
    };
    f.cells = [](std::span<const double> lo, std::span<const double> hi) {
      return lo[1] <= 0.5 && 0.5 < hi[1] && lo[0] <= 0.75 && hi[0] > 0.25;
    };
    f.support = {{0.25, 0.5}, {0.75, 0.5}};
  } else if (name == "circle") {
    constexpr double kR = 0.2;
    f.set_dimension = 1;
    f.geometric_constant = 2.0;
    f.exact_measure = kTwoPi * kR;
    f.distance = [](std::span<const double> x) { return std::abs(std::hypot(x[0] - 0.5, x[1] - 0.5) - kR); };
    f.cells = [](std::span<const double> lo, std::span<const double> hi) {
      const double nx = std::clamp(0.5, lo[0], hi[0]) - 0.5;
      const double ny = std::clamp(0.5, lo[1], hi[1]) - 0.5;
      const double fx = std::max(std::abs(lo[0] - 0.5), std::abs(hi[0] - 0.5));
      const double fy = std::max(std::abs(lo[1] - 0.5), std::abs(hi[1] - 0.5));
      return std::hypot(nx, ny) <= kR && kR <= std::hypot(fx, fy);
    };
    f.support = Box::square(0.5 - kR, 0.5 + kR);
  } else {
    fail(ErrorCode::ContractViolation, "unknown tube fixture '" + name + "'");
  }
  return f;
}

TailFit fit_tail(const std::vector<double>& sorted, double q_lo, double q_hi) {
  require(0.0 < q_lo && q_lo < q_hi && q_hi <= 0.1, ErrorCode::ContractViolation,
          "quantile window must satisfy 0 < q_lo < q_hi <= 0.1");
  TailFit fit;
  fit.q_lo = q_lo;
  fit.q_hi = q_hi;
  const double n = static_cast<double>(sorted.size());
  const auto k_lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(q_lo * n)));
  const auto k_hi = static_cast<std::size_t>(std::floor(q_hi * n));
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = k_lo; k <= k_hi && k <= sorted.size(); ++k) {
    const double t = sorted[k - 1];
    if (!(t > 0.0) || !std::isfinite(t)) continue;
    lx.push_back(std::log(t));
    ly.push_back(std::log(static_cast<double>(k) / n));
  }
  fit.points_used = lx.size();
  fit.exponent = lx.size() >= 2 ? ls_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

CdfReport distance_cdf(const DataMapSpec& map, const CdfOptions& options) {
  require(options.n_samples >= 10000, ErrorCode::ContractViolation, "distance_cdf needs n_samples >= 10^4");
  require(options.n_points >= 1, ErrorCode::ContractViolation, "distance_cdf needs n_points >= 1");
  if (map.kind == MapKind::AugMean) {
    require(map.aug.weights.size() == options.n_points, ErrorCode::ContractViolation,
            "augmented-mean weights must match n_points");
  }
  CdfReport rep;
  rep.map_kind = map.kind;
  rep.n_points = options.n_points;
  rep.n_samples = options.n_samples;
  rep.seed = options.seed;
  rep.sorted_distances.assign(options.n_samples, 0.0);
  const std::size_t chunks = (options.n_samples + kChunk - 1) / kChunk;
  std::vector<DistanceMethod> methods(chunks, DistanceMethod::Exact);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive_seed(options.seed, c));
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(options.n_samples, begin + kChunk);
    for (std::size_t s = begin; s < end; ++s) {
      Dataset x = EuclideanPoint(Vec2{});
      if (map.kind == MapKind::AugMean) {
        std::vector<double> angles(options.n_points);
        for (auto& a : angles) a = uniform(rng, -kPi, kPi);
        x = CircleDataset::from_angles(angles);
      } else if (map.kind == MapKind::DiskDecision) {
        const double px = standard_normal(rng);
        x = EuclideanPoint(Vec2{px, standard_normal(rng)});
      } else {
        std::vector<Vec2> pts(options.n_points);
        for (auto& p : pts) {
          p.x = standard_normal(rng);
          p.y = standard_normal(rng);
        }
        x = PlaneDataset(std::move(pts));
      }
      const auto d = distance_to_singular(map, x);
      rep.sorted_distances[s] = d.distance;
      methods[c] = d.method;
    }
  });
  rep.method = methods.front();
  std::sort(rep.sorted_distances.begin(), rep.sorted_distances.end());
  rep.tail_fit = fit_tail(rep.sorted_distances, options.q_lo, options.q_hi);

  if (options.bootstrap >= 2) {
    std::vector<double> slopes(options.bootstrap);
    const std::uint64_t boot_seed = derive_seed(options.seed, 0xb007);
    parallel_for(options.bootstrap, [&](std::size_t b) {
      Rng rng(derive_seed(boot_seed, b));
      std::vector<double> resample(rep.sorted_distances.size());
      for (auto& v : resample) v = rep.sorted_distances[rng() % rep.sorted_distances.size()];
      std::sort(resample.begin(), resample.end());
      slopes[b] = fit_tail(resample, options.q_lo, options.q_hi).exponent;
    });
    const double mean = std::accumulate(slopes.begin(), slopes.end(), 0.0) / static_cast<double>(slopes.size());
    double var = 0.0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    rep.tail_fit.std_error = std::sqrt(var / static_cast<double>(slopes.size() - 1));
  }
  return rep;
}

namespace {

Vec2 resultant(const AugMeanParams& p, std::span<const double> angles) {
  Vec2 rho = p.w0 * p.augmentation;
  for (std::size_t i = 0; i < angles.size(); ++i) rho = rho + p.weights[i] * unit_vector(angles[i]);
  return rho;
}

// S is empty unless the longest of the vectors w_0 a, w_i x_i can be balanced
// by the others.
bool singular_set_empty(const AugMeanParams& p) {
  double total = p.w0;
  double longest = p.w0;
  for (double w : p.weights) {
    total += w;
    longest = std::max(longest, w);
  }
  return longest > total - longest;
}

double wrap_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

PointCloud augmented_singular_cloud(const AugMeanParams& params, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = params.weights.size();
  require(n >= 1, ErrorCode::ContractViolation, "augmented mean needs weights");
  PointCloud cloud(n);
  if (singular_set_empty(params)) return cloud;
  if (n == 1) {
    const double a = wrap_2pi(std::atan2(-params.augmentation.y, -params.augmentation.x));
    cloud.add(std::span<const double>(&a, 1));
    return cloud;
  }
  const double w1 = params.weights[n - 2];
  const double w2 = params.weights[n - 1];
  const std::size_t draws = n == 2 ? 1 : samples;
  std::vector<std::vector<double>> found(draws);
  const std::size_t chunks = (draws + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    for (std::size_t s = c * kChunk; s < std::min(draws, (c + 1) * kChunk); ++s) {
      std::vector<double> angles(n);
      for (std::size_t i = 0; i + 2 < n; ++i) angles[i] = uniform(rng, 0.0, kTwoPi);
      // Solve w1 e(alpha) + w2 e(beta) = v for the last two angles.
      const Vec2 v = -resultant(params, std::span<const double>(angles.data(), n - 2));
      const double len = v.norm();
      if (len == 0.0 || len > w1 + w2 || len < std::abs(w1 - w2)) continue;
      const double gamma = std::atan2(v.y, v.x);
      const double c_alpha = std::clamp((w1 * w1 + len * len - w2 * w2) / (2.0 * w1 * len), -1.0, 1.0);
      for (double sign : {1.0, -1.0}) {
        const double alpha = gamma + sign * std::acos(c_alpha);
        const Vec2 rest = v - w1 * unit_vector(alpha);
        angles[n - 2] = wrap_2pi(alpha);
        angles[n - 1] = wrap_2pi(std::atan2(rest.y, rest.x));
        found[s].insert(found[s].end(), angles.begin(), angles.end());
      }
    }
  });
  for (const auto& f : found) {
    for (std::size_t k = 0; k < f.size(); k += n) cloud.add(std::span<const double>(f.data() + k, n));
  }
  return cloud;
}

double augmented_distance_to_perfect_fits(const AugMeanParams& params, std::uint64_t seed) {
  if (singular_set_empty(params)) return kInf;
  const std::size_t n = params.weights.size();
  const auto ni = static_cast<Eigen::Index>(n);
  // Diagonal point with the smallest resultant.
  constexpr int kGrid = 3600;
  double best_phi = 0.0;
  double best_norm = kInf;
  for (int k = 0; k < kGrid; ++k) {
    const double phi = kTwoPi * k / kGrid;
    const std::vector<double> diag(n, phi);
    const double r = resultant(params, diag).norm();
    if (r < best_norm) {
      best_norm = r;
      best_phi = phi;
    }
  }
  // Off the diagonal: nearest pair (theta in S, phi * 1) by penalty continuation.
  detail::PenaltyModel model;
  model.A = Eigen::MatrixXd::Zero(ni, ni + 1);
  model.A.leftCols(ni) = Eigen::MatrixXd::Identity(ni, ni);
  model.A.col(ni) = -Eigen::VectorXd::Ones(ni);
  model.b = Eigen::VectorXd::Zero(ni);
  model.constraint = [&params, ni](const Eigen::VectorXd& v) {
    const Vec2 r = resultant(params, std::span<const double>(v.data(), static_cast<std::size_t>(ni)));
    return Eigen::Vector2d(r.x, r.y);
  };
  model.constraint_jacobian = [&params, ni](const Eigen::VectorXd& v) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, ni + 1);
    for (Eigen::Index i = 0; i < ni; ++i) {
      j(0, i) = -params.weights[static_cast<std::size_t>(i)] * std::sin(v[i]);
      j(1, i) = params.weights[static_cast<std::size_t>(i)] * std::cos(v[i]);
    }
    return j;
  };
  Rng rng(derive_seed(seed, 0xd15));
  double best = kInf;
  for (int restart = 0; restart < 12; ++restart) {
    Eigen::VectorXd start(ni + 1);
    start[ni] = best_phi;
    for (Eigen::Index i = 0; i < ni; ++i) start[i] = best_phi + (restart == 0 ? 0.0 : uniform(rng, -1.5, 1.5));
    const auto end = detail::penalty_continuation(model, start);
    if (!end) continue;
    double s = 0.0;
    for (Eigen::Index i = 0; i < ni; ++i) {
      const double a = wrap_to_pi((*end)[i] - (*end)[ni]);
      s += a * a;
    }
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

TradeoffReport tradeoff_experiment(const std::vector<TradeoffPreset>& presets, std::size_t n_points,
                                   std::uint64_t seed, const TradeoffOptions& options) {
  require(!presets.empty(), ErrorCode::ContractViolation, "tradeoff needs at least one preset");
  require(n_points >= 1, ErrorCode::ContractViolation, "tradeoff needs n_points >= 1");
  TradeoffReport rep;
  rep.n_points = n_points;
  rep.seed = seed;
  for (std::size_t k = 0; k < presets.size(); ++k) {
    const auto& preset = presets[k];
    require(preset.params.weights.size() == n_points, ErrorCode::ContractViolation,
            "preset '" + preset.name + "' has the wrong number of weights");
    DataMapSpec::augmented_mean(preset.params);   // validates
    TradeoffEntry e;
    e.preset_name = preset.name;
    e.w0 = preset.params.w0;
    e.weight_sum = std::accumulate(preset.params.weights.begin(), preset.params.weights.end(), 0.0);
    const std::uint64_t preset_seed = derive_seed(seed, k);
    if (singular_set_empty(preset.params)) {
      e.dist_S_to_P = kInf;
      e.flagged = true;
      e.flag_reason = "singular set is empty";
      rep.entries.push_back(e);
      continue;
    }
    if (!(e.w0 < e.weight_sum)) {
      e.flagged = true;
      e.flag_reason = "w0 >= sum of weights";
    }
    e.dist_S_to_P = augmented_distance_to_perfect_fits(preset.params, preset_seed);
    if (!std::isfinite(e.dist_S_to_P)) {
      e.flagged = true;
      e.flag_reason = "nearest-point search did not converge";
    }
    const auto cloud = augmented_singular_cloud(preset.params, options.cloud_samples, preset_seed);
    e.cloud_size = cloud.size();
    if (cloud.size() == 0) {
      e.flagged = true;
      e.flag_reason = "no points of the singular set were found";
    } else {
      Box torus{std::vector<double>(n_points, 0.0), std::vector<double>(n_points, kTwoPi)};
      const auto est = box_count_dimension(cloud, torus, options.mesh_sizes);
      e.dimension = est.dimension;
      const double s = n_points >= 2 ? static_cast<double>(n_points - 2) : 0.0;
      const double dmin = options.mesh_sizes.back();
      e.measure_estimate = omega_s(s) * static_cast<double>(est.occupied_counts.back()) *
                           std::pow(dmin * std::sqrt(static_cast<double>(n_points)) / 2.0, s);
    }
    rep.entries.push_back(e);
  }
  std::stable_sort(rep.entries.begin(), rep.entries.end(), [](const TradeoffEntry& a, const TradeoffEntry& b) {
    return a.dist_S_to_P < b.dist_S_to_P;
  });
  return rep;
}

}  // namespace singlab
