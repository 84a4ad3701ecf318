#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "singlab/errors.hpp"
#include "singlab/measure_lab.hpp"
#include "test_support.hpp"

namespace singlab {
namespace {

const std::vector<double> kTubeDeltas = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
const std::vector<double> kFixtureMeshes = {0.1, 0.05, 0.02, 0.01, 0.005, 0.003};

PointCloud circle_cloud(std::size_t n, double radius) {
  std::vector<Vec2> pts;
  for (std::size_t k = 0; k < n; ++k) pts.push_back(radius * unit_vector(kTwoPi * static_cast<double>(k) / n));
  return PointCloud::from_vec2(pts);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::ContractViolation;
}

TEST(CoverPack, TwoPoints) {
  const auto c = PointCloud::from_vec2({{0, 0}, {1, 0}});
  EXPECT_EQ(covering_number(c, 0.4), 2u);
  EXPECT_EQ(packing_number(c, 0.4), 2u);
  EXPECT_EQ(covering_number(c, 3.0), 1u);
  EXPECT_EQ(packing_number(c, 3.0), 1u);
}

TEST(CoverPack, CircleOfHundredPoints) {
  const auto c = circle_cloud(100, 1.0);
  // Pinned by an independent greedy implementation on the same cloud.
  EXPECT_EQ(covering_number(c, 0.1), 34u);
  EXPECT_EQ(packing_number(c, 0.1), 50u);
  EXPECT_EQ(covering_number(c, 0.2), 15u);
  EXPECT_EQ(packing_number(c, 0.2), 25u);
  EXPECT_EQ(covering_number(c, 0.05), 100u);
  const double nominal = kTwoPi / 0.2;
  EXPECT_GE(static_cast<double>(covering_number(c, 0.1)), 0.7 * nominal);
  EXPECT_LE(static_cast<double>(covering_number(c, 0.1)), 1.3 * nominal);
}

TEST(CoverPack, InequalityChainIsExact) {
  test::Gen g(81);
  std::vector<PointCloud> clouds = {circle_cloud(100, 1.0), circle_cloud(37, 0.3)};
  for (int k = 0; k < 6; ++k) {
    PointCloud c(2 + static_cast<std::size_t>(k % 2));
    const std::size_t n = 20 + 30 * static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> p(c.dim());
      for (auto& v : p) v = g.uniform(0, 1);
      c.add(p);
    }
    clouds.push_back(std::move(c));
  }
  for (const auto& c : clouds) {
    for (double d : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8}) {
      const auto n_half = covering_number(c, d / 2);
      const auto pack = packing_number(c, d);
      const auto n = covering_number(c, d);
      EXPECT_GE(n_half, pack) << "delta " << d;
      EXPECT_GE(pack, n) << "delta " << d;
    }
  }
}

TEST(CoverPack, Preconditions) {
  EXPECT_EQ(code_of([] { covering_number(PointCloud(2), 0.1); }), ErrorCode::ContractViolation);
  EXPECT_EQ(code_of([] { packing_number(circle_cloud(5, 1), 0.0); }), ErrorCode::ContractViolation);
}

TEST(BoxCount, AnalyticCircle) {
  const double r = 0.5;
  const Box dom = Box::square(-0.6, 0.6);
  // A cell meets the circle when the nearest and farthest cell points straddle radius r.
  auto member = [r](std::span<const double> lo, std::span<const double> hi) {
    const double nx = std::clamp(0.0, lo[0], hi[0]);
    const double ny = std::clamp(0.0, lo[1], hi[1]);
    const double fx = std::max(std::abs(lo[0]), std::abs(hi[0]));
    const double fy = std::max(std::abs(lo[1]), std::abs(hi[1]));
    return std::hypot(nx, ny) <= r && std::hypot(fx, fy) >= r;
  };
  const auto est = box_count_dimension(member, dom, {0.1, 0.05, 0.02, 0.01, 0.005, 0.002});
  EXPECT_NEAR(est.dimension, 1.0, 0.05);
  EXPECT_EQ(est.measure_dimension, 1);
  EXPECT_FALSE(est.degenerate);
  for (std::size_t i = 1; i < est.occupied_counts.size(); ++i)
    EXPECT_GE(est.occupied_counts[i], est.occupied_counts[i - 1]);
  // Grid oracle: every occupied cell at mesh h lies within h*sqrt(2) of the circle.
  EXPECT_GE(est.measure_at_dim, kPi);
}

TEST(BoxCount, FilledSquareAndPoint) {
  const auto full = box_count_dimension([](auto, auto) { return true; }, Box::square(0, 1), kFixtureMeshes);
  EXPECT_NEAR(full.dimension, 2.0, 0.05);
  EXPECT_EQ(full.occupied_counts.front(), 100u);

  const auto pt = box_count_dimension(PointCloud::from_vec2({{0.3, 0.7}}), Box::square(0, 1), kFixtureMeshes);
  EXPECT_EQ(pt.dimension, 0.0);
  EXPECT_TRUE(pt.degenerate);
  for (auto n : pt.occupied_counts) EXPECT_EQ(n, 1u);
}

TEST(BoxCount, MeshPreconditions) {
  const auto c = PointCloud::from_vec2({{0.3, 0.7}});
  EXPECT_EQ(code_of([&] { box_count_dimension(c, Box::square(0, 1), {0.1, 0.05, 0.02}); }),
            ErrorCode::ContractViolation);
  EXPECT_EQ(code_of([&] { box_count_dimension(c, Box::square(0, 1), {0.1, 0.05, 0.02, 0.01 * 1.0}); }),
            ErrorCode::ContractViolation);   // one decade only
  EXPECT_EQ(code_of([&] { box_count_dimension(c, Box::square(0, 1), {0.1, 0.2, 0.02, 0.001}); }),
            ErrorCode::ContractViolation);
}

TEST(BoxCount, DiskDecisionBoundaryScalesWithRadius) {
  const std::vector<double> meshes = {0.032, 0.016, 0.008, 0.004, 0.002, 0.001};
  std::vector<double> m;
  for (double r : {0.1, 0.2, 0.4}) {
    const auto est = decision_boundary_dimension(DataMapSpec::disk_decision({0, 0}, r), Box::square(-0.5, 0.5), meshes);
    EXPECT_NEAR(est.dimension, 1.0, 0.1);
    EXPECT_GE(est.measure_at_dim, 0.5 * kTwoPi * r);
    EXPECT_LE(est.measure_at_dim, 2.0 * kTwoPi * r);
    m.push_back(est.measure_at_dim);
  }
  EXPECT_NEAR(m[1] / m[0], 2.0, 0.2);
  EXPECT_NEAR(m[2] / m[1], 2.0, 0.2);
}

TubeReport run_fixture(const TubeFixture& f, std::uint64_t seed = 1, std::size_t samples = 100000) {
  TubeOptions o;
  o.deltas = kTubeDeltas;
  o.mc_samples = samples;
  o.seed = seed;
  o.support = f.support;
  return tube_volume(f.distance, Box::square(0, 1), o);
}

TEST(Tube, FixtureCodimensions) {
  for (const auto& [name, codim] : {std::pair{"point", 2.0}, {"segment", 1.0}, {"circle", 1.0}}) {
    const auto rep = run_fixture(tube_fixture(name));
    EXPECT_NEAR(rep.fitted_codim, codim, 0.1) << name;
    EXPECT_TRUE(rep.dropped_deltas.empty()) << name;
  }
}

TEST(Tube, AnnulusOracle) {
  const auto rep = run_fixture(tube_fixture("circle"), 5);
  for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
    const double d = rep.deltas[i];
    const double exact = kPi * ((0.2 + d) * (0.2 + d) - (0.2 - d) * (0.2 - d));
    EXPECT_NEAR(rep.volumes[i], exact, 4.0 * rep.stderrs[i] + 1e-12) << "delta " << d;
  }
  const auto pt = run_fixture(tube_fixture("point"), 5);
  for (std::size_t i = 0; i < pt.deltas.size(); ++i)
    EXPECT_NEAR(pt.volumes[i], kPi * pt.deltas[i] * pt.deltas[i], 4.0 * pt.stderrs[i] + 1e-12);
}

TEST(Tube, LowerBoundAgainstMeasureEstimate) {
  for (const char* name : {"point", "segment", "circle"}) {
    const auto f = tube_fixture(name);
    const auto est = box_count_dimension(f.cells, Box::square(0, 1), kFixtureMeshes);
    const auto rep = run_fixture(f);
    const double codim = 2.0 - f.set_dimension;
    for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
      EXPECT_GE(rep.volumes[i], 0.5 * f.geometric_constant * std::pow(rep.deltas[i], codim) * est.measure_at_dim)
          << name << " delta " << rep.deltas[i];
    }
  }
}

TEST(Tube, MonotoneWithinNoise) {
  for (const char* name : {"point", "segment", "circle"}) {
    const auto rep = run_fixture(tube_fixture(name), 11, 20000);
    for (std::size_t i = 1; i < rep.volumes.size(); ++i)
      EXPECT_GE(rep.volumes[i] + 3.0 * (rep.stderrs[i] + rep.stderrs[i - 1]), rep.volumes[i - 1]);
  }
}

TEST(Tube, DropsDeltasWithoutHits) {
  TubeOptions o;
  o.deltas = {1e-9, 1e-2, 2e-2, 5e-2};
  o.mc_samples = 10000;
  const auto rep = tube_volume([](std::span<const double> p) { return std::hypot(p[0] - 0.5, p[1] - 0.5); },
                               Box::square(0, 1), o);
  ASSERT_EQ(rep.dropped_deltas.size(), 1u);
  EXPECT_EQ(rep.dropped_deltas[0], 1e-9);
  EXPECT_EQ(rep.deltas.size(), 3u);
}

TEST(Tube, Preconditions) {
  TubeOptions o;
  o.deltas = {0.01, 0.3};
  auto dist = [](std::span<const double>) { return 1.0; };
  EXPECT_EQ(code_of([&] { tube_volume(dist, Box::square(0, 1), o); }), ErrorCode::ContractViolation);
  o.deltas = {0.01, 0.02};
  o.mc_samples = 9999;
  EXPECT_EQ(code_of([&] { tube_volume(dist, Box::square(0, 1), o); }), ErrorCode::ContractViolation);
}

TEST(Tube, Deterministic) {
  const auto a = run_fixture(tube_fixture("segment"), 3, 20000);
  const auto b = run_fixture(tube_fixture("segment"), 3, 20000);
  EXPECT_EQ(a.volumes, b.volumes);
}

TEST(TailFit, PowerLawSample) {
  // F(t) = t^2 on [0, 1]: the inverse-CDF grid has an exact slope of 2.
  std::vector<double> s;
  const std::size_t n = 100000;
  for (std::size_t k = 1; k <= n; ++k) s.push_back(std::sqrt(static_cast<double>(k) / n));
  const auto fit = fit_tail(s, 0.002, 0.05);
  EXPECT_NEAR(fit.exponent, 2.0, 1e-3);
  EXPECT_GT(fit.points_used, 4000u);
}

TEST(TailFit, WindowErrors) {
  std::vector<double> s(20000, 1.0);
  EXPECT_EQ(code_of([&] { fit_tail(s, 0.05, 0.002); }), ErrorCode::ContractViolation);
  EXPECT_EQ(code_of([&] { fit_tail(s, 0.01, 0.2); }), ErrorCode::ContractViolation);
}

TEST(DistanceCdf, CodimensionExponents) {
  CdfOptions o;
  o.n_points = 4;
  o.n_samples = 100000;
  o.seed = 42;
  const auto ls = distance_cdf(DataMapSpec::ls_line(), o);
  EXPECT_NEAR(ls.tail_fit.exponent, 3.0, 0.5);
  EXPECT_EQ(ls.method, DistanceMethod::Exact);
  const auto pc = distance_cdf(DataMapSpec::pc_line(), o);
  EXPECT_NEAR(pc.tail_fit.exponent, 2.0, 0.3);
  EXPECT_EQ(pc.method, DistanceMethod::Surrogate);
  const auto lad = distance_cdf(DataMapSpec::lad_line(), o);
  EXPECT_NEAR(lad.tail_fit.exponent, 1.0, 0.3);
  for (const auto* r : {&ls, &pc, &lad}) {
    EXPECT_TRUE(std::is_sorted(r->sorted_distances.begin(), r->sorted_distances.end()));
    EXPECT_GE(r->sorted_distances.front(), 0.0);
    EXPECT_EQ(r->sorted_distances.size(), 100000u);
  }
}

TEST(DistanceCdf, DoublingSamplesIsConsistent) {
  for (const auto& map : {DataMapSpec::ls_line(), DataMapSpec::pc_line(), DataMapSpec::lad_line()}) {
    CdfOptions o;
    o.seed = 42;
    o.n_samples = 100000;
    const auto a = distance_cdf(map, o);
    o.n_samples = 200000;
    const auto b = distance_cdf(map, o);
    EXPECT_LT(std::abs(a.tail_fit.exponent - b.tail_fit.exponent), a.tail_fit.std_error)
        << to_string(map.kind) << ": " << a.tail_fit.exponent << " vs " << b.tail_fit.exponent;
  }
}

TEST(DistanceCdf, RejectsSmallSamples) {
  CdfOptions o;
  o.n_samples = 5000;
  EXPECT_EQ(code_of([&] { distance_cdf(DataMapSpec::ls_line(), o); }), ErrorCode::ContractViolation);
}

TEST(Tradeoff, SingleCircleIsEmpty) {
  const auto rep = tradeoff_experiment({{"single", {{1.0}, 0.5, {0, -1}}}}, 1, 3);
  ASSERT_EQ(rep.entries.size(), 1u);
  EXPECT_TRUE(std::isinf(rep.entries[0].dist_S_to_P));
  EXPECT_TRUE(rep.entries[0].flagged);
}

TEST(Tradeoff, SingularCloudSolvesResultant) {
  const AugMeanParams p{{1.0, 1.0, 1.0}, 2.0, {0, -1}};
  const auto cloud = augmented_singular_cloud(p, 500, 9);
  ASSERT_GT(cloud.size(), 0u);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto a = cloud.point(i);
    Vec2 rho = p.w0 * p.augmentation;
    for (std::size_t k = 0; k < a.size(); ++k) rho = rho + p.weights[k] * unit_vector(a[k]);
    ASSERT_LT(rho.norm(), 1e-9);
  }
}

TEST(Tradeoff, DistancePositiveAndSorted) {
  std::vector<TradeoffPreset> presets = {{"UNIFORM", {{1, 1, 1}, 0.5, {0, -1}}},
                                         {"HEAVY", {{1, 1, 1}, 2.0, {0, -1}}}};
  const auto rep = tradeoff_experiment(presets, 3, 42);
  ASSERT_EQ(rep.entries.size(), 2u);
  EXPECT_LE(rep.entries[0].dist_S_to_P, rep.entries[1].dist_S_to_P);
  for (const auto& e : rep.entries) {
    EXPECT_GT(e.dist_S_to_P, 0.0);
    EXPECT_FALSE(e.flagged);
    EXPECT_GT(e.measure_estimate, 0.0);
  }
  // A lighter augmentation leaves S farther from the perfect fits and larger.
  EXPECT_EQ(rep.entries[1].preset_name, "UNIFORM");
  EXPECT_GE(rep.entries[1].measure_estimate, rep.entries[0].measure_estimate);
}

TEST(Tradeoff, PerfectFitDistanceOracle) {
  // n = 2, w = (1, 1), w0 = 1, a = (0, -1): rho = 0 means x1 + x2 = (0, 1).
  // Writing x1 = (cos t, sin t) forces x2 = (-cos t, 1 - sin t), which is a
  // unit vector only when sin t = 1/2. So S is the two angle pairs
  // (pi/6, 5pi/6) and (5pi/6, pi/6), and the nearest diagonal point to either
  // is the mean angle, at distance |t1 - t2| / sqrt(2).
  const AugMeanParams p{{1.0, 1.0}, 1.0, {0, -1}};
  const double oracle = (2 * kPi / 3) / std::sqrt(2.0);
  EXPECT_NEAR(augmented_distance_to_perfect_fits(p, 1), oracle, 1e-6);
}

}  // namespace
}  // namespace singlab
