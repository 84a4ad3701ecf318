// Runs the eight acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "singlab/data_maps.hpp"
#include "singlab/errors.hpp"
#include "singlab/geometry.hpp"
#include "singlab/measure_lab.hpp"
#include "singlab/random.hpp"
#include "singlab/singularity_metrics.hpp"
#include "singlab/slices.hpp"
#include "singlab/topology.hpp"

namespace fs = std::filesystem;
using namespace singlab;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Tail exponents of the distance CDF.
void codim_tail_law(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  CdfOptions o;
  o.n_points = 4;
  o.n_samples = 100000;
  o.seed = 42;
  const struct {
    DataMapSpec map;
    double target, tol;
  } cases[] = {{DataMapSpec::ls_line(), 3.0, 0.5}, {DataMapSpec::pc_line(), 2.0, 0.3}, {DataMapSpec::lad_line(), 1.0, 0.3}};
  for (const auto& c : cases) {
    const auto rep = distance_cdf(c.map, o);
    const double e = rep.tail_fit.exponent;
    v.detail << ' ' << to_string(c.map.kind) << '=' << e << "+-" << rep.tail_fit.std_error;
    v.check(std::abs(e - c.target) <= c.tol, std::string(to_string(c.map.kind)) + " exponent");
  }
  const double s = seconds_since(t0);
  v.detail << " time=" << s << 's';
  v.check(s <= 120.0, "runtime");
}

// 2. Boundary degree of the standard slice and localization of its singular points.
void degree_obstruction(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const SliceSpec spec;
  const auto sigma = winding_number(boundary_loop(spec, 64), DataMapSpec::pc_line(), EvalMode::Standard);
  v.detail << " standard=" << sigma.degree;
  v.check(sigma.degree == 2, "standard boundary degree");

  for (const auto& map : {DataMapSpec::ls_line(), DataMapSpec::pc_line(), DataMapSpec::lad_line()}) {
    const std::string name(to_string(map.kind));
    const SliceField field(spec, map);
    try {
      const auto w = winding_on_circle(field, {0, 0}, 1.0 - 1e-3, 64);
      v.detail << ' ' << name << "_shrunk=" << w.degree;
      v.check(w.degree == 2, name + " shrunk boundary degree");
    } catch (const Error& e) {
      v.detail << ' ' << name << "_shrunk=" << to_string(e.code());
      v.check(false, name + " shrunk boundary degree");
    }
    try {
      LocalizerOptions lo;
      lo.eps = 1e-3;
      const auto res = localize_singularities(field, {{-0.7, -0.7}, {0.7, 0.7}}, lo);
      int certified = 0;
      double nearest = INFINITY;
      for (const auto& b : res.boxes) {
        if (b.status != BoxStatus::Certified) continue;
        ++certified;
        nearest = std::min(nearest, b.center.norm());
      }
      v.detail << ' ' << name << "_boxes=" << certified;
      v.check(certified >= 1, name + " certified box");
      if (map.kind == MapKind::PcLine) {
        v.detail << " pc_center_offset=" << nearest;
        v.check(nearest <= 1e-2, "PC box at the slice center");
      }
    } catch (const Error& e) {
      v.detail << ' ' << name << "_boxes=" << to_string(e.code());
      v.check(false, name + " certified box");
    }
  }
  const double s = seconds_since(t0);
  v.detail << " time=" << s << 's';
  v.check(s <= 30.0, "runtime");
}

// 3. Tube scaling of the fixtures and the lower-bound inequality.
void tube_scaling(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> deltas = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  const std::vector<double> meshes = {0.1, 0.05, 0.02, 0.01, 0.005, 0.003};
  for (const char* name : {"point", "segment", "circle"}) {
    const auto f = tube_fixture(name);
    TubeOptions o;
    o.deltas = deltas;
    o.mc_samples = 100000;
    o.seed = 1;
    o.support = f.support;
    const auto rep = tube_volume(f.distance, Box::square(0, 1), o);
    const double codim = 2.0 - f.set_dimension;
    v.detail << ' ' << name << "_codim=" << rep.fitted_codim;
    v.check(std::abs(rep.fitted_codim - codim) <= 0.1, std::string(name) + " codim");
    v.check(rep.deltas.size() == deltas.size(), std::string(name) + " dropped deltas");
    const auto est = box_count_dimension(f.cells, Box::square(0, 1), meshes);
    for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
      const double bound = 0.5 * f.geometric_constant * std::pow(rep.deltas[i], codim) * est.measure_at_dim;
      v.check(rep.volumes[i] >= bound, std::string(name) + " lower bound at delta " + std::to_string(rep.deltas[i]));
    }
  }
  const double s = seconds_since(t0);
  v.detail << " time=" << s << 's';
  v.check(s <= 60.0, "runtime");
}

// 4. Length of the disk-decision boundary against 2 pi R.
void zero_dim_law(Verdict& v) {
  const std::vector<double> radii = {0.1, 0.2, 0.4};
  const std::vector<double> meshes = {0.032, 0.016, 0.008, 0.004, 0.002, 0.001};
  std::vector<double> m;
  for (double r : radii) {
    const auto est = decision_boundary_dimension(DataMapSpec::disk_decision({0, 0}, r), Box::square(-0.5, 0.5), meshes);
    m.push_back(est.measure_at_dim);
    const double ratio = est.measure_at_dim / (kTwoPi * r);
    v.detail << " R=" << r << ":H1=" << est.measure_at_dim << "(x" << ratio << ')';
    v.check(ratio >= 0.5 && ratio <= 2.0, "factor 2 of 2 pi R");
  }
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const double err = std::abs((m[i + 1] / m[i]) / (radii[i + 1] / radii[i]) - 1.0);
    v.detail << " slope_ratio_err=" << err;
    v.check(err <= 0.10, "slope ratio");
  }
}

// 5. Derivative blow-up near singular points and the oscillator's arcs.
void derivative_blowup(Verdict& v) {
  const std::vector<double> etas = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  auto bracket = [&](const DerivativeProfile& p, const std::string& name) {
    for (const auto& e : p.entries) {
      v.check(!e.flagged, name + " arc found");
      v.check(p.constant * e.eta <= e.avg_distance * (1 + 1e-12) && e.avg_distance <= e.eta,
              name + " C eta <= avg distance <= eta");
    }
  };
  const auto syn = derivative_blowup_profile(SyntheticArgField::half_angle(), {0, 0}, etas);
  v.detail << " synthetic=" << syn.fitted_exponent;
  v.check(std::abs(syn.fitted_exponent + 1.0) <= 0.05, "synthetic exponent");
  bracket(syn, "synthetic");
  const auto pc = derivative_blowup_profile(SliceField(SliceSpec{}, DataMapSpec::pc_line()), {0, 0}, etas);
  v.detail << " pc=" << pc.fitted_exponent;
  v.check(pc.fitted_exponent >= -1.2 && pc.fitted_exponent <= -0.8, "PC exponent");
  bracket(pc, "PC");
  for (int n = 0; n <= 2; ++n) {
    const auto c = radial_oscillator_arc_check(n);
    v.detail << " osc" << n << ":ratio=" << c.ratio;
    v.check(c.ratio >= 0.25 && c.ratio <= 4.0, "oscillator ratio n=" + std::to_string(n));
    v.check(c.max_pointwise <= c.pointwise_bound, "oscillator pointwise n=" + std::to_string(n));
  }
}

// 6. The appendix inequalities on random inputs.
void appendix_lemmas(Verdict& v) {
  Rng rng(derive_seed(2024, 6));
  int seg_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t m = i % 2 == 0 ? 2 : 6;
    std::vector<double> x(m), y(m);
    double nx = 0, ny = 0;
    for (std::size_t k = 0; k < m; ++k) {
      x[k] = standard_normal(rng);
      y[k] = standard_normal(rng);
      nx += x[k] * x[k];
      ny += y[k] * y[k];
    }
    if (segment_average_norm(x, y) < std::max(std::sqrt(nx), std::sqrt(ny)) / 8.0) ++seg_bad;
  }
  v.detail << " segment_violations=" << seg_bad;
  v.check(seg_bad == 0, "segment-average bound");

  int weyl_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t q = i % 2 == 0 ? 2 : 4;
    Matrix a(q, q), b(q, q);
    double frob = 0.0;
    const double scale = std::pow(10.0, uniform(rng, -6, 0));
    for (std::size_t r = 0; r < q; ++r) {
      for (std::size_t c = r; c < q; ++c) {
        a(r, c) = a(c, r) = standard_normal(rng);
        const double e = scale * standard_normal(rng);
        b(r, c) = b(c, r) = a(r, c) + e;
        frob += (r == c ? 1.0 : 2.0) * e * e;
      }
    }
    const auto ea = sorted_eigenvalues(a), eb = sorted_eigenvalues(b);
    for (std::size_t k = 0; k < q; ++k) {
      if (std::abs(ea[k] - eb[k]) > std::sqrt(frob) + 1e-12) ++weyl_bad;
    }
  }
  v.detail << " weyl_violations=" << weyl_bad;
  v.check(weyl_bad == 0, "Weyl bound");

  int chain_bad = 0;
  std::vector<PointCloud> clouds;
  {
    std::vector<Vec2> circle;
    for (int k = 0; k < 100; ++k) circle.push_back(unit_vector(kTwoPi * k / 100.0));
    clouds.push_back(PointCloud::from_vec2(circle));
    for (int c = 0; c < 4; ++c) {
      PointCloud cloud(2 + c % 2);
      for (int k = 0; k < 60 + 40 * c; ++k) {
        std::vector<double> p(cloud.dim());
        for (auto& z : p) z = uniform01(rng);
        cloud.add(p);
      }
      clouds.push_back(std::move(cloud));
    }
  }
  for (const auto& c : clouds) {
    for (double d : {0.02, 0.05, 0.1, 0.2, 0.4}) {
      if (!(covering_number(c, d / 2) >= packing_number(c, d) && packing_number(c, d) >= covering_number(c, d))) {
        ++chain_bad;
      }
    }
  }
  v.detail << " chain_violations=" << chain_bad;
  v.check(chain_bad == 0, "covering/packing chain");

  const double omega[] = {1.0, 2.0, kPi, 4.0 * kPi / 3.0};
  double worst = 0.0;
  for (int s = 0; s <= 3; ++s) worst = std::max(worst, std::abs(omega_s(s) - omega[s]));
  v.detail << " omega_err=" << worst;
  v.check(worst <= 1e-12, "omega_s");
}

// 7. Every fitter reproduces the perfect-fit standard.
void calibration(Verdict& v) {
  Rng rng(derive_seed(2024, 7));
  double worst = 0.0;
  int undefined[3] = {0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    const bool vertical = i % 5 == 0;
    const double angle = vertical ? kPi / 2 : uniform(rng, 0.0, kPi);
    const Vec2 dir = unit_vector(angle);
    const Vec2 base{standard_normal(rng), standard_normal(rng)};
    const std::size_t n = 2 + static_cast<std::size_t>(uniform(rng, 0, 5));
    std::vector<Vec2> pts;
    for (std::size_t k = 0; k < n; ++k) {
      Vec2 p = base + uniform(rng, -2, 2) * dir;
      if (vertical) p.x = base.x;
      pts.push_back(p);
    }
    const PlaneDataset x(pts);
    const Feature sigma = eval_perfect_fit_standard(x);
    const EvalOutcome outs[3] = {evaluate_calibrated(DataMapSpec::ls_line(), x), eval_pc_line(x), eval_lad_line(x)};
    for (int f = 0; f < 3; ++f) {
      if (!outs[f].is_defined()) {
        ++undefined[f];
        continue;
      }
      worst = std::max(worst, feature_distance(outs[f].feature(), sigma));
    }
  }
  const int failures = undefined[0] + undefined[1] + undefined[2];
  v.detail << " worst=" << worst << " undefined(LS,PC,LAD)=" << undefined[0] << ',' << undefined[1] << ','
           << undefined[2];
  v.check(failures == 0 && worst <= 1e-9, "calibration");
}

// 8. Byte-identical CLI outputs across runs and thread counts.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(Verdict& v) {
  const fs::path root = fs::temp_directory_path() / "singlab_acceptance";
  const char* commands[] = {"lfplot", "winding", "localize", "oscillate", "severity",
                            "derivprofile", "tube", "cdf", "dimension", "tradeoff"};
  int differing = 0;
  for (const char* cmd : commands) {
    std::map<std::string, std::string> reference;
    int run = 0;
    for (const char* threads : {"1", "4", "4"}) {
      const fs::path out = root / (std::string(cmd) + "_" + std::to_string(run++));
      fs::remove_all(out);
      fs::create_directories(out);
      const std::string line = std::string("'") + SINGLAB_BINARY + "' " + cmd + " -t " + threads + " -o '" +
                               out.string() + "' 2>/dev/null";
      const int status = std::system(line.c_str());
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      if (code != 0 && code != 3) {
        v.check(false, std::string(cmd) + " exit " + std::to_string(code));
        break;
      }
      std::map<std::string, std::string> files;
      for (const auto& e : fs::directory_iterator(out)) files[e.path().filename().string()] = slurp(e.path());
      if (reference.empty()) {
        reference = files;
      } else if (files != reference) {
        ++differing;
        v.check(false, std::string(cmd) + " differs at threads=" + threads);
      }
    }
  }
  v.detail << " commands=10 differing=" << differing;
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"codim tail law", codim_tail_law},
      {"degree obstruction", degree_obstruction},
      {"tube scaling", tube_scaling},
      {"zero-dimensional P law", zero_dim_law},
      {"derivative blow-up", derivative_blowup},
      {"appendix lemmas", appendix_lemmas},
      {"calibration suite", calibration},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    if (!v.pass) ++failed;
    std::cout << "CRITERION " << (i + 1) << ' ' << (v.pass ? "PASS" : "FAIL") << " (" << criteria[i].first
              << "):" << v.detail.str() << std::endl;
  }
  return failed;
}
