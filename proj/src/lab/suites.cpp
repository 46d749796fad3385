#include "dalorenz/lab/suites.hpp"

#include "dalorenz/error.hpp"
#include "dalorenz/lab/parallel.hpp"
#include "dalorenz/lab/rng.hpp"
#include "dalorenz/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>

namespace dalorenz::lab {

namespace {

using flowint::HybridSystem;
using flowint::OrbitSegment;

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

HybridSystem hybrid_system(const ExperimentConfig& cfg, const skew4d::SkewParams& sp) {
  HybridSystem sys = section::make_hybrid(cfg.lorenz, sp, cfg.integrator);
  sys.on_leaf_tol = cfg.on_leaf_tol;
  return sys;
}

HybridSystem hybrid_system(const ExperimentConfig& cfg) { return hybrid_system(cfg, cfg.skew); }

void add_gate(SuiteReport& r, const ValidationReport& v) {
  for (const auto& c : v.checks) r.check(c.name, c.anchor, c.inequality, c.pass, c.margin, 0.0);
}

void merge_into(SuiteReport& dst, SuiteReport src) {
  for (auto& c : src.checks) dst.checks.push_back(std::move(c));
  for (auto& t : src.tables) dst.tables.push_back(std::move(t));
  for (auto& e : src.errors) dst.errors.push_back(std::move(e));
  for (auto& [k, v] : src.data.items()) dst.data[k] = v;
  dst.wall_seconds += src.wall_seconds;
}

std::string describe(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return fmt::format("{}: {}", to_string(err->kind()), e.what());
  return e.what();
}

Vec3 periodic_point(const section::FixedPoint& fp, double s = 0.0) { return Vec3(fp.x1, fp.x2, s); }

// Random section point off the leaf L, pushed onto the attractor by `warmup`
// returns. Redraws if a warmup orbit lands on L or escapes.
Vec3 attractor_point(const HybridSystem& sys, const CounterRng& rng, int warmup) {
  std::string last;
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    const std::uint64_t slot = 4 * attempt;
    const double side = rng.uniform(slot) < 0.5 ? -1.0 : 1.0;
    Vec3 q(rng.uniform(slot + 1, -0.9, 0.9), side * rng.uniform(slot + 2, 0.05, 0.95),
           rng.uniform(slot + 3, -0.5, 0.5));
    try {
      for (int k = 0; k < warmup; ++k) q = flowint::advance_to_section(sys, q).image;
      return q;
    } catch (const Error& e) {
      last = e.what();
    }
  }
  throw Error(ErrorKind::DegenerateInput, "no usable start point after 8 draws: " + last);
}

double grid_center(int i, int n, double lo = -1.0, double hi = 1.0) { return lo + (hi - lo) * (i + 0.5) / n; }

}  // namespace

// ---------------------------------------------------------------------------

SuiteReport validate_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "validate";
  add_gate(r, model3d::validate_params(cfg.lorenz));
  add_gate(r, model3d::validate_params(cfg.classical));
  add_gate(r, skew4d::validate_theta(cfg.skew, cfg.lorenz));
  try {
    const auto p = section::orbit_p(cfg.lorenz);
    const auto q = section::orbit_q(cfg.lorenz);
    add_gate(r, skew4d::validate_skew(cfg.skew, Vec2(p.x1, p.x2), Vec2(q.x1, q.x2)));
    r.data["P"] = {{"x1", p.x1}, {"x2", p.x2}, {"period", p.period}, {"f_prime", p.deriv}};
    r.data["Q"] = {{"x1", q.x1}, {"x2", q.x2}, {"period", q.period}, {"f_prime", q.deriv}};
  } catch (const Error& e) {
    r.errors.push_back(describe(e));
    r.check("fixed_points_exist", "Sec3.2", "f has a fixed point on each wing", false, 0.0, 0.0);
  }

  // The 4D singularity must carry the splitting ss < fiber < c < 0 < u.
  const auto spec = spectra::singularity_spectrum(cfg.lorenz, cfg.skew);
  std::vector<double> expect{cfg.lorenz.lambda_s, -cfg.skew.theta, cfg.lorenz.lambda_c, cfg.lorenz.lambda_u};
  std::sort(expect.begin(), expect.end());
  double err = 0.0;
  for (std::size_t i = 0; i < 4; ++i) err = std::max(err, std::abs(spec[i] - expect[i]));
  r.check("singularity_spectrum", "Sec3.2", "eigenvalues at sigma = {lambda_s, -theta, lambda_c, lambda_u}",
          err <= 1e-12, err, 1e-12);
  r.data["singularity_spectrum"] = spec;

  Json margins = Json::object();
  for (const auto& c : r.checks) margins[c.name] = c.measured;
  r.data["margins"] = margins;
  r.wall_seconds = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport return_map_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "return-map";
  const HybridSystem sys = hybrid_system(cfg);
  const int nx = cfg.grid_x1, ny = cfg.grid_x2, ns = cfg.grid_s;

  struct Row {
    std::vector<double> times;
    std::vector<std::vector<Cell>> slice;  // s = 0 (or the middle layer)
    double leaf_err = 0.0;
    int tube_hits = 0;
    std::vector<std::string> errors;
  };
  const int mid = ns / 2;
  auto rows = parallel_map<Row>(nx, cfg.jobs, [&](std::size_t i) {
    Row row;
    const double x1 = grid_center(static_cast<int>(i), nx);
    for (int j = 0; j < ny; ++j) {
      const double x2 = grid_center(j, ny);
      for (int k = 0; k < ns; ++k) {
        const double s = ns == 1 ? 0.0 : grid_center(k, ns);
        try {
          const auto ret = flowint::advance_to_section(sys, Vec3(x1, x2, s));
          row.times.push_back(ret.time);
          row.leaf_err = std::max({row.leaf_err, std::abs(ret.deriv(1, 0)), std::abs(ret.deriv(1, 2))});
          row.tube_hits += ret.tube_hit ? 1 : 0;
          if (k == mid) {
            row.slice.push_back({x1, x2, s, ret.image(0), ret.image(1), ret.image(2), ret.time});
          }
        } catch (const Error& e) {
          row.errors.push_back(fmt::format("({:.17g}, {:.17g}, {:.17g}): {}", x1, x2, s, describe(e)));
        }
      }
    }
    return row;
  });

  std::vector<double> times;
  Table slice{"return_map", {"x1", "x2", "s", "x1_next", "x2_next", "s_next", "return_time"}, {}};
  double leaf_err = 0.0;
  long long hits = 0;
  for (auto& row : rows) {
    times.insert(times.end(), row.times.begin(), row.times.end());
    for (auto& c : row.slice) slice.rows.push_back(std::move(c));
    leaf_err = std::max(leaf_err, row.leaf_err);
    hits += row.tube_hits;
    for (auto& e : row.errors) r.errors.push_back(std::move(e));
  }
  const long long expected = static_cast<long long>(nx) * ny * ns;
  r.check("grid_complete", "C1", "every grid point has a first return", static_cast<long long>(times.size()) == expected,
          static_cast<double>(times.size()), static_cast<double>(expected));
  const double tmin = times.empty() ? kInf : *std::min_element(times.begin(), times.end());
  const double tmax = times.empty() ? -kInf : *std::max_element(times.begin(), times.end());
  const double tau = cfg.lorenz.tau_E;
  r.check("min_return_time", "C1", "min return time >= tau_E", tmin >= tau, tmin, tau);
  r.check("t_p>2", "C1", "t_p > 2 for every section point", tmin > 2.0, tmin, 2.0);

  // The infimum tau_E is attained on the section edge |x2| = 1.
  double edge_err = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (double side : {-1.0, 1.0}) {
      const auto ret = flowint::advance_to_section(sys, Vec3(grid_center(i, nx), side, 0.0));
      edge_err = std::max(edge_err, std::abs(ret.time - tau));
    }
  }
  r.check("return_time_infimum", "C1", "return time equals tau_E on |x2| = 1", edge_err == 0.0, edge_err, 0.0);
  r.check("leaf_preservation", "P6", "x2 image independent of x1 and s", leaf_err == 0.0, leaf_err, 0.0);

  Table hist{"return_time_hist", {"bin_lo", "bin_hi", "count"}, {}};
  const int nb = cfg.hist_bins;
  if (!times.empty()) {
    std::vector<long long> counts(nb, 0);
    const double width = (tmax - tmin) / nb;
    for (double t : times) {
      int b = width > 0.0 ? static_cast<int>((t - tmin) / width) : 0;
      counts[std::clamp(b, 0, nb - 1)]++;
    }
    for (int b = 0; b < nb; ++b) hist.rows.push_back({tmin + b * width, tmin + (b + 1) * width, counts[b]});
  }
  r.tables.push_back(std::move(hist));
  r.tables.push_back(std::move(slice));
  r.data["points"] = static_cast<long long>(times.size());
  r.data["min_return_time"] = tmin;
  r.data["max_return_time"] = tmax;
  r.data["tube_hits"] = hits;
  r.wall_seconds = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport cones_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "cones";
  const HybridSystem sys = hybrid_system(cfg);
  const Eigen::VectorXd e2_2 = Vec2::UnitY();
  const Eigen::VectorXd e2_3 = Vec3::UnitY();
  const section::Cone d1 = section::section_cone(3, 1.0);
  constexpr double kGrowthFloor = 1.02;
  constexpr double kNearLFloor = 3.0;

  struct Item {
    double ratio2 = 0.0, ratio3 = 0.0, growth3 = kInf, growth2 = kInf;
    bool cone2 = true, cone3 = true;
    std::optional<std::string> error;
    std::vector<Cell> row;
  };
  auto eval = [&](const Vec3& q) {
    Item it;
    try {
      const auto base = model3d::base_return(cfg.lorenz, q.head<2>());
      const auto c2 = section::cone_check(base.deriv, 1.0, 0.5, e2_2, e2_2);
      const auto g2 = section::expansion_check(base.deriv, section::section_cone(2, 1.0), 1.0);
      const auto ret = flowint::advance_to_section(sys, q);
      const auto c3 = section::cone_check(ret.deriv, 1.0, 1.0, e2_3, e2_3);
      const auto g3 = section::expansion_check(ret.deriv, d1, kGrowthFloor);
      it.ratio2 = c2.worst_ratio;
      it.cone2 = c2.pass;
      it.growth2 = g2.min_growth;
      it.ratio3 = c3.worst_ratio;
      it.cone3 = c3.pass;
      it.growth3 = g3.min_growth;
      it.row = {q(0), q(1), q(2), c2.worst_ratio, c3.worst_ratio, g2.min_growth, g3.min_growth};
    } catch (const Error& e) {
      it.error = fmt::format("({:.17g}, {:.17g}, {:.17g}): {}", q(0), q(1), q(2), describe(e));
    }
    return it;
  };

  const int n = cfg.cones_grid;
  auto grid = parallel_map<std::vector<Item>>(n, cfg.jobs, [&](std::size_t i) {
    std::vector<Item> row;
    for (int j = 0; j < n; ++j) row.push_back(eval(Vec3(grid_center(static_cast<int>(i), n), grid_center(j, n), 0.0)));
    return row;
  });

  // Near L: |x2| log-uniform in [on_leaf_tol * 10, near_l_width].
  const double hi = std::log10(cfg.cones_near_l_width);
  const double lo = std::log10(std::max(cfg.on_leaf_tol * 10.0, 1e-15));
  auto near = parallel_map<Item>(cfg.cones_near_l, cfg.jobs, [&](std::size_t i) {
    const CounterRng rng(cfg.seed, "cones", i);
    const double side = rng.uniform(0) < 0.5 ? -1.0 : 1.0;
    const Vec3 q(rng.uniform(1, -1.0, 1.0), side * std::pow(10.0, rng.uniform(2, lo, hi)), rng.uniform(3, -0.5, 0.5));
    return eval(q);
  });

  long long points = 0, fail2 = 0, fail3 = 0;
  double worst2 = 0.0, worst3 = 0.0, min_growth = kInf, min_growth2 = kInf, near_growth = kInf;
  Table table{"cones", {"x1", "x2", "s", "ratio_2d", "ratio_3d", "growth_2d", "growth_3d"}, {}};
  auto absorb = [&](Item& it, bool near_l) {
    if (it.error) {
      r.errors.push_back(*it.error);
      return;
    }
    ++points;
    fail2 += it.cone2 ? 0 : 1;
    fail3 += it.cone3 ? 0 : 1;
    worst2 = std::max(worst2, it.ratio2);
    worst3 = std::max(worst3, it.ratio3);
    min_growth = std::min(min_growth, it.growth3);
    min_growth2 = std::min(min_growth2, it.growth2);
    if (near_l) near_growth = std::min(near_growth, it.growth3);
    table.rows.push_back(std::move(it.row));
  };
  for (auto& row : grid) {
    for (auto& it : row) absorb(it, false);
  }
  for (auto& it : near) absorb(it, true);

  const long long expected = static_cast<long long>(n) * n + cfg.cones_near_l;
  r.check("points_complete", "P3", "every sampled point evaluated", points == expected, static_cast<double>(points),
          static_cast<double>(expected));
  r.check("cone_contraction", "P3", "DR0 maps C_1 into C_1/2 at every point", fail2 == 0, static_cast<double>(fail2),
          0.0);
  r.check("cone_invariance", "Lemma5.5", "DR maps D_1 into D_1 at every point", fail3 == 0, static_cast<double>(fail3),
          0.0);
  r.check("cone_expansion", "Lemma5.5", "min growth in D_1 >= 1.02", min_growth >= kGrowthFloor, min_growth,
          kGrowthFloor);
  r.check("near_L_expansion", "Lemma5.6", "min growth near L > 3", near_growth > kNearLFloor, near_growth, kNearLFloor);
  r.tables.push_back(std::move(table));
  r.data["points"] = points;
  r.data["worst_ratio_2d"] = worst2;
  r.data["worst_ratio_3d"] = worst3;
  r.data["min_growth_2d"] = min_growth2;
  r.data["min_growth_3d"] = min_growth;
  r.data["min_growth_near_L"] = near_growth;
  r.wall_seconds = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport curves_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "curves";
  const HybridSystem sys = hybrid_system(cfg);
  section::CurveOptions opts;
  opts.alpha = cfg.curves_alpha;
  opts.continue_to_crossing = cfg.curves_continue_to_crossing;

  struct Item {
    std::optional<section::CurveTrace> trace;
    std::string error;
  };
  auto items = parallel_map<Item>(cfg.curves_count, cfg.jobs, [&](std::size_t i) {
    const CounterRng rng(cfg.seed, "curves", i);
    const double side = rng.uniform(0) < 0.5 ? -1.0 : 1.0;
    const Vec3 center(rng.uniform(1, -0.8, 0.8), side * rng.uniform(2, 0.05, 0.95), rng.uniform(3, -0.3, 0.3));
    // Direction inside the cone: (a, 1, b) with |(a, b)| <= 0.9 alpha.
    const double rad = 0.9 * cfg.curves_alpha * std::sqrt(rng.uniform(4));
    const double ang = rng.uniform(5, 0.0, 2.0 * M_PI);
    const Vec3 dir(rad * std::cos(ang), 1.0, rad * std::sin(ang));
    Item it;
    try {
      it.trace = section::iterate_cu_curve(sys, section::make_segment(center, dir, cfg.curves_length), cfg.curves_eps0,
                                           cfg.curves_k_max, opts);
    } catch (const Error& e) {
      it.error = fmt::format("curve {}: {}", i, describe(e));
    }
    return it;
  });

  Table per_curve{"curves", {"curve", "k_eps", "iterates", "reached", "crossed", "min_growth", "max_euclid_length"}, {}};
  Table iterates{"curve_iterates", {"curve", "k", "length", "euclid_length", "growth", "split"}, {}};
  long long done = 0, reached = 0, crossed = 0;
  int worst_k = 0;
  double min_growth = kInf, max_len = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].trace) {
      r.errors.push_back(items[i].error);
      continue;
    }
    const auto& tr = *items[i].trace;
    ++done;
    const bool ok = tr.reached && tr.k_eps >= 0 && tr.k_eps <= cfg.curves_k_max;
    reached += ok ? 1 : 0;
    crossed += tr.crossed ? 1 : 0;
    worst_k = std::max(worst_k, ok ? tr.k_eps : cfg.curves_k_max + 1);
    double g_min = kInf;
    for (std::size_t k = 0; k < tr.growth.size(); ++k) {
      if (!tr.split[k]) g_min = std::min(g_min, tr.growth[k]);
    }
    const double l_max = *std::max_element(tr.euclid_lengths.begin(), tr.euclid_lengths.end());
    min_growth = std::min(min_growth, g_min);
    max_len = std::max(max_len, l_max);
    per_curve.rows.push_back({static_cast<long long>(i), static_cast<long long>(tr.k_eps),
                              static_cast<long long>(tr.iterates), static_cast<long long>(tr.reached),
                              static_cast<long long>(tr.crossed), g_min, l_max});
    for (std::size_t k = 0; k < tr.lengths.size(); ++k) {
      iterates.rows.push_back({static_cast<long long>(i), static_cast<long long>(k), tr.lengths[k],
                               tr.euclid_lengths[k], k < tr.growth.size() ? Cell{tr.growth[k]} : Cell{std::string()},
                               static_cast<long long>(k < tr.split.size() && tr.split[k])});
    }
  }
  const auto count = static_cast<double>(cfg.curves_count);
  r.check("curves_complete", "Lemma5.8", "every curve iterated without error", done == cfg.curves_count,
          static_cast<double>(done), count);
  r.check("reach_eps0", "Lemma5.8", "every curve reaches length eps0 within k_max iterates",
          reached == cfg.curves_count, static_cast<double>(worst_k), cfg.curves_k_max);
  r.check("iterate_growth", "Lemma5.5", "growth >= 1.02 on every non-split iterate", min_growth >= 1.02, min_growth,
          1.02);
  r.check("L_crossing", "Lemma5.9", "every curve history crosses L", crossed == cfg.curves_count,
          static_cast<double>(crossed), count);
  // A cu-curve is a graph over x2 with slope <= alpha, so its length is bounded.
  const double bound = 2.0 * std::sqrt(1.0 + cfg.curves_alpha * cfg.curves_alpha);
  r.check("length_bound", "Lemma5.8", "euclidean length <= 2 sqrt(1 + alpha^2)", max_len <= bound + 1e-9, max_len,
          bound);
  r.tables.push_back(std::move(per_curve));
  r.tables.push_back(std::move(iterates));
  r.data["max_k_eps"] = worst_k;
  r.data["min_growth"] = min_growth;
  r.data["crossed"] = crossed;
  r.wall_seconds = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport attractor_exponents(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "exponents";
  const HybridSystem sys = hybrid_system(cfg);
  const double theta = cfg.skew.theta;
  const double ls0 = cfg.lorenz.strong_stable_rate();
  constexpr double kWeak = 1e-3;

  struct Item {
    std::optional<spectra::ExponentReport> rep;
    double dom12 = 0.0, dom21 = 0.0, duration = 0.0;
    std::optional<OrbitSegment<4>> orbit;  // kept for orbit 0
    std::string error;
  };
  auto items = parallel_map<Item>(cfg.exponents_orbits, cfg.jobs, [&](std::size_t i) {
    Item it;
    try {
      const Vec3 q = attractor_point(sys, CounterRng(cfg.seed, "exponents", i), cfg.exponents_warmup);
      auto orbit = flowint::sample_orbit(sys, q, cfg.exponents_returns);
      auto rep = spectra::lpf_exponents(orbit, 0.0, cfg.exponents_burn_in);
      rep.orbit_id = fmt::format("orbit{}", i);
      it.dom12 = spectra::domination_check(orbit, spectra::Split::OneTwo, cfg.exponents_window, cfg.exponents_burn_in)
                     .margin;
      it.dom21 = spectra::domination_check(orbit, spectra::Split::TwoOne, cfg.exponents_window, cfg.exponents_burn_in)
                     .margin;
      it.duration = orbit.times.back();
      it.rep = std::move(rep);
      if (i == 0) it.orbit = std::move(orbit);
    } catch (const Error& e) {
      it.error = fmt::format("orbit {}: {}", i, describe(e));
    }
    return it;
  });

  Table table{"exponents",
              {"orbit", "duration", "eta_ss", "eta_I", "eta_2", "fiber_exponent", "domination_1_2", "domination_2_1",
               "angle_2", "angle_I", "angle_ss"},
              {}};
  double max_ss = -kInf, min_I = kInf, max_I = -kInf, min_2 = kInf, max_ss_gap = -kInf;
  double min_dom12 = kInf, min_dom21 = kInf;
  long long done = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    if (!it.rep) {
      r.errors.push_back(it.error);
      continue;
    }
    ++done;
    const auto& e = it.rep->exponents;
    max_ss = std::max(max_ss, e[0]);
    max_ss_gap = std::max(max_ss_gap, e[0] - ls0);
    min_I = std::min(min_I, e[1]);
    max_I = std::max(max_I, e[1]);
    min_2 = std::min(min_2, e[2]);
    min_dom12 = std::min(min_dom12, it.dom12);
    min_dom21 = std::min(min_dom21, it.dom21);
    const auto& a = it.rep->subspace_angles;
    table.rows.push_back({static_cast<long long>(i), it.duration, e[0], e[1], e[2], it.rep->fiber_exponent, it.dom12,
                          it.dom21, a[0], a[1], a[2]});
    if (it.orbit) {
      Table traj{"trajectory", {"t", "x1", "x2", "x3", "s"}, {}};
      for (std::size_t k = 0; k < it.orbit->size(); ++k) {
        const auto& x = it.orbit->states[k];
        traj.rows.push_back({it.orbit->times[k], x(0), x(1), x(2), x(3)});
      }
      r.tables.push_back(std::move(traj));
    }
  }
  const auto n = static_cast<double>(cfg.exponents_orbits);
  r.check("orbits_complete", "Eq(6)", "every orbit sampled", done == cfg.exponents_orbits, static_cast<double>(done), n);
  r.check("eta_ss<-theta+0.1", "Eq(6)", "eta^ss < -theta + 0.1", max_ss < -theta + 0.1, max_ss, -theta + 0.1);
  r.check("-theta+0.1<eta_I", "Eq(6)", "-theta + 0.1 < eta^I", min_I > -theta + 0.1, min_I, -theta + 0.1);
  r.check("eta_I<=1e-3", "Eq(6)", "eta^I <= 1e-3", max_I <= kWeak, max_I, kWeak);
  r.check("0.01<=eta_2", "Eq(6)", "0.01 <= eta_2", min_2 >= 0.01, min_2, 0.01);
  r.check("eta_ss<=lambda_s0", "Lemma4.2", "eta^ss <= lambda^s_0 (tol 1e-3)", max_ss_gap <= kWeak, max_ss_gap, kWeak);
  r.check("lambda_s0<-theta", "Lemma4.2", "lambda^s_0 < -theta", ls0 < -theta, ls0, -theta);
  r.check("-theta<=eta_I", "Lemma4.2", "-theta <= eta^I (tol 1e-3)", min_I >= -theta - kWeak, min_I, -theta - kWeak);
  r.check("eta_I<=0", "Lemma4.2", "eta^I <= 0 (tol 1e-3)", max_I <= kWeak, max_I, kWeak);
  r.check("0<eta_2", "Lemma4.2", "0 < eta_2", min_2 > 0.0, min_2, 0.0);
  r.check("ss_dominated", "Eq(6)", "N^ss dominated by N^I + N2 over windows", min_dom12 > 0.0, min_dom12, 0.0);

  // Towards the singularity the flow aligns with the x2x3 plane.
  Table angles{"flow_angle_near_L", {"x2", "angle"}, {}};
  double prev = kInf;
  bool decreasing = true;
  for (int k = 1; k <= 9; ++k) {
    const double x2 = std::pow(10.0, -k);
    const double a = spectra::flow_angle_near_singularity(cfg.lorenz, 0.5, x2);
    decreasing = decreasing && a < prev;
    prev = a;
    angles.rows.push_back({x2, a});
  }
  r.check("angle_trend", "Lemma4.2", "flow angle to the x2x3 plane decreases as x2 -> 0", decreasing, prev, 0.0);

  r.tables.insert(r.tables.begin(), std::move(table));
  r.tables.push_back(std::move(angles));
  r.data["max_eta_ss"] = max_ss;
  r.data["eta_I_range"] = {min_I, max_I};
  r.data["min_eta_2"] = min_2;
  r.data["min_domination_1_2"] = min_dom12;
  r.data["min_domination_2_1"] = min_dom21;

  // Exponents of Q against the closed form: the ear contraction c a^beta, the
  // fiber rate -theta and log |f'|.
  try {
    const auto qf = section::orbit_q(cfg.lorenz);
    const int periods = cfg.periodic_periods;
    const auto orbit = flowint::periodic_orbit(sys, periodic_point(qf), periods);
    const auto rep = spectra::lpf_exponents(orbit, 0.0, 0.25 * periods * qf.period);
    const double a = std::abs(qf.x2);
    std::vector<double> expect{std::log(cfg.lorenz.ear_c * std::pow(a, cfg.lorenz.beta())) / qf.period, -theta,
                               std::log(std::abs(qf.deriv)) / qf.period};
    std::sort(expect.begin(), expect.end());
    double err = 0.0;
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(rep.exponents[k] - expect[k]));
    r.check("Q_closed_form", "Sec3.2", "exponents on Q match the closed form to 1e-6", err <= 1e-6, err, 1e-6);
    r.data["Q_exponents"] = rep.exponents;
  } catch (const Error& e) {
    r.errors.push_back("Q: " + describe(e));
    r.check("Q_closed_form", "Sec3.2", "exponents on Q match the closed form to 1e-6", false, kInf, 1e-6);
  }
  r.wall_seconds = seconds_since(t0);
  return r;
}

SuiteReport non_domination(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "exponents";
  auto sp = cfg.skew;
  sp.mode = skew4d::SurgeryMode::SaddleNode;
  const HybridSystem sys = hybrid_system(cfg, sp);
  constexpr double kTol = 1e-6;
  try {
    const auto pf = section::orbit_p(cfg.lorenz);
    const auto fl = spectra::floquet(sys, periodic_point(pf));
    const double fiber = std::log(std::abs(fl.fiber_multiplier)) / fl.period;
    const double flow = std::log(std::abs(fl.flow_multiplier)) / fl.period;
    r.check("fiber_neutral_on_P", "Sec3.3", "fiber exponent on P is 0 (1e-6 per period)", std::abs(fiber) <= kTol,
            std::abs(fiber), kTol);
    r.check("flow_neutral_on_P", "Sec3.3", "flow-direction exponent on P is 0 (1e-6 per period)",
            std::abs(flow) <= kTol, std::abs(flow), kTol);

    // Over whole-period windows neither the flow direction nor the fiber
    // dominates the other.
    const int periods = std::max(4, cfg.periodic_periods / 4);
    const auto orbit = flowint::periodic_orbit(sys, periodic_point(pf), periods);
    const auto dom = spectra::domination_check(orbit, spectra::Split::FlowVsFiber, fl.period, fl.period);
    r.check("flow_fiber_not_dominated", "Sec3.3", "flow vs fiber margin on P <= 1e-6", dom.margin <= kTol, dom.margin,
            kTol);
    r.data["P_period"] = fl.period;
    r.data["P_fiber_exponent"] = fiber;
    r.data["P_flow_exponent"] = flow;
    r.data["P_flow_vs_fiber_margin"] = dom.margin;
    r.data["P_moduli"] = fl.moduli;
  } catch (const Error& e) {
    r.errors.push_back("P: " + describe(e));
    r.check("fiber_neutral_on_P", "Sec3.3", "fiber exponent on P is 0 (1e-6 per period)", false, kInf, kTol);
  }
  r.wall_seconds = seconds_since(t0);
  return r;
}

SuiteReport exponents_suite(const ExperimentConfig& cfg) {
  SuiteReport r = attractor_exponents(cfg);
  merge_into(r, non_domination(cfg));
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport sectional_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "sectional";
  const HybridSystem sys = hybrid_system(cfg);
  const double gamma = cfg.lorenz.gamma;
  const double t_end = cfg.sectional_burn_in + cfg.sectional_horizon;
  const int returns = static_cast<int>(std::ceil(t_end / cfg.lorenz.tau_E)) + 1;

  struct Item {
    std::optional<spectra::SectionalResult> res;
    std::string error;
  };
  auto items = parallel_map<Item>(cfg.sectional_orbits, cfg.jobs, [&](std::size_t i) {
    Item it;
    try {
      const Vec3 q = attractor_point(sys, CounterRng(cfg.seed, "sectional", i), cfg.exponents_warmup);
      const auto orbit = flowint::sample_orbit(sys, q, returns);
      it.res = spectra::sectional_expansion_rate(orbit, cfg.sectional_window, cfg.sectional_burn_in, t_end);
    } catch (const Error& e) {
      it.error = fmt::format("orbit {}: {}", i, describe(e));
    }
    return it;
  });
  Table table{"sectional", {"orbit", "gamma", "worst_start", "worst_length"}, {}};
  double min_gamma = kInf;
  long long done = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].res) {
      r.errors.push_back(items[i].error);
      continue;
    }
    ++done;
    const auto& s = *items[i].res;
    min_gamma = std::min(min_gamma, s.gamma);
    table.rows.push_back({static_cast<long long>(i), s.gamma, s.worst_start, s.worst_length});
  }
  r.check("orbits_complete", "Eq(1)", "every orbit sampled", done == cfg.sectional_orbits, static_cast<double>(done),
          cfg.sectional_orbits);
  r.check("sectional_expansion", "Eq(1)", "area growth rate of flow + N2 >= gamma", min_gamma >= gamma, min_gamma,
          gamma);

  // On P the rate is exactly log |f'| per period.
  try {
    const auto pf = section::orbit_p(cfg.lorenz);
    const int periods = cfg.periodic_periods;
    const auto orbit = flowint::periodic_orbit(sys, periodic_point(pf), periods);
    const auto s = spectra::sectional_expansion_rate(orbit, pf.period, 0.25 * periods * pf.period);
    const double closed = std::log(std::abs(pf.deriv)) / pf.period;
    const double err = std::abs(s.gamma - closed);
    r.check("P_closed_form", "Eq(5)", "rate on P equals log|f'(x2*)| / T_P to 1e-6", err <= 1e-6, err, 1e-6);
    r.data["P_gamma"] = s.gamma;
    r.data["P_closed_form"] = closed;
  } catch (const Error& e) {
    r.errors.push_back("P: " + describe(e));
    r.check("P_closed_form", "Eq(5)", "rate on P equals log|f'(x2*)| / T_P to 1e-6", false, kInf, 1e-6);
  }
  r.tables.push_back(std::move(table));
  r.data["min_gamma"] = min_gamma;
  r.wall_seconds = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport surgery_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "surgery";
  constexpr double kTol = 1e-6;
  Table table{"floquet", {"mode", "delta", "orbit", "period", "index", "fiber_multiplier", "closed_form", "flow_multiplier",
                          "residual"},
              {}};
  auto rel = [](double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };

  section::FixedPoint pf, qf;
  try {
    pf = section::orbit_p(cfg.lorenz);
    qf = section::orbit_q(cfg.lorenz);
  } catch (const Error& e) {
    r.errors.push_back(describe(e));
    r.check("completed", "Sec3.4", "fixed points P and Q exist", false, 0.0, 0.0);
    return r;
  }

  struct Case {
    skew4d::SurgeryMode mode;
    double delta;
    std::string orbit;
    Vec3 point;
    double closed;
  };
  std::vector<Case> cases;
  auto deltas = cfg.surgery_deltas;
  std::sort(deltas.begin(), deltas.end());
  const double kappa = cfg.skew.kappa, theta = cfg.skew.theta;
  for (double d : deltas) {
    cases.push_back({skew4d::SurgeryMode::Triplet, d, "P", periodic_point(pf),
                     std::exp(kappa * d * d * pf.period)});
    if (d > 0.0) {
      for (double sgn : {1.0, -1.0}) {
        cases.push_back({skew4d::SurgeryMode::Triplet, d, sgn > 0 ? "P+delta" : "P-delta", periodic_point(pf, sgn * d),
                         std::exp(-2.0 * kappa * d * d * pf.period)});
      }
    }
    cases.push_back({skew4d::SurgeryMode::Triplet, d, "Q", periodic_point(qf), std::exp(-theta * qf.period)});
  }
  for (auto mode : {skew4d::SurgeryMode::None, skew4d::SurgeryMode::SaddleNode}) {
    const double fiber_p = mode == skew4d::SurgeryMode::None ? std::exp(-theta * pf.period) : 1.0;
    cases.push_back({mode, cfg.skew.delta, "P", periodic_point(pf), fiber_p});
    cases.push_back({mode, cfg.skew.delta, "Q", periodic_point(qf), std::exp(-theta * qf.period)});
  }

  struct Out {
    std::optional<spectra::FloquetReport> rep;
    std::string error;
  };
  auto outs = parallel_map<Out>(cases.size(), cfg.jobs, [&](std::size_t i) {
    const auto& c = cases[i];
    auto sp = cfg.skew;
    sp.mode = c.mode;
    sp.delta = c.delta;
    Out o;
    try {
      o.rep = spectra::floquet(hybrid_system(cfg, sp), c.point);
    } catch (const Error& e) {
      o.error = fmt::format("{} {} delta={}: {}", skew4d::to_string(c.mode), c.orbit, c.delta, describe(e));
    }
    return o;
  });

  // Aggregate per claim.
  double p_err = 0.0, pd_err = 0.0, q_err = 0.0, sn_err = -1.0, trivial_err = 0.0;
  bool p_index = true, pd_index = true, q_index = true, trivial_index = true, monotone = true, all_ok = true;
  double prev_fiber = -kInf;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    if (!outs[i].rep) {
      r.errors.push_back(outs[i].error);
      all_ok = false;
      continue;
    }
    const auto& f = *outs[i].rep;
    const double e = rel(f.fiber_multiplier, c.closed);
    table.rows.push_back({skew4d::to_string(c.mode), c.delta, c.orbit, f.period, static_cast<long long>(f.index),
                          f.fiber_multiplier, c.closed, f.flow_multiplier, f.residual});
    const bool triplet = c.mode == skew4d::SurgeryMode::Triplet;
    if (triplet && c.orbit == "P") {
      if (c.delta > 0.0) {
        p_err = std::max(p_err, e);
        p_index = p_index && f.index == 1;
      } else {
        sn_err = std::max(sn_err, std::abs(f.fiber_multiplier - 1.0));
      }
      monotone = monotone && f.fiber_multiplier > prev_fiber;
      prev_fiber = f.fiber_multiplier;
    } else if (triplet && c.orbit != "Q") {
      pd_err = std::max(pd_err, e);
      pd_index = pd_index && f.index == 2;
    } else if (triplet) {
      q_err = std::max(q_err, e);
      q_index = q_index && f.index == 2;
    } else if (c.mode == skew4d::SurgeryMode::None) {
      trivial_err = std::max(trivial_err, e);
      trivial_index = trivial_index && f.index == 2;
    } else if (c.orbit == "P") {
      sn_err = std::max(sn_err, std::abs(f.fiber_multiplier - 1.0));
    }
  }
  r.check("completed", "Sec3.4", "every Floquet computation converged", all_ok, static_cast<double>(r.errors.size()),
          0.0);
  r.check("P_index_1", "Sec3.4", "P has index 1 for delta > 0", p_index, p_err, kTol);
  r.check("P_fiber_multiplier", "Sec3.4", "fiber multiplier of P = exp(kappa delta^2 T_P) to 1e-6", p_err <= kTol,
          p_err, kTol);
  r.check("P_delta_index_2", "Sec3.4", "P_delta and P_-delta have index 2", pd_index, pd_err, kTol);
  r.check("P_delta_fiber_multiplier", "Sec3.4", "fiber multiplier of P_+-delta = exp(-2 kappa delta^2 T_P) to 1e-6",
          pd_err <= kTol, pd_err, kTol);
  r.check("Q_index_2", "Sec3.4", "Q keeps index 2 and fiber multiplier exp(-theta T_Q)", q_index && q_err <= kTol,
          q_err, kTol);
  r.check("saddle_node", "Sec3.3", "at delta = 0 the fiber multiplier of P is 1 to 1e-6", sn_err >= 0.0 && sn_err <= kTol,
          sn_err, kTol);
  r.check("multiplier_monotone", "Sec3.4", "fiber multiplier of P increases with delta", monotone, prev_fiber, 0.0);
  r.check("trivial_mode_index_2", "Sec3.2", "without surgery P and Q have index 2", trivial_index && trivial_err <= kTol,
          trivial_err, kTol);
  r.tables.push_back(std::move(table));
  r.data["P_period"] = pf.period;
  r.data["Q_period"] = qf.period;
  r.data["deltas"] = deltas;
  r.wall_seconds = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport integrator_oracles(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "classical-xcheck";
  const auto& lp = cfg.lorenz;
  const Vec4 rates(lp.lambda_s, lp.lambda_u, lp.lambda_c, -cfg.skew.theta);

  // Linear 4D flow against exp(diag(rates) t): relative error in norm.
  {
    const flowint::Field<4> lin = [&](const Vec4& x) {
      FieldEval4 f;
      f.value = rates.cwiseProduct(x);
      f.jacobian = rates.asDiagonal();
      return f;
    };
    const Vec4 x0(0.3, 0.2, 0.5, 0.1);
    const auto seg = flowint::integrate_tangent<4>(lin, x0, 5.0, cfg.integrator);
    double state_err = 0.0, frame_err = 0.0;
    Mat4 phi = Mat4::Identity();
    for (std::size_t k = 0; k < seg.size(); ++k) {
      if (k > 0) phi = seg.steps[k - 1] * phi;
      const Vec4 g = (rates * seg.times[k]).array().exp();
      const Vec4 exact = g.cwiseProduct(x0);
      state_err = std::max(state_err, (seg.states[k] - exact).norm() / exact.norm());
      const Mat4 ex = g.asDiagonal();
      frame_err = std::max(frame_err, (phi - ex).norm() / ex.norm());
    }
    const double ts = seg.times.back();
    r.check("linear_flow", "P1", "linear 4D flow matches exp(At) x0 to 1e-9 on [0, 5]", state_err <= 1e-9 && ts == 5.0,
            state_err, 1e-9);
    r.check("linear_frames", "P1", "tangent frames match exp(At) to 1e-9 on [0, 5]", frame_err <= 1e-9, frame_err,
            1e-9);
  }

  flowint::ClassicalSystem cs;
  cs.cp = cfg.classical;
  cs.theta = cfg.skew.theta;
  cs.cfg = cfg.integrator;
  const auto f4 = flowint::classical_field4(cs);
  const Vec4 x0(1.0, 1.0, 1.0, 0.1);

  // Central differences and the backward run amplify integration error by
  // about exp(14) over one time unit, so these oracles use a tight tolerance.
  flowint::IntegratorConfig tight = cfg.integrator;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-13;
  tight.event_refine_tol = 1e-13;

  // Tangent frame at t = 1 against central differences of the flow map.
  {
    const auto seg = flowint::integrate_tangent<4>(f4, x0, 1.0, tight);
    const Mat4 phi = seg.frame(seg.size() - 1);
    Mat4 fd;
    const double h = 1e-6;
    for (int j = 0; j < 4; ++j) {
      Vec4 dx = Vec4::Zero();
      dx(j) = h;
      const auto up = flowint::integrate<4>(f4, x0 + dx, 1.0, tight);
      const auto dn = flowint::integrate<4>(f4, x0 - dx, 1.0, tight);
      fd.col(j) = (up.states.back() - dn.states.back()) / (2.0 * h);
    }
    const double err = (phi - fd).cwiseAbs().maxCoeff();
    r.check("frames_vs_finite_differences", "classical", "tangent frame at t = 1 matches central differences to 1e-5",
            err <= 1e-5, err, 1e-5);
  }

  // Cocycle Phi(0, 2) = Phi(1, 2) Phi(0, 1), from independent integrations.
  {
    const auto a = flowint::integrate_tangent<4>(f4, x0, 1.0, cfg.integrator);
    const auto b = flowint::integrate_tangent<4>(f4, a.states.back(), 1.0, cfg.integrator);
    const auto c = flowint::integrate_tangent<4>(f4, x0, 2.0, cfg.integrator);
    const Mat4 whole = c.frame(c.size() - 1);
    const Mat4 prod = b.frame(b.size() - 1) * a.frame(a.size() - 1);
    const double err = (whole - prod).norm() / whole.norm();
    r.check("cocycle", "classical", "Phi(0,2) = Phi(1,2) Phi(0,1) to 1e-8 (relative)", err <= 1e-8, err, 1e-8);
  }

  // Forward then backward returns to the start.
  {
    const auto fwd = flowint::integrate<4>(f4, x0, 1.0, tight);
    const auto back = flowint::integrate<4>(f4, fwd.states.back(), -1.0, tight);
    const double err = (back.states.back() - x0).norm();
    r.check("forward_backward", "classical", "flow for t = 1 then t = -1 returns to start within 1e-6", err <= 1e-6,
            err, 1e-6);
  }

  // Classical section derivative against central differences.
  try {
    const auto f3 = flowint::classical_field3(cs.cp);
    const double level = cs.cp.rho - 1.0;
    const auto seg = flowint::integrate<3>(f3, Point3(1.0, 1.0, 1.0), 20.0, cs.cfg);
    std::optional<Vec3> q;
    for (std::size_t k = 1; k < seg.size() && !q; ++k) {
      if (seg.times[k] > 5.0 && seg.states[k - 1](2) > level && seg.states[k](2) <= level) {
        q = Vec3(seg.states[k](0), seg.states[k](1), 0.1);
      }
    }
    if (!q) throw Error(ErrorKind::Escape, "no downward section crossing found");
    const auto land = flowint::advance_to_section(cs, *q);
    const auto ret = flowint::advance_to_section(cs, land.image);
    Mat3 fd;
    const double h = 1e-6;
    for (int j = 0; j < 3; ++j) {
      Vec3 d = Vec3::Zero();
      d(j) = h;
      fd.col(j) = (flowint::advance_to_section(cs, land.image + d).image -
                   flowint::advance_to_section(cs, land.image - d).image) /
                  (2.0 * h);
    }
    const double err = (fd - ret.deriv).cwiseAbs().maxCoeff();
    r.check("section_derivative", "classical", "return-map derivative matches central differences to 1e-5",
            err <= 1e-5, err, 1e-5);
  } catch (const Error& e) {
    r.errors.push_back("section derivative: " + describe(e));
    r.check("section_derivative", "classical", "return-map derivative matches central differences to 1e-5", false, kInf,
            1e-5);
  }
  r.wall_seconds = seconds_since(t0);
  return r;
}

SuiteReport classical_lyapunov(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.name = "classical-xcheck";
  const auto& cp = cfg.classical;

  // Origin: -beta and the roots of s^2 + (sigma + 1) s + sigma (1 - rho).
  {
    const Mat3 jac = model3d::classical_field(cp, Point3::Zero()).jacobian;
    Eigen::EigenSolver<Mat3> es(jac);
    std::vector<double> got;
    double imag = 0.0;
    for (int k = 0; k < 3; ++k) {
      got.push_back(es.eigenvalues()(k).real());
      imag = std::max(imag, std::abs(es.eigenvalues()(k).imag()));
    }
    const double disc = std::sqrt((cp.sigma + 1.0) * (cp.sigma + 1.0) + 4.0 * cp.sigma * (cp.rho - 1.0));
    std::vector<double> want{0.5 * (-(cp.sigma + 1.0) - disc), 0.5 * (-(cp.sigma + 1.0) + disc), -cp.beta};
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    double err = imag;
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(got[k] - want[k]));
    r.check("origin_eigenvalues", "classical", "eigenvalues at the origin match the closed form to 1e-9", err <= 1e-9,
            err, 1e-9);
    r.data["origin_eigenvalues"] = got;
  }

  flowint::IntegratorConfig alt = cfg.integrator;
  alt.rel_tol = cfg.classical_alt_rel_tol;
  alt.abs_tol = cfg.classical_alt_rel_tol * 1e-2;
  alt.event_refine_tol = std::min(cfg.integrator.event_refine_tol, alt.abs_tol);
  const std::vector<flowint::IntegratorConfig> tols{cfg.integrator, alt};
  const auto f3 = flowint::classical_field3(cp);
  const auto spectra = parallel_map<std::vector<double>>(2, cfg.jobs, [&](std::size_t i) {
    return flowint::benettin_spectrum(f3, Point3(1.0, 1.0, 1.0), cfg.classical_horizon, cfg.classical_transient,
                                      cfg.classical_renorm_dt, tols[i]);
  });
  const double l1 = spectra[0].front(), l1_alt = spectra[1].front();
  const double dev = std::max(std::abs(l1 - 0.906), std::abs(l1_alt - 0.906));
  r.check("largest_exponent", "classical", "largest Lyapunov exponent = 0.906 +- 0.05 at both tolerances", dev <= 0.05,
          dev, 0.05);
  r.check("tolerance_agreement", "classical", "largest exponent agrees across tolerances to 0.01",
          std::abs(l1 - l1_alt) <= 0.01, std::abs(l1 - l1_alt), 0.01);
  const double div = -(cp.sigma + 1.0 + cp.beta);
  double sum_err = 0.0;
  for (double v : spectra[0]) sum_err += v;
  sum_err = std::abs(sum_err - div);
  r.check("exponent_sum", "classical", "exponents sum to the divergence -(sigma + 1 + beta) to 1e-6", sum_err <= 1e-6,
          sum_err, 1e-6);
  r.data["lyapunov_spectrum"] = spectra[0];
  r.data["lyapunov_spectrum_alt_tol"] = spectra[1];
  r.data["alt_rel_tol"] = alt.rel_tol;
  Table table{"lyapunov", {"rel_tol", "lambda_1", "lambda_2", "lambda_3"}, {}};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& s = spectra[i];
    table.rows.push_back({tols[i].rel_tol, s[0], s[1], s[2]});
  }
  r.tables.push_back(std::move(table));
  r.wall_seconds = seconds_since(t0);
  return r;
}

SuiteReport classical_xcheck_suite(const ExperimentConfig& cfg) {
  SuiteReport r = integrator_oracles(cfg);
  merge_into(r, classical_lyapunov(cfg));
  return r;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"validate",  "return-map", "cones",   "curves",
                                              "exponents", "sectional",  "surgery", "classical-xcheck"};
  return names;
}

SuiteReport run_suite(const std::string& name, const ExperimentConfig& cfg) {
  using Fn = SuiteReport (*)(const ExperimentConfig&);
  static const std::map<std::string, Fn> table{
      {"validate", validate_suite},   {"return-map", return_map_suite},     {"cones", cones_suite},
      {"curves", curves_suite},       {"exponents", exponents_suite},       {"sectional", sectional_suite},
      {"surgery", surgery_suite},     {"classical-xcheck", classical_xcheck_suite},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorKind::Config, fmt::format("unknown suite '{}'", name));
  const auto t0 = Clock::now();
  try {
    return it->second(cfg);
  } catch (const Error& e) {
    SuiteReport r;
    r.name = name;
    r.errors.push_back(describe(e));
    r.check("completed", "-", "suite ran to completion", false, 0.0, 0.0);
    r.wall_seconds = seconds_since(t0);
    return r;
  }
}

ReportBundle run_experiment(const ExperimentConfig& cfg, const std::string& which) {
  check_config(cfg);
  ReportBundle bundle;
  bundle.config_echo = echo_config(cfg);
  if (which == "all") {
    for (const auto& name : suite_names()) bundle.suites.push_back(run_suite(name, cfg));
  } else {
    bundle.suites.push_back(run_suite(which, cfg));
  }
  return bundle;
}

}  // namespace dalorenz::lab
