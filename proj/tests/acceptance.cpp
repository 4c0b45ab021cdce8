// Scenario-level and property-level acceptance checks. Prints one PASS/FAIL
// line per criterion and exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "streamguide/control.hpp"
#include "streamguide/flowfield.hpp"
#include "streamguide/pathgen.hpp"
#include "streamguide/planner.hpp"
#include "streamguide/report.hpp"
#include "streamguide/scenario.hpp"
#include "streamguide/simulator.hpp"
#include "streamguide/vessel.hpp"

namespace sg = streamguide;
using sg::Vec2;
using sg::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances and budgets.
constexpr double kHarmonicTol = 1e-3;
constexpr double kHarmonicStep = 1e-3;
constexpr int kHarmonicProbes = 1000;
constexpr double kBoundarySpreadTol = 1e-9;
constexpr double kVortexRelTol = 1e-12;
constexpr int kBoundarySamples = 64;
constexpr int kWaypointTrials = 100;
constexpr double kJointTol = 1e-9;
constexpr int kQpTrials = 50;
constexpr double kQpGrid = 0.01;
constexpr double kQpObjectiveTol = 1e-4;
constexpr double kQpSlackTol = -1e-8;
constexpr double kRichardsonLo = 12.0;
constexpr double kRichardsonHi = 20.0;
constexpr double kConvergedOffset = 0.01;
constexpr double kConvergeWithin = 10.0;
constexpr double kDecayR2 = 0.95;
constexpr double kDecayFloor = 1e-10;
constexpr double kAlphaDotRelTol = 1e-3;
constexpr double kClearanceRatio = 0.8;
constexpr double kScenarioWallSeconds = 60.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s criterion %s: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

sg::Obstacle plain_obstacle(Vec2 p, double r, double l, Vec2 v = Vec2::Zero(), double cv = 0.0) {
  sg::Obstacle o;
  o.position = p;
  o.radius = r;
  o.influence_range = l;
  o.velocity = v;
  o.vortex_gain = cv;
  return o;
}

// ---------------------------------------------------------------------------

void harmonicity() {
  const auto t0 = Clock::now();
  sg::Workspace w;
  w.target = Vec2(0.0, 10.0);
  w.obstacles = {plain_obstacle(Vec2(10.0, 10.0), 1.5, 1.5)};
  const sg::StreamField field(w, Vec2(16.0, 10.0), 1.0);
  const double r = 1.5;
  const Vec2 obs = w.obstacles[0].position;
  const Vec2 rel = obs - w.target;
  const Vec2 image = obs - r * r * rel / rel.squaredNorm();  // target's image

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  int tested = 0;
  double worst = 0.0;
  while (tested < kHarmonicProbes) {
    const Vec2 p(u(rng), u(rng));
    if ((p - w.target).norm() < 2 * r || (p - obs).norm() < 2 * r ||
        (p - image).norm() < 2 * r) {
      continue;
    }
    const double c = field.psi(p);
    auto at = [&](double dx, double dy) {
      return c + std::remainder(field.psi(p + Vec2(dx, dy)) - c, 2 * kPi);
    };
    const double h = kHarmonicStep;
    const double lap = (at(h, 0) + at(-h, 0) + at(0, h) + at(0, -h) - 4 * c) / (h * h);
    worst = std::max(worst, std::abs(lap) / (1 + std::abs(c)));
    ++tested;
  }
  const double elapsed = seconds_since(t0);
  report("1 (harmonicity)", worst < kHarmonicTol && elapsed < 1.0,
         fmt("max |lap|/(1+|psi|) = %.3e over %d probes (tol %.0e), %.3f s", worst, tested,
             kHarmonicTol, elapsed));
}

void boundary_condition() {
  const auto t0 = Clock::now();
  double sink_spread = 0.0, vortex_spread = 0.0;
  int circles = 0;
  for (const sg::Scenario& raw : sg::builtin_scenarios()) {
    const sg::Scenario sc = sg::prepare(raw);
    for (const sg::Obstacle& o : sc.workspace.obstacles) {
      sg::VortexSpin spin;
      spin.value = -1;
      std::vector<double> sink, vortex;
      for (int k = 0; k < kBoundarySamples; ++k) {
        const double a = 2 * kPi * k / kBoundarySamples;
        const Vec2 p = o.position + o.radius * Vec2(std::cos(a), std::sin(a));
        sink.push_back(sg::sink_obstacle_psi(p, sc.workspace.target, o, 1.0));
        vortex.push_back(sg::vortex_psi(p, o, spin));
      }
      double lo = 0, hi = 0;
      for (double v : sink) {
        const double d = std::remainder(v - sink.front(), 2 * kPi);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      sink_spread = std::max(sink_spread, hi - lo);
      const auto [vmin, vmax] = std::minmax_element(vortex.begin(), vortex.end());
      const double scale = std::max(std::abs(*vmax), 1e-300);
      vortex_spread = std::max(vortex_spread, (*vmax - *vmin) / scale);
      ++circles;
    }
  }
  const double elapsed = seconds_since(t0);
  report("2 (circle boundary)",
         sink_spread < kBoundarySpreadTol && vortex_spread <= kVortexRelTol && elapsed < 1.0,
         fmt("%d circles x %d samples: sink spread %.2e (tol %.0e), vortex relative spread "
             "%.2e (tol %.0e), %.3f s",
             circles, kBoundarySamples, sink_spread, kBoundarySpreadTol, vortex_spread,
             kVortexRelTol, elapsed));
}

void spin_table(const sg::RunTrace& headon, const sg::RunTrace& crossing) {
  bool ok = sg::spin_rule(true, kPi / 2) == 1 && sg::spin_rule(false, kPi / 2) == -1 &&
            sg::spin_rule(false, -kPi) == 1;
  std::ostringstream detail;
  detail << "table (compliant, pi/2, pi) -> (" << sg::spin_rule(true, kPi / 2) << ", "
         << sg::spin_rule(false, kPi / 2) << ", " << sg::spin_rule(false, -kPi) << ")";
  // Head-on case: three counter-clockwise vortices at the first plan.
  detail << "; head-on spins";
  for (const sg::VortexSpin& s : headon.planning.front().spins) {
    detail << ' ' << s.value;
    ok = ok && s.value == 1;
  }
  // Crossing case: obstacles 1 and 3 clockwise, 2 and 4 counter-clockwise.
  const std::vector<int> want = {-1, 1, -1, 1};
  detail << "; crossing spins";
  const auto& spins = crossing.planning.front().spins;
  ok = ok && spins.size() == want.size();
  for (std::size_t i = 0; i < spins.size(); ++i) {
    detail << ' ' << spins[i].value;
    ok = ok && i < want.size() && spins[i].value == want[i];
  }
  report("3 (spin rule)", ok, detail.str());
}

void waypoint_optimality() {
  const auto t0 = Clock::now();
  std::mt19937 rng(99);
  int matched = 0, run_trials = 0;
  for (int trial = 0; trial < kWaypointTrials; ++trial) {
    sg::Workspace w;
    w.grid = sg::GridSpec(6.0, 6.0, 30, 30);
    std::uniform_int_distribution<int> cell(1, 30);
    w.target = sg::grid_point(w.grid, cell(rng), cell(rng));
    Vec2 wp;
    do {
      wp = sg::grid_point(w.grid, cell(rng), cell(rng));
    } while ((wp - w.target).norm() < 1.5);
    std::uniform_int_distribution<int> count(0, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n_obs = count(rng);
    for (int k = 0; k < n_obs; ++k) {
      const Vec2 c = sg::grid_point(w.grid, cell(rng), cell(rng));
      if ((c - wp).norm() < 0.8 || (c - w.target).norm() < 0.8) continue;
      w.obstacles.push_back(
          plain_obstacle(c, 0.4, 0.9, 0.05 * Vec2(u(rng), u(rng)), 1.0 + u(rng)));
    }
    std::uniform_int_distribution<int> ring(1, 4);
    sg::WaypointQuery q;
    q.current_wp = wp;
    q.target = w.target;
    q.ring_radius = ring(rng);
    q.gamma = 0.2 * (1.0 + u(rng));
    if (sg::target_in_box(q, w.grid)) continue;
    const sg::StreamField field(w, wp, 0.5 + 0.4 * u(rng));
    sg::WaypointChoice choice;
    try {
      choice = sg::select_next_waypoint(q, field);
    } catch (const sg::PlanningStuckError&) {
      continue;
    }
    ++run_trials;
    // Exhaustive enumeration of the box boundary, written independently.
    const sg::GridIndex c = sg::nearest_index(w.grid, wp);
    double best_cost = 0, best_dist = 0;
    sg::GridIndex best_idx{0, 0};
    bool found = false;
    const double ref = field.psi(wp);
    for (int m = 1; m <= w.grid.count_x; ++m) {
      for (int n = 1; n <= w.grid.count_y; ++n) {
        if (std::max(std::abs(m - c.m), std::abs(n - c.n)) != q.ring_radius) continue;
        const Vec2 p = sg::grid_point(w.grid, m, n);
        if (field.inside_obstacle(p)) continue;
        const double dist = (p - w.target).norm();
        const double cost = std::abs(field.psi(p) - ref) + q.gamma * dist;
        const sg::GridIndex idx{m, n};
        if (!found || std::tie(cost, dist, idx) < std::tie(best_cost, best_dist, best_idx)) {
          found = true;
          best_cost = cost;
          best_dist = dist;
          best_idx = idx;
        }
      }
    }
    if (found && best_idx == choice.index && best_cost == choice.cost) ++matched;
  }
  const double elapsed = seconds_since(t0);
  report("4 (waypoint optimality)", matched == run_trials && run_trials >= 50 && elapsed < 10.0,
         fmt("%d / %d randomized workspaces match exhaustive enumeration exactly, %.2f s",
             matched, run_trials, elapsed));
}

void bezier_c3(const std::vector<sg::RunTrace>& runs) {
  double worst = 0.0;
  std::size_t joints = 0;
  for (const sg::RunTrace& t : runs) {
    worst = std::max(worst, sg::max_joint_mismatch(t.segments));
    if (!t.segments.empty()) joints += t.segments.size() - 1;
  }
  report("5 (Bezier C3 joints)", worst < kJointTol,
         fmt("max order 0-3 mismatch %.2e over %zu joints in 6 runs (tol %.0e)", worst, joints,
             kJointTol));
}

void qp_correctness() {
  const auto t0 = Clock::now();
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> heading(-kPi, kPi);
  std::uniform_real_distribution<double> turn(-1.2, 1.2);
  std::uniform_real_distribution<double> len(0.8, 1.42);
  int within = 0, feasible = 0, solved = 0;
  double worst_gap = -1e300, worst_slack = 0.0, worst_two_sided = 0.0;
  for (int trial = 0; trial < kQpTrials; ++trial) {
    const double a0 = heading(rng), a1 = a0 + turn(rng);
    const Vec2 w0(10.0, 10.0);
    const Vec2 w1 = w0 + len(rng) * Vec2(std::cos(a0), std::sin(a0));
    const Vec2 w2 = w1 + len(rng) * Vec2(std::cos(a1), std::sin(a1));
    const sg::BezierSegment first = sg::first_segment(w0, w1, 0.5);
    sg::CorridorStep step;
    try {
      step = sg::solve_corridor_qp(w0, w1, w2, first, 0.5, 0.005);
    } catch (const sg::Error&) {
      continue;
    }
    ++solved;
    const sg::CorridorQP& p = step.problem;
    const Eigen::MatrixXd rows = p.rows();
    const Eigen::VectorXd rhs = p.rhs();
    const double slack = -(rows * step.chi - rhs).maxCoeff();
    worst_slack = std::min(worst_slack, slack);
    if (slack >= kQpSlackTol) ++feasible;
    const int n = static_cast<int>(std::floor(p.x7 / kQpGrid));
    double grid_best = 1e300;
    for (int i = 0; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        for (int k = j; k <= n; ++k) {
          const Eigen::Vector3d chi(i * kQpGrid, j * kQpGrid, k * kQpGrid);
          if ((rows * chi - rhs).maxCoeff() > 0.0) continue;
          grid_best = std::min(grid_best, p.objective(chi));
        }
      }
    }
    if (grid_best == 1e300) {
      ++within;  // no grid point is feasible, nothing to beat
      continue;
    }
    const double gap = step.solution.objective - grid_best;
    worst_gap = std::max(worst_gap, gap);
    worst_two_sided = std::max(worst_two_sided, std::abs(gap));
    if (gap <= kQpObjectiveTol) ++within;
  }
  const double elapsed = seconds_since(t0);
  const bool ok = solved == kQpTrials && within == solved && feasible == solved && elapsed < 30.0;
  report("6 (corridor QP)", ok,
         fmt("%d/%d solved, %d within grid optimum + %.0e (worst QP - grid %.3e, "
             "|gap| up to %.3e), min slack %.1e, %.2f s",
             solved, kQpTrials, within, kQpObjectiveTol, worst_gap, worst_two_sided,
             worst_slack, elapsed));
}

void integrator_order() {
  const sg::VesselParams params;
  sg::VesselState s0;
  s0.nu = Vec3(0.4, 0.2, 0.6);
  const Vec3 tau(5.0, -2.0, 1.0);
  auto run_to = [&](double dt) {
    sg::VesselState s = s0;
    const int n = static_cast<int>(std::lround(4.0 / dt));
    for (int i = 0; i < n; ++i) s = sg::step(s, tau, params, dt);
    Eigen::Matrix<double, 6, 1> x;
    x << s.position, s.heading, s.nu;
    return x;
  };
  const auto a = run_to(0.2), b = run_to(0.1), c = run_to(0.05);
  const double ratio = (a - b).norm() / (b - c).norm();
  report("7 (RK4 order)", ratio >= kRichardsonLo && ratio <= kRichardsonHi,
         fmt("Richardson ratio %.2f (accepted [%.0f, %.0f])", ratio, kRichardsonLo,
             kRichardsonHi));
}

std::vector<sg::BezierSegment> straight_path(int count) {
  std::vector<sg::BezierSegment> path;
  for (int k = 0; k < count; ++k) {
    sg::BezierSegment seg;
    for (int i = 0; i < 8; ++i) seg.control_points.row(i) << k + i / 7.0, 0.0;
    path.push_back(seg);
  }
  return path;
}

void controller_convergence() {
  const auto path = straight_path(40);
  const sg::ControlGains gains;
  const sg::VesselParams params;
  sg::VesselState s;
  s.position = Vec2(0.0, 0.5);
  double path_s = 0.0;
  const double dt = 0.01;
  double reached_at = -1.0;
  std::vector<double> ts, logs;
  for (int tick = 0; tick <= 1000; ++tick) {
    const double t = tick * dt;
    const sg::PathSignal sig = sg::path_signal(path, path_s, gains);
    const sg::ControlOutput out = sg::control_law(s, sig, gains, params);
    const double e = out.errors.z_p.norm();
    if (reached_at < 0 && e < kConvergedOffset) reached_at = t;
    if (e > kDecayFloor) {
      ts.push_back(t);
      logs.push_back(std::log(e));
    }
    s = sg::step(s, out.tau, params, dt);
    path_s += out.s_dot * dt;
  }
  // Least-squares line through log|z_p|.
  const double n = static_cast<double>(ts.size());
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += logs[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * logs[i];
  }
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  const double icept = (sl - slope * st) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double fit = icept + slope * ts[i];
    ss_res += (logs[i] - fit) * (logs[i] - fit);
    ss_tot += (logs[i] - sl / n) * (logs[i] - sl / n);
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  const bool ok = reached_at >= 0 && reached_at <= kConvergeWithin && r2 > kDecayR2 && slope < 0;
  report("8 (controller convergence)", ok,
         fmt("|z_p| < %.2f m at t = %.2f s; log-linear fit slope %.3f 1/s, R^2 = %.4f", kConvergedOffset,
             reached_at, slope, r2));
}

void alpha_dot_check() {
  // Curved path from the corridor QP; closed loop from a small offset.
  const std::vector<Vec2> wps = {{2.0, 2.0}, {3.0, 2.0}, {3.8, 2.6}, {4.4, 3.4}, {4.6, 4.4}};
  std::vector<sg::BezierSegment> path = {sg::first_segment(wps[0], wps[1], 0.5)};
  for (std::size_t k = 2; k < wps.size(); ++k) {
    path.push_back(
        sg::solve_corridor_qp(wps[k - 2], wps[k - 1], wps[k], path.back(), 0.5, 0.005).segment);
  }
  const sg::ControlGains gains;
  const sg::VesselParams params;
  using Packed = Eigen::Matrix<double, 7, 1>;
  auto rate = [&](const Packed& x, const Vec3& tau) {
    sg::VesselState s;
    s.position = x.head<2>();
    s.heading = x(2);
    s.nu = x.segment<3>(3);
    const sg::StateDerivative d = sg::derivative(s, tau, params);
    const sg::PathSignal sig = sg::path_signal(path, x(6), gains);
    Packed out;
    out << d.position_dot, d.heading_dot, d.nu_dot,
        sig.speed_assign + sg::update_law(s.position, sig, gains);
    return out;
  };
  auto alpha_of = [&](const Packed& x) {
    sg::VesselState s;
    s.position = x.head<2>();
    s.heading = x(2);
    s.nu = x.segment<3>(3);
    return sg::virtual_control(s, sg::path_signal(path, x(6), gains), gains);
  };

  sg::VesselState s;
  s.position = Vec2(2.05, 1.9);
  s.heading = 0.1;
  s.nu = Vec3(0.15, 0.0, 0.0);
  double path_s = 0.0;
  const double dt = 0.01, h = 1e-4;
  double worst = 0.0;
  int samples = 0;
  for (int tick = 0; tick < 1500 && path_s < path.size() - 0.05; ++tick) {
    const sg::PathSignal sig = sg::path_signal(path, path_s, gains);
    const sg::ControlOutput out = sg::control_law(s, sig, gains, params);
    if (tick >= 300 && tick % 20 == 0) {  // converged part of the run
      Packed x;
      x << s.position, s.heading, s.nu, path_s;
      auto rk4 = [&](double step) {
        const Packed k1 = rate(x, out.tau);
        const Packed k2 = rate(x + 0.5 * step * k1, out.tau);
        const Packed k3 = rate(x + 0.5 * step * k2, out.tau);
        const Packed k4 = rate(x + step * k3, out.tau);
        return Packed(x + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
      };
      const Vec3 fd = (alpha_of(rk4(h)) - alpha_of(rk4(-h))) / (2 * h);
      worst = std::max(worst, (fd - out.alpha_dot).norm() / std::max(out.alpha_dot.norm(), 1e-12));
      ++samples;
    }
    s = sg::step(s, out.tau, params, dt);
    path_s += out.s_dot * dt;
  }
  report("9 (alpha_dot cross-check)", samples > 10 && worst < kAlphaDotRelTol,
         fmt("max relative |fd - analytic| = %.2e over %d samples (tol %.0e)", worst, samples,
             kAlphaDotRelTol));
}

void scenario_safety(const std::vector<sg::RunTrace>& runs, const std::vector<double>& wall) {
  bool ok = runs.size() == 6;
  std::ostringstream detail;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const sg::RunTrace& t = runs[i];
    double ratio = 1e300;
    for (std::size_t j = 0; j < t.obstacles.size(); ++j) {
      ratio = std::min(ratio, t.obstacles[j].min_clearance /
                                  t.scenario.workspace.obstacles[j].radius);
    }
    const bool reached = t.outcome == sg::Outcome::reached;
    ok = ok && reached && ratio > kClearanceRatio && wall[i] < kScenarioWallSeconds;
    detail << (i ? "; " : "") << t.scenario.name << ' ' << sg::to_string(t.outcome) << " t="
           << fmt("%.1f", t.arrival_time) << " min clearance/r=" << fmt("%.3f", ratio)
           << " wall=" << fmt("%.2fs", wall[i]);
  }
  report("10 (scenario safety)", ok, detail.str());
}

void colregs_behaviour(const sg::RunTrace& headon, const sg::RunTrace& colregs_crossing,
                       const sg::RunTrace& anti_crossing) {
  bool all_port = true;
  for (const sg::EncounterReport& r : sg::colregs_metrics(headon)) {
    all_port = all_port && r.on_port_side;
  }
  report("11a (head-on, obstacles on port side)",
         headon.outcome == sg::Outcome::reached && all_port,
         all_port ? "all obstacles on own-ship port side at closest approach"
                  : "an obstacle was on the starboard side at closest approach");

  const auto ts = sg::colregs_metrics(colregs_crossing);
  const bool ahead = ts.size() == 1 && ts[0].own_ship_ahead;
  report("11b (crossing, own ship crosses ahead of target ship)",
         colregs_crossing.outcome == sg::Outcome::reached && ahead,
         ts.empty() ? "no target ship"
                    : fmt("own ship %s of the target ship at CPA, clearance %.2f m",
                          ts[0].own_ship_ahead ? "ahead" : "astern", ts[0].min_clearance));

  const auto obs = sg::colregs_metrics(anti_crossing);
  const bool behind = !obs.empty() && !obs[0].own_ship_ahead;
  report("11c (anti-collision crossing, passes behind obstacle 1)",
         anti_crossing.outcome == sg::Outcome::reached && behind,
         obs.empty() ? "no obstacles"
                     : fmt("own ship %s of obstacle 1 at CPA (t = %.1f s, clearance %.2f m)",
                           obs[0].own_ship_ahead ? "ahead" : "behind",
                           obs[0].time_of_closest_approach, obs[0].min_clearance));
}

void determinism() {
  const sg::Scenario* sc = sg::find_builtin("complex_2");
  std::ostringstream a, b;
  sg::write_trace_csv(a, sg::run(*sc));
  sg::write_trace_csv(b, sg::run(*sc));
  report("12 (determinism)", a.str() == b.str() && !a.str().empty(),
         fmt("two complex_2 traces of %zu bytes are %s", a.str().size(),
             a.str() == b.str() ? "byte-identical" : "different"));
}

}  // namespace

int main() {
  std::vector<sg::RunTrace> runs;
  std::vector<double> wall;
  for (const sg::Scenario& sc : sg::builtin_scenarios()) {
    const auto t0 = Clock::now();
    runs.push_back(sg::run(sc));
    wall.push_back(seconds_since(t0));
  }
  auto by_name = [&](const char* name) -> const sg::RunTrace& {
    for (const sg::RunTrace& t : runs) {
      if (t.scenario.name == name) return t;
    }
    std::fprintf(stderr, "missing scenario %s\n", name);
    std::exit(2);
  };

  harmonicity();
  boundary_condition();
  spin_table(by_name("anticollision_headon"), by_name("anticollision_crossing"));
  waypoint_optimality();
  bezier_c3(runs);
  qp_correctness();
  integrator_order();
  controller_convergence();
  alpha_dot_check();
  scenario_safety(runs, wall);
  colregs_behaviour(by_name("anticollision_headon"), by_name("colregs_crossing"),
                    by_name("anticollision_crossing"));
  determinism();

  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
