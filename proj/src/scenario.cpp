#include "streamguide/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace streamguide {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg, 0, 0);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) fail(path + "/" + item.key(), "unknown key");
  }
}

const json* member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const std::string& path, const char* key) {
  const json* v = member(obj, key);
  if (!v) fail(path + "/" + key, "missing required key");
  if (!v->is_number()) fail(path + "/" + key, "expected a number");
  return v->get<double>();
}

void optional_number(const json& obj, const std::string& path, const char* key,
                     double& out) {
  if (member(obj, key)) out = number(obj, path, key);
}

int integer(const json& obj, const std::string& path, const char* key) {
  const json* v = member(obj, key);
  if (!v) fail(path + "/" + key, "missing required key");
  if (!v->is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v->get<int>();
}

bool boolean(const json& obj, const std::string& path, const char* key) {
  const json* v = member(obj, key);
  if (!v) fail(path + "/" + key, "missing required key");
  if (!v->is_boolean()) fail(path + "/" + key, "expected true or false");
  return v->get<bool>();
}

// Accepts a scalar (applied to every diagonal entry) or an array of `N`.
template <int N>
Eigen::Matrix<double, N, 1> diagonal(const json& obj, const std::string& path,
                                     const char* key) {
  const json& v = obj.at(key);
  Eigen::Matrix<double, N, 1> d;
  if (v.is_number()) {
    d.setConstant(v.get<double>());
  } else if (v.is_array() && v.size() == N) {
    for (int i = 0; i < N; ++i) {
      if (!v[i].is_number()) fail(path + "/" + key, "expected numbers");
      d(i) = v[i].get<double>();
    }
  } else {
    fail(path + "/" + key, "expected a number or an array of " + std::to_string(N));
  }
  return d;
}

Eigen::Matrix3d vessel_matrix(const json& obj, const std::string& path, const char* key) {
  const json& v = obj.at(key);
  if (v.is_array() && v.size() == 9) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) {
      if (!v[i].is_number()) fail(path + "/" + key, "expected numbers");
      m(i / 3, i % 3) = v[i].get<double>();
    }
    return m;
  }
  return diagonal<3>(obj, path, key).asDiagonal();
}

json matrix_json(const Eigen::Matrix3d& m) {
  const Eigen::Matrix3d diag = m.diagonal().asDiagonal();
  json out = json::array();
  if (m == diag) {
    for (int i = 0; i < 3; ++i) out.push_back(m(i, i));
  } else {
    for (int i = 0; i < 9; ++i) out.push_back(m(i / 3, i % 3));
  }
  return out;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Scenario from_json(const json& doc) {
  check_keys(doc, "", {"name", "description", "grid", "target", "vessel", "obstacles",
                       "planner", "path", "controller", "sim"});
  Scenario sc;
  if (const json* v = member(doc, "name")) {
    if (!v->is_string()) fail("/name", "expected a string");
    sc.name = v->get<std::string>();
  }
  if (const json* v = member(doc, "description")) {
    if (!v->is_string()) fail("/description", "expected a string");
    sc.description = v->get<std::string>();
  }

  const json* grid = member(doc, "grid");
  if (!grid) fail("/grid", "missing required section");
  check_keys(*grid, "/grid", {"L_x", "L_y", "N_x", "N_y"});
  sc.workspace.grid.length_x = number(*grid, "/grid", "L_x");
  sc.workspace.grid.length_y = number(*grid, "/grid", "L_y");
  sc.workspace.grid.count_x = integer(*grid, "/grid", "N_x");
  sc.workspace.grid.count_y = integer(*grid, "/grid", "N_y");

  const json* target = member(doc, "target");
  if (!target) fail("/target", "missing required section");
  check_keys(*target, "/target", {"x", "y"});
  sc.workspace.target = Vec2(number(*target, "/target", "x"), number(*target, "/target", "y"));

  const json* vessel = member(doc, "vessel");
  if (!vessel) fail("/vessel", "missing required section");
  check_keys(*vessel, "/vessel", {"x0", "y0", "psi0", "M", "D"});
  sc.vessel0.position = Vec2(number(*vessel, "/vessel", "x0"), number(*vessel, "/vessel", "y0"));
  sc.vessel0.heading = number(*vessel, "/vessel", "psi0");
  if (member(*vessel, "M") || member(*vessel, "D")) {
    const Eigen::Matrix3d M = member(*vessel, "M") ? vessel_matrix(*vessel, "/vessel", "M")
                                                   : sc.vessel.inertia();
    const Eigen::Matrix3d D = member(*vessel, "D") ? vessel_matrix(*vessel, "/vessel", "D")
                                                   : sc.vessel.damping();
    sc.vessel = VesselParams(M, D);
  }

  const json* obstacles = member(doc, "obstacles");
  if (!obstacles) fail("/obstacles", "missing required section");
  if (!obstacles->is_array()) fail("/obstacles", "expected an array");
  for (std::size_t i = 0; i < obstacles->size(); ++i) {
    const std::string path = "/obstacles/" + std::to_string(i);
    const json& o = (*obstacles)[i];
    check_keys(o, path, {"x", "y", "vx", "vy", "r", "l", "Cv", "compliant", "tx", "ty"});
    Obstacle ob;
    ob.position = Vec2(number(o, path, "x"), number(o, path, "y"));
    ob.velocity = Vec2(number(o, path, "vx"), number(o, path, "vy"));
    ob.radius = number(o, path, "r");
    ob.influence_range = number(o, path, "l");
    ob.vortex_gain = number(o, path, "Cv");
    ob.colregs_compliant = boolean(o, path, "compliant");
    const bool has_tx = member(o, "tx") != nullptr;
    if (has_tx != (member(o, "ty") != nullptr)) fail(path, "tx and ty must be given together");
    if (has_tx) {
      sc.obstacle_targets.emplace_back(Vec2(number(o, path, "tx"), number(o, path, "ty")));
    } else {
      sc.obstacle_targets.emplace_back();
    }
    sc.workspace.obstacles.push_back(ob);
  }

  if (const json* p = member(doc, "planner")) {
    check_keys(*p, "/planner", {"gamma", "n_r", "delta", "C"});
    optional_number(*p, "/planner", "gamma", sc.planner.gamma);
    if (member(*p, "n_r")) sc.planner.ring_radius = integer(*p, "/planner", "n_r");
    optional_number(*p, "/planner", "delta", sc.sim.delta);
    optional_number(*p, "/planner", "C", sc.planner.sink_strength);
  }
  if (const json* p = member(doc, "path")) {
    check_keys(*p, "/path", {"zeta", "epsilon"});
    optional_number(*p, "/path", "zeta", sc.path.corridor_width);
    optional_number(*p, "/path", "epsilon", sc.path.curvature_margin);
  }
  if (const json* p = member(doc, "controller")) {
    check_keys(*p, "/controller", {"Kp", "kpsi", "Knu", "ud", "eps_reg", "mu"});
    if (member(*p, "Kp")) sc.gains.K_p = diagonal<2>(*p, "/controller", "Kp").asDiagonal();
    optional_number(*p, "/controller", "kpsi", sc.gains.k_psi);
    if (member(*p, "Knu")) sc.gains.K_nu = diagonal<3>(*p, "/controller", "Knu").asDiagonal();
    optional_number(*p, "/controller", "ud", sc.gains.u_d);
    optional_number(*p, "/controller", "eps_reg", sc.gains.eps_reg);
    optional_number(*p, "/controller", "mu", sc.gains.mu);
  }
  if (const json* p = member(doc, "sim")) {
    check_keys(*p, "/sim", {"dt", "t_max", "obstacle_mode"});
    optional_number(*p, "/sim", "dt", sc.sim.dt);
    optional_number(*p, "/sim", "t_max", sc.sim.t_max);
    if (const json* m = member(*p, "obstacle_mode")) {
      const std::string mode = m->is_string() ? m->get<std::string>() : "";
      if (mode == "constant-velocity") {
        sc.sim.obstacle_mode = ObstacleMode::constant_velocity;
      } else if (mode == "stream-guided") {
        sc.sim.obstacle_mode = ObstacleMode::stream_guided;
      } else {
        fail("/sim/obstacle_mode", "expected \"constant-velocity\" or \"stream-guided\"");
      }
    }
  }
  bool any_target = false;
  for (const auto& t : sc.obstacle_targets) any_target = any_target || t.has_value();
  if (!any_target) sc.obstacle_targets.clear();
  return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": syntax error";
    throw ParseError(os.str(), line, column);
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid value: ") + e.what(), 0, 0);
  }
}

std::string serialize_scenario(const Scenario& sc) {
  json doc = json::object();
  doc["name"] = sc.name;
  doc["description"] = sc.description;
  const GridSpec& g = sc.workspace.grid;
  doc["grid"] = {{"L_x", g.length_x}, {"L_y", g.length_y}, {"N_x", g.count_x}, {"N_y", g.count_y}};
  doc["target"] = {{"x", sc.workspace.target.x()}, {"y", sc.workspace.target.y()}};
  json vessel = {{"x0", sc.vessel0.position.x()},
                 {"y0", sc.vessel0.position.y()},
                 {"psi0", sc.vessel0.heading}};
  if (!(sc.vessel == VesselParams())) {
    vessel["M"] = matrix_json(sc.vessel.inertia());
    vessel["D"] = matrix_json(sc.vessel.damping());
  }
  doc["vessel"] = vessel;
  json obstacles = json::array();
  for (std::size_t i = 0; i < sc.workspace.obstacles.size(); ++i) {
    const Obstacle& o = sc.workspace.obstacles[i];
    json item = {{"x", o.position.x()},  {"y", o.position.y()},
                 {"vx", o.velocity.x()}, {"vy", o.velocity.y()},
                 {"r", o.radius},        {"l", o.influence_range},
                 {"Cv", o.vortex_gain},  {"compliant", o.colregs_compliant}};
    if (i < sc.obstacle_targets.size() && sc.obstacle_targets[i]) {
      item["tx"] = sc.obstacle_targets[i]->x();
      item["ty"] = sc.obstacle_targets[i]->y();
    }
    obstacles.push_back(item);
  }
  doc["obstacles"] = obstacles;
  doc["planner"] = {{"gamma", sc.planner.gamma},
                    {"n_r", sc.planner.ring_radius},
                    {"delta", sc.sim.delta},
                    {"C", sc.planner.sink_strength}};
  doc["path"] = {{"zeta", sc.path.corridor_width}, {"epsilon", sc.path.curvature_margin}};
  doc["controller"] = {{"Kp", {sc.gains.K_p(0, 0), sc.gains.K_p(1, 1)}},
                       {"kpsi", sc.gains.k_psi},
                       {"Knu", {sc.gains.K_nu(0, 0), sc.gains.K_nu(1, 1), sc.gains.K_nu(2, 2)}},
                       {"ud", sc.gains.u_d},
                       {"eps_reg", sc.gains.eps_reg},
                       {"mu", sc.gains.mu}};
  doc["sim"] = {{"dt", sc.sim.dt},
                {"t_max", sc.sim.t_max},
                {"obstacle_mode", sc.sim.obstacle_mode == ObstacleMode::stream_guided
                                      ? "stream-guided"
                                      : "constant-velocity"}};
  return doc.dump(2) + "\n";
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

struct Row {
  double x, y, vx, vy, strength;  // strength = Cv |v| as tabulated
};

// Sink strength of the bundled cases, chosen from a sweep over all six.
constexpr double kBundledSinkStrength = 0.07;

Scenario base(std::string name, std::string description, Vec2 start, Vec2 target) {
  Scenario sc;
  sc.planner.sink_strength = kBundledSinkStrength;
  sc.name = std::move(name);
  sc.description = std::move(description);
  sc.workspace.target = target;
  sc.vessel0.position = start;
  const Vec2 d = target - start;
  sc.vessel0.heading = std::atan2(d.y(), d.x());
  return sc;
}

Scenario anticollision(std::string name, std::string description, Vec2 start,
                       Vec2 target, std::initializer_list<Row> rows) {
  Scenario sc = base(std::move(name), std::move(description), start, target);
  for (const Row& r : rows) {
    Obstacle o;
    o.position = Vec2(r.x, r.y);
    o.velocity = Vec2(r.vx, r.vy);
    o.vortex_gain = r.strength / o.velocity.norm();
    o.colregs_compliant = false;
    sc.workspace.obstacles.push_back(o);
  }
  return sc;
}

// Target ships of the COLREGs cases head for their destination at `speed`
// with tabulated vortex strength 0.1.
Obstacle target_ship(Vec2 position, Vec2 destination, double speed) {
  Obstacle o;
  o.position = position;
  o.velocity = (destination - position).normalized() * speed;
  o.vortex_gain = 0.1 / speed;
  o.colregs_compliant = true;
  return o;
}

std::vector<Scenario> make_builtins() {
  std::vector<Scenario> out;

  Scenario s1 = base("colregs_headon_overtaking",
                     "Own ship heads south, overtakes a slow southbound target ship and "
                     "meets a northbound one head-on; target ships follow their own "
                     "stream functions",
                     Vec2(15.9, 9.9), Vec2(0.9, 9.9));
  s1.workspace.obstacles = {target_ship(Vec2(11.9, 9.9), Vec2(3.9, 9.9), 0.1),
                            target_ship(Vec2(5.9, 9.9), Vec2(17.9, 9.9), 0.1)};
  s1.obstacle_targets = {Vec2(3.9, 9.9), Vec2(17.9, 9.9)};
  s1.sim.obstacle_mode = ObstacleMode::stream_guided;
  out.push_back(s1);

  Scenario s2 = base("colregs_crossing",
                     "Crossing encounter: the target ship has the own ship on its "
                     "starboard side and gives way",
                     Vec2(15.9, 3.9), Vec2(3.9, 15.9));
  s2.workspace.obstacles = {target_ship(Vec2(15.9, 15.9), Vec2(3.9, 3.9), 0.15)};
  s2.obstacle_targets = {Vec2(3.9, 3.9)};
  s2.sim.obstacle_mode = ObstacleMode::stream_guided;
  out.push_back(s2);

  out.push_back(anticollision(
      "anticollision_headon",
      "Three non-compliant northbound obstacles meeting the own ship head-on",
      Vec2(18.9, 9.9), Vec2(0.9, 9.9),
      {{5.9, 9.9, 0.04, 0.0, 0.05}, {3.9, 7.9, 0.04, 0.0, 0.1}, {1.9, 11.9, 0.04, 0.0, 0.05}}));

  out.push_back(anticollision(
      "anticollision_crossing",
      "Four non-compliant obstacles crossing the own ship's track",
      Vec2(18.9, 9.9), Vec2(0.9, 9.9),
      {{14.9, 11.9, 0.0, -0.04, 0.05},
       {11.9, 5.9, 0.0, 0.04, 0.08},
       {8.9, 16.9, 0.0, -0.04, 0.1},
       {5.9, 1.9, 0.0, 0.04, 0.1}}));

  out.push_back(anticollision(
      "complex_1", "Five non-compliant obstacles with mixed courses",
      Vec2(18.9, 9.9), Vec2(0.9, 9.9),
      {{14.9, 9.9, 0.04, 0.04, 0.05},
       {11.9, 11.9, 0.024, -0.04, 0.05},
       {9.9, 13.9, 0.008, -0.056, 0.05},
       {5.9, 17.9, 0.0, -0.024, 0.1},
       {4.9, 5.9, 0.024, 0.024, 0.1}}));

  out.push_back(anticollision(
      "complex_2", "Six non-compliant obstacles with mixed courses",
      Vec2(18.9, 9.9), Vec2(0.9, 9.9),
      {{12.9, 9.9, 0.04, 0.0, 0.06},
       {7.9, 13.9, 0.016, -0.04, 0.06},
       {9.9, 15.9, 0.024, -0.04, 0.1},
       {3.9, 1.9, 0.008, 0.04, 0.1},
       {1.9, 4.9, 0.04, 0.04, 0.1},
       {3.9, 17.9, -0.04, 0.0, 0.1}}));
  return out;
}

}  // namespace

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> all = make_builtins();
  return all;
}

const Scenario* find_builtin(const std::string& name) {
  static const std::vector<std::pair<std::string, std::string>> aliases = {
      {"headon_anticollision", "anticollision_headon"},
      {"crossing_colregs", "colregs_crossing"}};
  std::string key = name;
  for (const auto& [from, to] : aliases) {
    if (key == from) key = to;
  }
  for (const Scenario& sc : builtin_scenarios()) {
    if (sc.name == key) return &sc;
  }
  return nullptr;
}

}  // namespace streamguide
