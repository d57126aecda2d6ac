/*
 Copyright 2026 The cwhfmt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "cwhfmt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace cwhfmt {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Fail-closed object reader: every key must be consumed, otherwise finish()
// rejects it as unknown.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ScenarioError(display(), "expected an object");
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& need(const std::string& key) {
    const json* v = find(key);
    if (!v) throw ScenarioError(at(key), "required field missing");
    return *v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ScenarioError(at(it.key()), "unknown field");
    }
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ScenarioError(path, "must be finite");
  return x;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) throw ScenarioError(path, "must be positive");
  return x;
}

double nonnegative(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x >= 0.0)) throw ScenarioError(path, "must be non-negative");
  return x;
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ScenarioError(path, "expected true or false");
  return v.get<bool>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(N)) {
    throw ScenarioError(path, "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    out(i) = number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

template <int N>
json arr(const Eigen::Matrix<double, N, 1>& v) {
  json a = json::array();
  for (int i = 0; i < N; ++i) a.push_back(v(i));
  return a;
}

State read_state(const json& v, const std::string& path) {
  Obj o(v, path);
  const Vec3 r = vec<3>(o.need("position_m"), o.at("position_m"));
  const Vec3 w = vec<3>(o.need("velocity_mps"), o.at("velocity_mps"));
  o.finish();
  return make_state(r, w);
}

json write_state(const State& x) {
  return json{{"position_m", arr<3>(position(x))}, {"velocity_mps", arr<3>(velocity(x))}};
}

StateSpaceBox read_box6(const json& v, const std::string& path) {
  Obj o(v, path);
  StateSpaceBox b;
  b.lower = vec<6>(o.need("lower"), o.at("lower"));
  b.upper = vec<6>(o.need("upper"), o.at("upper"));
  o.finish();
  for (int i = 0; i < 6; ++i) {
    if (!(b.lower(i) <= b.upper(i))) {
      throw ScenarioError(path + ".upper[" + std::to_string(i) + "]", "must be >= lower");
    }
  }
  return b;
}

// Positions-only box; velocities stay unbounded.
StateSpaceBox read_box3(const json& v, const std::string& path) {
  Obj o(v, path);
  const Vec3 lo = vec<3>(o.need("lower_m"), o.at("lower_m"));
  const Vec3 hi = vec<3>(o.need("upper_m"), o.at("upper_m"));
  o.finish();
  for (int i = 0; i < 3; ++i) {
    if (!(lo(i) < hi(i))) {
      throw ScenarioError(path + ".upper_m[" + std::to_string(i) + "]", "must exceed lower_m");
    }
  }
  return StateSpaceBox::positions(lo, hi);
}

Vec3 unit(const json& v, const std::string& path) {
  const Vec3 a = vec<3>(v, path);
  const double n = a.norm();
  if (!(n > 0.0)) throw ScenarioError(path, "must be a non-zero vector");
  if (std::abs(n - 1.0) > 1e-9) throw ScenarioError(path, "must be a unit vector");
  return a / n;
}

CamPolicy read_policy(const json& v, const std::string& path) {
  if (!v.is_string()) throw ScenarioError(path, "expected a string");
  const std::string s = v.get<std::string>();
  for (CamPolicy p : {CamPolicy::TurnBurnTurn, CamPolicy::NadirHold, CamPolicy::Passive}) {
    if (s == to_string(p)) return p;
  }
  throw ScenarioError(path, "unknown policy '" + s + "'");
}

}  // namespace

Scenario parse_scenario(const json& j) {
  Scenario s;
  Obj root(j, "");

  const json& ver = root.need("format_version");
  if (!ver.is_number_integer() || ver.get<int>() != Scenario::kFormatVersion) {
    throw ScenarioError("format_version",
                        "unsupported version (expected " +
                            std::to_string(Scenario::kFormatVersion) + ")");
  }
  if (const json* v = root.find("name")) {
    if (!v->is_string()) throw ScenarioError("name", "expected a string");
    s.name = v->get<std::string>();
  }

  {
    Obj o(root.need("orbit"), "orbit");
    s.omega = positive(o.need("omega"), o.at("omega"));
    o.finish();
  }

  if (const json* v = root.find("koz")) {
    if (!v->is_null()) {
      Obj o(*v, "koz");
      const std::string p = o.at("semi_axes_m");
      const json& a = o.need("semi_axes_m");
      Vec3 ax = vec<3>(a, p);
      for (int i = 0; i < 3; ++i) positive(a[static_cast<std::size_t>(i)], p + "[" + std::to_string(i) + "]");
      s.koz_semi_axes = ax;
      o.finish();
    }
  }

  if (const json* v = root.find("antenna_lobes")) {
    if (!v->is_array()) throw ScenarioError("antenna_lobes", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      Obj o((*v)[i], "antenna_lobes[" + std::to_string(i) + "]");
      ConeObstacle c;
      c.apex = vec<3>(o.need("apex_m"), o.at("apex_m"));
      c.axis = unit(o.need("axis"), o.at("axis"));
      c.height = positive(o.need("antenna_lobe_height_m"), o.at("antenna_lobe_height_m"));
      const double bw = positive(o.need("antenna_beamwidth_deg"), o.at("antenna_beamwidth_deg"));
      if (!(bw < 180.0)) throw ScenarioError(o.at("antenna_beamwidth_deg"), "must be below 180");
      c.half_angle = 0.5 * bw * kDeg;
      o.finish();
      s.antenna_lobes.push_back(c);
    }
  }

  {
    Obj o(root.need("target"), "target");
    s.target_radius_m = nonnegative(o.need("radius_m"), o.at("radius_m"));
    o.finish();
  }

  if (const json* v = root.find("mission_box")) {
    if (!v->is_null()) s.mission_box = read_box3(*v, "mission_box");
  }

  {
    Obj o(root.need("chaser"), "chaser");
    s.chaser_radius_m = nonnegative(o.need("radius_m"), o.at("radius_m"));
    const double ha = positive(o.need("plume_half_angle_deg"), o.at("plume_half_angle_deg"));
    if (!(ha < 90.0)) throw ScenarioError(o.at("plume_half_angle_deg"), "must be below 90");
    s.plume.half_angle = ha * kDeg;
    s.plume.height = positive(o.need("plume_height_m"), o.at("plume_height_m"));
    const json& th = o.need("thrusters");
    const std::string tp = o.at("thrusters");
    if (th.is_string()) {
      if (th.get<std::string>() != "default_16") {
        throw ScenarioError(tp, "unknown layout '" + th.get<std::string>() + "'");
      }
    } else if (th.is_array()) {
      if (th.empty()) throw ScenarioError(tp, "at least one thruster required");
      for (std::size_t i = 0; i < th.size(); ++i) {
        Obj t(th[i], tp + "[" + std::to_string(i) + "]");
        Thruster k;
        k.position = vec<3>(t.need("position_m"), t.at("position_m"));
        k.direction = unit(t.need("direction"), t.at("direction"));
        if (const json* m = t.find("dv_min_mps")) k.dv_min = nonnegative(*m, t.at("dv_min_mps"));
        if (const json* m = t.find("dv_max_mps")) {
          if (!m->is_null()) k.dv_max = positive(*m, t.at("dv_max_mps"));
        }
        if (!(k.dv_max >= k.dv_min)) throw ScenarioError(t.at("dv_max_mps"), "must be >= dv_min_mps");
        t.finish();
        s.thrusters.push_back(k);
      }
    } else {
      throw ScenarioError(tp, "expected \"default_16\" or an array of thrusters");
    }
    o.finish();
  }

  {
    const json& f = root.need("fault_tolerance");
    if (!f.is_number_integer() || f.get<int>() < 0) {
      throw ScenarioError("fault_tolerance", "expected a non-negative integer");
    }
    s.fault_tolerance = f.get<int>();
    const std::size_t k = s.thrusters.empty() ? 16 : s.thrusters.size();
    if (static_cast<std::size_t>(s.fault_tolerance) > k) {
      throw ScenarioError("fault_tolerance", "exceeds the thruster count");
    }
  }
  if (const json* v = root.find("cam_policy")) s.cam_policy = read_policy(*v, "cam_policy");
  if (const json* v = root.find("planar")) s.planar = boolean(*v, "planar");

  s.initial_state = read_state(root.need("initial_state"), "initial_state");

  {
    const json& w = root.need("waypoints");
    if (!w.is_array() || w.empty()) throw ScenarioError("waypoints", "expected a non-empty array");
    for (std::size_t i = 0; i < w.size(); ++i) {
      Obj o(w[i], "waypoints[" + std::to_string(i) + "]");
      WaypointSpec wp;
      wp.state = make_state(vec<3>(o.need("position_m"), o.at("position_m")),
                            vec<3>(o.need("velocity_mps"), o.at("velocity_mps")));
      if (const json* v = o.find("exact")) wp.exact = boolean(*v, o.at("exact"));
      if (wp.exact) {
        if (const json* v = o.find("eps_r_m")) wp.eps_r = nonnegative(*v, o.at("eps_r_m"));
        if (const json* v = o.find("eps_v_mps")) wp.eps_v = nonnegative(*v, o.at("eps_v_mps"));
      } else {
        wp.eps_r = positive(o.need("eps_r_m"), o.at("eps_r_m"));
        wp.eps_v = positive(o.need("eps_v_mps"), o.at("eps_v_mps"));
      }
      if (const json* v = o.find("sample_box")) {
        if (!v->is_null()) wp.sample_box = read_box6(*v, o.at("sample_box"));
      }
      o.finish();
      s.waypoints.push_back(wp);
    }
  }

  auto check_planar = [&](const State& x, const std::string& path) {
    if (s.planar && !is_planar(x)) throw ScenarioError(path, "out-of-plane state in a planar scenario");
  };
  check_planar(s.initial_state, "initial_state");
  for (std::size_t i = 0; i < s.waypoints.size(); ++i) {
    check_planar(s.waypoints[i].state, "waypoints[" + std::to_string(i) + "]");
  }

  {
    Obj o(root.need("planner"), "planner");
    PlannerConfig& p = s.planner;
    const json& n = o.need("n");
    if (!n.is_number_integer() || n.get<long long>() < 2) {
      throw ScenarioError(o.at("n"), "expected an integer >= 2");
    }
    p.n = static_cast<std::size_t>(n.get<long long>());
    p.j_bar = positive(o.need("j_bar"), o.at("j_bar"));
    p.t_max_frac = positive(o.need("t_max_frac"), o.at("t_max_frac"));
    if (!(p.t_max_frac < 1.0)) throw ScenarioError(o.at("t_max_frac"), "must be below 1");
    p.dt_frac = positive(o.need("dt_frac"), o.at("dt_frac"));
    if (!(p.dt_frac <= p.t_max_frac)) throw ScenarioError(o.at("dt_frac"), "must not exceed t_max_frac");
    p.goal_fraction = positive(o.need("goal_fraction"), o.at("goal_fraction"));
    if (!(p.goal_fraction < 1.0)) throw ScenarioError(o.at("goal_fraction"), "must be below 1");
    if (const json* v = o.find("merge_mode")) p.merge_mode = boolean(*v, o.at("merge_mode"));
    if (const json* v = o.find("strict_safety")) p.strict_safety = boolean(*v, o.at("strict_safety"));
    if (const json* v = o.find("t_grid")) {
      if (!v->is_number_integer() || v->get<int>() < 16) {
        throw ScenarioError(o.at("t_grid"), "expected an integer >= 16");
      }
      p.t_grid = v->get<int>();
    }
    if (const json* v = o.find("velocity_margin_mps")) {
      if (!v->is_null()) p.velocity_margin_mps = positive(*v, o.at("velocity_margin_mps"));
    }
    if (const json* v = o.find("leg_margin_m")) p.leg_margin_m = nonnegative(*v, o.at("leg_margin_m"));
    o.finish();
  }

  if (const json* v = root.find("smoothing")) {
    Obj o(*v, "smoothing");
    if (const json* e = o.find("enabled")) s.smoothing.enabled = boolean(*e, o.at("enabled"));
    if (const json* a = o.find("alpha_tol")) {
      s.smoothing.alpha_tol = positive(*a, o.at("alpha_tol"));
      if (!(s.smoothing.alpha_tol < 1.0)) throw ScenarioError(o.at("alpha_tol"), "must be below 1");
    }
    if (const json* m = o.find("mode")) {
      if (*m == "whole_plan") {
        s.smoothing.mode = SmoothingMode::WholePlan;
      } else if (*m == "per_leg") {
        s.smoothing.mode = SmoothingMode::PerLeg;
      } else {
        throw ScenarioError(o.at("mode"), "expected \"whole_plan\" or \"per_leg\"");
      }
    }
    o.finish();
  }

  root.finish();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("<file>", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

json to_json(const Scenario& s) {
  json j;
  j["format_version"] = Scenario::kFormatVersion;
  j["name"] = s.name;
  j["orbit"] = {{"omega", s.omega}};
  if (s.koz_semi_axes) j["koz"] = {{"semi_axes_m", arr<3>(*s.koz_semi_axes)}};
  json lobes = json::array();
  for (const auto& c : s.antenna_lobes) {
    lobes.push_back({{"apex_m", arr<3>(c.apex)},
                     {"axis", arr<3>(c.axis)},
                     {"antenna_lobe_height_m", c.height},
                     {"antenna_beamwidth_deg", 2.0 * c.half_angle / kDeg}});
  }
  j["antenna_lobes"] = lobes;
  j["target"] = {{"radius_m", s.target_radius_m}};
  if (s.mission_box.lower.head<3>().allFinite() || s.mission_box.upper.head<3>().allFinite()) {
    j["mission_box"] = {{"lower_m", arr<3>(Vec3(s.mission_box.lower.head<3>()))},
                        {"upper_m", arr<3>(Vec3(s.mission_box.upper.head<3>()))}};
  }
  json chaser = {{"radius_m", s.chaser_radius_m},
                 {"plume_half_angle_deg", s.plume.half_angle / kDeg},
                 {"plume_height_m", s.plume.height}};
  if (s.thrusters.empty()) {
    chaser["thrusters"] = "default_16";
  } else {
    json th = json::array();
    for (const auto& t : s.thrusters) {
      json e = {{"position_m", arr<3>(t.position)},
                {"direction", arr<3>(t.direction)},
                {"dv_min_mps", t.dv_min}};
      e["dv_max_mps"] = std::isfinite(t.dv_max) ? json(t.dv_max) : json(nullptr);
      th.push_back(e);
    }
    chaser["thrusters"] = th;
  }
  j["chaser"] = chaser;
  j["fault_tolerance"] = s.fault_tolerance;
  j["cam_policy"] = std::string(to_string(s.cam_policy));
  j["planar"] = s.planar;
  j["initial_state"] = write_state(s.initial_state);
  json wps = json::array();
  for (const auto& w : s.waypoints) {
    json e = {{"position_m", arr<3>(position(w.state))},
              {"velocity_mps", arr<3>(velocity(w.state))},
              {"eps_r_m", w.eps_r},
              {"eps_v_mps", w.eps_v},
              {"exact", w.exact}};
    if (w.sample_box) {
      e["sample_box"] = {{"lower", arr<6>(w.sample_box->lower)},
                         {"upper", arr<6>(w.sample_box->upper)}};
    }
    wps.push_back(e);
  }
  j["waypoints"] = wps;
  const PlannerConfig& p = s.planner;
  j["planner"] = {{"n", p.n},
                  {"j_bar", p.j_bar},
                  {"t_max_frac", p.t_max_frac},
                  {"dt_frac", p.dt_frac},
                  {"goal_fraction", p.goal_fraction},
                  {"merge_mode", p.merge_mode},
                  {"strict_safety", p.strict_safety},
                  {"t_grid", p.t_grid},
                  {"leg_margin_m", p.leg_margin_m}};
  if (p.velocity_margin_mps) j["planner"]["velocity_margin_mps"] = *p.velocity_margin_mps;
  j["smoothing"] = {{"enabled", s.smoothing.enabled},
                    {"alpha_tol", s.smoothing.alpha_tol},
                    {"mode", s.smoothing.mode == SmoothingMode::PerLeg ? "per_leg" : "whole_plan"}};
  return j;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t scenario_fingerprint(const Scenario& s) {
  json j = to_json(s);
  // Online-only settings do not change the precomputed graph.
  j.erase("name");
  j.erase("smoothing");
  j["planner"].erase("merge_mode");
  j["planner"].erase("strict_safety");
  const std::string text = j.dump();
  return fnv1a64(text.data(), text.size());
}

double Scenario::dt() const { return planner.dt_frac * model().period(); }

ThrusterConfig Scenario::thruster_config() const {
  if (thrusters.empty()) return ThrusterConfig::default_16(plume);
  ThrusterConfig c;
  c.thrusters = thrusters;
  c.plume = plume;
  return c;
}

Environment Scenario::environment() const {
  ObstacleSet raw;
  if (koz_semi_axes) raw.koz = EllipsoidKoz{*koz_semi_axes};
  raw.cones = antenna_lobes;
  raw.box = mission_box;
  raw.target = TargetSphere{target_radius_m};
  return Environment(raw, chaser_radius_m);
}

SafetyContext Scenario::safety_context() const {
  ThrusterConfig cfg = thruster_config();
  cfg.validate();
  return SafetyContext(model(), environment(), std::move(cfg), fault_tolerance, dt(), cam_policy);
}

ReachSpec Scenario::reach_spec() const {
  ReachSpec r;
  r.j_bar = planner.j_bar;
  r.limits = SteeringLimits::from_period_fraction(model(), planner.t_max_frac);
  r.limits.t_grid = planner.t_grid;
  return r;
}

PlannerOptions Scenario::planner_options() const {
  PlannerOptions o;
  o.merge = planner.merge_mode;
  o.strict = planner.strict_safety;
  return o;
}

StateSpaceBox Scenario::derived_leg_box(std::size_t i) const {
  const State a = i == 0 ? initial_state : waypoints.at(i - 1).state;
  const State b = waypoints.at(i).state;
  const double m = planner.leg_margin_m;
  const double vm = planner.velocity_margin_mps.value_or(planner.j_bar);
  const double w = omega;

  StateSpaceBox box;
  for (int k = 0; k < 3; ++k) {
    double lo = std::min(a(k), b(k)) - m;
    double hi = std::max(a(k), b(k)) + m;
    lo = std::max(lo, mission_box.lower(k));
    hi = std::min(hi, mission_box.upper(k));
    box.lower(k) = lo;
    box.upper(k) = hi;
  }
  // Velocities: a band around the coasting-circular profile vy = -1.5 w x.
  const double vy1 = -1.5 * w * box.lower(0);
  const double vy2 = -1.5 * w * box.upper(0);
  box.lower(3) = std::min({0.0, a(3), b(3)}) - vm;
  box.upper(3) = std::max({0.0, a(3), b(3)}) + vm;
  box.lower(4) = std::min({vy1, vy2, a(4), b(4)}) - vm;
  box.upper(4) = std::max({vy1, vy2, a(4), b(4)}) + vm;
  box.lower(5) = std::min({0.0, a(5), b(5)}) - vm;
  box.upper(5) = std::max({0.0, a(5), b(5)}) + vm;
  if (planar) {
    box.lower(2) = box.upper(2) = 0.0;
    box.lower(5) = box.upper(5) = 0.0;
  }
  return box;
}

std::vector<LegSpec> Scenario::leg_specs(std::optional<std::size_t> n_per_leg) const {
  std::vector<LegSpec> out;
  const std::size_t n = n_per_leg.value_or(planner.n);
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const WaypointSpec& wp = waypoints[i];
    LegSpec spec;
    spec.space.box = wp.sample_box ? *wp.sample_box : derived_leg_box(i);
    spec.space.planar = planar;
    spec.goal.center = wp.state;
    spec.goal.eps_r = wp.eps_r;
    spec.goal.eps_v = wp.eps_v;
    spec.n = n;
    spec.exact = wp.exact;
    spec.n_goal = wp.exact ? 0
                           : std::max<std::size_t>(
                                 1, static_cast<std::size_t>(
                                        std::llround(planner.goal_fraction * static_cast<double>(n))));
    out.push_back(spec);
  }
  return out;
}

}  // namespace cwhfmt
