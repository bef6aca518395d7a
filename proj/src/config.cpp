#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "hedac/errors.hpp"
#include "hedac/scenario.hpp"

namespace hedac {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

/// Typed access to one JSON object with key-path diagnostics and a check for
/// unrecognized keys.
class Table {
 public:
  Table(const json& obj, std::string path, std::initializer_list<std::string_view> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("expected a table", path_);
    for (auto key : allowed) allowed_.emplace(key);
    for (const auto& item : obj_.items()) {
      if (!allowed_.count(item.key())) throw ConfigError("unknown key", join(path_, item.key()));
    }
  }

  bool has(std::string_view key) const { return obj_.contains(key); }
  std::string key(std::string_view k) const { return join(path_, k); }

  const json& at(std::string_view k) const {
    if (!obj_.contains(k)) throw ConfigError("missing required key", key(k));
    return obj_.at(std::string(k));
  }

  double number(std::string_view k) const {
    const json& v = at(k);
    if (!v.is_number()) throw ConfigError("expected a number", key(k));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("expected a finite number", key(k));
    return d;
  }
  double number(std::string_view k, double fallback) const { return has(k) ? number(k) : fallback; }

  long long integer(std::string_view k) const {
    const json& v = at(k);
    if (!v.is_number_integer()) throw ConfigError("expected an integer", key(k));
    return v.get<long long>();
  }
  long long integer(std::string_view k, long long fallback) const { return has(k) ? integer(k) : fallback; }

  std::uint64_t unsigned_integer(std::string_view k, std::uint64_t fallback) const {
    if (!has(k)) return fallback;
    const json& v = at(k);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      throw ConfigError("expected a non-negative integer", key(k));
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(std::string_view k, bool fallback) const {
    if (!has(k)) return fallback;
    const json& v = at(k);
    if (!v.is_boolean()) throw ConfigError("expected true or false", key(k));
    return v.get<bool>();
  }

  std::string string(std::string_view k) const {
    const json& v = at(k);
    if (!v.is_string()) throw ConfigError("expected a string", key(k));
    return v.get<std::string>();
  }
  std::string string(std::string_view k, std::string fallback) const { return has(k) ? string(k) : fallback; }

  Vec2 vec2(std::string_view k) const {
    const json& v = at(k);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError("expected [x, y]", key(k));
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string, std::less<>> allowed_;
};

// --- sensors ---------------------------------------------------------------

SensorModel parse_sensor(const json& j, const std::string& path) {
  Table t(j, path, {"kind", "params", "gain", "target_intensity"});
  const std::string kind = t.string("kind");
  const json empty = json::object();
  const json& p = t.has("params") ? t.at("params") : empty;
  SensorShape shape;
  if (kind == "gaussian_disc") {
    Table pt(p, t.key("params"), {"sigma"});
    shape = GaussianDisc{pt.number("sigma", GaussianDisc{}.sigma)};
  } else if (kind == "offset_gaussian") {
    Table pt(p, t.key("params"), {"offset", "sigma"});
    const OffsetGaussian d;
    shape = OffsetGaussian{pt.number("offset", d.offset), pt.number("sigma", d.sigma)};
  } else if (kind == "forward_ellipse") {
    Table pt(p, t.key("params"), {"offset", "forward", "lateral", "falloff"});
    const ForwardEllipse d;
    shape = ForwardEllipse{pt.number("offset", d.offset), pt.number("forward", d.forward),
                           pt.number("lateral", d.lateral), pt.number("falloff", d.falloff)};
  } else {
    throw ConfigError("unknown sensor kind '" + kind + "'", t.key("kind"));
  }
  try {
    if (t.has("gain") && t.has("target_intensity")) {
      throw ConfigError("give either gain or target_intensity, not both", path);
    }
    if (t.has("target_intensity")) return SensorModel::calibrated(shape, t.number("target_intensity"));
    return SensorModel(shape, t.number("gain"));
  } catch (const ConfigError& e) {
    if (!e.key().empty()) throw;
    throw ConfigError(e.what(), path);
  }
}

json serialize_sensor(const SensorModel& s) {
  json out;
  std::visit(
      [&out](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, GaussianDisc>) {
          out["kind"] = "gaussian_disc";
          out["params"] = {{"sigma", shape.sigma}};
        } else if constexpr (std::is_same_v<T, OffsetGaussian>) {
          out["kind"] = "offset_gaussian";
          out["params"] = {{"offset", shape.offset}, {"sigma", shape.sigma}};
        } else {
          out["kind"] = "forward_ellipse";
          out["params"] = {{"offset", shape.offset},
                           {"forward", shape.forward},
                           {"lateral", shape.lateral},
                           {"falloff", shape.falloff}};
        }
      },
      s.shape());
  out["gain"] = s.gain();
  return out;
}

// --- agents ----------------------------------------------------------------

AgentState parse_agent(const json& j, const std::string& path, const Domain& domain) {
  Table t(j, path, {"v", "r_turn", "model", "z0", "theta0", "sensor"});
  AgentState a;
  a.v = t.number("v");
  if (!(a.v > 0.0)) throw ConfigError("speed must be positive", t.key("v"));
  const std::string model = t.string("model", "dubins");
  if (model == "dubins") {
    a.model = MotionModel::dubins;
  } else if (model == "kinematic") {
    a.model = MotionModel::kinematic;
  } else {
    throw ConfigError("expected 'kinematic' or 'dubins'", t.key("model"));
  }
  a.r_turn = t.number("r_turn", 0.0);
  if (a.model == MotionModel::dubins && !(a.r_turn > 0.0)) {
    throw ConfigError("dubins agents need a positive turning radius", t.key("r_turn"));
  }
  if (a.r_turn < 0.0) throw ConfigError("must be >= 0", t.key("r_turn"));
  a.z = t.vec2("z0");
  if (!domain.contains(a.z)) throw ConfigError("initial position outside the domain", t.key("z0"));
  a.theta = t.number("theta0", 0.0);
  a.sensor = parse_sensor(t.at("sensor"), t.key("sensor"));
  return a;
}

json serialize_agent(const AgentState& a) {
  return {{"v", a.v},
          {"r_turn", a.r_turn},
          {"model", a.model == MotionModel::kinematic ? "kinematic" : "dubins"},
          {"z0", {a.z.x, a.z.y}},
          {"theta0", a.theta},
          {"sensor", serialize_sensor(a.sensor)}};
}

// --- priors ----------------------------------------------------------------

std::ifstream open_geometry(const std::filesystem::path& base_dir, const std::string& file, const std::string& key) {
  std::filesystem::path p(file);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open geometry file '" + p.string() + "'", key);
  return in;
}

PriorSpec parse_prior(const json& j, const std::filesystem::path& base_dir) {
  const std::string path = "prior";
  if (!j.is_object()) throw ConfigError("expected a table", path);
  const std::string kind = j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "gaussian") {
    Table t(j, path, {"kind", "center", "sigma"});
    GaussianPrior g;
    g.center = t.vec2("center");
    const json& s = t.at("sigma");
    if (s.is_number()) {
      g.sigma_x = g.sigma_y = s.get<double>();
    } else {
      const Vec2 sv = t.vec2("sigma");
      g.sigma_x = sv.x;
      g.sigma_y = sv.y;
    }
    return g;
  }
  if (kind == "regions") {
    Table t(j, path, {"kind", "circles", "geometry_file"});
    if (t.has("geometry_file")) {
      std::ifstream in = open_geometry(base_dir, t.string("geometry_file"), t.key("geometry_file"));
      return read_circles(in);
    }
    CircleSet set;
    const json& circles = t.at("circles");
    if (!circles.is_array()) throw ConfigError("expected a list", t.key("circles"));
    for (std::size_t k = 0; k < circles.size(); ++k) {
      const json& c = circles[k];
      const std::string key = t.key("circles") + "." + std::to_string(k);
      if (!c.is_array() || c.size() != 4 || !c[0].is_string() || !c[1].is_number() || !c[2].is_number() ||
          !c[3].is_number()) {
        throw ConfigError("expected [\"+\"|\"-\", xc, yc, r]", key);
      }
      const Circle circle{{c[1].get<double>(), c[2].get<double>()}, c[3].get<double>()};
      const std::string sign = c[0].get<std::string>();
      if (sign == "+") {
        set.minuends.push_back(circle);
      } else if (sign == "-") {
        set.subtrahends.push_back(circle);
      } else {
        throw ConfigError("circle sign must be + or -", key);
      }
    }
    return set;
  }
  if (kind == "roads") {
    Table t(j, path, {"kind", "sigma", "segments", "geometry_file"});
    const double sigma = t.number("sigma");
    if (t.has("geometry_file")) {
      std::ifstream in = open_geometry(base_dir, t.string("geometry_file"), t.key("geometry_file"));
      return read_roads(in, sigma);
    }
    RoadNetwork net;
    net.sigma = sigma;
    const json& segs = t.at("segments");
    if (!segs.is_array()) throw ConfigError("expected a list", t.key("segments"));
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const json& s = segs[k];
      if (!s.is_array() || s.size() != 4 || !std::all_of(s.begin(), s.end(), [](const json& v) { return v.is_number(); })) {
        throw ConfigError("expected [x1, y1, x2, y2]", t.key("segments") + "." + std::to_string(k));
      }
      net.segments.push_back({{s[0].get<double>(), s[1].get<double>()}, {s[2].get<double>(), s[3].get<double>()}});
    }
    return net;
  }
  throw ConfigError("expected 'gaussian', 'regions' or 'roads'", "prior.kind");
}

json serialize_prior(const PriorSpec& spec) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GaussianPrior>) {
          return {{"kind", "gaussian"}, {"center", {p.center.x, p.center.y}}, {"sigma", {p.sigma_x, p.sigma_y}}};
        } else if constexpr (std::is_same_v<T, CircleSet>) {
          json circles = json::array();
          for (const Circle& c : p.minuends) circles.push_back({"+", c.center.x, c.center.y, c.radius});
          for (const Circle& c : p.subtrahends) circles.push_back({"-", c.center.x, c.center.y, c.radius});
          return {{"kind", "regions"}, {"circles", circles}};
        } else {
          json segs = json::array();
          for (const RoadSegment& s : p.segments) segs.push_back({s.start.x, s.start.y, s.end.x, s.end.y});
          return {{"kind", "roads"}, {"sigma", p.sigma}, {"segments", segs}};
        }
      },
      spec);
}

// --- controllers -----------------------------------------------------------

const json& table_or_empty(const json& doc, const char* key) {
  static const json empty = json::object();
  return doc.contains(key) ? doc.at(key) : empty;
}

ControllerKind parse_controller(const json& doc) {
  std::string kind = "hedac";
  if (doc.contains("controller")) {
    Table t(doc.at("controller"), "controller", {"kind"});
    kind = t.string("kind", kind);
  }
  if (kind == "hedac") {
    Table t(table_or_empty(doc, "hedac"), "hedac", {"alpha", "beta", "tol", "length_scale", "max_iters", "preconditioner"});
    HedacParams p;
    p.alpha = t.number("alpha", p.alpha);
    p.beta = t.number("beta", p.beta);
    p.solver_tol = t.number("tol", p.solver_tol);
    p.length_scale = t.number("length_scale", p.length_scale);
    p.max_iters = static_cast<int>(t.integer("max_iters", p.max_iters));
    const std::string pc = t.string("preconditioner", "spectral");
    if (pc == "spectral") {
      p.preconditioner = Preconditioner::spectral;
    } else if (pc == "jacobi") {
      p.preconditioner = Preconditioner::jacobi;
    } else {
      throw ConfigError("expected 'spectral' or 'jacobi'", "hedac.preconditioner");
    }
    p.validate();
    return p;
  }
  if (kind == "lawnmower") {
    Table t(table_or_empty(doc, "lawnmower"), "lawnmower", {"lane_spacing", "orientation", "interleave"});
    LawnmowerParams p;
    p.lane_spacing = t.number("lane_spacing", p.lane_spacing);
    const std::string o = t.string("orientation", "horizontal");
    if (o == "horizontal") {
      p.orientation = LaneOrientation::horizontal;
    } else if (o == "vertical") {
      p.orientation = LaneOrientation::vertical;
    } else {
      throw ConfigError("expected 'horizontal' or 'vertical'", "lawnmower.orientation");
    }
    p.interleave = t.boolean("interleave", p.interleave);
    p.validate();
    return p;
  }
  if (kind == "smc") {
    Table t(table_or_empty(doc, "smc"), "smc", {"k_modes", "exponent", "use_log_prior", "log_floor"});
    SmcParams p;
    p.k_modes = static_cast<int>(t.integer("k_modes", p.k_modes));
    p.exponent = t.number("exponent", p.exponent);
    p.use_log_prior = t.boolean("use_log_prior", p.use_log_prior);
    p.log_floor = t.number("log_floor", p.log_floor);
    p.validate();
    return p;
  }
  if (kind == "rhc") {
    Table t(table_or_empty(doc, "rhc"), "rhc",
            {"horizon_steps", "swarm_size", "pso_iters", "inertia", "cognitive", "social", "rng_seed",
             "max_dimensions"});
    RhcParams p;
    p.horizon_steps = static_cast<int>(t.integer("horizon_steps", p.horizon_steps));
    p.swarm_size = static_cast<int>(t.integer("swarm_size", p.swarm_size));
    p.pso_iters = static_cast<int>(t.integer("pso_iters", p.pso_iters));
    p.inertia = t.number("inertia", p.inertia);
    p.cognitive = t.number("cognitive", p.cognitive);
    p.social = t.number("social", p.social);
    p.rng_seed = t.unsigned_integer("rng_seed", p.rng_seed);
    p.max_dimensions = static_cast<int>(t.integer("max_dimensions", p.max_dimensions));
    p.validate();
    return p;
  }
  throw ConfigError("expected 'hedac', 'lawnmower', 'smc' or 'rhc'", "controller.kind");
}

void serialize_controller(const ControllerKind& kind, json& doc) {
  doc["controller"] = {{"kind", std::string(controller_name(kind))}};
  std::visit(
      [&doc](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HedacParams>) {
          doc["hedac"] = {{"alpha", p.alpha},
                          {"beta", p.beta},
                          {"tol", p.solver_tol},
                          {"length_scale", p.length_scale},
                          {"max_iters", p.max_iters},
                          {"preconditioner", p.preconditioner == Preconditioner::spectral ? "spectral" : "jacobi"}};
        } else if constexpr (std::is_same_v<T, LawnmowerParams>) {
          doc["lawnmower"] = {{"lane_spacing", p.lane_spacing},
                              {"orientation", p.orientation == LaneOrientation::horizontal ? "horizontal" : "vertical"},
                              {"interleave", p.interleave}};
        } else if constexpr (std::is_same_v<T, SmcParams>) {
          doc["smc"] = {{"k_modes", p.k_modes},
                        {"exponent", p.exponent},
                        {"use_log_prior", p.use_log_prior},
                        {"log_floor", p.log_floor}};
        } else {
          doc["rhc"] = {{"horizon_steps", p.horizon_steps}, {"swarm_size", p.swarm_size},
                        {"pso_iters", p.pso_iters},         {"inertia", p.inertia},
                        {"cognitive", p.cognitive},         {"social", p.social},
                        {"rng_seed", p.rng_seed},           {"max_dimensions", p.max_dimensions}};
        }
      },
      kind);
}

// --- reference scenarios ---------------------------------------------------

json sensor_entry(const char* kind, json params, double intensity) {
  return {{"kind", kind}, {"params", std::move(params)}, {"target_intensity", intensity}};
}

struct AgentTemplate {
  double v;
  double r_turn;
  json sensor;
};

struct Pose {
  double x, y, theta;
};

json controller_tables(double beta) {
  return {{"controller", {{"kind", "hedac"}}},
          {"hedac", {{"alpha", 0.03}, {"beta", beta}, {"tol", 1e-6}, {"length_scale", 1000.0}, {"preconditioner", "spectral"}}},
          {"lawnmower", {{"lane_spacing", 0.0}, {"orientation", "horizontal"}, {"interleave", true}}},
          {"smc", {{"k_modes", 50}, {"exponent", 1.5}, {"use_log_prior", true}, {"log_floor", 1e-3}}},
          {"rhc",
           {{"horizon_steps", 10},
            {"swarm_size", 40},
            {"pso_iters", 30},
            {"inertia", 0.7},
            {"cognitive", 1.5},
            {"social", 1.5},
            {"rng_seed", 0},
            {"max_dimensions", 256}}}};
}

}  // namespace

CircleSet default_test2_circles() {
  CircleSet s;
  s.minuends = {{{1100, 1250}, 420}, {{1550, 1500}, 380}, {{1250, 1850}, 330}, {{1900, 1050}, 300},
                {{2450, 2350}, 260}};
  s.subtrahends = {{{1350, 1500}, 140}, {{2050, 850}, 130}};
  return s;
}

RoadNetwork default_test3_roads() {
  RoadNetwork net;
  net.sigma = 100.0;
  net.segments = {
      {{0, 1000}, {900, 1150}},    {{900, 1150}, {1900, 900}},  {{1900, 900}, {2900, 1050}},
      {{2900, 1050}, {4000, 1250}}, {{1900, 900}, {2250, 1500}}, {{2250, 1500}, {2500, 2000}},
      {{900, 1150}, {1200, 550}},   {{1200, 550}, {1500, 0}},    {{2900, 1050}, {3350, 450}},
      {{3350, 450}, {3600, 0}},
  };
  return net;
}

TestId parse_test_id(std::string_view name) {
  if (name == "test1") return TestId::test1;
  if (name == "test2") return TestId::test2;
  if (name == "test3") return TestId::test3;
  throw ConfigError("unknown test id '" + std::string(name) + "'", "base");
}

std::string_view test_name(TestId id) {
  switch (id) {
    case TestId::test1: return "test1";
    case TestId::test2: return "test2";
    default: return "test3";
  }
}

json test_config(TestId id, double scale, int n_agents) {
  if (!(scale > 0.0)) throw ConfigError("must be positive", "scale");
  if (n_agents < 0) throw ConfigError("must be >= 0", "n_agents");
  json doc;
  double width = 0, height = 0, cells_x = 0, cells_y = 0, beta = 2.0;
  std::vector<AgentTemplate> kinds;
  std::vector<Pose> poses;

  switch (id) {
    case TestId::test1: {
      width = height = 1000;
      cells_x = cells_y = 250;
      beta = 4.0;
      doc["prior"] = {{"kind", "gaussian"}, {"center", {500 * scale, 500 * scale}}, {"sigma", {150 * scale, 150 * scale}}};
      const json sensor = sensor_entry("gaussian_disc", {{"sigma", 10.0}}, 316.91);
      for (int i = 1; i <= 5; ++i) {
        kinds.push_back({20.0, 30.0, sensor});
        const double a = (i - 1) * 2.0 * kPi / 5.0;
        poses.push_back({500 + 70.0 * i * std::cos(a), 500 + 70.0 * i * std::sin(a), (i - 1) * kPi / 5.0 + kPi});
      }
      doc["dt"] = 0.25;
      doc["t_end"] = 600.0;
      break;
    }
    case TestId::test2: {
      width = height = 3000;
      cells_x = cells_y = 600;
      json circles = json::array();
      const CircleSet set = default_test2_circles();
      for (const Circle& c : set.minuends) circles.push_back({"+", c.center.x * scale, c.center.y * scale, c.radius * scale});
      for (const Circle& c : set.subtrahends) circles.push_back({"-", c.center.x * scale, c.center.y * scale, c.radius * scale});
      doc["prior"] = {{"kind", "regions"}, {"circles", circles}};
      const AgentTemplate pairs[3] = {
          {16.0, 26.0, sensor_entry("gaussian_disc", {{"sigma", 15.0}}, 937.76)},
          {20.0, 29.0, sensor_entry("offset_gaussian", {{"offset", 10.0}, {"sigma", 12.0}}, 800.24)},
          {31.0, 43.0,
           sensor_entry("forward_ellipse", {{"offset", 15.0}, {"forward", 20.0}, {"lateral", 12.0}, {"falloff", 0.4}},
                        641.25)},
      };
      for (const AgentTemplate& t : pairs) {
        kinds.push_back(t);
        kinds.push_back(t);
      }
      poses = {{1000, 500, 0.0},         {400, 1000, kPi / 6},        {1500, 1000, kPi / 3},
               {1500, 2000, kPi / 2},    {2700, 2000, 2 * kPi / 3},  {2300, 2600, 5 * kPi / 6}};
      doc["dt"] = 0.5;
      doc["t_end"] = 1800.0;
      break;
    }
    case TestId::test3: {
      width = 4000;
      height = 2000;
      cells_x = 800;
      cells_y = 400;
      const RoadNetwork net = default_test3_roads();
      json segs = json::array();
      for (const RoadSegment& s : net.segments) {
        segs.push_back({s.start.x * scale, s.start.y * scale, s.end.x * scale, s.end.y * scale});
      }
      doc["prior"] = {{"kind", "roads"}, {"sigma", net.sigma * scale}, {"segments", segs}};
      const AgentTemplate slow{20.0, 36.0, sensor_entry("offset_gaussian", {{"offset", 8.0}, {"sigma", 14.0}}, 1096.06)};
      const AgentTemplate fast{
          34.0, 48.0,
          sensor_entry("forward_ellipse", {{"offset", 20.0}, {"forward", 25.0}, {"lateral", 18.0}, {"falloff", 0.4}},
                       1428.25)};
      kinds = {slow, slow, slow, fast, fast};
      // road entry points on the boundary, heading along the inward normal
      poses = {{0, 1000, 0.0}, {1500, 0, kPi / 2}, {2500, 2000, -kPi / 2}, {4000, 1250, kPi}, {3600, 0, kPi / 2}};
      doc["dt"] = 0.5;
      doc["t_end"] = 3000.0;
      break;
    }
  }

  if (n_agents > 0) {
    const AgentTemplate first = kinds.front();
    const std::size_t defaults = poses.size();
    kinds.assign(static_cast<std::size_t>(n_agents), first);
    for (int i = static_cast<int>(defaults); i < n_agents; ++i) {
      // extra agents start on a ring around the domain center
      const double a = 2.0 * kPi * i / n_agents;
      const double r = 0.3 * std::min(width, height);
      poses.push_back({0.5 * width + r * std::cos(a), 0.5 * height + r * std::sin(a), a + kPi / 2});
    }
    poses.resize(static_cast<std::size_t>(n_agents));
  }

  doc["name"] = std::string(test_name(id)) + (scale != 1.0 ? "-scaled" : "");
  doc["grid"] = {{"width", width * scale},
                 {"height", height * scale},
                 {"nx", std::max(2, static_cast<int>(std::lround(cells_x * scale)))},
                 {"ny", std::max(2, static_cast<int>(std::lround(cells_y * scale)))}};
  json fleet = json::array();
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    fleet.push_back({{"v", kinds[k].v},
                     {"r_turn", kinds[k].r_turn},
                     {"model", "dubins"},
                     {"z0", {poses[k].x * scale, poses[k].y * scale}},
                     {"theta0", poses[k].theta},
                     {"sensor", kinds[k].sensor}});
  }
  doc["fleet"] = fleet;
  doc.update(controller_tables(beta));
  doc["n_targets"] = 1000;
  doc["seed"] = 1;
  return doc;
}

void apply_override(json& doc, std::string_view path, const json& value) {
  if (path.empty()) throw ConfigError("empty override key");
  json* node = &doc;
  std::size_t start = 0;
  const std::string full(path);
  while (true) {
    const std::size_t dot = full.find('.', start);
    const std::string seg = full.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (seg.empty()) throw ConfigError("malformed override key", full);
    json* next = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(seg, &used);
        if (used != seg.size()) throw std::invalid_argument(seg);
      } catch (const std::exception&) {
        throw ConfigError("expected an array index", full);
      }
      if (idx >= node->size()) throw ConfigError("array index out of range", full);
      next = &(*node)[idx];
    } else if (node->is_object() || node->is_null()) {
      next = &(*node)[seg];
    } else {
      throw ConfigError("cannot descend into a scalar", full);
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    node = next;
    start = dot + 1;
  }
}

std::pair<std::string, json> parse_override(std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'");
  }
  std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  return {std::move(key), std::move(value)};
}

json expand_config(const json& input, const Overrides& overrides) {
  if (!input.is_object()) throw ConfigError("configuration must be a table");
  json doc = input;
  auto is_layout_key = [](const std::string& k) { return k == "base" || k == "scale" || k == "n_agents"; };
  for (const auto& [key, value] : overrides) {
    if (is_layout_key(key)) doc[key] = value;
  }
  if (doc.contains("base")) {
    if (!doc["base"].is_string()) throw ConfigError("expected a test id", "base");
    const TestId id = parse_test_id(doc["base"].get<std::string>());
    double scale = 1.0;
    int n_agents = 0;
    if (doc.contains("scale")) {
      if (!doc["scale"].is_number()) throw ConfigError("expected a number", "scale");
      scale = doc["scale"].get<double>();
    }
    if (doc.contains("n_agents")) {
      if (!doc["n_agents"].is_number_integer()) throw ConfigError("expected an integer", "n_agents");
      n_agents = doc["n_agents"].get<int>();
    }
    json base = test_config(id, scale, n_agents);
    doc.erase("base");
    doc.erase("scale");
    doc.erase("n_agents");
    base.merge_patch(doc);
    doc = std::move(base);
  } else if (doc.contains("scale") || doc.contains("n_agents")) {
    throw ConfigError("only valid together with 'base'", doc.contains("scale") ? "scale" : "n_agents");
  }
  for (const auto& [key, value] : overrides) {
    if (!is_layout_key(key)) apply_override(doc, key, value);
  }
  return doc;
}

Scenario build_test_scenario(TestId id, const Overrides& overrides) {
  return parse_scenario(expand_config({{"base", std::string(test_name(id))}}, overrides));
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  Table top(doc, "",
            {"name", "grid", "prior", "fleet", "controller", "hedac", "lawnmower", "smc", "rhc", "dt", "t_end",
             "n_targets", "seed"});
  Scenario s;
  s.name = top.string("name", "scenario");

  {
    Table g(top.at("grid"), "grid", {"width", "height", "nx", "ny"});
    const long long nx = g.integer("nx");
    const long long ny = g.integer("ny");
    if (nx < 2 || ny < 2 || nx > 100000 || ny > 100000) throw ConfigError("cell counts must be in [2, 100000]", "grid");
    const double w = g.number("width");
    const double h = g.number("height");
    if (!(w > 0.0) || !(h > 0.0)) throw ConfigError("extent must be positive", "grid");
    s.grid = GridSpec(w, h, static_cast<int>(nx), static_cast<int>(ny));
  }

  s.prior_spec = parse_prior(top.at("prior"), base_dir);
  try {
    s.prior = build_prior(s.grid, s.prior_spec);
  } catch (const DegeneratePriorError& e) {
    throw ConfigError(e.what(), "prior");
  }

  const json& fleet = top.at("fleet");
  if (!fleet.is_array()) throw ConfigError("expected a list of agents", "fleet");
  for (std::size_t k = 0; k < fleet.size(); ++k) {
    s.fleet.push_back(parse_agent(fleet[k], "fleet." + std::to_string(k), s.grid.domain()));
  }

  s.controller = parse_controller(doc);
  s.dt = top.number("dt", s.dt);
  s.t_end = top.number("t_end", s.t_end);
  const long long targets = top.integer("n_targets", s.n_targets);
  if (targets < 0 || targets > 100000000) throw ConfigError("must be >= 0", "n_targets");
  s.n_targets = static_cast<int>(targets);
  s.seed = top.unsigned_integer("seed", s.seed);
  s.validate();
  return s;
}

json serialize_scenario(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["grid"] = {{"width", s.grid.width()}, {"height", s.grid.height()}, {"nx", s.grid.nx()}, {"ny", s.grid.ny()}};
  doc["prior"] = serialize_prior(s.prior_spec);
  json fleet = json::array();
  for (const AgentState& a : s.fleet) fleet.push_back(serialize_agent(a));
  doc["fleet"] = fleet;
  serialize_controller(s.controller, doc);
  doc["dt"] = s.dt;
  doc["t_end"] = s.t_end;
  doc["n_targets"] = s.n_targets;
  doc["seed"] = s.seed;
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": syntax error: " + e.what());
  }
  return parse_scenario(expand_config(doc, overrides), path.parent_path());
}

std::size_t Scenario::steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

void Scenario::validate() const {
  if (!(dt > 0.0)) throw ConfigError("must be positive", "dt");
  if (!(t_end >= dt)) throw ConfigError("must be >= dt", "t_end");
  if (n_targets < 0) throw ConfigError("must be >= 0", "n_targets");
  if (!(prior.spec() == grid)) throw ConfigError("prior grid does not match", "prior");
  const double mass = integrate(prior);
  if (std::abs(mass - 1.0) > 1e-9) throw ConfigError("prior is not normalized", "prior");
  for (std::size_t k = 0; k < fleet.size(); ++k) {
    if (!grid.domain().contains(fleet[k].z)) {
      throw ConfigError("initial position outside the domain", "fleet." + std::to_string(k) + ".z0");
    }
  }
}

CircleSet read_circles(std::istream& in) {
  CircleSet set;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string sign;
    if (!(ls >> sign)) continue;
    Circle c;
    if (!(ls >> c.center.x >> c.center.y >> c.radius) || (sign != "+" && sign != "-")) {
      throw ConfigError("geometry line " + std::to_string(number) + ": expected '+|- xc yc r'", "prior.geometry_file");
    }
    (sign == "+" ? set.minuends : set.subtrahends).push_back(c);
  }
  return set;
}

RoadNetwork read_roads(std::istream& in, double sigma) {
  RoadNetwork net;
  net.sigma = sigma;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    RoadSegment s;
    if (!(ls >> s.start.x)) continue;
    if (!(ls >> s.start.y >> s.end.x >> s.end.y)) {
      throw ConfigError("geometry line " + std::to_string(number) + ": expected 'x1 y1 x2 y2'", "prior.geometry_file");
    }
    net.segments.push_back(s);
  }
  return net;
}

}  // namespace hedac
