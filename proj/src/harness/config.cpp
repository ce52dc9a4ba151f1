#include "zominimax/harness/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace zominimax::harness {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  ~Reader() = default;

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(field(it.key()), "unknown field");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    return v.get<double>();
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    return count_value(j_.at(key), field(key));
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    if (!has(key)) return fallback;
    return number_list(j_.at(key), field(key));
  }

  static std::uint64_t count_value(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) fail(where, "expected a non-negative integer");
      return v.get<std::uint64_t>();
    }
    fail(where, "expected a non-negative integer");
  }

  static std::vector<double> number_list(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) fail(where, "expected a number or an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(where, "array entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config field '" + (where.empty() ? std::string("<root>") : where) + "': " + what);
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

FamilyKind parse_family(const std::string& s, const std::string& where) {
  if (s == "quadratic") return FamilyKind::quadratic;
  if (s == "trig") return FamilyKind::trig;
  Reader::fail(where, "unknown family '" + s + "' (expected quadratic or trig)");
}

SetConfig parse_set(const json& j, const std::string& path) {
  Reader r(j, path);
  SetConfig s;
  s.kind = r.string("kind", s.kind);
  if (s.kind != "ball" && s.kind != "box" && s.kind != "whole")
    Reader::fail(r.field("kind"), "expected ball, box or whole");
  s.radius = r.number("radius", s.radius);
  s.center = r.numbers("center", {});
  s.lower = r.numbers("lower", {});
  s.upper = r.numbers("upper", {});
  if (s.kind == "ball" && !(s.radius > 0.0)) Reader::fail(r.field("radius"), "must be positive");
  if (s.kind == "box" && (s.lower.empty() || s.upper.empty()))
    Reader::fail(path, "box requires 'lower' and 'upper'");
  r.finish();
  return s;
}

ProblemConfig parse_problem(const json& j) {
  Reader r(j, "problem");
  ProblemConfig p;
  p.family = parse_family(r.string("family", std::string(to_string(p.family))), "problem.family");
  p.d1 = static_cast<std::int64_t>(r.count("d1", p.d1));
  p.d2 = static_cast<std::int64_t>(r.count("d2", p.d2));
  p.tau = r.number("tau", p.tau);
  p.kappa = r.number("kappa", p.kappa);
  p.coupling = r.number("coupling", p.coupling);
  p.indefinite = r.boolean("indefinite", p.indefinite);
  p.seed = r.count("seed", p.seed);
  if (r.has("set")) p.set = parse_set(r.at("set"), "problem.set");
  p.sigma1 = r.number("sigma1", p.sigma1);
  p.sigma2 = r.number("sigma2", p.sigma2);
  r.finish();
  if (p.d1 < 1) Reader::fail("problem.d1", "must be at least 1");
  if (p.d2 < 1) Reader::fail("problem.d2", "must be at least 1");
  if (!(p.tau > 0.0)) Reader::fail("problem.tau", "must be positive");
  if (!(p.kappa >= 1.0)) Reader::fail("problem.kappa", "must be at least 1");
  if (!(p.coupling >= 0.0 && p.coupling <= 1.0)) Reader::fail("problem.coupling", "must lie in [0, 1]");
  if (!(p.sigma1 >= 0.0)) Reader::fail("problem.sigma1", "must be non-negative");
  if (!(p.sigma2 >= 0.0)) Reader::fail("problem.sigma2", "must be non-negative");
  return p;
}

ConstantOverrides parse_overrides(const json& j) {
  Reader r(j, "solver.overrides");
  ConstantOverrides o;
  o.C_S = r.number("C_S", o.C_S);
  o.C_mu = r.number("C_mu", o.C_mu);
  o.C_T = r.number("C_T", o.C_T);
  if (r.has("eta1")) o.eta1 = r.number("eta1", 0.0);
  if (r.has("eta1_scale")) o.eta1_scale = r.number("eta1_scale", 1.0);
  if (r.has("S")) o.S = r.count("S", 0);
  if (r.has("T")) o.T = r.count("T", 1);
  r.finish();
  if (!(o.C_S >= 0.0)) Reader::fail("solver.overrides.C_S", "must be non-negative");
  if (!(o.C_mu > 0.0)) Reader::fail("solver.overrides.C_mu", "must be positive");
  if (!(o.C_T > 0.0)) Reader::fail("solver.overrides.C_T", "must be positive");
  if (o.eta1 && !(*o.eta1 > 0.0)) Reader::fail("solver.overrides.eta1", "must be positive");
  if (o.eta1_scale && !(*o.eta1_scale > 0.0)) Reader::fail("solver.overrides.eta1_scale", "must be positive");
  if (o.T && *o.T == 0) Reader::fail("solver.overrides.T", "must be at least 1");
  return o;
}

VerifyConfig parse_verify(const json& j) {
  Reader r(j, "verify");
  VerifyConfig v;
  v.mu = r.numbers("mu", v.mu);
  v.samples = r.count("samples", v.samples);
  v.eps = r.number("eps", v.eps);
  if (r.has("sigma1")) v.sigma1 = r.number("sigma1", 0.0);
  if (r.has("sigma2")) v.sigma2 = r.number("sigma2", 0.0);
  if (r.has("families")) {
    const json& f = r.at("families");
    if (!f.is_array()) Reader::fail("verify.families", "expected an array of family names");
    v.families.clear();
    for (const auto& e : f) {
      if (!e.is_string()) Reader::fail("verify.families", "entries must be strings");
      v.families.push_back(parse_family(e.get<std::string>(), "verify.families"));
    }
  }
  r.finish();
  if (v.mu.empty()) Reader::fail("verify.mu", "must not be empty");
  for (double m : v.mu)
    if (!(m > 0.0)) Reader::fail("verify.mu", "entries must be positive");
  if (v.samples < 2) Reader::fail("verify.samples", "must be at least 2");
  if (!(v.eps > 0.0 && v.eps < 1.0)) Reader::fail("verify.eps", "must lie in (0, 1)");
  return v;
}

json set_to_json(const SetConfig& s) {
  json j{{"kind", s.kind}, {"radius", s.radius}, {"center", s.center}};
  if (s.kind == "box") {
    j["lower"] = s.lower;
    j["upper"] = s.upper;
  }
  return j;
}

}  // namespace

std::string_view to_string(FamilyKind f) noexcept { return f == FamilyKind::quadratic ? "quadratic" : "trig"; }

ExperimentConfig parse_config(const json& j) {
  Reader r(j, "");
  ExperimentConfig c;
  if (r.has("problem")) c.problem = parse_problem(r.at("problem"));
  if (r.has("solver")) {
    Reader s(r.at("solver"), "solver");
    c.mode = parse_mode(s.string("mode", std::string(to_string(c.mode))));
    if (s.has("eps")) c.eps_grid = Reader::number_list(s.at("eps"), "solver.eps");
    if (s.has("overrides")) c.overrides = parse_overrides(s.at("overrides"));
    s.finish();
  }
  if (r.has("init")) {
    Reader i(r.at("init"), "init");
    if (i.has("x0")) c.x0 = i.numbers("x0", {});
    if (i.has("y0")) c.y0 = i.numbers("y0", {});
    c.x0_scale = i.number("x0_scale", c.x0_scale);
    i.finish();
  }
  c.repetitions = static_cast<std::uint32_t>(r.count("repetitions", c.repetitions));
  c.seed = r.count("seed", c.seed);
  if (r.has("trace_stride")) c.trace_stride = r.count("trace_stride", 1);
  c.output_dir = r.string("output_dir", c.output_dir);
  if (r.has("verify")) c.verify = parse_verify(r.at("verify"));
  r.finish();

  if (c.repetitions < 1) Reader::fail("repetitions", "must be at least 1");
  if (c.eps_grid.empty()) Reader::fail("solver.eps", "must not be empty");
  for (double e : c.eps_grid)
    if (!(e > 0.0 && e < 1.0)) Reader::fail("solver.eps", "entries must lie in (0, 1)");
  if (c.trace_stride && *c.trace_stride < 1) Reader::fail("trace_stride", "must be at least 1");
  if (c.x0 && std::int64_t(c.x0->size()) != c.problem.d1) Reader::fail("init.x0", "length must equal problem.d1");
  if (c.y0 && std::int64_t(c.y0->size()) != c.problem.d2) Reader::fail("init.y0", "length must equal problem.d2");
  if (is_multistep(c.mode) && c.problem.set.kind == "whole")
    Reader::fail("problem.set.kind", std::string(to_string(c.mode)) + " requires a bounded set (ball or box)");
  // Surface set/dimension mismatches as config errors.
  build_set(c.problem.set, c.problem.d2);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json ov{{"C_S", c.overrides.C_S}, {"C_mu", c.overrides.C_mu}, {"C_T", c.overrides.C_T}};
  ov["eta1"] = c.overrides.eta1 ? json(*c.overrides.eta1) : json(nullptr);
  ov["eta1_scale"] = c.overrides.eta1_scale ? json(*c.overrides.eta1_scale) : json(nullptr);
  ov["S"] = c.overrides.S ? json(*c.overrides.S) : json(nullptr);
  ov["T"] = c.overrides.T ? json(*c.overrides.T) : json(nullptr);

  json fams = json::array();
  for (auto f : c.verify.families) fams.push_back(std::string(to_string(f)));

  return json{
      {"problem",
       {{"family", std::string(to_string(c.problem.family))},
        {"d1", c.problem.d1},
        {"d2", c.problem.d2},
        {"tau", c.problem.tau},
        {"kappa", c.problem.kappa},
        {"coupling", c.problem.coupling},
        {"indefinite", c.problem.indefinite},
        {"seed", c.problem.seed},
        {"set", set_to_json(c.problem.set)},
        {"sigma1", c.problem.sigma1},
        {"sigma2", c.problem.sigma2}}},
      {"solver", {{"mode", std::string(to_string(c.mode))}, {"eps", c.eps_grid}, {"overrides", ov}}},
      {"init",
       {{"x0", c.x0 ? json(*c.x0) : json(nullptr)},
        {"y0", c.y0 ? json(*c.y0) : json(nullptr)},
        {"x0_scale", c.x0_scale}}},
      {"repetitions", c.repetitions},
      {"seed", c.seed},
      {"trace_stride", c.trace_stride ? json(*c.trace_stride) : json(nullptr)},
      {"output_dir", c.output_dir},
      {"verify",
       {{"mu", c.verify.mu},
        {"samples", c.verify.samples},
        {"eps", c.verify.eps},
        {"sigma1", c.verify.sigma1 ? json(*c.verify.sigma1) : json(nullptr)},
        {"sigma2", c.verify.sigma2 ? json(*c.verify.sigma2) : json(nullptr)},
        {"families", fams}}}};
}

ConstraintSet<double> build_set(const SetConfig& s, std::int64_t d2) {
  auto vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size())).eval();
  };
  if (s.kind == "whole") return ConstraintSet<double>::whole(d2);
  if (s.kind == "box") {
    if (std::int64_t(s.lower.size()) != d2 || std::int64_t(s.upper.size()) != d2)
      Reader::fail("problem.set", "box bounds must have length problem.d2");
    return ConstraintSet<double>::box(vec(s.lower), vec(s.upper));
  }
  if (!s.center.empty() && std::int64_t(s.center.size()) != d2)
    Reader::fail("problem.set.center", "length must equal problem.d2");
  return ConstraintSet<double>::ball(s.center.empty() ? Eigen::VectorXd::Zero(d2) : vec(s.center), s.radius);
}

MinimaxProblem<double> build_problem(const ProblemConfig& p, FamilyKind family) {
  FixtureSpec<double> spec;
  spec.family = family;
  spec.d1 = p.d1;
  spec.d2 = p.d2;
  spec.tau = p.tau;
  spec.kappa = p.kappa;
  spec.coupling = p.coupling;
  spec.indefinite = p.indefinite;
  spec.seed = p.seed;
  return make_fixture(spec, build_set(p.set, p.d2));
}

MinimaxProblem<double> build_problem(const ProblemConfig& p) { return build_problem(p, p.family); }

ProblemConstants constants_of(const MinimaxProblem<double>& problem) {
  return ProblemConstants{problem.ell(), problem.tau(), problem.d1(), problem.d2(), diameter(problem.set_y())};
}

std::filesystem::path output_directory(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return cfg.output_dir;
}

}  // namespace zominimax::harness
