#include "run_config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ckrlie/errors.hpp"

namespace ckrlie::cli {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"problem",
       {"case", "mass", "potential", "energy", "mass_profile", "ordering", "nu", "alpha1", "alpha2"}},
      {"gauge", {"alpha", "delta", "sigma"}},
      {"integrator", {"method", "step", "abs_tol", "rel_tol", "blowup_threshold", "max_steps", "output_step"}},
      {"range", {"x0", "x1", "points"}},
      {"initial", {"p1", "p2"}},
      {"symmetry", {"lambda0", "lambda1", "lambda2", "lambda3", "phase_points"}},
      {"lie", {"mode", "minus", "plus", "upsilon1", "upsilon2", "upsilon3"}},
      {"constraints",
       {"c0", "sigma0", "small_sigma", "damping", "max_iterations", "tolerance", "b0", "branch", "mass_start"}},
      {"oracle", {"psi0", "dpsi0"}},
      {"output", {"directory"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Where each key came from, for error messages.
class Locator {
 public:
  Locator(std::string origin, const std::string& text) : origin_(std::move(origin)) {
    std::istringstream in(text);
    std::string line, section;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      const std::string t = trim(line);
      if (t.empty() || t[0] == ';' || t[0] == '#') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = trim(std::string_view(t).substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(std::string_view(t).substr(0, eq));
      lines_[section.empty() ? key : section + "." + key] = n;
    }
  }

  void overridden(const std::string& path) { lines_.erase(path), overrides_.insert(path); }

  [[nodiscard]] std::string where(const std::string& path) const {
    if (overrides_.count(path) != 0) return "--set " + path;
    const auto it = lines_.find(path);
    if (it == lines_.end()) return origin_;
    return origin_ + ":" + std::to_string(it->second);
  }

  [[noreturn]] void fail(const std::string& path, const std::string& detail) const {
    throw ValidationError("config." + path, where(path) + ": key '" + path + "': " + detail);
  }

 private:
  std::string origin_;
  std::map<std::string, std::size_t> lines_;
  std::set<std::string> overrides_;
};

class Reader {
 public:
  Reader(const pt::ptree& tree, const Locator& loc) : tree_(tree), loc_(loc) {}

  [[nodiscard]] std::optional<std::string> raw(const std::string& path) const {
    const auto v = tree_.get_optional<std::string>(path);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  void number(const std::string& path, double& out) const {
    if (const auto v = raw(path)) out = to_double(path, *v);
  }

  void count(const std::string& path, std::size_t& out) const {
    const auto v = raw(path);
    if (!v) return;
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
    if (ec != std::errc() || ptr != v->data() + v->size()) loc_.fail(path, "expected a non-negative integer, got '" + *v + "'");
    out = n;
  }

  void flag(const std::string& path, bool& out) const {
    const auto v = raw(path);
    if (!v) return;
    if (*v == "true" || *v == "yes" || *v == "1") {
      out = true;
    } else if (*v == "false" || *v == "no" || *v == "0") {
      out = false;
    } else {
      loc_.fail(path, "expected true or false, got '" + *v + "'");
    }
  }

  void expression(const std::string& path, expr::Expr& out) const {
    const auto v = raw(path);
    if (!v) return;
    try {
      out = expr::parse(*v);
    } catch (const ParseError& e) {
      loc_.fail(path, "expression '" + *v + "': " + e.what());
    }
  }

  template <std::size_t N>
  void list(const std::string& path, std::array<double, N>& out) const {
    const auto v = raw(path);
    if (!v) return;
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(*v);
    while (std::getline(in, part, ',')) parts.push_back(trim(part));
    if (parts.size() != N) {
      loc_.fail(path, "expected " + std::to_string(N) + " comma-separated numbers, got '" + *v + "'");
    }
    for (std::size_t i = 0; i < N; ++i) out[i] = to_double(path, parts[i]);
  }


 private:
  double to_double(const std::string& path, const std::string& v) const {
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      loc_.fail(path, "expected a number, got '" + v + "'");
    }
    return d;
  }

  const pt::ptree& tree_;
  const Locator& loc_;
};

void check_keys(const pt::ptree& tree, const Locator& loc) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (body.empty() && !body.data().empty()) loc.fail(section, "keys must live inside a [section]");
    if (it == schema().end()) loc.fail(section, "unknown section");
    for (const auto& [key, value] : body) {
      if (it->second.count(key) == 0) loc.fail(section + "." + key, "unknown key");
      static_cast<void>(value);
    }
  }
}

RunConfig interpret(const pt::ptree& tree, const Locator& loc) {
  check_keys(tree, loc);
  const Reader r(tree, loc);
  RunConfig c;

  if (const auto kind = r.raw("problem.case")) {
    if (*kind == "I") {
      c.kind = CaseKind::kI;
    } else if (*kind == "II") {
      c.kind = CaseKind::kII;
    } else if (*kind == "III") {
      c.kind = CaseKind::kIII;
    } else {
      loc.fail("problem.case", "expected I, II or III, got '" + *kind + "'");
    }
  }
  r.number("problem.mass", c.mass);
  r.expression("problem.potential", c.potential);
  r.number("problem.energy", c.energy);
  r.expression("problem.mass_profile", c.mass_profile);
  r.list("problem.ordering", c.ordering);
  r.list("problem.nu", c.nu);
  r.expression("problem.alpha1", c.alpha1);
  r.expression("problem.alpha2", c.alpha2);

  r.expression("gauge.alpha", c.gauge.alpha);
  r.expression("gauge.delta", c.gauge.delta);
  r.expression("gauge.sigma", c.gauge.sigma);

  if (const auto m = r.raw("integrator.method")) {
    if (*m == "rk4") {
      c.integrator.method = ode::Method::kRk4;
    } else if (*m == "rk45") {
      c.integrator.method = ode::Method::kRk45;
    } else {
      loc.fail("integrator.method", "expected rk4 or rk45, got '" + *m + "'");
    }
  }
  r.number("integrator.step", c.integrator.step);
  r.number("integrator.abs_tol", c.integrator.abs_tol);
  r.number("integrator.rel_tol", c.integrator.rel_tol);
  r.number("integrator.blowup_threshold", c.integrator.blowup_threshold);
  r.count("integrator.max_steps", c.integrator.max_steps);
  r.number("integrator.output_step", c.integrator.output_step);

  r.number("range.x0", c.range.x0);
  r.number("range.x1", c.range.x1);
  r.count("range.points", c.range.points);
  r.number("initial.p1", c.start.p1);
  r.number("initial.p2", c.start.p2);

  r.expression("symmetry.lambda0", c.symmetry.lambda0);
  r.number("symmetry.lambda1", c.symmetry.initial[0]);
  r.number("symmetry.lambda2", c.symmetry.initial[1]);
  r.number("symmetry.lambda3", c.symmetry.initial[2]);
  r.count("symmetry.phase_points", c.symmetry.phase_points);

  if (const auto mode = r.raw("lie.mode")) {
    if (*mode != "closed" && *mode != "euler") loc.fail("lie.mode", "expected closed or euler, got '" + *mode + "'");
    c.lie.closed_form = *mode == "closed";
  }
  r.number("lie.minus", c.lie.minus);
  r.number("lie.plus", c.lie.plus);
  r.number("lie.upsilon1", c.lie.initial[0]);
  r.number("lie.upsilon2", c.lie.initial[1]);
  r.number("lie.upsilon3", c.lie.initial[2]);

  if (r.raw("constraints.c0")) {
    double v = 0.0;
    r.number("constraints.c0", v);
    c.constraints.c0 = v;
  }
  r.number("constraints.sigma0", c.constraints.sigma0);
  r.flag("constraints.small_sigma", c.constraints.small_sigma);
  r.number("constraints.damping", c.constraints.damping);
  r.count("constraints.max_iterations", c.constraints.max_iterations);
  r.number("constraints.tolerance", c.constraints.tolerance);
  r.number("constraints.b0", c.constraints.b0);
  double branch = c.constraints.branch;
  r.number("constraints.branch", branch);
  if (branch != 1.0 && branch != -1.0) loc.fail("constraints.branch", "expected +1 or -1");
  c.constraints.branch = static_cast<int>(branch);
  r.number("constraints.mass_start", c.constraints.mass_start);

  std::array<double, 2> psi{c.oracle.psi0.real(), c.oracle.psi0.imag()};
  std::array<double, 2> dpsi{c.oracle.dpsi0.real(), c.oracle.dpsi0.imag()};
  r.list("oracle.psi0", psi);
  r.list("oracle.dpsi0", dpsi);
  c.oracle.psi0 = {psi[0], psi[1]};
  c.oracle.dpsi0 = {dpsi[0], dpsi[1]};

  if (const auto dir = r.raw("output.directory")) c.out_dir = *dir;

  // Scalar invariants that do not need the case builders.
  try {
    c.range.validate();
  } catch (const ValidationError& e) {
    loc.fail("range", e.what());
  }
  try {
    c.integrator.validate();
  } catch (const ValidationError& e) {
    loc.fail("integrator", e.what());
  }
  try {
    static_cast<void>(model::MassOrdering(c.ordering[0], c.ordering[1], c.ordering[2]));
  } catch (const ValidationError& e) {
    loc.fail("problem.ordering", e.what());
  }
  return c;
}

RunConfig from_text(const std::string& text, const std::string& origin, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("config.syntax", origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  Locator loc(origin, text);
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    const std::string path = trim(std::string_view(o).substr(0, std::min(eq, o.size())));
    if (eq == std::string::npos || path.find('.') == std::string::npos) {
      throw ValidationError("config.override", "--set expects section.key=value, got '" + o + "'");
    }
    tree.put(path, trim(std::string_view(o).substr(eq + 1)));
    loc.overridden(path);
  }
  return interpret(tree, loc);
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& origin, const std::vector<std::string>& overrides) {
  std::ostringstream text;
  text << in.rdbuf();
  return from_text(text.str(), origin, overrides);
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config.readable", "cannot open '" + path + "'");
  return parse_config(in, path, overrides);
}

RunConfig default_config(const std::vector<std::string>& overrides) { return from_text("", "<defaults>", overrides); }

}  // namespace ckrlie::cli
