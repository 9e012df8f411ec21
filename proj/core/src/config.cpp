#include "tinygan/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tinygan/csv.hpp"
#include "tinygan/errors.hpp"

namespace tinygan {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.emplace_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return out;
}

// Raw key/value store with location info, filled by the line parser.
struct RawConfig {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::set<std::string> section_seen;
  std::string source;

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
  bool has_section(const std::string& section) const { return section_seen.count(section) > 0; }
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"", {"name"}},
      {"criterion", {"kind"}},
      {"mode", {"variant", "alpha_r", "lambda", "coupling", "alpha0", "T"}},
      {"init", {"preset", "theta", "psi", "alpha"}},
      {"integrator", {"method", "step", "t_end", "sample_stride"}},
      {"sgd", {"learning_rate", "iterations", "order"}},
      {"analysis", {"transient_cut", "target"}},
      {"output", {"directory", "outputs"}},
  };
  return table;
}

RawConfig parse_raw(std::string_view text, std::string_view source_name) {
  RawConfig raw;
  raw.source = std::string(source_name);
  raw.section_seen.insert("");
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    const auto where = raw.source + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().count(section)) {
        throw ParseError(where + ": unknown section [" + section + "]", line_no);
      }
      raw.section_seen.insert(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(where + ": expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!known_keys().at(section).count(key)) {
      const std::string loc = section.empty() ? "top level" : "section [" + section + "]";
      throw ParseError(where + ": unknown key '" + key + "' in " + loc, line_no);
    }
    if (raw.sections[section].count(key)) {
      throw ParseError(where + ": duplicate key '" + key + "'", line_no);
    }
    raw.sections[section][key] = {value, line_no};
    if (pos > text.size()) break;
  }
  return raw;
}

double number_at(const RawConfig& raw, const RawConfig::Entry& e, const std::string& key) {
  try {
    return parse_double(e.value);
  } catch (const DomainError&) {
    throw ParseError(raw.source + ":" + std::to_string(e.line) + ": key '" + key +
                         "' is not a number: '" + e.value + "'",
                     e.line);
  }
}

std::int64_t integer_at(const RawConfig& raw, const RawConfig::Entry& e, const std::string& key) {
  const double v = number_at(raw, e, key);
  const auto i = static_cast<std::int64_t>(v);
  if (static_cast<double>(i) != v) {
    throw ParseError(raw.source + ":" + std::to_string(e.line) + ": key '" + key +
                         "' must be an integer",
                     e.line);
  }
  return i;
}

[[noreturn]] void bad_value(const RawConfig& raw, const RawConfig::Entry& e, const std::string& key,
                            const std::string& expected) {
  throw ParseError(raw.source + ":" + std::to_string(e.line) + ": key '" + key + "': expected " +
                       expected + ", got '" + e.value + "'",
                   e.line);
}

ExperimentConfig build_config(const RawConfig& raw) {
  ExperimentConfig cfg;
  const auto require = [&](const std::string& section, const std::string& key) -> const RawConfig::Entry& {
    const auto* e = raw.find(section, key);
    if (!e) {
      const std::string loc = section.empty() ? "top level" : "section [" + section + "]";
      throw ValidationError(raw.source + ": missing required key '" + key + "' in " + loc);
    }
    return *e;
  };

  cfg.name = require("", "name").value;

  const auto& kind = require("criterion", "kind");
  if (const auto c = Criterion::from_name(kind.value)) {
    cfg.criterion = *c;
  } else {
    bad_value(raw, kind, "kind", "'linear' or 'logistic'");
  }

  const auto& variant = require("mode", "variant");
  const auto forbid = [&](const std::string& section, const std::string& key, const std::string& why) {
    if (const auto* e = raw.find(section, key)) {
      throw ValidationError(raw.source + ":" + std::to_string(e->line) + ": key '" + key + "' " + why);
    }
  };
  if (variant.value == "autonomous") {
    AutonomousMode m;
    m.alpha_r = number_at(raw, require("mode", "alpha_r"), "alpha_r");
    forbid("mode", "lambda", "applies to annealed mode only");
    forbid("mode", "coupling", "applies to annealed mode only");
    forbid("mode", "alpha0", "applies to annealed mode only");
    forbid("mode", "T", "applies to annealed mode only");
    cfg.mode = m;
  } else if (variant.value == "annealed") {
    AnnealedMode m;
    const auto& lambda = require("mode", "lambda");
    const std::int64_t l = integer_at(raw, lambda, "lambda");
    if (l != 0 && l != 1) bad_value(raw, lambda, "lambda", "0 or 1");
    m.lambda = static_cast<int>(l);
    m.schedule.alpha0 = number_at(raw, require("mode", "alpha0"), "alpha0");
    m.schedule.alpha_r = number_at(raw, require("mode", "alpha_r"), "alpha_r");
    m.schedule.time_constant = number_at(raw, require("mode", "T"), "T");
    if (const auto* coupling = raw.find("mode", "coupling")) {
      if (coupling->value == "descent") {
        m.sign = CouplingSign::Descent;
      } else if (coupling->value == "as-printed") {
        m.sign = CouplingSign::AsPrinted;
      } else {
        bad_value(raw, *coupling, "coupling", "'descent' or 'as-printed'");
      }
    }
    cfg.mode = m;
  } else {
    bad_value(raw, variant, "variant", "'autonomous' or 'annealed'");
  }

  if (const auto* preset = raw.find("init", "preset")) {
    if (preset->value != "beta") bad_value(raw, *preset, "preset", "'beta'");
    cfg.init.beta_preset = true;
  }
  if (const auto* e = raw.find("init", "theta")) cfg.init.theta = number_at(raw, *e, "theta");
  if (const auto* e = raw.find("init", "psi")) cfg.init.psi = number_at(raw, *e, "psi");
  if (const auto* e = raw.find("init", "alpha")) cfg.init.alpha = number_at(raw, *e, "alpha");

  if (raw.has_section("integrator")) {
    IntegratorConfig ic;
    const auto& method = require("integrator", "method");
    if (method.value == "euler") {
      ic.method = StepMethod::Euler;
    } else if (method.value == "rk4") {
      ic.method = StepMethod::RK4;
    } else {
      bad_value(raw, method, "method", "'euler' or 'rk4'");
    }
    ic.step = number_at(raw, require("integrator", "step"), "step");
    ic.t_end = number_at(raw, require("integrator", "t_end"), "t_end");
    if (const auto* e = raw.find("integrator", "sample_stride")) {
      ic.sample_stride = integer_at(raw, *e, "sample_stride");
    }
    cfg.integrator = ic;
  }

  if (raw.has_section("sgd")) {
    SgdConfig sc;
    sc.learning_rate = number_at(raw, require("sgd", "learning_rate"), "learning_rate");
    sc.iterations = integer_at(raw, require("sgd", "iterations"), "iterations");
    if (const auto* order = raw.find("sgd", "order")) {
      if (order->value == "alternating") {
        sc.order = UpdateOrder::Alternating;
      } else if (order->value == "simultaneous") {
        sc.order = UpdateOrder::Simultaneous;
      } else {
        bad_value(raw, *order, "order", "'alternating' or 'simultaneous'");
      }
    }
    cfg.sgd = sc;
  }

  if (const auto* e = raw.find("analysis", "transient_cut")) {
    cfg.transient_cut = number_at(raw, *e, "transient_cut");
  }
  if (const auto* e = raw.find("analysis", "target")) {
    const auto parts = split_list(e->value);
    if (parts.size() != 3) bad_value(raw, *e, "target", "three comma-separated numbers");
    std::array<double, 3> target{};
    for (std::size_t i = 0; i < 3; ++i) {
      try {
        target[i] = parse_double(parts[i]);
      } catch (const DomainError&) {
        bad_value(raw, *e, "target", "three comma-separated numbers");
      }
    }
    cfg.equilibrium_target = target;
  }

  if (const auto* e = raw.find("output", "directory")) cfg.output_dir = e->value;
  if (const auto* e = raw.find("output", "outputs")) {
    OutputSelection sel{false, false, false};
    for (const std::string& item : split_list(e->value)) {
      if (item == "trajectory-csv") {
        sel.trajectory_csv = true;
      } else if (item == "manifest-json") {
        sel.manifest_json = true;
      } else if (item == "plot-svg") {
        sel.plot_svg = true;
      } else {
        bad_value(raw, *e, "outputs", "a list of trajectory-csv, manifest-json, plot-svg");
      }
    }
    cfg.outputs = sel;
  }

  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text, std::string_view source_name) {
  return build_config(parse_raw(text, source_name));
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open config: " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_experiment_config(buffer.str(), path.string());
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> warnings;
  const auto fail = [](const std::string& invariant) -> void {
    throw ValidationError("config invariant violated: " + invariant);
  };

  if (cfg.name.empty()) fail("name must be non-empty");

  if (const auto* annealed = as_annealed(cfg.mode)) {
    if (annealed->lambda != 0 && annealed->lambda != 1) fail("lambda must be 0 or 1");
    const AnnealingSchedule& sch = annealed->schedule;
    if (!std::isfinite(sch.alpha0) || !std::isfinite(sch.alpha_r)) {
      fail("schedule endpoints must be finite");
    }
    if (!(sch.time_constant > 0.0)) fail("schedule requires T > 0");
    if (sch.time_constant <= 1.0) {
      warnings.push_back("T = " + format_double(sch.time_constant) +
                         " is a fast-annealing setting (T <= 1); the schedule is no slower than "
                         "the adversarial updates");
    }
  } else {
    if (!std::isfinite(std::get<AutonomousMode>(cfg.mode).alpha_r)) fail("alpha_r must be finite");
  }

  const bool annealed = !is_autonomous(cfg.mode);
  if (cfg.init.beta_preset) {
    if (!annealed) fail("init preset 'beta' is only valid in annealed mode");
    if (cfg.init.theta || cfg.init.psi || cfg.init.alpha) {
      fail("init preset 'beta' excludes explicit components");
    }
  } else {
    if (!cfg.init.theta || !cfg.init.psi) fail("init requires theta and psi");
    if (annealed && !cfg.init.alpha) fail("annealed init requires alpha");
    if (!annealed && cfg.init.alpha) {
      fail("autonomous init has no alpha component (it is frozen at alpha_r)");
    }
    for (const auto& v : {cfg.init.theta, cfg.init.psi, cfg.init.alpha}) {
      if (v && !std::isfinite(*v)) fail("init components must be finite");
    }
  }

  if (cfg.integrator.has_value() == cfg.sgd.has_value()) {
    fail("exactly one of [integrator] or [sgd] must be given");
  }
  if (cfg.integrator) {
    const IntegratorConfig& ic = *cfg.integrator;
    if (!(ic.step > 0.0) || !std::isfinite(ic.step)) fail("integrator step must be > 0");
    if (!(ic.t_end > 0.0) || !std::isfinite(ic.t_end)) fail("integrator t_end must be > 0");
    if (ic.step > ic.t_end) fail("integrator step must not exceed t_end");
    if (ic.sample_stride < 1) fail("sample_stride must be >= 1");
  }
  if (cfg.sgd) {
    if (!(cfg.sgd->learning_rate > 0.0) || !std::isfinite(cfg.sgd->learning_rate)) {
      fail("sgd learning_rate must be > 0");
    }
    if (cfg.sgd->iterations < 1) fail("sgd iterations must be >= 1");
  }

  if (cfg.transient_cut && !(*cfg.transient_cut >= 0.0)) fail("transient_cut must be >= 0");
  if (cfg.equilibrium_target) {
    for (double v : *cfg.equilibrium_target) {
      if (!std::isfinite(v)) fail("equilibrium target must be finite");
    }
  }
  return warnings;
}

State initial_state(const ExperimentConfig& cfg) {
  if (const auto* annealed = as_annealed(cfg.mode)) {
    if (cfg.init.beta_preset) return beta_initial_state(annealed->schedule);
    return {0.0, *cfg.init.theta, *cfg.init.psi, *cfg.init.alpha};
  }
  const double alpha_r = std::get<AutonomousMode>(cfg.mode).alpha_r;
  return {0.0, *cfg.init.theta, *cfg.init.psi, alpha_r};
}

std::array<double, 3> default_equilibrium_target(const SystemMode& mode) {
  const double alpha_r = mode_alpha_r(mode);
  return {alpha_r, 0.0, alpha_r};
}

}  // namespace tinygan
