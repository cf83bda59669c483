#include "novikov/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

namespace novikov {

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::general: return "general";
    case ScenarioKind::gx: return "gx";
    case ScenarioKind::case1: return "case1";
    case ScenarioKind::case2: return "case2";
    case ScenarioKind::peakon: return "peakon";
    case ScenarioKind::periodic_peakon: return "periodic_peakon";
  }
  return "unknown";
}

namespace {

struct Value {
  enum class Kind { scalar, string, array, string_array } kind = Kind::scalar;
  double number = 0.0;
  bool boolean = false;
  bool is_bool = false;
  std::string text;
  std::vector<double> numbers;
  std::vector<std::string> strings;
  int line = 0;
  bool consumed = false;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_number(const std::string& token, double& out) {
  const std::string t = trim(token);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

class Parser {
 public:
  explicit Parser(const std::string& text) { scan(text); }

  std::vector<std::string>& errors() { return errors_; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  template <typename F>
  void with(const std::string& key, F&& apply) {
    auto it = values_.find(key);
    if (it == values_.end()) return;
    it->second.consumed = true;
    apply(it->second);
  }

  void get_double(const std::string& key, double& target) {
    with(key, [&](Value& v) {
      if (v.kind == Value::Kind::scalar && !v.is_bool)
        target = v.number;
      else
        fail(key, "expected a number");
    });
  }

  void get_int(const std::string& key, int& target) {
    with(key, [&](Value& v) {
      if (v.kind == Value::Kind::scalar && !v.is_bool && v.number == std::floor(v.number))
        target = static_cast<int>(v.number);
      else
        fail(key, "expected an integer");
    });
  }

  void get_uint64(const std::string& key, std::uint64_t& target) {
    with(key, [&](Value& v) {
      if (v.kind == Value::Kind::scalar && !v.is_bool && v.number >= 0.0 &&
          v.number == std::floor(v.number))
        target = static_cast<std::uint64_t>(v.number);
      else
        fail(key, "expected a nonnegative integer");
    });
  }

  void get_bool(const std::string& key, bool& target) {
    with(key, [&](Value& v) {
      if (v.kind == Value::Kind::scalar && v.is_bool)
        target = v.boolean;
      else
        fail(key, "expected true or false");
    });
  }

  void get_string(const std::string& key, std::string& target) {
    with(key, [&](Value& v) {
      if (v.kind == Value::Kind::string)
        target = v.text;
      else
        fail(key, "expected a quoted string");
    });
  }

  void get_numbers(const std::string& key, std::vector<double>& target) {
    with(key, [&](Value& v) {
      if (v.kind == Value::Kind::array)
        target = v.numbers;
      else if (v.kind == Value::Kind::scalar && !v.is_bool)
        target = {v.number};
      else
        fail(key, "expected a bracketed number array");
    });
  }

  void get_strings(const std::string& key, std::vector<std::string>& target) {
    with(key, [&](Value& v) {
      if (v.kind == Value::Kind::string_array)
        target = v.strings;
      else if (v.kind == Value::Kind::string)
        target = {v.text};
      else
        fail(key, "expected a bracketed string array");
    });
  }

  void fail(const std::string& key, const std::string& message) {
    errors_.push_back(key + ": " + message);
  }

  void report_unknown_keys() {
    for (const auto& [key, value] : values_)
      if (!value.consumed)
        errors_.push_back("unknown key '" + key + "' (line " + std::to_string(value.line) + ")");
  }

 private:
  void scan(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      // Strip comments outside quotes.
      bool in_quote = false;
      std::string body;
      for (char c : line) {
        if (c == '"') in_quote = !in_quote;
        if (c == '#' && !in_quote) break;
        body.push_back(c);
      }
      body = trim(body);
      if (body.empty()) continue;
      const std::size_t eq = body.find('=');
      if (eq == std::string::npos) {
        errors_.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
        continue;
      }
      const std::string key = trim(body.substr(0, eq));
      const std::string raw = trim(body.substr(eq + 1));
      if (key.empty() ||
          key.find_first_not_of(
              "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.") !=
              std::string::npos) {
        errors_.push_back("line " + std::to_string(lineno) + ": malformed key '" + key + "'");
        continue;
      }
      if (values_.count(key)) {
        errors_.push_back("duplicate key '" + key + "' (line " + std::to_string(lineno) + ")");
        continue;
      }
      Value value;
      value.line = lineno;
      if (!parse_value(raw, value)) {
        errors_.push_back(key + ": malformed value '" + raw + "' (line " +
                          std::to_string(lineno) + ")");
        continue;
      }
      values_.emplace(key, std::move(value));
    }
  }

  bool parse_value(const std::string& raw, Value& value) {
    if (raw.empty()) return false;
    if (raw.front() == '"') {
      if (raw.size() < 2 || raw.back() != '"') return false;
      value.kind = Value::Kind::string;
      value.text = raw.substr(1, raw.size() - 2);
      return true;
    }
    if (raw.front() == '[') {
      if (raw.back() != ']') return false;
      const std::string inner = trim(raw.substr(1, raw.size() - 2));
      value.kind = Value::Kind::array;
      if (inner.empty()) return true;
      std::vector<std::string> items;
      std::string current;
      bool in_quote = false;
      for (char c : inner) {
        if (c == '"') in_quote = !in_quote;
        if (c == ',' && !in_quote) {
          items.push_back(current);
          current.clear();
        } else {
          current.push_back(c);
        }
      }
      items.push_back(current);
      const bool strings = trim(items.front()).size() && trim(items.front()).front() == '"';
      value.kind = strings ? Value::Kind::string_array : Value::Kind::array;
      for (auto& item : items) {
        const std::string token = trim(item);
        if (strings) {
          if (token.size() < 2 || token.front() != '"' || token.back() != '"') return false;
          value.strings.push_back(token.substr(1, token.size() - 2));
        } else {
          double x;
          if (!parse_number(token, x)) return false;
          value.numbers.push_back(x);
        }
      }
      return true;
    }
    if (raw == "true" || raw == "false") {
      value.kind = Value::Kind::scalar;
      value.is_bool = true;
      value.boolean = raw == "true";
      return true;
    }
    double x;
    if (!parse_number(raw, x)) return false;
    value.kind = Value::Kind::scalar;
    value.number = x;
    return true;
  }

  std::map<std::string, Value> values_;
  std::vector<std::string> errors_;
};

void read_bump_family(Parser& parser, const std::string& prefix, std::vector<BumpSpec>& out,
                      std::vector<std::string>& errors) {
  std::vector<double> amplitudes, centers, widths;
  parser.get_numbers(prefix + ".amplitudes", amplitudes);
  parser.get_numbers(prefix + ".centers", centers);
  parser.get_numbers(prefix + ".widths", widths);
  if (amplitudes.empty() && centers.empty() && widths.empty()) return;
  if (amplitudes.size() != centers.size() || amplitudes.size() != widths.size()) {
    errors.push_back(prefix + ": amplitudes, centers and widths must have equal lengths");
    return;
  }
  out.clear();
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (!(widths[i] > 0.0)) {
      errors.push_back(prefix + ".widths: widths must be positive");
      return;
    }
    out.push_back({amplitudes[i], centers[i], widths[i]});
  }
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::string format_array(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out + "]";
}

}  // namespace

ConfigParseResult parse_config(const std::string& text) {
  ConfigParseResult result;
  ScenarioConfig& cfg = result.config;
  Parser parser(text);

  std::string kind_token = "gx";
  parser.get_string("scenario.kind", kind_token);
  bool kind_valid = true;
  if (kind_token == "general") cfg.kind = ScenarioKind::general;
  else if (kind_token == "gx") cfg.kind = ScenarioKind::gx;
  else if (kind_token == "case1") cfg.kind = ScenarioKind::case1;
  else if (kind_token == "case2") cfg.kind = ScenarioKind::case2;
  else if (kind_token == "peakon") cfg.kind = ScenarioKind::peakon;
  else if (kind_token == "periodic_peakon") cfg.kind = ScenarioKind::periodic_peakon;
  else {
    parser.fail("scenario.kind", "unknown scenario kind '" + kind_token + "'");
    kind_valid = false;
  }
  parser.get_int("scenario.n_components", cfg.n_components);

  parser.get_int("grid.n_points", cfg.grid_n_points);
  parser.get_double("grid.length", cfg.grid_length);

  parser.get_double("sim.dt", cfg.dt);
  parser.get_double("sim.t_end", cfg.t_end);
  parser.get_bool("sim.dealias", cfg.dealias);
  parser.get_int("sim.monitor_stride", cfg.monitor_stride);
  parser.get_double("sim.blowup_linf_cap", cfg.blowup_linf_cap);
  std::string rhs_token = cfg.rhs_form == RhsForm::componentwise ? "componentwise" : "transport";
  parser.get_string("sim.rhs_form", rhs_token);
  if (rhs_token == "componentwise") cfg.rhs_form = RhsForm::componentwise;
  else if (rhs_token == "transport") cfg.rhs_form = RhsForm::transport;
  else parser.fail("sim.rhs_form", "expected \"componentwise\" or \"transport\"");

  std::string init_token;
  if (cfg.kind == ScenarioKind::peakon || cfg.kind == ScenarioKind::periodic_peakon)
    cfg.init_kind = InitKind::peakon;
  parser.get_string("init.kind", init_token);
  if (!init_token.empty()) {
    if (init_token == "bumps") cfg.init_kind = InitKind::bumps;
    else if (init_token == "peakon") cfg.init_kind = InitKind::peakon;
    else if (init_token == "file") cfg.init_kind = InitKind::file;
    else parser.fail("init.kind", "expected \"bumps\", \"peakon\" or \"file\"");
  }
  parser.get_string("init.file", cfg.init_file);

  if (cfg.kind == ScenarioKind::general) {
    if (cfg.n_components < 1)
      parser.fail("scenario.n_components", "must be >= 1");
    cfg.m_bumps.assign(std::max(cfg.n_components, 1), {});
    cfg.n_bumps.assign(std::max(cfg.n_components, 1), {});
    for (int i = 0; i < std::max(cfg.n_components, 1); ++i) {
      read_bump_family(parser, "init.m" + std::to_string(i + 1), cfg.m_bumps[i],
                       parser.errors());
      read_bump_family(parser, "init.n" + std::to_string(i + 1), cfg.n_bumps[i],
                       parser.errors());
    }
  } else {
    cfg.m_bumps.assign(1, {});
    cfg.n_bumps.assign(1, {});
    read_bump_family(parser, "init.m", cfg.m_bumps[0], parser.errors());
    read_bump_family(parser, "init.n", cfg.n_bumps[0], parser.errors());
  }

  parser.get_numbers("peakon.p", cfg.peakon.p);
  parser.get_numbers("peakon.q", cfg.peakon.q);
  parser.get_double("peakon.x0", cfg.peakon.x0);
  parser.get_double("peakon.sigma_dx", cfg.peakon_sigma_dx);
  cfg.peakon.n_components = static_cast<int>(cfg.peakon.p.size());
  cfg.peakon.flavor = cfg.kind == ScenarioKind::periodic_peakon ? PeakonFlavor::periodic_unit
                                                                : PeakonFlavor::line_truncated;
  if (cfg.peakon.p.size() != cfg.peakon.q.size())
    parser.fail("peakon.q", "peakon.p and peakon.q must have equal lengths");

  parser.get_numbers("output.snapshot_times", cfg.snapshot_times);
  parser.get_string("output.dir", cfg.output_dir);
  parser.get_strings("observers", cfg.observers);

  parser.get_double("detect.magnitude", cfg.detect_magnitude);
  parser.get_double("detect.rate", cfg.detect_rate);
  parser.get_int("detect.window", cfg.detect_window);

  parser.get_int("weakform.tests", cfg.weakform_tests);
  parser.get_double("weakform.t_end", cfg.weakform_t_end);
  parser.get_double("weakform.speed_factor", cfg.weakform_speed_factor);
  parser.get_double("weakform.tolerance", cfg.weakform_tolerance);

  parser.get_uint64("rng.seed", cfg.rng_seed);

  parser.report_unknown_keys();
  result.errors = parser.errors();

  // Constraint validation (every violation reported, not just the first).
  auto violation = [&](const std::string& field, const std::string& what) {
    result.errors.push_back(field + ": " + what);
  };
  if (cfg.grid_n_points < 8) violation("grid.n_points", "must be >= 8");
  if (cfg.grid_n_points % 2 != 0) violation("grid.n_points", "must be even");
  if (!(cfg.grid_length > 0.0)) violation("grid.length", "must be positive");
  if (kind_valid && cfg.kind == ScenarioKind::periodic_peakon &&
      std::abs(cfg.grid_length - 1.0) > 1e-12)
    violation("grid.length", "length must be 1 for periodic_peakon");
  if (!(cfg.dt > 0.0)) violation("sim.dt", "must be positive");
  if (!(cfg.t_end > cfg.dt)) violation("sim.t_end", "must exceed sim.dt");
  if (cfg.monitor_stride < 1) violation("sim.monitor_stride", "must be >= 1");
  if (!(cfg.blowup_linf_cap > 0.0)) violation("sim.blowup_linf_cap", "must be positive");
  if (cfg.init_kind == InitKind::file) {
    if (cfg.init_file.empty())
      violation("init.file", "required when init.kind is \"file\"");
    else if (!std::filesystem::exists(cfg.init_file))
      violation("init.file", "referenced file does not exist: " + cfg.init_file);
  }
  if (kind_valid &&
      (cfg.kind == ScenarioKind::peakon || cfg.kind == ScenarioKind::periodic_peakon)) {
    if (cfg.init_kind != InitKind::peakon)
      violation("init.kind", "peakon scenarios require peakon initial data");
    if (cfg.peakon.p.empty()) violation("peakon.p", "must not be empty");
  }
  if (cfg.peakon_sigma_dx < 2.0)
    violation("peakon.sigma_dx", "mollifier must be at least 2 grid spacings wide");
  for (const auto& name : cfg.observers)
    if (name != "invariants" && name != "blowup" && name != "snapshots")
      violation("observers", "unknown observer '" + name + "'");
  if (cfg.detect_window < 2) violation("detect.window", "must be >= 2");
  if (cfg.weakform_tests < 1) violation("weakform.tests", "must be >= 1");
  if (!(cfg.weakform_t_end > 0.0)) violation("weakform.t_end", "must be positive");
  if (!(cfg.weakform_tolerance > 0.0)) violation("weakform.tolerance", "must be positive");
  for (double t : cfg.snapshot_times)
    if (t < 0.0 || t > cfg.t_end)
      violation("output.snapshot_times", "snapshot times must lie in [0, t_end]");

  return result;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "scenario.kind = \"" << to_string(cfg.kind) << "\"\n";
  if (cfg.kind == ScenarioKind::general)
    out << "scenario.n_components = " << cfg.n_components << "\n";
  out << "grid.n_points = " << cfg.grid_n_points << "\n";
  out << "grid.length = " << format_double(cfg.grid_length) << "\n";
  out << "sim.dt = " << format_double(cfg.dt) << "\n";
  out << "sim.t_end = " << format_double(cfg.t_end) << "\n";
  out << "sim.dealias = " << (cfg.dealias ? "true" : "false") << "\n";
  out << "sim.monitor_stride = " << cfg.monitor_stride << "\n";
  out << "sim.blowup_linf_cap = " << format_double(cfg.blowup_linf_cap) << "\n";
  out << "sim.rhs_form = \""
      << (cfg.rhs_form == RhsForm::componentwise ? "componentwise" : "transport") << "\"\n";
  out << "init.kind = \""
      << (cfg.init_kind == InitKind::bumps ? "bumps"
                                           : cfg.init_kind == InitKind::peakon ? "peakon" : "file")
      << "\"\n";
  if (!cfg.init_file.empty()) out << "init.file = \"" << cfg.init_file << "\"\n";

  auto emit_family = [&out](const std::string& prefix, const std::vector<BumpSpec>& bumps) {
    if (bumps.empty()) return;
    std::vector<double> a, c, w;
    for (const auto& b : bumps) {
      a.push_back(b.amplitude);
      c.push_back(b.center);
      w.push_back(b.width);
    }
    out << prefix << ".amplitudes = " << format_array(a) << "\n";
    out << prefix << ".centers = " << format_array(c) << "\n";
    out << prefix << ".widths = " << format_array(w) << "\n";
  };
  if (cfg.kind == ScenarioKind::general) {
    for (std::size_t i = 0; i < cfg.m_bumps.size(); ++i)
      emit_family("init.m" + std::to_string(i + 1), cfg.m_bumps[i]);
    for (std::size_t i = 0; i < cfg.n_bumps.size(); ++i)
      emit_family("init.n" + std::to_string(i + 1), cfg.n_bumps[i]);
  } else {
    emit_family("init.m", cfg.m_bumps.empty() ? std::vector<BumpSpec>{} : cfg.m_bumps[0]);
    emit_family("init.n", cfg.n_bumps.empty() ? std::vector<BumpSpec>{} : cfg.n_bumps[0]);
  }

  if (cfg.init_kind == InitKind::peakon) {
    out << "peakon.p = " << format_array(cfg.peakon.p) << "\n";
    out << "peakon.q = " << format_array(cfg.peakon.q) << "\n";
    out << "peakon.x0 = " << format_double(cfg.peakon.x0) << "\n";
    out << "peakon.sigma_dx = " << format_double(cfg.peakon_sigma_dx) << "\n";
  }

  if (!cfg.snapshot_times.empty())
    out << "output.snapshot_times = " << format_array(cfg.snapshot_times) << "\n";
  out << "output.dir = \"" << cfg.output_dir << "\"\n";
  out << "observers = [";
  for (std::size_t i = 0; i < cfg.observers.size(); ++i) {
    if (i) out << ", ";
    out << "\"" << cfg.observers[i] << "\"";
  }
  out << "]\n";

  if (std::isfinite(cfg.detect_magnitude))
    out << "detect.magnitude = " << format_double(cfg.detect_magnitude) << "\n";
  if (std::isfinite(cfg.detect_rate))
    out << "detect.rate = " << format_double(cfg.detect_rate) << "\n";
  out << "detect.window = " << cfg.detect_window << "\n";

  out << "weakform.tests = " << cfg.weakform_tests << "\n";
  out << "weakform.t_end = " << format_double(cfg.weakform_t_end) << "\n";
  out << "weakform.speed_factor = " << format_double(cfg.weakform_speed_factor) << "\n";
  out << "weakform.tolerance = " << format_double(cfg.weakform_tolerance) << "\n";
  out << "rng.seed = " << cfg.rng_seed << "\n";
  return out.str();
}

}  // namespace novikov
