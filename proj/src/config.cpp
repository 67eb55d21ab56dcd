#include "kahan/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kahan/scheme.hpp"
#include "kahan/text.hpp"

namespace kahan {

namespace {

struct Statement {
  int line = 0;
  int column = 0;
  std::string section;
  std::string key;
  std::string value;
  int value_column = 0;
};

const std::set<std::string> kSections = {"system", "params", "initial", "run", "analysis", "output"};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

std::pair<std::size_t, std::size_t> trim_range(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return {b, e};
}

bool valid_key(std::string_view k) {
  if (k.empty() || !(std::isalpha(static_cast<unsigned char>(k[0])) || k[0] == '_')) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::vector<Statement> tokenize(std::string_view text) {
  std::vector<Statement> out;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t stop = line.find(';', start);
      if (stop == std::string_view::npos) stop = line.size();
      const std::string_view raw = line.substr(start, stop - start);
      const auto [b, e] = trim_range(raw);
      const int col = static_cast<int>(start + b) + 1;
      const std::string_view stmt = raw.substr(b, e - b);
      if (!stmt.empty()) {
        if (stmt.front() == '[') {
          if (stmt.back() != ']') throw ParseError(line_no, col, "unterminated section header");
          const auto inner = stmt.substr(1, stmt.size() - 2);
          const auto [ib, ie] = trim_range(inner);
          section = std::string(inner.substr(ib, ie - ib));
          if (!kSections.count(section)) throw ParseError(line_no, col, "unknown section [" + section + "]");
        } else {
          const std::size_t sep = stmt.find_first_of("=:");
          if (sep == std::string_view::npos) throw ParseError(line_no, col, "expected `key = value`");
          const std::string_view key_raw = stmt.substr(0, sep);
          const auto [kb, ke] = trim_range(key_raw);
          const std::string key(key_raw.substr(kb, ke - kb));
          if (!valid_key(key)) throw ParseError(line_no, col, "invalid key '" + key + "'");
          const std::string_view val_raw = stmt.substr(sep + 1);
          const auto [vb, ve] = trim_range(val_raw);
          const int vcol = col + static_cast<int>(sep + 1 + vb);
          if (vb == ve) throw ParseError(line_no, vcol, "missing value for '" + key + "'");
          out.push_back({line_no, col, section, key, std::string(val_raw.substr(vb, ve - vb)), vcol});
        }
      }
      if (stop == line.size()) break;
      start = stop + 1;
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> items;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto [b, e] = trim_range(item);
    items.push_back(item.substr(b, e - b));
  }
  return items;
}

Rational rational_value(const Statement& s, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw ParseError(s.line, s.value_column, "expected a rational number, got '" + text + "'");
  }
}

double double_value(const Statement& s, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ParseError(s.line, s.value_column, "expected a number, got '" + text + "'");
  return v;
}

long integer_value(const Statement& s) {
  long v = 0;
  const char* first = s.value.data();
  const char* last = first + s.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError(s.line, s.value_column, "expected an integer, got '" + s.value + "'");
  return v;
}

bool bool_value(const Statement& s) {
  std::string v = s.value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ParseError(s.line, s.value_column, "expected true or false, got '" + s.value + "'");
}

std::vector<double> double_list(const Statement& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s.value)) out.push_back(double_value(s, item));
  return out;
}

std::vector<Rational> rational_list(const Statement& s) {
  std::vector<Rational> out;
  for (const auto& item : split_list(s.value)) out.push_back(rational_value(s, item));
  return out;
}

void apply(RunConfig& c, const Statement& s) {
  const std::string& k = s.key;
  if (k == "preset") return;
  if (k == "alphavec") {
    c.alpha = rational_list(s);
  } else if (k == "betavec") {
    c.beta = rational_list(s);
  } else if (k == "h") {
    c.h = rational_value(s, s.value);
  } else if (s.section == "params") {
    c.params[k] = rational_value(s, s.value);
  } else if (k == "order") {
    c.order = static_cast<int>(integer_value(s));
  } else if (k == "rhs") {
    try {
      c.rhs.push_back(parse_polynomial(s.value));
    } catch (const ParseError& e) {
      throw ParseError(s.line, s.value_column + std::max(0, e.column() - 1), "bad rhs: " + std::string(e.what()));
    }
  } else if (k == "steps") {
    c.steps = static_cast<int>(integer_value(s));
  } else if (k == "window") {
    c.window = double_list(s);
  } else if (k == "ode") {
    c.ode_initial = double_list(s);
  } else if (k == "darboux") {
    c.darboux_maxdeg = s.value == "off" ? -1 : static_cast<int>(integer_value(s));
  } else if (k == "spectra") {
    c.spectra = bool_value(s);
  } else if (k == "measure") {
    c.measure = bool_value(s);
  } else if (k == "symplectic") {
    c.symplectic = bool_value(s);
  } else if (k == "convergence") {
    c.convergence = bool_value(s);
  } else if (k == "samples") {
    c.samples = static_cast<int>(integer_value(s));
  } else if (k == "seed") {
    c.seed = static_cast<std::uint64_t>(integer_value(s));
  } else if (k == "csv") {
    c.csv = s.value;
  } else if (k == "svg") {
    c.svg = s.value;
  } else if (k == "report") {
    c.report = s.value;
  } else if (k == "plot") {
    const auto items = split_list(s.value);
    if (items.size() != 2) throw ParseError(s.line, s.value_column, "plot expects two state indices");
    Statement tmp = s;
    tmp.value = items[0];
    const long i = integer_value(tmp);
    tmp.value = items[1];
    c.plot = {static_cast<int>(i), static_cast<int>(integer_value(tmp))};
  } else {
    throw ParseError(s.line, s.column, "unknown key '" + k + "'");
  }
}

double beam_star() { return std::sqrt(1.5); }

}  // namespace

int RunConfig::state_order() const {
  if (is_inline()) return order;
  if (preset == "lv") return 1;
  if (preset == "quartic" || preset == "weierstrass") return 2;
  return 4;
}

int RunConfig::state_dim() const {
  if (is_inline()) return static_cast<int>(rhs.size());
  return preset == "lv" ? 2 : 1;
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  c.h = Rational(1, 10);
  if (name == "lv") {
    c.params = {{"alpha", Rational(1)}};
    c.window = {0.6, 0.8};
    c.steps = 500;
    c.darboux_maxdeg = 2;
  } else if (name == "quartic") {
    c.params = {{"a", Rational(1)}, {"b", Rational(2)}, {"c", Rational(3)}, {"d", Rational(5)}};
    c.window = {0.3, 0.31};
    c.steps = 1000;
    c.darboux_maxdeg = 4;
    c.convergence = true;
  } else if (name == "weierstrass") {
    c.params = {{"b", Rational(1)}, {"d", Rational(-1)}};
    c.window = {0.9, 0.95};
    c.steps = 1000;
    c.darboux_maxdeg = 4;
  } else if (name == "beam-sym" || name == "beam-lag") {
    // Normal form eps = 1, delta = 1/4.
    c.params = {{"a", Rational(1)}, {"b", Rational(-2)}, {"c", Rational(3, 4)}};
    const double ws = beam_star();
    // Offset along the oscillating linear mode of the saddle-centre point.
    const double theta = 0.1 * std::pow(6.0, 0.125);
    c.window.clear();
    for (int k = 0; k < 4; ++k) c.window.push_back(ws + 1e-3 * std::cos(theta * k));
    c.steps = 60;
    c.spectra = true;
    c.measure = name == "beam-sym";
    c.symplectic = name == "beam-lag";
  } else {
    invalid("unknown preset '" + name + "'");
  }
  return c;
}

RunConfig parse_config(std::string_view text) {
  const auto statements = tokenize(text);
  RunConfig c;
  const Statement* preset = nullptr;
  for (const auto& s : statements) {
    if (s.key != "preset") continue;
    if (preset) throw ParseError(s.line, s.column, "preset given twice");
    preset = &s;
  }
  if (preset) {
    try {
      c = preset_config(preset->value);
    } catch (const Error& e) {
      invalid("line " + std::to_string(preset->line) + ": " + e.what());
    }
  }
  for (const auto& s : statements) {
    if (preset && (s.key == "rhs" || s.key == "order"))
      invalid("line " + std::to_string(s.line) + ": '" + s.key + "' given together with a preset");
    apply(c, s);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  std::set<std::string> needed;
  if (c.is_inline()) {
    if (c.rhs.empty()) invalid("no system: give a preset or at least one rhs");
    if (c.order < 1) invalid("order must be >= 1");
    PolyOdeSystem sys{c.order, static_cast<int>(c.rhs.size()), c.rhs};
    try {
      sys.validate();
    } catch (const Error& e) {
      invalid(std::string("inline system: ") + e.what());
    }
    for (const auto& p : c.rhs)
      for (const auto& v : p.variables())
        if (v.is_param() && v.name != kStepParam) needed.insert(v.name);
  } else if (c.preset == "lv") {
    needed = {"alpha"};
  } else if (c.preset == "quartic") {
    needed = {"a", "b", "c", "d"};
  } else if (c.preset == "weierstrass") {
    needed = {"b", "d"};
  } else if (c.is_beam()) {
    needed = {"a", "b", "c"};
  } else {
    invalid("unknown preset '" + c.preset + "'");
  }
  for (const auto& n : needed)
    if (!c.params.count(n)) invalid("parameter '" + n + "' is not set");
  if (c.preset == "lv" && c.params.at("alpha") == 0) invalid("alpha must be nonzero");
  if (c.preset == "weierstrass" && c.params.at("b") == 0) invalid("b must be nonzero");

  if (c.h <= 0) invalid("h must be > 0");
  if (c.steps < 0) invalid("steps must be >= 0");
  if (c.samples < 1) invalid("samples must be >= 1");

  const std::size_t n = static_cast<std::size_t>(c.state_order() * c.state_dim());
  if (c.window.empty() && c.ode_initial.empty()) invalid("no initial data: set window or ode");
  if (!c.window.empty() && c.window.size() != n)
    invalid("window needs " + std::to_string(n) + " values, got " + std::to_string(c.window.size()));
  if (!c.ode_initial.empty() && c.ode_initial.size() != n)
    invalid("ode needs " + std::to_string(n) + " values, got " + std::to_string(c.ode_initial.size()));

  auto check_weights = [](const std::vector<Rational>& w, std::size_t size, const char* name) {
    if (w.empty()) return;
    if (w.size() != size) invalid(std::string(name) + " needs " + std::to_string(size) + " weights");
    Rational s;
    for (const auto& x : w) s += x;
    if (s != 1)
      throw Error(ErrorCode::AffineConstraintViolated, std::string(name) + " sums to " + s.get_str() + ", not 1");
  };
  check_weights(c.alpha, 6, "alphavec");
  check_weights(c.beta, 4, "betavec");

  const int size = static_cast<int>(n);
  if (size > 1 && (c.plot.first < 0 || c.plot.first >= size || c.plot.second < 0 || c.plot.second >= size))
    invalid("plot indices must lie in [0, " + std::to_string(size) + ")");
  if (c.darboux_maxdeg > 8) invalid("darboux degree above 8 is not supported");
}

}  // namespace kahan
