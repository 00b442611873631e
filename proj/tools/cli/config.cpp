#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace deltaloop::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_message(const std::string& source, int line, const std::string& message) {
  std::ostringstream o;
  o << source;
  if (line > 0) o << ':' << line;
  o << ": " << message;
  return o.str();
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
    throw std::invalid_argument("expected a number, got '" + t + "'");
  return v;
}

std::size_t parse_size(const std::string& text) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw std::invalid_argument("expected a nonnegative integer, got '" + t + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw std::invalid_argument("expected true or false, got '" + t + "'");
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"kind", "out", "workers"}},
      {"curve", {"kind", "radius", "semi_major", "semi_minor", "x_cos", "x_sin", "y_cos", "y_sin"}},
      {"sampling", {"density"}},
      {"grid", {"n1d", "boundary", "ns", "nu", "nu_check"}},
      {"params",
       {"a", "beta", "betas", "beta_range", "gamma_plus", "variant", "n", "operator", "form", "strip",
        "eigenfunction", "export_matrix"}},
  };
  return keys;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(format_message(source, line, message)), line_(line) {}

IniFile parse_ini(std::istream& in, const std::string& source) {
  IniFile file;
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(source, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(source, line, "empty section name");
      file[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "expected 'key = value'");
    if (section.empty()) throw ConfigError(source, line, "key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line, "empty key");
    auto& sec = file[section];
    if (sec.count(key)) {
      std::ostringstream o;
      o << "duplicate key '" << key << "' (first set on line " << sec[key].line << ")";
      throw ConfigError(source, line, o.str());
    }
    sec[key] = {value, line};
  }
  return file;
}

const std::vector<std::string>& kind_names() {
  static const std::vector<std::string> names = {"geometry", "spectrum-1d", "transverse", "bracket",
                                                 "strip",    "sweep-thm1",  "sweep-thm2", "count"};
  return names;
}

std::optional<Kind> parse_kind(const std::string& name) {
  const auto& names = kind_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<Kind>(it - names.begin());
}

std::string to_string(Kind k) { return kind_names()[static_cast<std::size_t>(k)]; }

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

RunConfig load_config(std::istream& in, const std::string& source, std::size_t default_workers) {
  const IniFile file = parse_ini(in, source);
  RunConfig c;
  c.source = source;
  c.workers = default_workers;

  for (const auto& [name, sec] : file) {
    const auto known = known_keys().find(name);
    if (known == known_keys().end()) {
      const int line = sec.empty() ? 0 : sec.begin()->second.line;
      throw ConfigError(source, line, "unknown section [" + name + "]");
    }
    for (const auto& [key, entry] : sec) {
      if (!known->second.count(key))
        throw ConfigError(source, entry.line, "unknown key '" + key + "' in [" + name + "]");
      c.lines[name + "." + key] = entry.line;
    }
  }

  auto get = [&](const std::string& section, const std::string& key) -> const IniEntry* {
    const auto s = file.find(section);
    if (s == file.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  // Converts with f, reporting the line on failure.
  auto read = [&](const std::string& section, const std::string& key, auto f) {
    const IniEntry* e = get(section, key);
    using T = decltype(f(std::string{}));
    if (!e) return std::optional<T>{};
    try {
      return std::optional<T>{f(e->value)};
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(source, e->line, section + "." + key + ": " + ex.what());
    }
  };
  auto line_of = [&](const std::string& section, const std::string& key) {
    const IniEntry* e = get(section, key);
    return e ? e->line : 0;
  };

  if (const IniEntry* e = get("run", "kind")) {
    c.kind = parse_kind(e->value);
    if (!c.kind) {
      std::string list;
      for (const auto& n : kind_names()) list += (list.empty() ? "" : ", ") + n;
      throw ConfigError(source, e->line, "unknown kind '" + e->value + "'; valid kinds: " + list);
    }
  }
  if (auto v = read("run", "out", [](const std::string& s) { return s; })) c.out = *v;
  if (auto v = read("run", "workers", parse_size)) c.workers = *v;

  if (const IniEntry* e = get("curve", "kind")) {
    if (e->value == "circle") {
      c.curve = CurveSpec::circle(read("curve", "radius", parse_double).value_or(1.0));
    } else if (e->value == "ellipse") {
      c.curve = CurveSpec::ellipse(read("curve", "semi_major", parse_double).value_or(2.0),
                                   read("curve", "semi_minor", parse_double).value_or(1.0));
    } else if (e->value == "fourier") {
      FourierCoefficients f;
      f.x_cos = read("curve", "x_cos", parse_number_list).value_or(std::vector<double>{});
      f.x_sin = read("curve", "x_sin", parse_number_list).value_or(std::vector<double>{});
      f.y_cos = read("curve", "y_cos", parse_number_list).value_or(std::vector<double>{});
      f.y_sin = read("curve", "y_sin", parse_number_list).value_or(std::vector<double>{});
      c.curve = CurveSpec::fourier_loop(f);
    } else {
      throw ConfigError(source, e->line, "curve.kind must be circle, ellipse or fourier");
    }
  } else if (file.count("curve")) {
    throw ConfigError(source, file.at("curve").empty() ? 0 : file.at("curve").begin()->second.line,
                      "[curve] needs a kind");
  }
  if (auto v = read("sampling", "density", parse_size)) c.density = *v;
  if (c.curve) c.curve->sample_density = c.density;

  if (auto v = read("grid", "n1d", parse_size)) c.n1d = *v;
  if (const IniEntry* e = get("grid", "boundary")) {
    if (e->value == "periodic") c.boundary = Boundary::periodic;
    else if (e->value == "dirichlet") c.boundary = Boundary::dirichlet;
    else if (e->value == "neumann") c.boundary = Boundary::neumann;
    else throw ConfigError(source, e->line, "grid.boundary must be periodic, dirichlet or neumann");
  }
  if (auto v = read("grid", "ns", parse_size)) c.strip_grid.ns = *v;
  if (auto v = read("grid", "nu", parse_size)) c.strip_grid.nu = *v;
  if (auto v = read("grid", "nu_check", parse_size)) c.nu_check = *v;

  c.a = read("params", "a", parse_double);
  c.gamma_plus = read("params", "gamma_plus", parse_double);
  if (get("params", "beta") && (get("params", "betas") || get("params", "beta_range")))
    throw ConfigError(source, line_of("params", "beta"), "set only one of beta, betas, beta_range");
  if (get("params", "betas") && get("params", "beta_range"))
    throw ConfigError(source, line_of("params", "beta_range"), "set only one of betas, beta_range");
  if (auto v = read("params", "beta", parse_double)) c.betas = {*v};
  if (auto v = read("params", "betas", parse_number_list)) c.betas = *v;
  if (auto v = read("params", "beta_range", parse_number_list)) {
    const int line = line_of("params", "beta_range");
    if (v->size() != 3) throw ConfigError(source, line, "beta_range is 'first, last, count' (geometric spacing)");
    const double first = (*v)[0], last = (*v)[1], count = (*v)[2];
    if (!(first > 0.0) || !(last > first) || count < 2 || count != std::floor(count))
      throw ConfigError(source, line, "beta_range needs 0 < first < last and an integer count >= 2");
    const auto m = static_cast<std::size_t>(count);
    c.betas.clear();
    for (std::size_t i = 0; i < m; ++i)
      c.betas.push_back(i + 1 == m ? last : first * std::pow(last / first, static_cast<double>(i) / (count - 1)));
  }
  if (const IniEntry* e = get("params", "variant")) {
    if (e->value == "plus") c.variants = Variants::plus;
    else if (e->value == "minus") c.variants = Variants::minus;
    else if (e->value == "both") c.variants = Variants::both;
    else throw ConfigError(source, e->line, "params.variant must be plus, minus or both");
  }
  if (auto v = read("params", "n", parse_size)) c.n = *v;
  if (const IniEntry* e = get("params", "operator")) {
    if (e->value != "S" && e->value != "U") throw ConfigError(source, e->line, "params.operator must be S or U");
    c.op = e->value;
  }
  if (const IniEntry* e = get("params", "form")) {
    if (e->value == "exact") c.form = StripForm::exact;
    else if (e->value == "separated") c.form = StripForm::separated;
    else throw ConfigError(source, e->line, "params.form must be exact or separated");
  }
  if (auto v = read("params", "strip", parse_bool)) c.strip_in_sweep = *v;
  if (auto v = read("params", "eigenfunction", parse_size)) c.eigenfunction = *v;
  if (auto v = read("params", "export_matrix", parse_bool)) c.export_matrix = *v;

  return c;
}

RunConfig load_config(const std::filesystem::path& path, std::size_t default_workers) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  return load_config(in, path.string(), default_workers);
}

void RunConfig::validate() const {
  auto fail = [&](const std::string& key, const std::string& message) {
    const auto it = lines.find(key);
    throw ConfigError(source, it == lines.end() ? 0 : it->second, message);
  };
  if (!kind) {
    std::string list;
    for (const auto& n : kind_names()) list += (list.empty() ? "" : ", ") + n;
    fail("run.kind", "no computation kind given; valid kinds: " + list);
  }
  if (workers == 0) fail("run.workers", "workers must be at least 1");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0)) fail("params.betas", "beta values must be positive");
    if (i > 0 && !(betas[i] > betas[i - 1])) fail("params.betas", "beta values must be strictly increasing");
  }
  const std::string k = to_string(*kind);
  auto need_curve = [&] {
    if (!curve) fail("curve.kind", "kind " + k + " needs a [curve] section");
  };
  auto need_betas = [&] {
    if (betas.empty()) fail("params.beta", "kind " + k + " needs params.beta, params.betas or params.beta_range");
  };
  auto need_a = [&] {
    if (!a) fail("params.a", "kind " + k + " needs params.a");
    if (!(*a > 0.0)) fail("params.a", "params.a must be positive");
  };
  if (n == 0) fail("params.n", "params.n must be at least 1");

  switch (*kind) {
    case Kind::geometry:
      need_curve();
      break;
    case Kind::spectrum_1d:
      need_curve();
      if (op == "U") need_a();
      if (op == "U" && variants == Variants::both && boundary != Boundary::periodic)
        fail("params.variant", "open-arc U needs a single variant (plus: dirichlet, minus: neumann)");
      if (op == "S" && boundary != Boundary::periodic) fail("grid.boundary", "S is defined on the closed curve only");
      break;
    case Kind::transverse:
      need_a();
      need_betas();
      if (gamma_plus && *gamma_plus < 0.0) fail("params.gamma_plus", "params.gamma_plus must be nonnegative");
      break;
    case Kind::strip:
      need_curve();
      need_betas();
      if (a && !(*a > 0.0)) fail("params.a", "params.a must be positive");
      break;
    case Kind::bracket:
    case Kind::sweep_thm1:
    case Kind::sweep_thm2:
    case Kind::count:
      need_curve();
      need_betas();
      for (double b : betas)
        if (!(b > 1.0)) fail("params.betas", "the half-width rule needs beta > 1");
      if ((*kind == Kind::sweep_thm1 || *kind == Kind::sweep_thm2) && betas.size() < 4)
        fail("params.betas", "sweeps need at least four beta values");
      break;
  }
}

}  // namespace deltaloop::cli
