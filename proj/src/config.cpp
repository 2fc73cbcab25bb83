#include "richlab/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "richlab/error.hpp"

namespace richlab {

namespace {

struct KindInfo {
  ExperimentKind kind;
  const char* name;
  std::vector<std::string> keys;  // kind-specific keys
};

const std::vector<KindInfo>& kind_table() {
  static const std::vector<KindInfo> table = {
      {ExperimentKind::Mu, "mu", {"lambda", "n"}},
      {ExperimentKind::MuHyperplane, "mu-hyperplane", {"lambda", "n", "W", "identity"}},
      {ExperimentKind::MuHampered, "mu-hampered", {"lambda", "n", "b"}},
      {ExperimentKind::Descent, "descent", {"b", "W", "overshoot"}},
      {ExperimentKind::Records, "records", {"t", "lateral"}},
      {ExperimentKind::RecordProbability, "record-probability", {"n", "K"}},
      {ExperimentKind::Shape, "shape", {"lambda", "t"}},
      {ExperimentKind::Survival, "survival", {"cfg", "type1", "type2", "lambda2", "clock", "engine", "M", "horizon", "R"}},
      {ExperimentKind::CoexistenceScan, "coexistence-scan", {"n", "R", "swap"}},
      {ExperimentKind::Simulate,
       "simulate",
       {"cfg", "type1", "type2", "lambda1", "lambda2", "clock", "engine", "M", "horizon", "R", "rep", "stop", "emit_events"}},
  };
  return table;
}

const KindInfo& info(ExperimentKind k) {
  for (const auto& i : kind_table()) {
    if (i.kind == k) return i;
  }
  throw ContractViolation("unknown experiment kind");
}

const std::set<std::string>& common_keys() {
  static const std::set<std::string> keys = {"kind", "seed", "reps", "dim", "out"};
  return keys;
}

bool known_key(const std::string& key) {
  if (common_keys().count(key)) return true;
  for (const auto& i : kind_table()) {
    if (std::find(i.keys.begin(), i.keys.end(), key) != i.keys.end()) return true;
  }
  return false;
}

[[noreturn]] void fail(const ConfigToken& tok, const std::string& msg) { throw ConfigError(tok.where() + ": " + msg); }

template <typename Int>
Int to_int(const ConfigToken& tok, std::string_view text) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    fail(tok, "key '" + tok.key + "' expects an integer, got '" + std::string(text) + "'");
  }
  return v;
}

double to_double(const ConfigToken& tok) {
  double v = 0;
  const auto* end = tok.value.data() + tok.value.size();
  const auto [ptr, ec] = std::from_chars(tok.value.data(), end, v);
  if (ec != std::errc() || ptr != end || tok.value.empty() || !std::isfinite(v)) {
    fail(tok, "key '" + tok.key + "' expects a finite number, got '" + tok.value + "'");
  }
  return v;
}

bool to_bool(const ConfigToken& tok) {
  if (tok.value == "true" || tok.value == "1") return true;
  if (tok.value == "false" || tok.value == "0") return false;
  fail(tok, "key '" + tok.key + "' expects true or false, got '" + tok.value + "'");
}

std::vector<std::int64_t> to_list(const ConfigToken& tok) {
  std::vector<std::int64_t> out;
  std::string_view rest = tok.value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(to_int<std::int64_t>(tok, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_list(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

const char* stop_name(StopMode m) {
  switch (m) {
    case StopMode::Survival: return "survival";
    case StopMode::Coexistence: return "coexistence";
    case StopMode::Exhaust: return "exhaust";
  }
  return "?";
}

// Reads validated values out of the (last-wins) token map.
class Reader {
 public:
  Reader(const std::map<std::string, ConfigToken>& tokens, const ConfigToken& kind_tok)
      : tokens_(tokens), kind_tok_(kind_tok) {}

  const ConfigToken* find(const std::string& key) const {
    const auto it = tokens_.find(key);
    return it == tokens_.end() ? nullptr : &it->second;
  }
  const ConfigToken& require(const std::string& key) const {
    if (const auto* t = find(key)) return *t;
    fail(kind_tok_, "missing required key '" + key + "' for kind=" + kind_tok_.value);
  }
  const ConfigToken& anchor(const std::string& key) const {
    const auto* t = find(key);
    return t ? *t : kind_tok_;
  }

  std::optional<std::int64_t> integer(const std::string& key, std::optional<std::int64_t> min = std::nullopt) const {
    const auto* t = find(key);
    if (!t) return std::nullopt;
    const auto v = to_int<std::int64_t>(*t, t->value);
    if (min && v < *min) fail(*t, "key '" + key + "' must be >= " + std::to_string(*min) + ", got " + t->value);
    return v;
  }
  std::optional<double> rate(const std::string& key) const {
    const auto* t = find(key);
    if (!t) return std::nullopt;
    const double v = to_double(*t);
    if (!(v > 0)) fail(*t, "key '" + key + "' violates the precondition lambda > 0 (got " + t->value + ")");
    return v;
  }
  std::optional<double> positive(const std::string& key) const {
    const auto* t = find(key);
    if (!t) return std::nullopt;
    const double v = to_double(*t);
    if (!(v > 0)) fail(*t, "key '" + key + "' must be > 0, got " + t->value);
    return v;
  }
  std::optional<bool> boolean(const std::string& key) const {
    const auto* t = find(key);
    if (!t) return std::nullopt;
    return to_bool(*t);
  }
  std::vector<std::int64_t> list(const std::string& key, std::int64_t min) const {
    const auto* t = find(key);
    if (!t) return {};
    auto v = to_list(*t);
    for (const auto x : v) {
      if (x < min) fail(*t, "key '" + key + "' entries must be >= " + std::to_string(min) + ", got " + t->value);
    }
    return v;
  }

  const ConfigToken& kind_token() const { return kind_tok_; }

 private:
  const std::map<std::string, ConfigToken>& tokens_;
  const ConfigToken& kind_tok_;
};

std::optional<SeedConfig> read_seeds(const Reader& r, int dim) {
  const auto* cfg = r.find("cfg");
  const auto* t1 = r.find("type1");
  const auto* t2 = r.find("type2");
  if (!cfg && !t1 && !t2) return std::nullopt;
  if (cfg && (t1 || t2)) fail(*cfg, "use either cfg=<region> or type1=/type2=, not both");
  auto region = [&](const ConfigToken& tok) {
    try {
      return parse_region(tok.value);
    } catch (const Error& e) {
      fail(tok, "bad region '" + tok.value + "': " + e.what());
    }
  };
  SeedConfig s{dim, RegionSpec::empty(), RegionSpec::origin()};
  if (cfg) {
    s.type1 = region(*cfg);
  } else {
    if (t1) s.type1 = region(*t1);
    if (t2) s.type2 = region(*t2);
  }
  for (const auto& reg : {s.type1, s.type2}) {
    if (reg.kind != RegionKind::Explicit) continue;
    for (const auto& p : reg.points) {
      if (p.dim() != dim) fail(r.anchor(cfg ? "cfg" : "type1"), "explicit point " + p.to_string() + " does not have dim=" + std::to_string(dim));
    }
  }
  try {
    enumerate_seeds(s);
  } catch (const Error& e) {
    fail(r.anchor(cfg ? "cfg" : "type1"), e.what());
  }
  return s;
}

void check_box(const Reader& r, const ExperimentConfig& c, std::int64_t radius, bool needs_radius_rule) {
  const auto m = effective_half_width(c);
  const auto& where = r.anchor(r.find("R") ? "R" : "M");
  if (m < 1) fail(where, "box half-width M must be >= 1; set M explicitly");
  if (needs_radius_rule && 2 * radius > m) {
    fail(where, "R=" + std::to_string(radius) + " exceeds the domain rule R <= M/2 (M=" + std::to_string(m) +
                    (c.half_width ? "" : ", the default for this seed configuration") + ")");
  }
  const auto seeds = enumerate_seeds(*c.seeds);
  for (const auto* list : {&seeds.type1, &seeds.type2}) {
    for (const auto& p : *list) {
      if (p.linf_norm() > m) fail(r.anchor("M"), "seed " + p.to_string() + " lies outside the box M=" + std::to_string(m));
    }
  }
}

}  // namespace

std::string kind_name(ExperimentKind k) { return info(k).name; }

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "survival-curve") s = "survival";
  for (const auto& i : kind_table()) {
    if (s == i.name) return i.kind;
  }
  return std::nullopt;
}

std::vector<std::string> kind_names() {
  std::vector<std::string> out;
  for (const auto& i : kind_table()) out.emplace_back(i.name);
  return out;
}

std::string ConfigToken::where() const {
  return source + " line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::vector<ConfigToken> tokenize_config(std::string_view text, std::string_view source) {
  std::vector<ConfigToken> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance();
      continue;
    }
    ConfigToken tok;
    tok.source = std::string(source);
    tok.line = line;
    tok.column = col;
    std::string word;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') {
      word += text[i];
      advance();
    }
    const auto eq = word.find('=');
    if (eq == std::string::npos || eq == 0) {
      tok.key = word;
      fail(tok, "expected key=value, got '" + word + "'");
    }
    tok.key = word.substr(0, eq);
    tok.value = word.substr(eq + 1);
    out.push_back(std::move(tok));
  }
  return out;
}

ExperimentConfig build_config(const std::vector<ConfigToken>& tokens) {
  std::map<std::string, ConfigToken> last;
  for (const auto& tok : tokens) {
    if (!known_key(tok.key)) fail(tok, "unknown key '" + tok.key + "'");
    last[tok.key] = tok;
  }
  const auto kt = last.find("kind");
  if (kt == last.end()) {
    ConfigToken where{"kind", "", tokens.empty() ? "<text>" : tokens.front().source, 1, 1};
    fail(where, "missing required key 'kind' (one of: mu, mu-hyperplane, mu-hampered, descent, records, "
                "record-probability, shape, survival, coexistence-scan, simulate)");
  }
  const ConfigToken& kind_tok = kt->second;
  const auto kind = parse_kind(kind_tok.value);
  if (!kind) fail(kind_tok, "unknown experiment kind '" + kind_tok.value + "'");
  const auto& ki = info(*kind);
  for (const auto& [key, tok] : last) {
    if (common_keys().count(key)) continue;
    if (std::find(ki.keys.begin(), ki.keys.end(), key) == ki.keys.end()) {
      fail(tok, "key '" + key + "' does not apply to kind=" + std::string(ki.name));
    }
  }

  const Reader r(last, kind_tok);
  ExperimentConfig c;
  c.kind = *kind;
  if (const auto* t = r.find("seed")) c.seed = to_int<std::uint64_t>(*t, t->value);
  c.reps = r.integer("reps", 1).value_or(c.reps);
  c.dim = static_cast<int>(r.integer("dim", 1).value_or(2));
  if (c.dim > Point::kMaxDim) fail(r.anchor("dim"), "dim must be <= " + std::to_string(Point::kMaxDim));
  if (const auto* t = r.find("out")) {
    if (t->value.empty()) fail(*t, "out must be a nonempty path");
    c.out = t->value;
  }

  switch (c.kind) {
    case ExperimentKind::Mu:
      c.lambda = r.rate("lambda").value_or(1.0);
      c.n = r.integer("n", 1);
      r.require("n");
      break;
    case ExperimentKind::MuHyperplane:
      c.lambda = r.rate("lambda").value_or(1.0);
      r.require("n");
      c.n = r.integer("n", 1);
      c.width = r.integer("W").value_or(4 * *c.n);
      if (*c.width < 4 * *c.n) fail(r.anchor("W"), "W=" + std::to_string(*c.width) + " violates W >= 4n (n=" + std::to_string(*c.n) + ")");
      c.identity = r.boolean("identity").value_or(true);
      break;
    case ExperimentKind::MuHampered:
      c.lambda = r.rate("lambda").value_or(1.0);
      r.require("n");
      c.n = r.integer("n", 1);
      r.require("b");
      c.b_list = r.list("b", 0);
      break;
    case ExperimentKind::Descent:
      r.require("b");
      r.require("W");
      c.b = r.integer("b", 0);
      c.width = r.integer("W", 0);
      if (*c.width < *c.b) fail(r.anchor("W"), "W must be >= b");
      c.overshoot = r.integer("overshoot", 0).value_or(*c.b);
      break;
    case ExperimentKind::Records:
      r.require("t");
      c.t = r.positive("t");
      c.lateral = r.integer("lateral", 1);
      break;
    case ExperimentKind::RecordProbability:
      r.require("n");
      r.require("K");
      c.n = r.integer("n", 0);
      c.k = r.integer("K", 0);
      break;
    case ExperimentKind::Shape:
      if (c.dim != 2) fail(r.anchor("dim"), "shape diagnostics are supported only for dim=2");
      c.lambda = r.rate("lambda").value_or(1.0);
      r.require("t");
      c.t = r.positive("t");
      break;
    case ExperimentKind::Survival: {
      c.seeds = read_seeds(r, c.dim);
      if (!c.seeds) r.require("cfg");
      c.lambda2 = r.rate("lambda2").value_or(1.0);
      if (const auto* t = r.find("clock")) {
        if (t->value != "single" && t->value != "two") fail(*t, "clock must be single or two");
        c.clock = t->value == "single" ? ClockMode::Single : ClockMode::Two;
      } else {
        c.clock = ClockMode::Two;
      }
      if (*c.clock == ClockMode::Single && *c.lambda2 != 1.0) fail(r.anchor("clock"), "clock=single requires lambda2 = lambda1 = 1");
      if (const auto* t = r.find("engine")) {
        if (t->value != "weights" && t->value != "markov") fail(*t, "engine must be weights or markov");
        c.engine = t->value == "markov" ? Engine::Markov : Engine::Weights;
      } else {
        c.engine = Engine::Weights;
      }
      c.half_width = r.integer("M", 1);
      c.horizon = r.positive("horizon");
      r.require("R");
      c.radii = r.list("R", 0);
      for (std::size_t i = 1; i < c.radii.size(); ++i) {
        if (c.radii[i] <= c.radii[i - 1]) fail(r.anchor("R"), "R list must be strictly increasing");
      }
      check_box(r, c, c.radii.back(), true);
      break;
    }
    case ExperimentKind::CoexistenceScan:
      if (const auto* t = r.find("n")) {
        for (const auto v : to_list(*t)) {
          if (v < 1) fail(*t, "separation n=" + std::to_string(v) + " makes the two seeds overlap or swap; need n >= 1");
        }
      }
      r.require("n");
      c.n_list = r.list("n", 1);
      r.require("R");
      c.radii = {*r.integer("R", 1)};
      c.swap = r.boolean("swap").value_or(false);
      break;
    case ExperimentKind::Simulate: {
      c.seeds = read_seeds(r, c.dim);
      if (!c.seeds) r.require("cfg");
      c.lambda1 = r.rate("lambda1").value_or(1.0);
      c.lambda2 = r.rate("lambda2").value_or(1.0);
      if (const auto* t = r.find("clock")) {
        if (t->value != "single" && t->value != "two") fail(*t, "clock must be single or two");
        c.clock = t->value == "single" ? ClockMode::Single : ClockMode::Two;
      } else {
        c.clock = ClockMode::Two;
      }
      if (*c.clock == ClockMode::Single && *c.lambda1 != *c.lambda2) fail(r.anchor("clock"), "clock=single requires lambda1 = lambda2");
      if (const auto* t = r.find("engine")) {
        if (t->value != "weights" && t->value != "markov") fail(*t, "engine must be weights or markov");
        c.engine = t->value == "markov" ? Engine::Markov : Engine::Weights;
      } else {
        c.engine = Engine::Weights;
      }
      c.half_width = r.integer("M", 1);
      c.horizon = r.positive("horizon");
      c.rep = r.integer("rep", 0).value_or(0);
      c.emit_events = r.boolean("emit_events").value_or(false);
      const auto radius = r.integer("R", 1);
      if (radius) c.radii = {*radius};
      if (const auto* t = r.find("stop")) {
        if (t->value == "survival") c.stop = StopMode::Survival;
        else if (t->value == "coexistence") c.stop = StopMode::Coexistence;
        else if (t->value == "exhaust") c.stop = StopMode::Exhaust;
        else fail(*t, "stop must be survival, coexistence or exhaust");
      } else {
        c.stop = radius ? StopMode::Survival : StopMode::Exhaust;
      }
      if (*c.stop == StopMode::Coexistence) fail(r.anchor("stop"), "stop=coexistence is available through coexistence-scan");
      if (*c.stop == StopMode::Survival && !radius) fail(r.anchor("stop"), "stop=survival needs R");
      check_box(r, c, radius.value_or(0), *c.stop == StopMode::Survival);
      break;
    }
  }
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  const auto tokens = tokenize_config(text);
  std::map<std::string, const ConfigToken*> seen;
  for (const auto& tok : tokens) {
    const auto [it, fresh] = seen.emplace(tok.key, &tok);
    if (!fresh) fail(tok, "key '" + tok.key + "' already set at " + it->second->where());
  }
  return build_config(tokens);
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "kind=" << kind_name(c.kind) << '\n';
  os << "seed=" << c.seed << '\n';
  os << "reps=" << c.reps << '\n';
  os << "dim=" << c.dim << '\n';
  os << "out=" << c.out << '\n';
  auto put_int = [&](const char* key, const std::optional<std::int64_t>& v) {
    if (v) os << key << '=' << *v << '\n';
  };
  auto put_double = [&](const char* key, const std::optional<double>& v) {
    if (v) os << key << '=' << format_double(*v) << '\n';
  };
  auto put_bool = [&](const char* key, const std::optional<bool>& v) {
    if (v) os << key << '=' << (*v ? "true" : "false") << '\n';
  };
  put_double("lambda", c.lambda);
  if (c.kind == ExperimentKind::MuHampered) {
    put_int("n", c.n);
    os << "b=" << format_list(c.b_list) << '\n';
  } else if (c.kind == ExperimentKind::CoexistenceScan) {
    os << "n=" << format_list(c.n_list) << '\n';
  } else {
    put_int("n", c.n);
    put_int("b", c.b);
  }
  put_int("W", c.width);
  put_int("overshoot", c.overshoot);
  put_int("K", c.k);
  put_double("t", c.t);
  put_int("lateral", c.lateral);
  put_bool("identity", c.identity);
  if (c.seeds) {
    if (c.seeds->type2 == RegionSpec::origin()) {
      os << "cfg=" << format_region(c.seeds->type1) << '\n';
    } else {
      os << "type1=" << format_region(c.seeds->type1) << '\n';
      os << "type2=" << format_region(c.seeds->type2) << '\n';
    }
  }
  put_double("lambda1", c.lambda1);
  put_double("lambda2", c.lambda2);
  if (c.clock) os << "clock=" << (*c.clock == ClockMode::Single ? "single" : "two") << '\n';
  if (c.engine) os << "engine=" << (*c.engine == Engine::Markov ? "markov" : "weights") << '\n';
  put_int("M", c.half_width);
  put_double("horizon", c.horizon);
  if (!c.radii.empty()) os << "R=" << format_list(c.radii) << '\n';
  put_bool("swap", c.swap);
  put_int("rep", c.rep);
  if (c.stop) os << "stop=" << stop_name(*c.stop) << '\n';
  put_bool("emit_events", c.emit_events);
  return os.str();
}

std::int64_t effective_half_width(const ExperimentConfig& c) {
  if (c.half_width) return *c.half_width;
  if (!c.seeds) return 0;
  return default_half_width(*c.seeds, c.radii.empty() ? 0 : c.radii.back());
}

}  // namespace richlab
