#include "lossynet/config.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"

namespace lossynet {

namespace {

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct KeySpec {
  std::string section;
  std::string name;
  Setter set;
  Getter get;

  std::string path() const { return section.empty() ? name : section + "." + name; }
};

std::vector<std::string_view> words(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

double to_double(std::string_view v) { return parse_double(v, "value"); }

std::uint64_t to_u64(std::string_view v) { return parse_unsigned(v, "value"); }

bool is_word(std::string_view v, std::string_view w) { return trim(v) == w; }

std::pair<double, double> to_pair(std::string_view v) {
  const auto w = words(trim(v));
  if (w.size() != 2) throw DomainError("expected two numbers 'low high'");
  return {to_double(w[0]), to_double(w[1])};
}

std::string pair_text(double a, double b) { return format_double(a) + " " + format_double(b); }

std::optional<Box> to_box(std::string_view v) {
  if (is_word(v, "none")) return std::nullopt;
  const auto [lo, hi] = to_pair(v);
  return Box{lo, hi};
}

std::string box_text(const std::optional<Box>& b) {
  return b ? pair_text(b->lower, b->upper) : "none";
}

Interval to_interval(std::string_view v) {
  const auto [lo, hi] = to_pair(v);
  return {lo, hi};
}

std::vector<double> to_list(std::string_view v) {
  std::vector<double> out;
  for (const auto w : words(trim(v))) out.push_back(to_double(w));
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

NonlinearMap& map_of(ExperimentConfig& c, bool node) { return node ? c.g_n : c.g_l; }
const NonlinearMap& map_of(const ExperimentConfig& c, bool node) { return node ? c.g_n : c.g_l; }

void add_map_keys(std::vector<KeySpec>& keys, const std::string& prefix, bool node) {
  keys.push_back({"maps", prefix,
                  [node](ExperimentConfig& c, std::string_view v) {
                    const auto kind = parse_map_kind(trim(v));
                    if (!kind) {
                      throw DomainError("expected identity, cubic, signum-power, log-quantizer "
                                        "or uniform-quantizer");
                    }
                    map_of(c, node).kind = *kind;
                  },
                  [node](const ExperimentConfig& c) {
                    return std::string(to_string(map_of(c, node).kind));
                  }});
  keys.push_back({"maps", prefix + "_v1",
                  [node](ExperimentConfig& c, std::string_view v) { map_of(c, node).v1 = to_double(v); },
                  [node](const ExperimentConfig& c) { return format_double(map_of(c, node).v1); }});
  keys.push_back({"maps", prefix + "_v2",
                  [node](ExperimentConfig& c, std::string_view v) { map_of(c, node).v2 = to_double(v); },
                  [node](const ExperimentConfig& c) { return format_double(map_of(c, node).v2); }});
  keys.push_back({"maps", prefix + "_rho",
                  [node](ExperimentConfig& c, std::string_view v) { map_of(c, node).rho = to_double(v); },
                  [node](const ExperimentConfig& c) { return format_double(map_of(c, node).rho); }});
}

#define LOSSYNET_DOUBLE_KEY(section, name, field)                                             \
  KeySpec {                                                                                   \
    section, name, [](ExperimentConfig& c, std::string_view v) { c.field = to_double(v); },   \
        [](const ExperimentConfig& c) { return format_double(c.field); }                      \
  }

#define LOSSYNET_SIZE_KEY(section, name, field)                                               \
  KeySpec {                                                                                   \
    section, name,                                                                            \
        [](ExperimentConfig& c, std::string_view v) {                                         \
          c.field = static_cast<decltype(c.field)>(to_u64(v));                                \
        },                                                                                    \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }                     \
  }

#define LOSSYNET_STRING_KEY(section, name, field)                                             \
  KeySpec {                                                                                   \
    section, name, [](ExperimentConfig& c, std::string_view v) { c.field = trim(v); },        \
        [](const ExperimentConfig& c) { return c.field; }                                     \
  }

#define LOSSYNET_RANGE_KEY(name, field)                                                       \
  KeySpec {                                                                                   \
    "objectives", name,                                                                       \
        [](ExperimentConfig& c, std::string_view v) { c.ranges.field = to_interval(v); },     \
        [](const ExperimentConfig& c) {                                                       \
          return pair_text(c.ranges.field.lower, c.ranges.field.upper);                       \
        }                                                                                     \
  }

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> k;
    k.push_back(LOSSYNET_SIZE_KEY("", "seed", seed));

    k.push_back({"graph", "model",
                 [](ExperimentConfig& c, std::string_view v) {
                   const auto m = parse_graph_model(trim(v));
                   if (!m) throw DomainError("expected er, sw, sf or grid");
                   c.graph.kind = *m;
                 },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.graph.kind)); }});
    k.push_back(LOSSYNET_SIZE_KEY("graph", "n", graph.nodes));
    k.push_back(LOSSYNET_DOUBLE_KEY("graph", "p", graph.link_probability));
    k.push_back(LOSSYNET_SIZE_KEY("graph", "m", graph.ring_neighbors));
    k.push_back(LOSSYNET_DOUBLE_KEY("graph", "theta", graph.shortcut_probability));
    k.push_back(LOSSYNET_DOUBLE_KEY("graph", "sigma", graph.degree_exponent));
    k.push_back(LOSSYNET_SIZE_KEY("graph", "min_degree", graph.min_degree));
    k.push_back(LOSSYNET_SIZE_KEY("graph", "rows", graph.rows));
    k.push_back(LOSSYNET_SIZE_KEY("graph", "cols", graph.cols));
    k.push_back({"graph", "seed",
                 [](ExperimentConfig& c, std::string_view v) {
                   if (is_word(v, "auto")) {
                     c.graph_seed.reset();
                   } else {
                     c.graph_seed = to_u64(v);
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return c.graph_seed ? std::to_string(*c.graph_seed) : std::string("auto");
                 }});
    k.push_back(LOSSYNET_STRING_KEY("graph", "file", graph_file));

    k.push_back(LOSSYNET_DOUBLE_KEY("weights", "low", weight_low));
    k.push_back(LOSSYNET_DOUBLE_KEY("weights", "high", weight_high));

    k.push_back({"objectives", "kind",
                 [](ExperimentConfig& c, std::string_view v) {
                   const auto kind = parse_objective_kind(trim(v));
                   if (!kind) throw DomainError("expected quadratic or quad-logexp");
                   c.objective_kind = *kind;
                 },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.objective_kind)); }});
    k.push_back(LOSSYNET_RANGE_KEY("a", a));
    k.push_back(LOSSYNET_RANGE_KEY("c", c));
    k.push_back(LOSSYNET_RANGE_KEY("l", l));
    k.push_back(LOSSYNET_RANGE_KEY("d", d));
    k.push_back({"objectives", "box",
                 [](ExperimentConfig& c, std::string_view v) { c.box = to_box(v); },
                 [](const ExperimentConfig& c) { return box_text(c.box); }});
    k.push_back(LOSSYNET_DOUBLE_KEY("objectives", "gamma", gamma));

    add_map_keys(k, "node", true);
    add_map_keys(k, "link", false);

    k.push_back({"dynamics", "eta",
                 [](ExperimentConfig& c, std::string_view v) {
                   if (is_word(v, "auto")) {
                     c.eta.reset();
                   } else {
                     c.eta = to_double(v);
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return c.eta ? format_double(*c.eta) : std::string("auto");
                 }});
    k.push_back(LOSSYNET_DOUBLE_KEY("dynamics", "eta_scale", eta_scale));
    k.push_back(LOSSYNET_SIZE_KEY("dynamics", "max_iters", max_iters));
    k.push_back(LOSSYNET_DOUBLE_KEY("dynamics", "dispersion_tol", dispersion_tol));
    k.push_back(LOSSYNET_DOUBLE_KEY("dynamics", "feasibility_tol", feasibility_tol));
    k.push_back(LOSSYNET_DOUBLE_KEY("dynamics", "demand", demand));
    k.push_back({"dynamics", "init_box",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.init_box = is_word(v, "auto") ? std::nullopt : to_box(v);
                 },
                 [](const ExperimentConfig& c) {
                   return c.init_box ? box_text(c.init_box) : std::string("auto");
                 }});
    k.push_back({"dynamics", "domain",
                 [](ExperimentConfig& c, std::string_view v) {
                   if (is_word(v, "auto")) {
                     c.domain.reset();
                   } else {
                     c.domain = to_interval(v);
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return c.domain ? pair_text(c.domain->lower, c.domain->upper)
                                   : std::string("auto");
                 }});

    k.push_back({"drops", "mode",
                 [](ExperimentConfig& c, std::string_view v) {
                   const auto m = parse_drop_mode(trim(v));
                   if (!m) throw DomainError("expected homogeneous, heterogeneous or scheduled");
                   c.drop_mode = *m;
                 },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.drop_mode)); }});
    k.push_back(LOSSYNET_DOUBLE_KEY("drops", "p_d", p_d));
    k.push_back({"drops", "rates",
                 [](ExperimentConfig& c, std::string_view v) { c.rates = to_list(v); },
                 [](const ExperimentConfig& c) { return list_text(c.rates); }});
    k.push_back(LOSSYNET_SIZE_KEY("drops", "period", period));
    k.push_back(LOSSYNET_STRING_KEY("drops", "rates_file", rates_file));

    k.push_back({"audit", "window",
                 [](ExperimentConfig& c, std::string_view v) {
                   if (is_word(v, "none")) {
                     c.audit_window.reset();
                   } else {
                     c.audit_window = to_u64(v);
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return c.audit_window ? std::to_string(*c.audit_window) : std::string("none");
                 }});

    k.push_back(LOSSYNET_STRING_KEY("output", "dir", output_dir));
    k.push_back(LOSSYNET_STRING_KEY("output", "trace", trace_file));
    k.push_back(LOSSYNET_STRING_KEY("output", "summary", summary_file));
    k.push_back(LOSSYNET_STRING_KEY("output", "states", states_file));
    return k;
  }();
  return table;
}

#undef LOSSYNET_DOUBLE_KEY
#undef LOSSYNET_SIZE_KEY
#undef LOSSYNET_STRING_KEY
#undef LOSSYNET_RANGE_KEY

const KeySpec* find_key(std::string_view section, std::string_view name) {
  for (const auto& k : key_table()) {
    if (k.section == section && k.name == name) return &k;
  }
  return nullptr;
}

bool known_section(std::string_view section) {
  for (const auto& k : key_table()) {
    if (k.section == section) return true;
  }
  return false;
}

void apply(const KeySpec& key, ExperimentConfig& c, std::string_view value) {
  try {
    key.set(c, value);
  } catch (const DomainError& e) {
    throw ConfigError(key.section, key.name, e.what());
  }
}

// Drops a trailing comment: '#' at the start or after whitespace.
std::string_view strip_comment(std::string_view line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig c;
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const auto line = trim(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", "", where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty() || !known_section(section)) {
        throw ConfigError(section, "", where + ": unknown section");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(section, std::string(line), where + ": expected 'key = value'");
    }
    const std::string name(trim(line.substr(0, eq)));
    const KeySpec* key = find_key(section, name);
    if (!key) throw ConfigError(section, name, where + ": unknown key");
    if (!seen.insert(key->path()).second) {
      throw ConfigError(section, name, where + ": duplicate key");
    }
    apply(*key, c, line.substr(eq + 1));
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

std::string ExperimentConfig::echo() const {
  std::ostringstream out;
  std::string section;
  for (const auto& k : key_table()) {
    if (k.section != section) {
      section = k.section;
      out << "\n[" << section << "]\n";
    }
    const std::string value = k.get(*this);
    out << k.name << " =" << (value.empty() ? "" : " ") << value << '\n';
  }
  return out.str();
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  const auto dot = key.find('.');
  const std::string_view section = dot == std::string_view::npos ? "" : key.substr(0, dot);
  const std::string_view name = dot == std::string_view::npos ? key : key.substr(dot + 1);
  const KeySpec* spec = find_key(section, name);
  if (!spec) {
    std::string valid;
    for (const auto& k : key_table()) valid += (valid.empty() ? "" : ", ") + k.path();
    throw ConfigError(std::string(section), std::string(name),
                      "unknown key; valid keys: " + valid);
  }
  apply(*spec, *this, value);
}

std::vector<std::string> ExperimentConfig::keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.push_back(k.path());
  return out;
}

void ExperimentConfig::validate() const {
  auto wrap = [](const char* section, const char* key, auto&& check) {
    try {
      check();
    } catch (const DomainError& e) {
      throw ConfigError(section, key, e.what());
    }
  };
  if (graph_file.empty()) wrap("graph", "model", [&] { graph.validate(); });
  if (!(weight_low >= 0.0 && weight_high > 0.0 && weight_low <= weight_high)) {
    throw ConfigError("weights", "low", "need 0 <= low <= high and high > 0");
  }
  if (ranges.a.lower <= 0.0 || ranges.a.lower > ranges.a.upper) {
    throw ConfigError("objectives", "a", "need 0 < low <= high");
  }
  const std::pair<const char*, Interval> others[] = {{"c", ranges.c}, {"l", ranges.l}, {"d", ranges.d}};
  for (const auto& [name, iv] : others) {
    if (iv.lower > iv.upper) throw ConfigError("objectives", name, "need low <= high");
  }
  if (box && box->lower > box->upper) throw ConfigError("objectives", "box", "need low <= high");
  if (!(gamma >= 0.0)) throw ConfigError("objectives", "gamma", "must be non-negative");
  wrap("maps", "node", [&] { g_n.validate(); });
  wrap("maps", "link", [&] { g_l.validate(); });
  if (eta && !(*eta > 0.0)) throw ConfigError("dynamics", "eta", "must be positive or auto");
  if (!(eta_scale > 0.0)) throw ConfigError("dynamics", "eta_scale", "must be positive");
  if (max_iters < 1) throw ConfigError("dynamics", "max_iters", "must be at least 1");
  if (!(dispersion_tol >= 0.0)) {
    throw ConfigError("dynamics", "dispersion_tol", "must be non-negative");
  }
  if (!(feasibility_tol >= 0.0)) {
    throw ConfigError("dynamics", "feasibility_tol", "must be non-negative");
  }
  if (init_box && init_box->lower > init_box->upper) {
    throw ConfigError("dynamics", "init_box", "need low <= high");
  }
  if (domain && !(domain->lower < domain->upper)) {
    throw ConfigError("dynamics", "domain", "need low < high");
  }
  switch (drop_mode) {
    case DropMode::homogeneous:
      if (!(p_d >= 0.0 && p_d <= 1.0)) throw ConfigError("drops", "p_d", "must lie in [0,1]");
      break;
    case DropMode::scheduled:
      if (rates.empty()) throw ConfigError("drops", "rates", "scheduled mode needs rates");
      if (period == 0) throw ConfigError("drops", "period", "must be positive");
      for (const double r : rates) {
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("drops", "rates", "must lie in [0,1]");
      }
      break;
    case DropMode::heterogeneous:
      if (rates_file.empty()) {
        throw ConfigError("drops", "rates_file", "heterogeneous mode needs a rates file");
      }
      if (!(p_d >= 0.0 && p_d <= 1.0)) throw ConfigError("drops", "p_d", "must lie in [0,1]");
      break;
  }
  if (trace_file.empty()) throw ConfigError("output", "trace", "must not be empty");
  if (summary_file.empty()) throw ConfigError("output", "summary", "must not be empty");
}

}  // namespace lossynet
