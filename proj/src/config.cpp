#include "envpde/config.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include "envpde/errors.hpp"

namespace envpde {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

class KeyTable {
 public:
  void insert(const std::string& key, const std::string& value, int line) {
    if (entries_.count(key))
      throw ConfigError("duplicate key '" + key + "' at line " +
                        std::to_string(line));
    entries_[key] = Entry{value, line};
  }

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const Entry* e = find(key);
    const std::string where =
        e ? " at line " + std::to_string(e->line) : "";
    throw ConfigError("key '" + key + "'" + where + ": " + what);
  }

  double number(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(e->value, &pos);
      if (pos != e->value.size()) fail(key, "not a number: '" + e->value + "'");
      return v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail(key, "not a number: '" + e->value + "'");
    }
  }

  long integer(const std::string& key, long fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    try {
      std::size_t pos = 0;
      const long v = std::stol(e->value, &pos);
      if (pos != e->value.size())
        fail(key, "not an integer: '" + e->value + "'");
      return v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail(key, "not an integer: '" + e->value + "'");
    }
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

const char* const kKnownKeys[] = {
    "command", "domain",   "datum",    "obstacle", "n",
    "width",   "tol",      "max_iter", "sweep",    "init",
    "m",       "gamma",    "big_gamma_list",       "x0",
    "dt",      "n_paths",  "policies", "alpha",    "n_pairs",
    "holder_margin",       "seed",     "out",
};

Command parse_command(const KeyTable& kv) {
  const Entry* e = kv.find("command");
  if (!e) throw ConfigError("missing required key 'command'");
  const std::string& v = e->value;
  if (v == "solve") return Command::Solve;
  if (v == "obstacle") return Command::Obstacle;
  if (v == "oracle-compare") return Command::OracleCompare;
  if (v == "pucci-sweep") return Command::PucciSweep;
  if (v == "mc-value") return Command::McValue;
  if (v == "analyze") return Command::Analyze;
  if (v == "convergence-study") return Command::ConvergenceStudy;
  kv.fail("command", "unknown command '" + v + "'");
}

Domain parse_domain(const KeyTable& kv) {
  const Entry* e = kv.find("domain");
  if (!e) throw ConfigError("missing required key 'domain'");
  const auto toks = split_ws(e->value);
  if (toks.size() != 2)
    kv.fail("domain", "expected 'disk R' or 'square W'");
  double scale = 0.0;
  try {
    std::size_t pos = 0;
    scale = std::stod(toks[1], &pos);
    if (pos != toks[1].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    kv.fail("domain", "size is not a number: '" + toks[1] + "'");
  }
  if (!(scale > 0.0)) kv.fail("domain", "size out of range (need > 0)");
  if (toks[0] == "disk") return Domain::disk(scale);
  if (toks[0] == "square") return Domain::square(scale);
  kv.fail("domain", "unknown shape '" + toks[0] + "'");
}

// Syntax/range validation only; file-backed data loads at run time.
void validate_datum_spec(const KeyTable& kv, const std::string& spec) {
  const auto toks = split_ws(spec);
  if (toks.empty()) kv.fail("datum", "empty value");
  const auto num = [&](std::size_t k) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(toks[k], &pos);
      if (pos != toks[k].size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      kv.fail("datum", "expected a number, got '" + toks[k] + "'");
    }
  };
  const std::string& kind = toks[0];
  if (kind == "saddle" || kind == "absx") {
    if (toks.size() != 1) kv.fail("datum", kind + " takes no parameters");
  } else if (kind == "powercone") {
    if (toks.size() != 2) kv.fail("datum", "expected 'powercone EPS'");
    const double eps = num(1);
    if (!(eps > 0.0 && eps < 0.5))
      kv.fail("datum", "powercone exponent out of range (0, 0.5)");
  } else if (kind == "affine") {
    if (toks.size() != 4) kv.fail("datum", "expected 'affine AX AY B'");
    num(1);
    num(2);
    num(3);
  } else if (kind == "constant") {
    if (toks.size() != 2) kv.fail("datum", "expected 'constant C'");
    num(1);
  } else if (kind == "sampled") {
    if (toks.size() != 3) kv.fail("datum", "expected 'sampled PATH TOL'");
    const double tol = num(2);
    if (!(tol > 0.0)) kv.fail("datum", "lookup tolerance must be > 0");
  } else {
    kv.fail("datum", "unknown datum '" + kind + "'");
  }
}

void validate_obstacle_spec(const KeyTable& kv, const std::string& spec) {
  const auto toks = split_ws(spec);
  if (toks.empty()) kv.fail("obstacle", "empty value");
  const auto num = [&](std::size_t k) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(toks[k], &pos);
      if (pos != toks[k].size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      kv.fail("obstacle", "expected a number, got '" + toks[k] + "'");
    }
  };
  const std::string& kind = toks[0];
  if (kind == "squarenorm" || kind == "doublewell" || kind == "saddle" ||
      kind == "absx") {
    if (toks.size() != 1) kv.fail("obstacle", kind + " takes no parameters");
  } else if (kind == "powercone") {
    if (toks.size() != 2) kv.fail("obstacle", "expected 'powercone EPS'");
    const double eps = num(1);
    if (!(eps > 0.0 && eps < 0.5))
      kv.fail("obstacle", "powercone exponent out of range (0, 0.5)");
  } else if (kind == "affine") {
    if (toks.size() != 4) kv.fail("obstacle", "expected 'affine AX AY B'");
    num(1);
    num(2);
    num(3);
  } else if (kind == "constant") {
    if (toks.size() != 2) kv.fail("obstacle", "expected 'constant C'");
    num(1);
  } else {
    kv.fail("obstacle", "unknown obstacle '" + kind + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  KeyTable kv;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) +
                        ": expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line) + ": empty key");
    if (value.empty())
      throw ConfigError("line " + std::to_string(line) + ": empty value for '" +
                        key + "'");
    kv.insert(key, value, line);
  }

  for (const auto& [key, entry] : kv.entries()) {
    const bool known =
        std::any_of(std::begin(kKnownKeys), std::end(kKnownKeys),
                    [&](const char* k) { return key == k; });
    if (!known)
      throw ConfigError("unknown key '" + key + "' at line " +
                        std::to_string(entry.line));
  }

  RunConfig cfg;
  cfg.command = parse_command(kv);
  cfg.domain = parse_domain(kv);

  if (cfg.command == Command::Obstacle) {
    const Entry* e = kv.find("obstacle");
    if (!e)
      throw ConfigError("missing required key 'obstacle' for this command");
    cfg.obstacle_spec = e->value;
    validate_obstacle_spec(kv, cfg.obstacle_spec);
    cfg.datum_spec = kv.text("datum", "");
    if (!cfg.datum_spec.empty()) validate_datum_spec(kv, cfg.datum_spec);
  } else {
    const Entry* e = kv.find("datum");
    if (!e) throw ConfigError("missing required key 'datum' for this command");
    cfg.datum_spec = e->value;
    validate_datum_spec(kv, cfg.datum_spec);
    if (kv.find("obstacle"))
      kv.fail("obstacle", "only valid with 'command = obstacle'");
  }

  const long n = kv.integer("n", cfg.n);
  if (n < 5 || n > 4097) kv.fail("n", "n out of range [5, 4097]");
  cfg.n = static_cast<int>(n);

  const long width = kv.integer("width", cfg.width);
  if (width < 1 || width > 8) kv.fail("width", "width out of range [1, 8]");
  cfg.width = static_cast<int>(width);

  cfg.tol = kv.number("tol", cfg.tol);
  if (!(cfg.tol > 0.0)) kv.fail("tol", "tol out of range (need > 0)");

  const long max_iter = kv.integer("max_iter", cfg.max_iter);
  if (max_iter < 1) kv.fail("max_iter", "max_iter out of range (need >= 1)");
  cfg.max_iter = static_cast<int>(std::min(max_iter, 2000000000L));

  const std::string sweep = kv.text("sweep", "gauss-seidel");
  if (sweep == "gauss-seidel") cfg.sweep = SweepKind::GaussSeidel;
  else if (sweep == "jacobi") cfg.sweep = SweepKind::Jacobi;
  else kv.fail("sweep", "expected 'gauss-seidel' or 'jacobi'");

  const std::string init = kv.text("init", "min-datum");
  if (init == "min-datum") cfg.init = InitKind::ConstantMinG;
  else if (init == "zero") cfg.init = InitKind::Zero;
  else kv.fail("init", "expected 'min-datum' or 'zero'");

  const long m = kv.integer("m", cfg.m);
  if (m < 3 || m > 1000000) kv.fail("m", "m out of range [3, 1000000]");
  cfg.m = static_cast<int>(m);

  cfg.gamma = kv.number("gamma", cfg.gamma);
  if (!(cfg.gamma > 0.0)) kv.fail("gamma", "gamma out of range (need > 0)");

  if (const Entry* e = kv.find("big_gamma_list")) {
    cfg.big_gammas.clear();
    for (const std::string& tok : split_commas(e->value)) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
        cfg.big_gammas.push_back(v);
      } catch (const std::exception&) {
        kv.fail("big_gamma_list", "not a number: '" + tok + "'");
      }
    }
    if (cfg.big_gammas.empty()) kv.fail("big_gamma_list", "empty list");
    for (const double g : cfg.big_gammas)
      if (!(g >= cfg.gamma))
        kv.fail("big_gamma_list", "every entry must be >= gamma");
  }

  if (const Entry* e = kv.find("x0")) {
    const auto toks = split_ws(e->value);
    if (toks.size() != 2) kv.fail("x0", "expected 'X Y'");
    try {
      std::size_t p0 = 0, p1 = 0;
      const double x = std::stod(toks[0], &p0);
      const double y = std::stod(toks[1], &p1);
      if (p0 != toks[0].size() || p1 != toks[1].size())
        throw std::invalid_argument("");
      cfg.x0 = Point(x, y);
    } catch (const std::exception&) {
      kv.fail("x0", "coordinates must be numbers");
    }
  }
  if (cfg.domain->classify(cfg.x0) != Region::Interior &&
      cfg.command == Command::McValue)
    kv.fail("x0", "start point must be strictly inside the domain");

  cfg.dt = kv.number("dt", cfg.dt);
  if (!(cfg.dt > 0.0)) kv.fail("dt", "dt out of range (need > 0)");

  const long n_paths = kv.integer("n_paths", cfg.n_paths);
  if (n_paths < 2 || n_paths > 100000000)
    kv.fail("n_paths", "n_paths out of range [2, 1e8]");
  cfg.n_paths = static_cast<int>(n_paths);

  if (const Entry* e = kv.find("policies")) {
    cfg.policies = split_commas(e->value);
    if (cfg.policies.empty()) kv.fail("policies", "empty list");
    for (const std::string& p : cfg.policies) {
      if (p == "ex" || p == "ey" || p == "feedback") continue;
      if (p.rfind("fixed:", 0) == 0) {
        const std::string rest = p.substr(6);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos)
          kv.fail("policies", "expected 'fixed:VX:VY', got '" + p + "'");
        try {
          std::size_t p0 = 0, p1 = 0;
          const std::string sx = rest.substr(0, colon);
          const std::string sy = rest.substr(colon + 1);
          const double vx = std::stod(sx, &p0);
          const double vy = std::stod(sy, &p1);
          if (p0 != sx.size() || p1 != sy.size())
            throw std::invalid_argument("");
          if (vx == 0.0 && vy == 0.0) throw std::invalid_argument("");
        } catch (const std::exception&) {
          kv.fail("policies", "bad fixed direction '" + p + "'");
        }
        continue;
      }
      kv.fail("policies", "unknown policy '" + p + "'");
    }
  }

  cfg.alpha = kv.number("alpha", cfg.alpha);
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
    kv.fail("alpha", "alpha out of range (0, 1]");

  const long n_pairs = kv.integer("n_pairs", cfg.n_pairs);
  if (n_pairs < 1 || n_pairs > 100000000)
    kv.fail("n_pairs", "n_pairs out of range [1, 1e8]");
  cfg.n_pairs = static_cast<int>(n_pairs);

  cfg.holder_margin = kv.number("holder_margin", cfg.holder_margin);
  if (!(cfg.holder_margin >= 0.0))
    kv.fail("holder_margin", "holder_margin out of range (need >= 0)");

  const long seed = kv.integer("seed", static_cast<long>(cfg.seed));
  if (seed < 0) kv.fail("seed", "seed out of range (need >= 0)");
  cfg.seed = static_cast<std::uint64_t>(seed);

  cfg.out = kv.text("out", cfg.out);

  return cfg;
}

}  // namespace envpde
