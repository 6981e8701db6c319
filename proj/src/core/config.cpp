#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "core/catalog.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/util.hpp"

namespace nscert {

namespace {

const std::vector<std::string>& valid_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = {
        "extents", "mesh",        "refine",          "tau",
        "T",       "N",           "mu",              "u0",
        "forcing", "M",           "out",             "snapshot_stride",
        "solver_tol", "divergence_tol", "seed",      "threads",
        "levels"};
    for (const auto& c : ConstantsLedger::names()) k.push_back("ledger." + c);
    return k;
  }();
  return keys;
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing input");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value +
                      "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing input");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value +
                      "'");
  }
}

std::vector<double> parse_doubles(const std::string& key,
                                  const std::string& value) {
  std::istringstream ss(value);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(key, tok));
  return out;
}

[[noreturn]] void unknown_key(const std::string& key) {
  std::string best;
  int best_d = 1 << 20;
  for (const auto& k : valid_keys()) {
    const int d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  std::string msg = "unknown key '" + key + "'";
  if (best_d <= 2) msg += " (did you mean '" + best + "'?)";
  msg += "; valid keys:";
  for (const auto& k : valid_keys()) msg += " " + k;
  throw ConfigError(msg);
}

}  // namespace

void config_set(RunConfig& c, const std::string& raw_key,
                const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);

  if (key.rfind("ledger.", 0) == 0) {
    const std::string name = key.substr(7);
    bool known = false;
    for (const auto& n : ConstantsLedger::names()) known = known || n == name;
    if (!known) unknown_key(key);
    const double v = parse_double(key, value);
    if (!(v > 0) || !std::isfinite(v))
      throw ConfigError("key '" + key + "': must be > 0 and finite");
    c.ledger.set(name, v, "config");
    return;
  }

  if (key == "extents") {
    const auto vals = parse_doubles(key, value);
    if (vals.size() != 6)
      throw ConfigError("key 'extents': expected 6 numbers x0 y0 z0 x1 y1 z1");
    std::copy(vals.begin(), vals.end(), c.extents.begin());
  } else if (key == "mesh") {
    std::istringstream ss(value);
    std::vector<long long> cells;
    std::string tok;
    while (ss >> tok) cells.push_back(parse_int(key, tok));
    if (cells.size() == 1) {
      c.nx = c.ny = c.nz = static_cast<int>(cells[0]);
    } else if (cells.size() == 3) {
      c.nx = static_cast<int>(cells[0]);
      c.ny = static_cast<int>(cells[1]);
      c.nz = static_cast<int>(cells[2]);
    } else {
      throw ConfigError("key 'mesh': expected 1 or 3 cell counts");
    }
    if (c.nx < 1 || c.ny < 1 || c.nz < 1)
      throw ConfigError("key 'mesh': cell counts must be >= 1");
  } else if (key == "refine") {
    const long long v = parse_int(key, value);
    if (v < 0 || v > 6) throw ConfigError("key 'refine': must be in 0..6");
    c.refine = static_cast<int>(v);
  } else if (key == "tau") {
    const double v = parse_double(key, value);
    if (!(v > 0)) throw ConfigError("key 'tau': must be > 0");
    c.tau = v;
  } else if (key == "T") {
    const double v = parse_double(key, value);
    if (!(v > 0)) throw ConfigError("key 'T': must be > 0");
    c.T = v;
    c.N_given = false;
  } else if (key == "N") {
    const long long v = parse_int(key, value);
    if (v < 1) throw ConfigError("key 'N': must be >= 1");
    c.N = static_cast<int>(v);
    c.N_given = true;
  } else if (key == "mu") {
    const double v = parse_double(key, value);
    if (!(v > 0)) throw ConfigError("key 'mu': must be > 0");
    c.mu = v;
  } else if (key == "u0") {
    c.u0 = value;
  } else if (key == "forcing") {
    c.forcing = value;
  } else if (key == "M") {
    const double v = parse_double(key, value);
    if (!(v > 0)) throw ConfigError("key 'M': must be > 0");
    c.M_override = v;
  } else if (key == "out") {
    c.out = value;
  } else if (key == "snapshot_stride") {
    const long long v = parse_int(key, value);
    if (v < 0) throw ConfigError("key 'snapshot_stride': must be >= 0");
    c.snapshot_stride = static_cast<int>(v);
  } else if (key == "solver_tol") {
    const double v = parse_double(key, value);
    if (!(v > 0)) throw ConfigError("key 'solver_tol': must be > 0");
    c.solver_tol = v;
  } else if (key == "divergence_tol") {
    const double v = parse_double(key, value);
    if (!(v > 0)) throw ConfigError("key 'divergence_tol': must be > 0");
    c.divergence_tol = v;
  } else if (key == "seed") {
    c.seed = static_cast<unsigned long long>(parse_int(key, value));
  } else if (key == "threads") {
    const long long v = parse_int(key, value);
    if (v < 1) throw ConfigError("key 'threads': must be >= 1");
    c.threads = static_cast<int>(v);
  } else if (key == "levels") {
    const long long v = parse_int(key, value);
    if (v < 2) throw ConfigError("key 'levels': must be >= 2");
    c.levels = static_cast<int>(v);
  } else {
    unknown_key(key);
  }
}

void validate_config(RunConfig& c) {
  Box box = config_box(c);
  if (box.degenerate())
    throw ConfigError("key 'extents': box is degenerate");

  if (c.N_given) {
    c.T = c.N * c.tau;
  } else {
    const double ratio = c.T / c.tau;
    const long long n = std::llround(ratio);
    if (n < 1 || std::abs(n * c.tau - c.T) > 1e-12 * std::max(c.T, 1.0))
      throw ConfigError(
          "keys 'T'/'tau': T must be an integer multiple of tau (|N*tau - T| "
          "<= 1e-12*T)");
    c.N = static_cast<int>(n);
  }

  c.ledger.validate();

  // u0 / forcing must resolve now so failures are config errors.
  resolve_fields(c);
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header");
      continue;  // sections are organizational only
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    try {
      config_set(config, t.substr(0, eq), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate_config(config);
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  return parse_config_text(read_text_file(path));
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[domain]\n";
  os << "extents =";
  for (double v : c.extents) os << " " << format_g17(v);
  os << "\n";
  os << "mesh = " << c.nx << " " << c.ny << " " << c.nz << "\n";
  os << "refine = " << c.refine << "\n";
  os << "\n[time]\n";
  os << "tau = " << format_g17(c.tau) << "\n";
  os << "N = " << c.N << "\n";
  os << "\n[physics]\n";
  os << "mu = " << format_g17(c.mu) << "\n";
  os << "u0 = " << c.u0 << "\n";
  os << "forcing = " << c.forcing << "\n";
  if (c.M_override) os << "M = " << format_g17(*c.M_override) << "\n";
  os << "\n[ledger]\n";
  for (const auto& name : ConstantsLedger::names())
    os << "ledger." << name << " = " << format_g17(c.ledger.get(name)) << "\n";
  os << "\n[output]\n";
  os << "out = " << c.out << "\n";
  os << "snapshot_stride = " << c.snapshot_stride << "\n";
  os << "\n[solver]\n";
  os << "solver_tol = " << format_g17(c.solver_tol) << "\n";
  os << "divergence_tol = " << format_g17(c.divergence_tol) << "\n";
  os << "seed = " << c.seed << "\n";
  os << "threads = " << c.threads << "\n";
  os << "levels = " << c.levels << "\n";
  return os.str();
}

Box config_box(const RunConfig& c) {
  Box box;
  box.lo = Vec3(c.extents[0], c.extents[1], c.extents[2]);
  box.hi = Vec3(c.extents[3], c.extents[4], c.extents[5]);
  return box;
}

TetMesh build_config_mesh(const RunConfig& c) {
  TetMesh mesh = build_box_mesh(c.nx, c.ny, c.nz, config_box(c));
  for (int r = 0; r < c.refine; ++r) mesh = refine_uniform(mesh);
  return mesh;
}

namespace {

VectorField resolve_velocity(const std::string& text,
                             const std::string& which) {
  if (const CatalogEntry* entry = find_catalog(text)) return entry->velocity;
  if (!text.empty() && text.front() == '(') {
    try {
      return make_symbolic_vector_field(text);
    } catch (const ExprParseError& e) {
      throw ConfigError("key '" + which + "': " + e.what());
    }
  }
  std::string names;
  for (const auto& n : catalog_names()) names += " " + n;
  throw ConfigError("key '" + which + "': '" + text +
                    "' is neither a catalog field (" + trim(names) +
                    ") nor a vector expression");
}

}  // namespace

ResolvedFields resolve_fields(const RunConfig& c) {
  ResolvedFields fields;

  if (c.forcing == "manufactured") {
    const CatalogEntry* pair = find_catalog("mms");
    if (c.u0 != "zero" && c.u0 != "mms" && c.u0 != "mms_catalog")
      throw ConfigError(
          "key 'u0': manufactured forcing pins u0 to the catalog pair 'mms'");
    fields.u0 = pair->velocity;
    fields.exact_velocity = pair->velocity;
    fields.forcing = manufactured_forcing(pair->velocity, pair->pressure, c.mu);
    fields.zero_forcing = false;
    return fields;
  }

  fields.u0 = resolve_velocity(c.u0, "u0");
  if (c.forcing == "none") {
    fields.zero_forcing = true;
  } else {
    fields.forcing = resolve_velocity(c.forcing, "forcing");
    fields.zero_forcing = false;
  }
  return fields;
}

}  // namespace nscert
