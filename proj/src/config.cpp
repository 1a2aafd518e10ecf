#include "vpgmres/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vpgmres/generators.hpp"
#include "vpgmres/matrix_market.hpp"

namespace vpgmres {

using nlohmann::json;

const char* to_string(RhsRule r) {
  switch (r) {
    case RhsRule::Sine: return "sine";
    case RhsRule::Ones: return "ones";
    default: return "file";
  }
}

const char* to_string(ThresholdMode m) {
  switch (m) {
    case ThresholdMode::Aggressive: return "aggressive";
    case ThresholdMode::Conservative: return "conservative";
    case ThresholdMode::Theorem: return "theorem";
    default: return "fixed-table";
  }
}

const char* to_string(InexactMode m) {
  switch (m) {
    case InexactMode::Exact: return "exact";
    case InexactMode::Perturbation: return "perturbation";
    default: return "multiprecision";
  }
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return it.key() == k;
        }) == known.end())
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

MatrixSource parse_matrix_source(const json& m) {
  MatrixSource src;
  if (m.is_string()) {
    src.file = m.get<std::string>();
    return src;
  }
  if (!m.is_object()) throw ConfigError("matrix must be a path or an object");
  require_keys(m, "matrix", {"file", "generator", "n", "superdiags", "cond"});
  if (m.contains("file")) src.file = m.at("file").get<std::string>();
  if (m.contains("generator")) src.generator = m.at("generator").get<std::string>();
  if (src.file.empty() == src.generator.empty())
    throw ConfigError("matrix needs exactly one of 'file' or 'generator'");
  if (!src.generator.empty()) {
    if (src.generator != "grcar" && src.generator != "spd-test")
      throw ConfigError("unknown generator '" + src.generator + "'");
    if (!m.contains("n")) throw ConfigError("generator requires 'n'");
    const double n = as_number(m.at("n"), "matrix.n");
    if (n < 1 || n != static_cast<std::size_t>(n))
      throw ConfigError("matrix.n must be a positive integer");
    src.n = static_cast<std::size_t>(n);
    if (m.contains("superdiags"))
      src.superdiags =
          static_cast<std::size_t>(as_number(m.at("superdiags"), "superdiags"));
    if (m.contains("cond")) src.cond = as_number(m.at("cond"), "cond");
  }
  return src;
}

FixedTable parse_table(const json& t) {
  FixedTable table;
  if (!t.is_object()) throw ConfigError("fixed_table must be an object");
  require_keys(t, "fixed_table", {"default", "ranges", "relative"});
  if (!t.contains("default"))
    throw ConfigError("fixed_table requires 'default'");
  table.default_value = as_number(t.at("default"), "fixed_table.default");
  if (table.default_value <= 0.0)
    throw ConfigError("fixed_table.default must be > 0");
  if (t.contains("relative")) table.relative = t.at("relative").get<bool>();
  if (t.contains("ranges")) {
    if (!t.at("ranges").is_array())
      throw ConfigError("fixed_table.ranges must be an array");
    for (const json& r : t.at("ranges")) {
      require_keys(r, "fixed_table.ranges[]", {"lo", "hi", "value"});
      for (const char* k : {"lo", "hi", "value"})
        if (!r.contains(k))
          throw ConfigError(std::string("range requires '") + k + "'");
      ToleranceRange range;
      range.lo = static_cast<int>(as_number(r.at("lo"), "range.lo"));
      range.hi = static_cast<int>(as_number(r.at("hi"), "range.hi"));
      range.value = as_number(r.at("value"), "range.value");
      if (range.lo < 1 || range.hi < range.lo)
        throw ConfigError("range must satisfy 1 <= lo <= hi");
      if (range.value <= 0.0) throw ConfigError("range value must be > 0");
      table.ranges.push_back(range);
    }
    std::vector<ToleranceRange> sorted = table.ranges;
    std::sort(sorted.begin(), sorted.end(),
              [](const ToleranceRange& a, const ToleranceRange& b) {
                return a.lo < b.lo;
              });
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i].lo <= sorted[i - 1].hi)
        throw ConfigError("fixed_table ranges overlap at iteration " +
                          std::to_string(sorted[i].lo));
  }
  return table;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": expected an object");
  require_keys(root, origin,
               {"matrix", "rhs", "rhs_file", "epsilon", "relative_epsilon",
                "threshold", "fixed_table", "mode", "economy_perturbation",
                "matvec_exact", "normalization_exact", "coarse_trigger", "kmax",
                "seed", "stop_tol", "stop_at_theorem_floor", "phi_eta",
                "phi_eps", "sigma_min_hk", "out", "no_reference"});

  ExperimentConfig cfg;
  if (!root.contains("matrix")) throw ConfigError("config requires 'matrix'");
  cfg.matrix = parse_matrix_source(root.at("matrix"));

  if (!root.contains("epsilon"))
    throw ConfigError("config requires 'epsilon'");
  cfg.epsilon = as_number(root.at("epsilon"), "epsilon");
  if (cfg.epsilon <= 0.0) throw ConfigError("epsilon must be > 0");
  if (root.contains("relative_epsilon"))
    cfg.relative_epsilon = root.at("relative_epsilon").get<bool>();

  if (root.contains("rhs")) {
    const std::string r = root.at("rhs").get<std::string>();
    if (r == "sine") cfg.rhs = RhsRule::Sine;
    else if (r == "ones") cfg.rhs = RhsRule::Ones;
    else if (r == "file") cfg.rhs = RhsRule::File;
    else throw ConfigError("unknown rhs rule '" + r + "'");
  }
  if (root.contains("rhs_file"))
    cfg.rhs_file = root.at("rhs_file").get<std::string>();
  if (cfg.rhs == RhsRule::File && cfg.rhs_file.empty())
    throw ConfigError("rhs 'file' requires 'rhs_file'");

  if (root.contains("threshold")) {
    const std::string t = root.at("threshold").get<std::string>();
    if (t == "aggressive") cfg.threshold = ThresholdMode::Aggressive;
    else if (t == "conservative") cfg.threshold = ThresholdMode::Conservative;
    else if (t == "theorem") cfg.threshold = ThresholdMode::Theorem;
    else if (t == "fixed-table") cfg.threshold = ThresholdMode::FixedTable;
    else throw ConfigError("unknown threshold '" + t + "'");
  }
  if (cfg.threshold == ThresholdMode::FixedTable) {
    if (!root.contains("fixed_table"))
      throw ConfigError("threshold 'fixed-table' requires 'fixed_table'");
    cfg.table = parse_table(root.at("fixed_table"));
  } else if (root.contains("fixed_table")) {
    throw ConfigError("'fixed_table' only applies to threshold 'fixed-table'");
  }

  if (root.contains("mode")) {
    const std::string m = root.at("mode").get<std::string>();
    if (m == "exact") cfg.mode = InexactMode::Exact;
    else if (m == "perturbation") cfg.mode = InexactMode::Perturbation;
    else if (m == "multiprecision") cfg.mode = InexactMode::Multiprecision;
    else throw ConfigError("unknown mode '" + m + "'");
  }
  if (root.contains("economy_perturbation"))
    cfg.economy_perturbation = root.at("economy_perturbation").get<bool>();
  if (root.contains("matvec_exact"))
    cfg.matvec_exact = root.at("matvec_exact").get<bool>();
  if (root.contains("normalization_exact"))
    cfg.normalization_exact = root.at("normalization_exact").get<bool>();
  if (root.contains("coarse_trigger"))
    cfg.coarse_trigger = root.at("coarse_trigger").get<bool>();

  if (root.contains("kmax")) {
    const double k = as_number(root.at("kmax"), "kmax");
    if (k < 1 || k != static_cast<std::size_t>(k))
      throw ConfigError("kmax must be a positive integer");
    cfg.kmax = static_cast<std::size_t>(k);
  }
  if (root.contains("seed"))
    cfg.seed = root.at("seed").get<std::uint64_t>();
  if (root.contains("stop_tol")) {
    const double s = as_number(root.at("stop_tol"), "stop_tol");
    if (s <= 0.0) throw ConfigError("stop_tol must be > 0");
    cfg.stop_tol = s;
  }
  if (root.contains("stop_at_theorem_floor"))
    cfg.stop_at_theorem_floor = root.at("stop_at_theorem_floor").get<bool>();
  for (const char* k : {"phi_eta", "phi_eps", "sigma_min_hk"}) {
    if (root.contains(k)) {
      const double v = as_number(root.at(k), k);
      if (v < 0.0) throw ConfigError(std::string(k) + " must be >= 0");
      if (std::string(k) == "phi_eta") cfg.phi_eta = v;
      else if (std::string(k) == "phi_eps") cfg.phi_eps = v;
      else cfg.sigma_min_hk = v;
    }
  }
  if (root.contains("out")) cfg.out = root.at("out").get<std::string>();
  if (root.contains("no_reference"))
    cfg.no_reference = root.at("no_reference").get<bool>();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

Matrix load_matrix(const MatrixSource& source) {
  if (!source.file.empty()) return read_matrix_market(source.file);
  if (source.generator == "grcar") return grcar(source.n, source.superdiags);
  if (source.generator == "spd-test")
    return spd_test_matrix(source.n, source.cond);
  throw ConfigError("matrix source is empty");
}

Vector build_rhs(const ExperimentConfig& cfg, const Matrix& A) {
  switch (cfg.rhs) {
    case RhsRule::Sine: return sine_rhs(A);
    case RhsRule::Ones: return ones(A.nrows());
    case RhsRule::File: {
      std::ifstream in(cfg.rhs_file);
      if (!in) throw ConfigError("cannot open rhs file " + cfg.rhs_file);
      Vector b;
      double v;
      while (in >> v) b.push_back(v);
      if (b.size() != A.nrows())
        throw ConfigError("rhs file length does not match matrix order");
      return b;
    }
  }
  throw ConfigError("unreachable rhs rule");
}

double table_value(const FixedTable& table, int j) {
  for (const ToleranceRange& r : table.ranges)
    if (j >= r.lo && j <= r.hi) return r.value;
  return table.default_value;
}

}  // namespace vpgmres
