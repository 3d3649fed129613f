#include "weylscale/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "weylscale/error.hpp"
#include "weylscale/sampling.hpp"

namespace weylscale {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigInvalid, path + ": " + what);
}

class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& text) : text_(text) {}

  double parse() {
    const double value = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ConfigInvalid, "expression \"" + text_ + "\": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expression() {
    double value = term();
    for (;;) {
      if (accept('+')) {
        value += term();
      } else if (accept('-')) {
        value -= term();
      } else {
        return value;
      }
    }
  }

  double term() {
    double value = unary();
    for (;;) {
      if (accept('*')) {
        value *= unary();
      } else if (accept('/')) {
        value /= unary();
      } else {
        return value;
      }
    }
  }

  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    const double base = primary();
    if (accept('^')) return std::pow(base, unary());
    return base;
  }

  double primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (accept('(')) {
      const double value = expression();
      if (!accept(')')) fail("missing ')'");
      return value;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  double number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    return value;
  }

  double identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "e") return std::numbers::e;
    if (name == "pi") return std::numbers::pi;
    if (name == "ln2") return std::numbers::ln2;
    if (name == "ln" || name == "log" || name == "exp" || name == "sqrt") {
      if (!accept('(')) fail(name + " needs '('");
      const double arg = expression();
      if (!accept(')')) fail("missing ')'");
      if (name == "exp") return std::exp(arg);
      if (name == "sqrt") return std::sqrt(arg);
      return std::log(arg);
    }
    fail("unknown name '" + name + "'");
  }

  std::string text_;
  std::size_t pos_ = 0;
};

double number_at(const Json& node, const std::string& path) {
  if (node.is_number()) return node.get<double>();
  if (node.is_string()) {
    try {
      return evaluate_expression(node.get<std::string>());
    } catch (const Error& e) {
      invalid(path, e.what());
    }
  }
  invalid(path, "expected a number or an expression string");
}

std::size_t count_at(const Json& node, const std::string& path) {
  const double x = number_at(node, path);
  if (!(x >= 0) || x != std::floor(x) || x > 1e9) invalid(path, "expected a non-negative integer");
  return static_cast<std::size_t>(x);
}

std::uint64_t seed_at(const Json& node, const std::string& path) {
  if (node.is_number_unsigned()) return node.get<std::uint64_t>();
  if (node.is_number_integer() && node.get<long long>() >= 0) {
    return static_cast<std::uint64_t>(node.get<long long>());
  }
  invalid(path, "seed must be a non-negative integer");
}

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) invalid(path + "." + key, "missing");
  return obj.at(key);
}

Complex complex_at(const Json& node, const std::string& path) {
  if (node.is_array()) {
    if (node.size() != 2) invalid(path, "complex entries are [re, im]");
    return {number_at(node[0], path + "[0]"), number_at(node[1], path + "[1]")};
  }
  return {number_at(node, path), 0.0};
}

std::vector<double> number_list(const Json& node, const std::string& path) {
  if (!node.is_array()) invalid(path, "expected a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(number_at(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// A list, or {"start", "stop", "count"}.
std::vector<double> grid_at(const Json& node, const std::string& path) {
  if (node.is_array()) return number_list(node, path);
  if (node.is_object()) {
    const double start = number_at(field(node, "start", path), path + ".start");
    const double stop = number_at(field(node, "stop", path), path + ".stop");
    const std::size_t count = count_at(field(node, "count", path), path + ".count");
    if (count == 0) invalid(path + ".count", "must be positive");
    return linear_grid(start, stop, count);
  }
  invalid(path, "expected a list or {start, stop, count}");
}

Vector vector_at(const Json& node, const std::string& path) {
  if (!node.is_array()) invalid(path, "expected a list of entries");
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = complex_at(node[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

OperatorSpec operator_at(const Json& node, const std::string& path) {
  if (!node.is_object() || node.size() != 1) {
    invalid(path, "expected exactly one of matrix, diagonal, atoms, kms");
  }
  const std::string kind = node.begin().key();
  const Json& body = node.begin().value();
  const std::string sub = path + "." + kind;
  try {
    if (kind == "diagonal") return OperatorSpec::diagonal(number_list(body, sub));
    if (kind == "matrix") {
      if (!body.is_array() || body.empty()) invalid(sub, "expected a non-empty list of rows");
      const auto n = static_cast<Eigen::Index>(body.size());
      Matrix m(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const std::string row_path = sub + "[" + std::to_string(r) + "]";
        const Vector row = vector_at(body[static_cast<std::size_t>(r)], row_path);
        if (row.size() != n) invalid(row_path, "matrix must be square");
        m.row(r) = row.transpose();
      }
      return OperatorSpec::from_matrix(m);
    }
    if (kind == "atoms") {
      if (!body.is_array() || body.empty()) invalid(sub, "expected a non-empty list of atoms");
      std::vector<SpectralAtom> atoms;
      for (std::size_t i = 0; i < body.size(); ++i) {
        const std::string atom_path = sub + "[" + std::to_string(i) + "]";
        const double value = number_at(field(body[i], "value", atom_path), atom_path + ".value");
        const Json& mult = field(body[i], "multiplicity", atom_path);
        if (mult.is_string() && mult.get<std::string>() == "inf") {
          atoms.push_back({value, Multiplicity::infinite()});
        } else {
          const std::size_t k = count_at(mult, atom_path + ".multiplicity");
          if (k == 0) invalid(atom_path + ".multiplicity", "must be positive");
          atoms.push_back({value, Multiplicity::finite(k)});
        }
      }
      return OperatorSpec::from_atoms(std::move(atoms));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    invalid(sub, e.what());
  }
  invalid(path, "unknown operator source '" + kind + "'");
}

// Replaces expression strings by their values so the echo is fully resolved.
Json resolve(const Json& node) {
  if (node.is_string()) {
    try {
      return evaluate_expression(node.get<std::string>());
    } catch (const Error&) {
      return node;
    }
  }
  if (node.is_array() || node.is_object()) {
    Json out = node;
    for (auto it = out.begin(); it != out.end(); ++it) *it = resolve(*it);
    return out;
  }
  return node;
}

}  // namespace

double evaluate_expression(const std::string& text) { return ExpressionParser(text).parse(); }

std::vector<std::vector<Vector>> ExperimentConfig::vector_sets() const {
  if (!random) return {vectors};
  Rng rng(random->seed);
  std::vector<std::vector<Vector>> sets;
  for (std::size_t s = 0; s < random->sets; ++s) {
    std::vector<Vector> set;
    for (std::size_t k = 0; k < random->count; ++k) {
      set.push_back(random->in_ball ? random_vector_in_ball(rng, dimension, random->scale)
                                    : random_vector(rng, dimension, random->scale));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<Vector> ExperimentConfig::all_vectors() const {
  std::vector<Vector> out;
  for (auto& set : vector_sets()) {
    for (auto& v : set) out.push_back(std::move(v));
  }
  return out;
}

ExperimentConfig parse_config(const Json& document) {
  if (!document.is_object()) invalid("config", "expected an object");
  ExperimentConfig config;
  config.echo = resolve(document);

  const Json& op = field(document, "operator", "config");
  if (op.is_object() && op.contains("kms")) {
    const Json& kms = op.at("kms");
    const OperatorSpec hamiltonian =
        operator_at(field(kms, "hamiltonian", "operator.kms"), "operator.kms.hamiltonian");
    const double beta = number_at(field(kms, "beta", "operator.kms"), "operator.kms.beta");
    try {
      config.kms = make_kms_model(hamiltonian, beta);
    } catch (const Error& e) {
      invalid("operator.kms", e.what());
    }
    config.covariance = config.kms->covariance;
  } else {
    config.covariance = operator_at(op, "operator");
  }

  if (document.contains("dimension")) {
    config.dimension = count_at(document.at("dimension"), "dimension");
    if (config.covariance.is_matrix() && config.covariance.dimension() != config.dimension) {
      invalid("dimension", "does not match the operator (" +
                               std::to_string(config.covariance.dimension()) + ")");
    }
  } else if (config.covariance.is_matrix()) {
    config.dimension = config.covariance.dimension();
  }

  if (document.contains("vectors")) {
    const Json& vs = document.at("vectors");
    if (vs.is_object() && vs.contains("random")) {
      const Json& r = vs.at("random");
      if (!r.contains("seed")) invalid("vectors.random.seed", "random vectors need a seed");
      RandomVectors rv{seed_at(r.at("seed"), "vectors.random.seed"),
                       count_at(field(r, "count", "vectors.random"), "vectors.random.count")};
      if (r.contains("sets")) rv.sets = count_at(r.at("sets"), "vectors.random.sets");
      if (r.contains("scale")) rv.scale = number_at(r.at("scale"), "vectors.random.scale");
      if (r.contains("radius")) {
        rv.scale = number_at(r.at("radius"), "vectors.random.radius");
        rv.in_ball = true;
      }
      if (rv.count == 0 || rv.sets == 0) invalid("vectors.random", "empty vector set");
      if (config.dimension == 0) invalid("dimension", "required for random vectors");
      config.random = rv;
    } else if (vs.is_object() && vs.contains("explicit")) {
      const Json& list = vs.at("explicit");
      if (!list.is_array()) invalid("vectors.explicit", "expected a list of vectors");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = "vectors.explicit[" + std::to_string(i) + "]";
        Vector v = vector_at(list[i], path);
        if (config.dimension != 0 && static_cast<std::size_t>(v.size()) != config.dimension) {
          invalid(path, "dimension " + std::to_string(v.size()) + " != " +
                            std::to_string(config.dimension));
        }
        config.vectors.push_back(std::move(v));
      }
      if (config.vectors.empty()) invalid("vectors.explicit", "empty vector set");
    } else {
      invalid("vectors", "expected {\"random\": ...} or {\"explicit\": ...}");
    }
  }

  if (document.contains("h")) config.h_values = grid_at(document.at("h"), "h");
  config.t_grid = document.contains("t_grid") ? grid_at(document.at("t_grid"), "t_grid")
                                              : default_t_grid();
  for (std::size_t k = 1; k < config.t_grid.size(); ++k) {
    if (!(config.t_grid[k] > config.t_grid[k - 1])) invalid("t_grid", "must be strictly increasing");
  }
  if (document.contains("cutoff")) {
    config.cutoff = static_cast<int>(count_at(document.at("cutoff"), "cutoff"));
  }
  if (document.contains("tolerance")) {
    config.tolerance = number_at(document.at("tolerance"), "tolerance");
    if (!(*config.tolerance > 0)) invalid("tolerance", "must be positive");
  }
  if (document.contains("word_pairs")) {
    config.word_pairs = count_at(document.at("word_pairs"), "word_pairs");
  }
  if (document.contains("word_seed")) {
    config.word_seed = seed_at(document.at("word_seed"), "word_seed");
  }
  if (document.contains("format")) {
    const Json& f = document.at("format");
    if (!f.is_string() || (f != "object" && f != "table")) {
      invalid("format", "expected \"object\" or \"table\"");
    }
    config.format = f.get<std::string>();
  }
  return config;
}

ExperimentConfig parse_config_text(const std::string& text) {
  Json document;
  try {
    document = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    invalid("config", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(document);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid(path, "cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void override_seed(ExperimentConfig& config, std::uint64_t seed) {
  if (config.random) {
    config.random->seed = seed;
    config.echo["vectors"]["random"]["seed"] = seed;
  }
  config.word_seed = seed;
  config.echo["word_seed"] = seed;
}

void override_tolerance(ExperimentConfig& config, double tol) {
  if (!(tol > 0)) invalid("--tol", "must be positive");
  config.tolerance = tol;
  config.echo["tolerance"] = tol;
}

}  // namespace weylscale
