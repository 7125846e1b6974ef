#include "haantjes/model.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace haantjes {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw InvalidModel("line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& text, int line, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(line, what + " is not a number: \"" + text + "\"");
  }
  if (trim(text.substr(used)) != "") fail(line, what + " has trailing text: \"" + text + "\"");
  return v;
}

int parse_index(const std::string& text, int line, const std::string& key) {
  if (text.empty()) fail(line, key + " needs an index");
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(line, key + " index must be a positive integer, got \"" + text + "\"");
  const long v = std::stol(text);
  if (v < 1 || v > kMaxDof) fail(line, key + " index " + text + " out of range");
  return static_cast<int>(v);
}

// Splits on commas that sit outside every bracket pair.
std::vector<std::string> split_top_level(const std::string& s, int line) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (depth < 0) fail(line, "unbalanced brackets in \"" + trim(s) + "\"");
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) fail(line, "unbalanced brackets in \"" + trim(s) + "\"");
  out.push_back(trim(cur));
  return out;
}

// Strips one layer of enclosing brackets.
std::string unbracket(const std::string& s, int line, const std::string& what) {
  const std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    fail(line, what + " must be bracketed: \"" + t + "\"");
  return t.substr(1, t.size() - 2);
}

Expression parse_expr_at(const std::string& text, int line, int n,
                         const std::map<std::string, double>& params) {
  try {
    return parse_expression(text, n, params);
  } catch (const ParseError& e) {
    fail(line, "in expression \"" + trim(text) + "\": " + e.what());
  }
}

std::vector<Expression> parse_expr_list(const std::string& body, int line, int n, int count,
                                        const std::map<std::string, double>& params,
                                        const std::string& what) {
  const auto pieces = split_top_level(unbracket(body, line, what), line);
  if (static_cast<int>(pieces.size()) != count)
    fail(line, what + " needs " + std::to_string(count) + " entries, got " +
                   std::to_string(pieces.size()));
  std::vector<Expression> out;
  out.reserve(pieces.size());
  for (const auto& piece : pieces) out.push_back(parse_expr_at(piece, line, n, params));
  return out;
}

OperatorField parse_matrix(const std::string& body, int line, int n, int dim,
                           const std::map<std::string, double>& params, const std::string& what) {
  const auto rows = split_top_level(unbracket(body, line, what), line);
  if (static_cast<int>(rows.size()) != dim)
    fail(line, what + " needs " + std::to_string(dim) + " rows, got " +
                   std::to_string(rows.size()));
  std::vector<Expression> entries;
  entries.reserve(static_cast<std::size_t>(dim) * dim);
  for (const auto& row : rows) {
    auto cols = parse_expr_list(row, line, n, dim, params, what + " row");
    for (auto& e : cols) entries.push_back(std::move(e));
  }
  return OperatorField(dim, std::move(entries));
}

struct Section {
  int line = 0;
  std::string value;
};

struct RawFile {
  std::map<std::string, Section> scalars;  // n, builtin, box, margin
  std::map<std::string, Section> params;
  std::map<int, Section> stackel_rows, f, lambda, psi, w, hamiltonian;
  std::vector<std::pair<std::string, Section>> operators;
};

RawFile read_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidModel("cannot open model file \"" + path + "\"");
  RawFile raw;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(no, "expected `key = value`, got \"" + trim(line) + "\"");
    const std::string value = trim(line.substr(eq + 1));
    std::istringstream head(line.substr(0, eq));
    std::string key, arg, extra;
    head >> key >> arg >> extra;
    if (key.empty()) fail(no, "missing key before `=`");
    if (!extra.empty()) fail(no, "unexpected token \"" + extra + "\" in key");
    const Section sec{no, value};
    const auto put_indexed = [&](std::map<int, Section>& dst) {
      const int i = parse_index(arg, no, key);
      if (!dst.emplace(i, sec).second) fail(no, key + " " + arg + " given twice");
    };
    if (key == "n" || key == "builtin" || key == "box" || key == "margin") {
      if (!arg.empty()) fail(no, "key \"" + key + "\" takes no index");
      if (!raw.scalars.emplace(key, sec).second) fail(no, "key \"" + key + "\" given twice");
    } else if (key == "param") {
      if (arg.empty()) fail(no, "param needs a name");
      if (!raw.params.emplace(arg, sec).second) fail(no, "param \"" + arg + "\" given twice");
    } else if (key == "stackel_row") {
      put_indexed(raw.stackel_rows);
    } else if (key == "f") {
      put_indexed(raw.f);
    } else if (key == "lambda") {
      put_indexed(raw.lambda);
    } else if (key == "psi") {
      put_indexed(raw.psi);
    } else if (key == "w") {
      put_indexed(raw.w);
    } else if (key == "hamiltonian") {
      put_indexed(raw.hamiltonian);
    } else if (key == "operator") {
      if (arg.empty()) fail(no, "operator needs a name");
      for (const auto& [name, s] : raw.operators)
        if (name == arg) fail(no, "operator \"" + arg + "\" given twice");
      raw.operators.emplace_back(arg, sec);
    } else {
      fail(no, "unknown key \"" + key + "\"");
    }
  }
  return raw;
}

// Collects an indexed family 1..n, requiring completeness.
std::vector<Expression> collect_family(const std::map<int, Section>& src, int n,
                                       const std::map<std::string, double>& params,
                                       const std::string& key) {
  std::vector<Expression> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const auto it = src.find(i);
    if (it == src.end())
      throw InvalidModel("missing `" + key + " " + std::to_string(i) + "`");
    out.push_back(parse_expr_at(it->second.value, it->second.line, n, params));
  }
  for (const auto& [i, sec] : src)
    if (i > n) fail(sec.line, key + " index " + std::to_string(i) + " exceeds n");
  return out;
}

std::string file_stem(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base.erase(dot);
  return base;
}

double param_or(const std::map<std::string, double>& params, const std::string& name,
                double fallback) {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

Model make_calogero(std::map<std::string, double> params) {
  Model m;
  m.kind = ModelKind::Calogero;
  m.name = "calogero3";
  m.n = 3;
  params["a"] = param_or(params, "a", 1.0);
  m.params = std::move(params);
  m.calogero = std::make_shared<CalogeroModel>(m.params.at("a"));
  return m;
}

Model make_goldfish(std::map<std::string, double> params, int n_hint) {
  Model m;
  m.kind = ModelKind::Goldfish;
  m.name = "goldfish";
  double n_param = param_or(params, "n", static_cast<double>(n_hint > 0 ? n_hint : 3));
  const int n = static_cast<int>(n_param);
  if (n < 2 || n > kMaxDof || static_cast<double>(n) != n_param)
    throw InvalidModel("goldfish needs an integer n between 2 and " + std::to_string(kMaxDof));
  m.n = n;
  params["n"] = static_cast<double>(n);
  params["a"] = param_or(params, "a", 1.0);
  params["b"] = param_or(params, "b", 0.0);
  m.params = std::move(params);
  m.qbh = std::make_shared<QbhSystem>(
      goldfish_system(GoldfishModel{n, m.params.at("a"), m.params.at("b")}));
  return m;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

bool Model::admissible(const PhasePoint& x) const {
  if (x.n() != n) return false;
  try {
    switch (kind) {
      case ModelKind::Calogero:
        if (!calogero->admissible(x, margin)) return false;
        if (!finite(calogero->hamiltonian().eval(x))) return false;
        break;
      case ModelKind::Goldfish:
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (std::abs(x.q(i) - x.q(j)) <= margin) return false;
        for (const auto& h : qbh->hamiltonians())
          if (!finite(h.eval(x))) return false;
        break;
      case ModelKind::Qbh: {
        Eigen::VectorXd lam(n);
        for (int i = 0; i < n; ++i) lam(i) = qbh->lambda()[static_cast<std::size_t>(i)].eval(x);
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (std::abs(lam(i) - lam(j)) <= margin) return false;
        for (const auto& h : qbh->hamiltonians())
          if (!finite(h.eval(x))) return false;
        break;
      }
      case ModelKind::Stackel: {
        Eigen::VectorXd q(n);
        for (int i = 0; i < n; ++i) q(i) = x.q(i);
        const auto cof = stackel->matrix().cofactors(q);
        if (std::abs(cof.det) <= margin) return false;
        for (int r = 0; r < n; ++r)
          if (std::abs(cof.adj(0, r)) <= margin) return false;
        for (const auto& h : stackel->hamiltonian_expressions())
          if (!finite(h.eval(x))) return false;
        break;
      }
      case ModelKind::Custom:
        for (const auto& h : custom_hamiltonians)
          if (!finite(h.eval(x))) return false;
        for (const auto& [name, op] : custom_operators)
          if (!op.value(x).allFinite()) return false;
        break;
    }
  } catch (const DomainError&) {
    return false;
  } catch (const InvalidModel&) {
    return false;
  }
  return true;
}

PhasePoint Model::sample(Rng& rng) const {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    PhasePoint x(n);
    for (int a = 0; a < 2 * n; ++a) x.coord(a) = rng.uniform(box_lo, box_hi);
    if (admissible(x)) return x;
  }
  throw DomainError("rejection sampling found no admissible point in the box");
}

std::vector<PhasePoint> Model::sample_many(Rng& rng, int count) const {
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(sample(rng));
  return out;
}

Model load_builtin(const std::string& id, const std::map<std::string, double>& overrides) {
  if (id == "calogero3") return make_calogero(overrides);
  if (id == "goldfish") return make_goldfish(overrides, 0);
  throw InvalidModel("unknown builtin model \"" + id + "\"");
}

Model load_model(const std::string& path, const std::map<std::string, double>& overrides) {
  const RawFile raw = read_raw(path);

  std::map<std::string, double> params;
  for (const auto& [name, sec] : raw.params)
    params[name] = parse_number(sec.value, sec.line, "param " + name);
  for (const auto& [name, value] : overrides) params[name] = value;

  int n = 0;
  if (const auto it = raw.scalars.find("n"); it != raw.scalars.end()) {
    const double v = parse_number(it->second.value, it->second.line, "n");
    n = static_cast<int>(v);
    if (static_cast<double>(n) != v || n < 1 || n > kMaxDof)
      fail(it->second.line, "n must be an integer between 1 and " + std::to_string(kMaxDof));
  }

  Model m;
  if (const auto it = raw.scalars.find("builtin"); it != raw.scalars.end()) {
    const std::string id = trim(it->second.value);
    if (!raw.stackel_rows.empty() || !raw.lambda.empty() || !raw.operators.empty() ||
        !raw.hamiltonian.empty())
      fail(it->second.line, "builtin models take no sections");
    if (id == "goldfish")
      m = make_goldfish(params, n);
    else if (id == "calogero3")
      m = make_calogero(params);
    else
      fail(it->second.line, "unknown builtin model \"" + id + "\"");
    m.name = file_stem(path);
  } else if (!raw.stackel_rows.empty()) {
    if (n == 0) throw InvalidModel("stackel sections need an explicit `n = ...` line");
    std::vector<Expression> entries;
    entries.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 1; i <= n; ++i) {
      const auto it = raw.stackel_rows.find(i);
      if (it == raw.stackel_rows.end())
        throw InvalidModel("missing `stackel_row " + std::to_string(i) + "`");
      auto row = parse_expr_list(it->second.value, it->second.line, n, n, params,
                                 "stackel_row " + std::to_string(i));
      for (auto& e : row) entries.push_back(std::move(e));
    }
    for (const auto& [i, sec] : raw.stackel_rows)
      if (i > n) fail(sec.line, "stackel_row index exceeds n");
    m.kind = ModelKind::Stackel;
    m.name = file_stem(path);
    m.n = n;
    m.params = params;
    m.stackel = std::make_shared<StackelSystem>(StackelMatrix(n, std::move(entries)),
                                                collect_family(raw.f, n, params, "f"));
    if (!raw.psi.empty() || !raw.w.empty()) {
      m.psi = collect_family(raw.psi, n, params, "psi");
      m.w = collect_family(raw.w, n, params, "w");
    }
  } else if (!raw.lambda.empty()) {
    if (n == 0) throw InvalidModel("lambda sections need an explicit `n = ...` line");
    m.kind = ModelKind::Qbh;
    m.name = file_stem(path);
    m.n = n;
    m.params = params;
    m.qbh = std::make_shared<QbhSystem>(collect_family(raw.lambda, n, params, "lambda"),
                                        collect_family(raw.f, n, params, "f"));
  } else if (!raw.operators.empty()) {
    if (n == 0) throw InvalidModel("operator sections need an explicit `n = ...` line");
    m.kind = ModelKind::Custom;
    m.name = file_stem(path);
    m.n = n;
    m.params = params;
    for (const auto& [name, sec] : raw.operators)
      m.custom_operators.emplace_back(
          name, parse_matrix(sec.value, sec.line, n, 2 * n, params, "operator " + name));
    if (!raw.hamiltonian.empty()) {
      const int count = static_cast<int>(raw.hamiltonian.size());
      for (int i = 1; i <= count; ++i)
        if (!raw.hamiltonian.count(i))
          throw InvalidModel("hamiltonian indices must be contiguous from 1");
      for (int i = 1; i <= count; ++i) {
        const Section& sec = raw.hamiltonian.at(i);
        m.custom_hamiltonians.push_back(parse_expr_at(sec.value, sec.line, n, params));
      }
    }
  } else {
    throw InvalidModel(
        "model file defines no system: need `builtin`, `stackel_row`, `lambda`, or `operator` "
        "sections");
  }

  if (const auto it = raw.scalars.find("box"); it != raw.scalars.end()) {
    std::istringstream bs(it->second.value);
    double lo = 0.0, hi = 0.0;
    if (!(bs >> lo >> hi)) fail(it->second.line, "box needs two numbers");
    std::string rest;
    if (bs >> rest) fail(it->second.line, "box takes exactly two numbers");
    if (!(lo < hi)) fail(it->second.line, "box needs lo < hi");
    m.box_lo = lo;
    m.box_hi = hi;
  }
  if (const auto it = raw.scalars.find("margin"); it != raw.scalars.end()) {
    const double v = parse_number(it->second.value, it->second.line, "margin");
    if (v < 0.0) fail(it->second.line, "margin must be nonnegative");
    m.margin = v;
  }
  return m;
}

}  // namespace haantjes
