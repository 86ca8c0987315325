#include "iapial/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/core.h>

#include "iapial/errors.hpp"

namespace iapial {
namespace {

Json vec_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vec_from_json(const Json& a, const char* what) {
  if (!a.is_array()) throw ParseError(fmt::format("'{}' must be an array of numbers", what));
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ParseError(fmt::format("'{}' must contain only numbers", what));
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

// Flat row-major array, or an array of rows.
Matrix mat_from_json(const Json& a, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (!a.is_array()) throw ParseError(fmt::format("'{}' must be an array", what));
  Matrix m(rows, cols);
  if (!a.empty() && a[0].is_array()) {
    if (static_cast<Eigen::Index>(a.size()) != rows) throw ParseError(fmt::format("'{}' has the wrong row count", what));
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Vector row = vec_from_json(a[i], what);
      if (row.size() != cols) throw ParseError(fmt::format("'{}' row {} has the wrong length", what, i));
      m.row(i) = row.transpose();
    }
    return m;
  }
  const Vector flat = vec_from_json(a, what);
  if (flat.size() != rows * cols) {
    throw ParseError(fmt::format("'{}' has {} entries, expected {} x {}", what, flat.size(), rows, cols));
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = flat[i * cols + j];
  }
  return m;
}

Json mat_to_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  }
  return a;
}

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw ParseError(fmt::format("missing field '{}'", key));
  return doc.at(key);
}

double number(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  if (!v.is_number()) throw ParseError(fmt::format("field '{}' must be a number", key));
  return v.get<double>();
}

// null encodes NaN and infinities.
double number_or_nan(const Json& v) {
  return v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

Json opt_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string status_of(CycleStatus s) { return to_string(s); }

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}' for reading", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(fmt::format("cannot open '{}' for writing", path));
  out << text;
  if (!out) throw ParseError(fmt::format("failed writing '{}'", path));
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

Json problem_to_json(const ProblemInstance& problem) {
  const auto& f = problem.smooth();
  if (!f.quadratic) throw StructuralError("only quadratic objectives can be serialized");
  const auto& hc = problem.composite();
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["n"] = problem.n();
  doc["l"] = problem.l();
  doc["A"] = mat_to_json(problem.constraint().A);
  doc["b"] = vec_to_json(problem.constraint().b);
  doc["f"] = {{"kind", "quadratic"},
              {"params", {{"Q", mat_to_json(f.quadratic->Q)}, {"q", vec_to_json(f.quadratic->q)}}},
              {"m_f", f.m_f},
              {"L_f", f.L_f}};
  Json h;
  h["kind"] = kind_name(hc.h);
  std::visit(
      [&](const auto& set) {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, Box>) {
          h["params"] = {{"lower", vec_to_json(set.lower)}, {"upper", vec_to_json(set.upper)}};
          if (hc.h.l1_scale > 0.0) h["params"]["scale"] = hc.h.l1_scale;
        } else if constexpr (std::is_same_v<T, Ball>) {
          h["params"] = {{"center", vec_to_json(set.center)}, {"radius", set.radius}};
        } else {
          h["params"] = {{"radius", set.radius}};
        }
      },
      hc.h.set);
  h["L_h"] = hc.L_h;
  doc["h"] = h;
  doc["slater_point"] = vec_to_json(hc.slater_point);
  doc["phi_lower"] = opt_to_json(problem.phi_lower());
  return doc;
}

ProblemInstance problem_from_json(const Json& doc) {
  try {
    const auto n = static_cast<Eigen::Index>(number(doc, "n"));
    const auto l = static_cast<Eigen::Index>(number(doc, "l"));
    if (n < 1 || l < 1) throw ParseError("n and l must be positive");
    Matrix A = mat_from_json(field(doc, "A"), l, n, "A");
    Vector b = vec_from_json(field(doc, "b"), "b");

    const Json& fj = field(doc, "f");
    const std::string fkind = field(fj, "kind").get<std::string>();
    if (fkind != "quadratic") throw ParseError(fmt::format("unsupported f kind '{}'", fkind));
    const Json& fp = field(fj, "params");
    Matrix Q = mat_from_json(field(fp, "Q"), n, n, "f.params.Q");
    Vector q = vec_from_json(field(fp, "q"), "f.params.q");
    if (q.size() != n) throw ParseError("f.params.q has the wrong length");
    SmoothObjective f = SmoothObjective::quadratic_objective(Q, q, number(fj, "m_f"), number(fj, "L_f"));

    const Json& hj = field(doc, "h");
    const std::string hkind = field(hj, "kind").get<std::string>();
    const Json& hp = field(hj, "params");
    Regularizer h;
    if (hkind == "box" || hkind == "l1_box") {
      h.set = Box{vec_from_json(field(hp, "lower"), "h.params.lower"), vec_from_json(field(hp, "upper"), "h.params.upper")};
      if (hkind == "l1_box") h.l1_scale = number(hp, "scale");
    } else if (hkind == "ball") {
      h.set = Ball{vec_from_json(field(hp, "center"), "h.params.center"), number(hp, "radius")};
    } else if (hkind == "simplex") {
      h.set = Simplex{static_cast<int>(n), number(hp, "radius")};
    } else {
      throw ParseError(fmt::format("unsupported h kind '{}'", hkind));
    }
    ConvexComposite hc;
    hc.h = h;
    hc.L_h = number(hj, "L_h");
    hc.slater_point = vec_from_json(field(doc, "slater_point"), "slater_point");

    std::optional<double> phi_lower;
    if (doc.contains("phi_lower") && !doc.at("phi_lower").is_null()) phi_lower = number(doc, "phi_lower");
    return ProblemInstance(std::move(f), std::move(hc), LinearConstraint(std::move(A), std::move(b)), phi_lower);
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("malformed problem file: {}", e.what()));
  }
}

Json generator_spec_to_json(const GeneratorSpec& s) {
  return {{"n", s.n},
          {"l", s.l},
          {"m_f", s.m_f},
          {"L_f", s.L_f},
          {"kind", to_string(s.kind)},
          {"radius", s.radius},
          {"center", s.center},
          {"l1_scale", s.l1_scale},
          {"sv_min", s.sv_min},
          {"sv_max", s.sv_max},
          {"q_scale", s.q_scale},
          {"slater_jitter", s.slater_jitter},
          {"certify_phi_lower", s.certify_phi_lower},
          {"seed", s.seed}};
}

GeneratorSpec generator_spec_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("generator spec must be a JSON object");
  GeneratorSpec s;
  try {
    s.n = doc.value("n", s.n);
    s.l = doc.value("l", s.l);
    s.m_f = doc.value("m_f", s.m_f);
    s.L_f = doc.value("L_f", s.L_f);
    if (doc.contains("kind")) s.kind = parse_domain_kind(doc.at("kind").get<std::string>());
    s.radius = doc.value("radius", s.radius);
    s.center = doc.value("center", s.center);
    s.l1_scale = doc.value("l1_scale", s.l1_scale);
    s.sv_min = doc.value("sv_min", s.sv_min);
    s.sv_max = doc.value("sv_max", s.sv_max);
    s.q_scale = doc.value("q_scale", s.q_scale);
    s.slater_jitter = doc.value("slater_jitter", s.slater_jitter);
    s.certify_phi_lower = doc.value("certify_phi_lower", s.certify_phi_lower);
    s.seed = doc.value("seed", s.seed);
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("malformed generator spec: {}", e.what()));
  }
  return s;
}

Json constants_to_json(const TheoreticalConstants& k) {
  return {{"lambda", k.lambda},     {"kappa0", k.kappa0}, {"kappa1", k.kappa1},
          {"kappa2", k.kappa2},     {"c_bar", k.c_bar},   {"R_star", opt_to_json(k.R_star)},
          {"T1", k.T1},             {"T2", k.T2},         {"C1", k.C1},
          {"dbar", k.dbar},         {"grad_bound", k.grad_bound},
          {"D", k.D},               {"phi_lower", opt_to_json(k.phi_lower)},
          {"phi_upper", opt_to_json(k.phi_upper)},
          {"multiplier_bound", k.multiplier_bound()}};
}

Json record_to_json(const OuterRecord& r) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {{"k", r.k},
          {"inner_iters", r.inner_iters},
          {"inner_bound", r.inner_bound},
          {"norm_r", num(r.norm_r)},
          {"eps", num(r.eps)},
          {"norm_v", num(r.norm_v)},
          {"norm_w", num(r.norm_w)},
          {"delta", num(r.delta)},
          {"norm_w_hat", num(r.norm_w_hat)},
          {"feas_hat", num(r.feas_hat)},
          {"feas", num(r.feas)},
          {"zhat_shift", num(r.zhat_shift)},
          {"norm_p", num(r.norm_p)},
          {"norm_dp", num(r.norm_dp)},
          {"lagrangian_prev", num(r.lagrangian_prev)},
          {"lagrangian", num(r.lagrangian)},
          {"delta_k", num(r.delta_k)}};
}

OuterRecord record_from_json(const Json& d) {
  OuterRecord r;
  r.k = field(d, "k").get<int>();
  r.inner_iters = field(d, "inner_iters").get<int>();
  r.inner_bound = field(d, "inner_bound").get<int>();
  r.norm_r = number_or_nan(field(d, "norm_r"));
  r.eps = number_or_nan(field(d, "eps"));
  r.norm_v = number_or_nan(field(d, "norm_v"));
  r.norm_w = number_or_nan(field(d, "norm_w"));
  r.delta = number_or_nan(field(d, "delta"));
  r.norm_w_hat = number_or_nan(field(d, "norm_w_hat"));
  r.feas_hat = number_or_nan(field(d, "feas_hat"));
  r.feas = number_or_nan(field(d, "feas"));
  r.zhat_shift = number_or_nan(field(d, "zhat_shift"));
  r.norm_p = number_or_nan(field(d, "norm_p"));
  r.norm_dp = number_or_nan(field(d, "norm_dp"));
  r.lagrangian_prev = number_or_nan(field(d, "lagrangian_prev"));
  r.lagrangian = number_or_nan(field(d, "lagrangian"));
  r.delta_k = number_or_nan(field(d, "delta_k"));
  return r;
}

Json summary_to_json(const ProblemInstance& problem, const DriverConfig& config, const SolveResult& result,
                     const std::string& timestamp) {
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["timestamp"] = timestamp;
  doc["status"] = to_string(result.status);
  doc["config"] = {{"c1", config.c1},
                   {"restart", to_string(config.restart)},
                   {"nu", config.nu},
                   {"sigma", config.sigma},
                   {"rho_hat", config.tol.rho_hat},
                   {"eta_hat", config.tol.eta_hat},
                   {"max_cycles", config.max_cycles}};
  doc["constants"] = constants_to_json(result.constants);
  doc["cycle_bound"] = result.cycle_bound;
  doc["total_acg_iters"] = result.total_acg_iterations();
  doc["total_outer_iters"] = result.total_outer_iterations();
  Json cycles = Json::array();
  for (const CycleOutcome& out : result.cycles) {
    const auto& recs = out.history.records;
    Json cj;
    cj["c"] = out.history.c;
    cj["outcome"] = status_of(out.status);
    cj["outer_iters"] = recs.size();
    cj["total_acg_iters"] = out.total_acg_iterations();
    cj["final_w_hat"] = recs.empty() ? Json(nullptr) : Json(recs.back().norm_w_hat);
    cj["final_feasibility"] = recs.empty() ? Json(nullptr) : Json(recs.back().feas_hat);
    const PenaltyParams& p = out.history.params;
    cj["params"] = {{"lambda", p.lambda}, {"L_c", p.L_c}, {"sigma_c", p.sigma_c}, {"M_s", p.M_s}, {"mu", p.mu}};
    Json rj = Json::array();
    for (const auto& r : recs) rj.push_back(record_to_json(r));
    cj["records"] = rj;
    cycles.push_back(cj);
  }
  doc["cycles"] = cycles;
  if (result.triple) {
    const auto& t = *result.triple;
    doc["triple"] = {{"z_hat", vec_to_json(t.z_hat)}, {"w_hat", vec_to_json(t.w_hat)}, {"p_hat", vec_to_json(t.p_hat)}};
    doc["final"] = {{"norm_w_hat", t.w_hat.norm()},
                    {"feasibility", problem.constraint().residual(t.z_hat).norm()},
                    {"inclusion_residual", inclusion_residual(t.z_hat, t.w_hat, t.p_hat, problem)}};
  } else {
    doc["triple"] = nullptr;
    doc["final"] = nullptr;
  }
  return doc;
}

LoadedRun run_from_summary(const ProblemInstance& problem, const Json& summary) {
  try {
    if (field(summary, "schema").get<int>() != kSchemaVersion) throw ParseError("unsupported summary schema");
    LoadedRun run;
    const Json& cfg = field(summary, "config");
    run.nu = number(cfg, "nu");
    run.sigma = number(cfg, "sigma");
    run.tol.rho_hat = number(cfg, "rho_hat");
    run.tol.eta_hat = number(cfg, "eta_hat");
    run.c1 = number(cfg, "c1");
    for (const Json& cj : field(summary, "cycles")) {
      CycleHistory h;
      h.c = number(cj, "c");
      h.params = PenaltyParams::make(problem, h.c, run.nu, run.sigma);
      for (const Json& rj : field(cj, "records")) h.records.push_back(record_from_json(rj));
      run.cycles.push_back(std::move(h));
    }
    return run;
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("malformed summary: {}", e.what()));
  }
}

const std::vector<std::string> kTraceColumns = {
    "cycle",       "c",           "k",         "inner_iters",     "norm_r", "eps",    "norm_w_hat",
    "feas_hat",    "norm_p",      "delta_k",   "lagrangian",      "inner_bound", "norm_dp", "lagrangian_prev",
    "norm_v",      "norm_w",      "delta",     "feas",            "zhat_shift"};

std::string trace_csv(const std::vector<CycleHistory>& cycles) {
  std::string out;
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) out += (i ? "," : "") + kTraceColumns[i];
  out += "\n";
  for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
    const double c = cycles[ci].c;
    for (const OuterRecord& r : cycles[ci].records) {
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", ci + 1, format_double(c), r.k,
                         r.inner_iters, format_double(r.norm_r), format_double(r.eps), format_double(r.norm_w_hat),
                         format_double(r.feas_hat), format_double(r.norm_p), format_double(r.delta_k),
                         format_double(r.lagrangian), r.inner_bound, format_double(r.norm_dp),
                         format_double(r.lagrangian_prev), format_double(r.norm_v), format_double(r.norm_w),
                         format_double(r.delta), format_double(r.feas), format_double(r.zhat_shift));
    }
  }
  return out;
}

std::string trace_csv(const SolveResult& result) {
  std::vector<CycleHistory> cycles;
  for (const auto& c : result.cycles) cycles.push_back(c.history);
  return trace_csv(cycles);
}

std::vector<CycleHistory> cycles_from_trace_csv(const ProblemInstance& problem, const std::string& text, double nu,
                                                double sigma) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty trace");
  std::map<std::string, std::size_t> col;
  {
    std::istringstream hs(line);
    std::string name;
    for (std::size_t i = 0; std::getline(hs, name, ','); ++i) col[name] = i;
  }
  for (const auto& name : kTraceColumns) {
    if (!col.count(name)) throw ParseError(fmt::format("trace is missing column '{}'", name));
  }
  std::map<int, CycleHistory> by_cycle;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != col.size()) throw ParseError(fmt::format("trace line {} has {} cells", line_no, cells.size()));
    auto num = [&](const char* name) {
      const std::string& s = cells[col.at(name)];
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str()) throw ParseError(fmt::format("trace line {}: bad number '{}'", line_no, s));
      return v;
    };
    const int cycle = static_cast<int>(num("cycle"));
    CycleHistory& h = by_cycle[cycle];
    h.c = num("c");
    OuterRecord r;
    r.k = static_cast<int>(num("k"));
    r.inner_iters = static_cast<int>(num("inner_iters"));
    r.inner_bound = static_cast<int>(num("inner_bound"));
    r.norm_r = num("norm_r");
    r.eps = num("eps");
    r.norm_w_hat = num("norm_w_hat");
    r.feas_hat = num("feas_hat");
    r.norm_p = num("norm_p");
    r.delta_k = num("delta_k");
    r.lagrangian = num("lagrangian");
    r.norm_dp = num("norm_dp");
    r.lagrangian_prev = num("lagrangian_prev");
    r.norm_v = num("norm_v");
    r.norm_w = num("norm_w");
    r.delta = num("delta");
    r.feas = num("feas");
    r.zhat_shift = num("zhat_shift");
    h.records.push_back(r);
  }
  std::vector<CycleHistory> out;
  for (auto& [idx, h] : by_cycle) {
    h.params = PenaltyParams::make(problem, h.c, nu, sigma);
    out.push_back(std::move(h));
  }
  return out;
}

Json monitor_to_json(const MonitorReport& report) {
  Json a = Json::array();
  for (const auto& e : report.entries) {
    a.push_back({{"inequality_id", e.inequality_id},
                 {"paper_ref", e.paper_ref},
                 {"status", to_string(e.status)},
                 {"worst_slack", std::isfinite(e.worst_slack) ? Json(e.worst_slack) : Json(nullptr)},
                 {"at_cycle", e.at_cycle},
                 {"at_iteration", e.at_iteration},
                 {"checked", e.checked}});
  }
  return a;
}

}  // namespace iapial
