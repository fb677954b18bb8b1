// Command-line front end: system definitions in, JSON reports out.

#include <CLI11.hpp>
#include <json.hpp>

#include <jetfields/geod.hpp>
#include <jetfields/homog.hpp>
#include <jetfields/systemio.hpp>
#include <jetfields/varcalc.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace jetfields;

namespace {

struct CommonFlags {
  int samples = 100;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

SampleConfig config_of(const CommonFlags& fl) {
  SampleConfig cfg;
  cfg.count = fl.samples;
  cfg.seed = fl.seed;
  cfg.tol = fl.tol;
  return cfg;
}

std::vector<double> parse_csv_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    out.push_back(std::stod(item, &used));
  }
  return out;
}

// The documented initial data: arc-length circle jet for n = 2, and the
// arc-length submanifold data of the fourth-order system for n = 3.
JetPoint std_init(int m, int n) {
  JetPoint p(m, n);
  p.y(1, 1) = 1.0;
  if (m >= 2 && n >= 2) p.y(2, 2) = 1.0;
  if (n >= 3) {
    p.y(1, 3) = -1.0;
    if (m >= 3) p.y(3, 3) = 0.3;
  }
  return p;
}

JetPoint parse_init(const std::string& text, int m, int n) {
  if (text == "std") return std_init(m, n);
  std::vector<double> v = parse_csv_numbers(text);
  if (static_cast<int>(v.size()) != m * (n + 1))
    throw std::invalid_argument("--init needs " + std::to_string(m * (n + 1)) +
                                " numbers (row-major jet order) or 'std'");
  JetPoint p(m, n);
  p.coords = v;
  return p;
}

// lambda expressions certified zero by the run's own samples print as "0"
std::string lambda_string(const Expr& lam, const SampleConfig& cfg, int m, int n) {
  if (equal_prob(lam, Expr(), cfg, m, n).equal) return "0";
  return to_string(lam);
}

int emit(const json& doc, bool pass) {
  std::cout << doc.dump(2) << std::endl;
  return pass ? 0 : 1;
}

int cmd_check_homogeneity(const std::string& file, const CommonFlags& fl) {
  SystemFile sf = load_system(file);
  DEField field = sf.field();
  SampleConfig cfg = config_of(fl);
  auto rep = lambda_extract(field, cfg);
  json doc;
  doc["file"] = file;
  doc["m"] = field.m;
  doc["n"] = field.n;
  doc["homogeneous"] = rep.homogeneous;
  doc["cross_residual"] = rep.cross_residual;
  json lam = json::array();
  for (const Expr& l : rep.lambda) lam.push_back(lambda_string(l, cfg, field.m, field.n));
  doc["lambda"] = lam;
  json per = json::array();
  for (double r : rep.per_order_residual) per.push_back(r);
  doc["per_order_residual"] = per;
  if (rep.homogeneous) {
    auto con = consistency_check(rep.lambda, field.n, field.m, cfg);
    doc["consistency"] = {{"euler", con.family_euler},
                          {"low", con.family_low},
                          {"top", con.family_top},
                          {"high", con.family_high},
                          {"max", con.max()}};
  }
  return emit(doc, rep.homogeneous);
}

int cmd_check_zermelo(const std::string& file, const CommonFlags& fl) {
  SystemFile sf = load_system(file);
  Lagrangian lag = sf.lagrangian_fn();
  auto rep = zermelo_check(lag, config_of(fl));
  json doc;
  doc["file"] = file;
  doc["parametric"] = rep.parametric;
  doc["residuals"] = rep.residuals;
  return emit(doc, rep.parametric);
}

int cmd_euler_lagrange(const std::string& file, const std::string& verify_file,
                       const std::string& extract_at, const CommonFlags& fl) {
  SystemFile sf = load_system(file);
  Lagrangian lag = sf.lagrangian_fn();
  SampleConfig cfg = config_of(fl);
  json doc;
  doc["file"] = file;
  if (!verify_file.empty()) {
    SystemFile gf = load_system(verify_file);
    auto rep = verify_el_field(lag, gf.field(), cfg);
    doc["verify"] = verify_file;
    doc["residual"] = rep.max_residual;
    doc["pass"] = rep.equal;
    return emit(doc, rep.equal);
  }
  if (!extract_at.empty()) {
    JetPoint p = parse_init(extract_at, lag.m, 2 * lag.n - 1);
    auto rep = extract_el_field_at(lag, p);
    doc["extract_at"] = extract_at;
    doc["particular"] = rep.particular;
    doc["kernel"] = rep.kernel;
    doc["inconsistency"] = rep.inconsistency;
    return emit(doc, rep.inconsistency <= 1e-6);
  }
  // default: report the symbolic Euler-Lagrange expressions
  json eps = json::array();
  for (const Expr& e : el_classical(lag)) eps.push_back(to_string(e));
  doc["euler_lagrange"] = eps;
  return emit(doc, true);
}

int cmd_regularity(const std::string& file, const std::string& field_file, int points,
                   const CommonFlags& fl) {
  SystemFile sf = load_system(file);
  Lagrangian lag = sf.lagrangian_fn();
  std::optional<DEField> field;
  if (!field_file.empty()) field = load_system(field_file).field();
  SampleConfig cfg = config_of(fl);
  std::mt19937_64 eng(cfg.seed);
  json list = json::array();
  bool pass = true;
  int kernel_dim = -1;
  double worst_delta = 0.0, worst_gamma = 0.0;
  for (int k = 0; k < points; ++k) {
    JetPoint p = sample_jet_point(lag.m, 2 * lag.n - 1, cfg, eng);
    auto rep = regularity_rank(lag, p, field ? &*field : nullptr);
    kernel_dim = (kernel_dim < 0) ? rep.kernel_dim : kernel_dim;
    pass = pass && rep.kernel_dim == kernel_dim && rep.delta_residual < 1e-8;
    if (field) pass = pass && rep.gamma_residual < 1e-8;
    worst_delta = std::max(worst_delta, rep.delta_residual);
    worst_gamma = std::max(worst_gamma, rep.gamma_residual);
    list.push_back({{"rank", rep.rank},
                    {"kernel_dim", rep.kernel_dim},
                    {"sv_gap", rep.sv_gap},
                    {"delta_residual", rep.delta_residual},
                    {"gamma_residual", rep.gamma_residual}});
  }
  json doc;
  doc["file"] = file;
  if (!field_file.empty()) doc["field"] = field_file;
  doc["dimension"] = 2 * lag.n * lag.m;
  doc["kernel_dim"] = kernel_dim;
  doc["worst_delta_residual"] = worst_delta;
  if (field) doc["worst_gamma_residual"] = worst_gamma;
  doc["points"] = list;
  doc["pass"] = pass;
  return emit(doc, pass);
}

int cmd_integrate(const std::string& file, const std::string& init, double t1, double h,
                  const std::string& out, double speed_cap) {
  SystemFile sf = load_system(file);
  DEField field = sf.field();
  JetPoint p = parse_init(init, field.m, field.n);
  IntegrateOptions opts;
  opts.speed_cap = speed_cap;
  Trajectory tr = integrate(field, p, t1, h, opts);
  json doc;
  doc["file"] = file;
  doc["completed"] = tr.completed;
  doc["stop_reason"] = tr.stop_reason;
  doc["samples"] = tr.states.size();
  doc["t_last"] = tr.t.back();
  doc["richardson_error"] = tr.richardson_error;
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open output file: " + out);
    write_csv(tr, os);
    doc["out"] = out;
  } else {
    std::ostringstream os;
    write_csv(tr, os);
    doc["csv"] = os.str();
  }
  return emit(doc, tr.completed);
}

int cmd_compare_paths(const std::string& file_a, const std::string& file_b,
                      const std::string& init, double tol, double t1, double h, double ds,
                      double speed_cap, double max_arc) {
  SystemFile sa = load_system(file_a), sb = load_system(file_b);
  DEField fa = sa.field(), fb = sb.field();
  if (fa.m != fb.m || fa.n != fb.n) throw std::invalid_argument("compare-paths: order mismatch");
  JetPoint p = parse_init(init, fa.m, fa.n);
  IntegrateOptions opts;
  opts.speed_cap = speed_cap;
  Trajectory ta = integrate(fa, p, t1, h, opts);
  Trajectory tb = integrate(fb, p, t1, h, opts);
  Path pa = arclength_resample(ta, ds);
  Path pb = arclength_resample(tb, ds);
  double common = std::min(pa.length(), pb.length());
  if (max_arc > 0) common = std::min(common, max_arc);
  double d = hausdorff(arclength_resample(ta, ds, common), arclength_resample(tb, ds, common));
  bool pass = d <= tol;
  json doc;
  doc["a"] = file_a;
  doc["b"] = file_b;
  doc["arc_a"] = pa.length();
  doc["arc_b"] = pb.length();
  doc["common_arc"] = common;
  doc["hausdorff"] = d;
  doc["tol"] = tol;
  doc["pass"] = pass;
  doc["stop_a"] = ta.stop_reason;
  doc["stop_b"] = tb.stop_reason;
  return emit(doc, pass);
}

int cmd_spray_normalize(const std::string& file, const std::string& at, const CommonFlags& fl) {
  SystemFile sf = load_system(file);
  DEField field = sf.field();
  SampleConfig cfg = config_of(fl);
  auto rep = lambda_extract(field, cfg);
  if (!rep.homogeneous) {
    json doc;
    doc["file"] = file;
    doc["homogeneous"] = false;
    return emit(doc, false);
  }
  SprayNormalizer norm(field);
  JetPoint p = parse_init(at, field.m, field.n);
  json doc;
  doc["file"] = file;
  doc["homogeneous"] = true;
  doc["at"] = at;
  doc["mu"] = norm.mu_at(p);
  doc["normalized_top"] = norm.normalized_top(p);
  return emit(doc, true);
}

int cmd_jetgroup(const std::string& op, int order, const std::vector<std::string>& operands) {
  auto parse_el = [&](const std::string& s) {
    std::vector<double> v = parse_csv_numbers(s);
    if (static_cast<int>(v.size()) != order)
      throw std::invalid_argument("operand needs exactly " + std::to_string(order) + " numbers");
    return v;
  };
  json doc;
  doc["op"] = op;
  doc["order"] = order;
  std::vector<double> result;
  if (op == "mul") {
    if (operands.size() != 2) throw std::invalid_argument("mul needs two operands");
    result = mul(GroupElement(order, parse_el(operands[0])), GroupElement(order, parse_el(operands[1]))).y;
  } else if (op == "inv") {
    if (operands.size() != 1) throw std::invalid_argument("inv needs one operand");
    result = inv(GroupElement(order, parse_el(operands[0]))).y;
  } else if (op == "exp") {
    if (operands.size() != 1) throw std::invalid_argument("exp needs one operand");
    result = exp_k(AlgebraElement(order, parse_el(operands[0]))).y;
  } else if (op == "log") {
    if (operands.size() != 1) throw std::invalid_argument("log needs one operand");
    result = log_k(GroupElement(order, parse_el(operands[0]))).c;
  } else {
    throw std::invalid_argument("jetgroup: unknown operation " + op);
  }
  doc["result"] = result;
  return emit(doc, true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jetfields: homogeneity, variational and geodesic analysis of higher-order ODE fields"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // keep -h free for the step flag

  CommonFlags fl;
  std::string file, file_b, init = "std", verify_file, extract_at, out, at = "std", field_file;
  double t1 = 6.283185307179586, h = 1e-3, tol = 1e-5, ds = 1e-3, speed_cap = 1e6, max_arc = -1.0;
  int points = 20;
  std::string gop;
  int order = 2;
  std::vector<std::string> operands;

  auto add_common = [&](CLI::App* c) {
    c->set_help_flag("--help", "print help");
    c->add_option("--samples", fl.samples, "sample count for probabilistic checks");
    c->add_option("--seed", fl.seed, "random seed");
    c->add_option("--tol", fl.tol, "relative tolerance");
  };

  auto* hom = app.add_subcommand("check-homogeneity", "extract lambda^r and test homogeneity");
  hom->add_option("file", file)->required();
  add_common(hom);

  auto* zer = app.add_subcommand("check-zermelo", "test the Zermelo conditions");
  zer->add_option("file", file)->required();
  add_common(zer);

  auto* el = app.add_subcommand("euler-lagrange", "Euler-Lagrange form: print, verify a field, or extract pointwise");
  el->add_option("file", file)->required();
  el->add_option("--verify", verify_file, "field definition to substitute into eps");
  el->add_option("--extract-at", extract_at, "T^{2n-1} point (row-major CSV or 'std')");
  add_common(el);

  auto* reg = app.add_subcommand("regularity", "rank of d(theta) at random slit points");
  reg->add_option("file", file)->required();
  reg->add_option("--field", field_file, "field whose kernel membership to verify");
  reg->add_option("--points", points, "number of sample points");
  add_common(reg);

  auto* integ = app.add_subcommand("integrate", "integrate a field and export CSV");
  integ->set_help_flag("--help", "print help");
  integ->add_option("file", file)->required();
  integ->add_option("--init", init, "initial jet (row-major CSV or 'std')");
  integ->add_option("--t1", t1, "end parameter");
  integ->add_option("--h", h, "step size");
  integ->add_option("--out", out, "CSV output path (default: inline in the JSON report)");
  integ->add_option("--speed-cap", speed_cap, "abort when |y_1| exceeds this");

  auto* cmp = app.add_subcommand("compare-paths", "Hausdorff distance of arc-length resampled geodesics");
  cmp->set_help_flag("--help", "print help");
  cmp->add_option("fileA", file)->required();
  cmp->add_option("fileB", file_b)->required();
  cmp->add_option("--init", init, "shared initial jet (row-major CSV or 'std')");
  cmp->add_option("--tol", tol, "pass threshold");
  cmp->add_option("--t1", t1, "end parameter");
  cmp->add_option("--h", h, "step size");
  cmp->add_option("--ds", ds, "resampling arc step");
  cmp->add_option("--speed-cap", speed_cap, "abort when |y_1| exceeds this");
  cmp->add_option("--max-arc", max_arc, "cap the compared arc length");

  auto* spray = app.add_subcommand("spray-normalize", "evaluate the normalizing mu at a point");
  spray->add_option("file", file)->required();
  spray->add_option("--at", at, "T^n point (row-major CSV or 'std')");
  add_common(spray);

  auto* jg = app.add_subcommand("jetgroup", "jet group arithmetic (mul|inv|exp|log)");
  jg->set_help_flag("--help", "print help");
  jg->add_option("op", gop)->required();
  jg->add_option("--order", order, "group order n");
  jg->add_option("operands", operands, "comma-separated coordinate vectors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (hom->parsed()) return cmd_check_homogeneity(file, fl);
    if (zer->parsed()) return cmd_check_zermelo(file, fl);
    if (el->parsed()) return cmd_euler_lagrange(file, verify_file, extract_at, fl);
    if (reg->parsed()) return cmd_regularity(file, field_file, points, fl);
    if (integ->parsed()) return cmd_integrate(file, init, t1, h, out, speed_cap);
    if (cmp->parsed()) return cmd_compare_paths(file, file_b, init, tol, t1, h, ds, speed_cap, max_arc);
    if (spray->parsed()) return cmd_spray_normalize(file, at, fl);
    if (jg->parsed()) return cmd_jetgroup(gop, order, operands);
  } catch (const std::exception& e) {
    json doc;
    doc["error"] = e.what();
    std::cout << doc.dump(2) << std::endl;
    return 1;
  }
  return 1;
}
