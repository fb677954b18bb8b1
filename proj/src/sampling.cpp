#include "jetfields/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jetfields {

JetPoint sample_jet_point(int m, int order, const SampleConfig& cfg, std::mt19937_64& eng) {
  JetPoint p(m, order);
  for (int r = 0; r <= order; ++r) {
    auto [lo, hi] = cfg.range(r);
    for (int i = 1; i <= m; ++i) p.y(i, r) = uniform(eng, lo, hi);
  }
  if (order >= 1) {
    double target = uniform(eng, cfg.level1_lo, cfg.level1_hi);
    double nrm = p.row_norm(1);
    if (nrm == 0.0) {
      p.y(1, 1) = target;  // degenerate draw; point the row along the first axis
    } else {
      double s = target / nrm;
      for (int i = 1; i <= m; ++i) p.y(i, 1) *= s;
    }
  }
  return p;
}

std::vector<JetPoint> sample_jet_points(int m, int order, const SampleConfig& cfg) {
  std::mt19937_64 eng(cfg.seed);
  std::vector<JetPoint> out;
  out.reserve(cfg.count);
  for (int k = 0; k < cfg.count; ++k) out.push_back(sample_jet_point(m, order, cfg, eng));
  return out;
}

EqualityReport equal_prob(const Expr& a, const Expr& b, const SampleConfig& cfg, int m, int order) {
  if (cfg.count < 1) throw std::invalid_argument("equal_prob: count must be >= 1");
  EqualityReport rep;
  rep.equal = true;
  if (m < 1 || order < 0) {  // both expressions constant
    double va = eval(a, JetPoint(1, 0));
    double vb = eval(b, JetPoint(1, 0));
    rep.max_residual = rel_residual(va, vb);
    rep.samples = 1;
    rep.equal = rep.max_residual <= cfg.tol;
    return rep;
  }
  std::mt19937_64 eng(cfg.seed);
  const long retry_cap = 100L * cfg.count + 1000;
  long attempts = 0;
  while (rep.samples < cfg.count) {
    if (++attempts > retry_cap) throw EvalError("equal_prob: retry cap exhausted while sampling");
    JetPoint p = sample_jet_point(m, order, cfg, eng);
    if (order >= 1 && !p.slit(cfg.guard)) continue;
    double va, vb;
    try {
      va = eval(a, p);
      vb = eval(b, p);
    } catch (const EvalError&) {
      continue;
    }
    if (!std::isfinite(va) || !std::isfinite(vb)) continue;
    ++rep.samples;
    rep.max_residual = std::max(rep.max_residual, rel_residual(va, vb));
  }
  rep.equal = rep.max_residual <= cfg.tol;
  return rep;
}

EqualityReport equal_prob(const Expr& a, const Expr& b, const SampleConfig& cfg) {
  int m = std::max(max_var_index(a), max_var_index(b));
  int order = std::max(max_var_level(a), max_var_level(b));
  return equal_prob(a, b, cfg, m, order);
}

}  // namespace jetfields
