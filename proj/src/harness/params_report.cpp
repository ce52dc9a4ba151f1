#include "zominimax/harness/params_report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace zominimax::harness {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void line(std::ostringstream& out, const char* name, const std::string& value, const std::string& formula) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-7s = ", name);
  out << buf << value;
  if (!formula.empty()) out << "    [" << formula << "]";
  out << '\n';
}

std::string with_fraction(double v) {
  const std::string frac = as_unit_fraction(v);
  return frac.empty() ? num(v) : num(v) + " (= " + frac + ")";
}

}  // namespace

std::string as_unit_fraction(double v) {
  if (!(v > 0.0)) return {};
  const double inv = 1.0 / v;
  const double r = std::round(inv);
  if (r < 1.0 || std::abs(inv - r) > 1e-9 * r) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "1/%.0f", r);
  return buf;
}

std::string print_params(const DerivedParams& p, const ProblemConstants& c) {
  std::ostringstream out;
  const auto& ov = p.overrides;
  const bool multi = is_multistep(p.mode);
  out << "mode    = " << to_string(p.mode) << '\n';
  line(out, "ell", num(c.ell), "");
  line(out, "tau", num(c.tau), "");
  line(out, "d1", std::to_string(c.d1), "");
  line(out, "d2", std::to_string(c.d2), "");
  line(out, "D", c.diameter ? num(*c.diameter) : "unbounded", "");
  line(out, "eps", num(p.eps), "");
  line(out, "kappa", num(p.kappa), "ell/tau");
  line(out, "Lg", num(p.Lg), "ell(1+kappa)");

  std::string eta1_formula = multi ? "1/(12 Lg)" : "1/(4*12^4 kappa^2 (kappa+1)^2 (ell+1))";
  if (ov.eta1_scale) eta1_formula = num(*ov.eta1_scale) + " * " + eta1_formula;
  if (ov.eta1) eta1_formula = "override";
  line(out, "eta1", with_fraction(p.eta1), eta1_formula);
  line(out, "eta2", with_fraction(p.eta2), "1/(6 ell)");

  const std::string cs = "C_S=" + num(ov.C_S);
  line(out, "S", std::to_string(p.S),
       ov.S ? "override" : (multi ? "ceil(C_S kappa / eps^2), " : "ceil(C_S kappa^5 / eps^2), ") + cs);
  if (p.T)
    line(out, "T", std::to_string(*p.T),
         ov.T ? "override" : "ceil(C_T kappa ln(1/eps)), C_T=" + num(ov.C_T));
  const std::string cmu = ", C_mu=" + num(ov.C_mu);
  line(out, "mu1", num(p.mu1), (multi ? "C_mu eps d1^-3/2" : "C_mu eps d1^-3/2 kappa^-2") + cmu);
  line(out, "mu2", num(p.mu2), (multi ? "C_mu eps kappa^-1/2 d2^-3/2" : "C_mu eps d2^-3/2 kappa^-2") + cmu);
  if (is_stochastic(p.mode)) {
    line(out, "sigma1", num(p.sigma1), "");
    line(out, "sigma2", num(p.sigma2), "");
    line(out, "m1", std::to_string(*p.m1), "ceil(4(d1+6)(sigma1^2+1)/eps^2)");
    line(out, "m2", std::to_string(*p.m2), "ceil(4(d2+6)(sigma2^2+1)/eps^2)");
    line(out, "K", std::to_string(p.S * *p.m1 + p.S * (multi ? *p.T : 1) * *p.m2),
         multi ? "S m1 + T S m2" : "S (m1 + m2)");
  } else {
    line(out, "q1", std::to_string(p.q1), "2(d1+6)");
    line(out, "q2", std::to_string(p.q2), "2(d2+6)");
    line(out, "K", std::to_string(p.S * p.q1 + p.S * (multi ? *p.T : 1) * p.q2),
         multi ? "S q1 + T S q2" : "S (q1 + q2)");
  }
  return out.str();
}

}  // namespace zominimax::harness
