#include "oracles.hpp"

namespace oracles {

namespace {
std::string Q11(int m) { return "(" + dot_string(m, 1, 1) + ")"; }
std::string Q12(int m) { return "(" + dot_string(m, 1, 2) + ")"; }
std::string Q22(int m) { return "(" + dot_string(m, 2, 2) + ")"; }
std::string Q13(int m) { return "(" + dot_string(m, 1, 3) + ")"; }
std::string Q23(int m) { return "(" + dot_string(m, 2, 3) + ")"; }
}  // namespace

std::vector<std::string> circle_gamma_strings(int m) {
  std::vector<std::string> g;
  for (int i = 1; i <= m; ++i) {
    std::string yi1 = "y" + std::to_string(i) + "_1";
    std::string yi2 = "y" + std::to_string(i) + "_2";
    g.push_back("-((2*" + Q11(m) + "*" + Q22(m) + " + " + Q12(m) + "^2)/(2*" + Q11(m) + "^2))*" +
                yi1 + " + 3*(" + Q12(m) + "/" + Q11(m) + ")*" + yi2);
  }
  return g;
}

std::vector<std::string> circle_simple_gamma_strings(int m) {
  std::vector<std::string> g;
  for (int i = 1; i <= m; ++i)
    g.push_back("3*(" + Q12(m) + "/" + Q11(m) + ")*y" + std::to_string(i) + "_2");
  return g;
}

std::string curvature_lagrangian_string(int m) {
  return "(" + Q11(m) + "*" + Q22(m) + " - " + Q12(m) + "^2)/" + Q11(m) + "^(5/2)";
}

std::vector<std::string> curvature_field_gamma_strings(int m) {
  std::vector<std::string> g;
  for (int i = 1; i <= m; ++i) {
    std::string yi1 = "y" + std::to_string(i) + "_1";
    std::string yi2 = "y" + std::to_string(i) + "_2";
    std::string yi3 = "y" + std::to_string(i) + "_3";
    g.push_back("-3*(" + Q23(m) + "/" + Q11(m) + ")*" + yi1 + " + ((5*" + Q11(m) + "*" + Q22(m) +
                " - 35*" + Q12(m) + "^2 + 8*" + Q11(m) + "*" + Q13(m) + ")/(2*" + Q11(m) +
                "^2))*" + yi2 + " + 6*(" + Q12(m) + "/" + Q11(m) + ")*" + yi3);
  }
  return g;
}

}  // namespace oracles
