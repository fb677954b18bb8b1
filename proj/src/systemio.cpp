#include "jetfields/systemio.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace jetfields {

DEField SystemFile::field() const {
  if (!gamma) throw std::invalid_argument("SystemFile: no gamma entry");
  if (static_cast<int>(gamma->size()) != m)
    throw std::invalid_argument("SystemFile: gamma must have exactly m entries");
  std::vector<Expr> g;
  g.reserve(m);
  for (const std::string& text : *gamma) g.push_back(parse(text, m, n));
  return DEField(m, n, std::move(g));
}

Lagrangian SystemFile::lagrangian_fn() const {
  if (!lagrangian) throw std::invalid_argument("SystemFile: no lagrangian entry");
  return Lagrangian(m, n, parse(*lagrangian, m, n));
}

SystemFile parse_system_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SystemFile sf;
  sf.m = j.at("m").get<int>();
  sf.n = j.at("n").get<int>();
  if (sf.m < 1 || sf.n < 1) throw std::invalid_argument("SystemFile: need m >= 1 and n >= 1");
  if (j.contains("gamma")) sf.gamma = j.at("gamma").get<std::vector<std::string>>();
  if (j.contains("lagrangian")) sf.lagrangian = j.at("lagrangian").get<std::string>();
  if (j.contains("metadata")) sf.metadata = j.at("metadata").get<std::string>();
  if (!sf.gamma && !sf.lagrangian)
    throw std::invalid_argument("SystemFile: need at least one of gamma or lagrangian");
  return sf;
}

SystemFile load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open system file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_json(buf.str());
}

}  // namespace jetfields
