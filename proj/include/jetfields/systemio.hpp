#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jetfields/homog.hpp"
#include "jetfields/varcalc.hpp"

namespace jetfields {

// On-disk system definition: dimensions plus expression strings for a
// differential equation field and/or a Lagrangian.
struct SystemFile {
  int m = 0;
  int n = 0;
  std::optional<std::vector<std::string>> gamma;
  std::optional<std::string> lagrangian;
  std::string metadata;

  bool has_field() const { return gamma.has_value(); }
  bool has_lagrangian() const { return lagrangian.has_value(); }

  DEField field() const;
  Lagrangian lagrangian_fn() const;
};

SystemFile load_system(const std::string& path);
SystemFile parse_system_json(const std::string& text);

}  // namespace jetfields
