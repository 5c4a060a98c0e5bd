#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "cdk/equilibrium.hpp"
#include "cdk/oracle.hpp"
#include "cdk/potential.hpp"
#include "cdk/scaled_real.hpp"

namespace cdk {

using nlohmann::json;

// Potential description grammar:
//   {"kind":"poly","coeffs":[...],"interval":[lo,hi]}
// with "-inf"/"inf" strings for infinite endpoints, or a preset name
// ("gue" = x^2 on R, "quartic" = x^4 on R).
Potential parse_potential(const json& spec);
Potential potential_preset(const std::string& name);
json potential_to_json(const Potential& pot);

json equilibrium_to_json(const EquilibriumData& eq);
EquilibriumData equilibrium_from_json(const Potential& pot, const json& j);

json recurrence_to_json(const RecurrenceTable& tab);
RecurrenceTable recurrence_from_json(const Potential& pot, const json& j);

// Deterministic CSV writer: one leading '#' metadata line, then a header
// and rows formatted with %.17g.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void meta(const std::string& line);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);

  static std::string num(double v);
  static std::string scaled(const ScaledReal& v);  // "mantissa,log2" pair

 private:
  std::ostream& os_;
};

// FNV-1a hash of a canonical configuration string, for CSV metadata lines.
std::string config_hash(const std::string& canonical);

}  // namespace cdk
