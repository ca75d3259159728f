#ifndef CORRFIX_REPORT_HPP
#define CORRFIX_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "corrfix/common.hpp"

namespace corrfix {

struct Violation {
  Vec location;       // lambda weights or a domain point, per check
  double distance;    // membership distance / defect observed
  std::string context;
};

/// Outcome of a grid-certified property check. The verdict is `pass` exactly
/// when the violation list is empty; checks that tested nothing say so in
/// `notes` and still pass (vacuously).
struct PropertyReport {
  std::string property;
  std::string grid;
  long combinations_tested = 0;
  std::vector<Violation> violations;
  std::map<std::string, double> stats;
  std::vector<std::string> notes;

  bool pass() const { return violations.empty(); }
  void sort_violations();
  void merge_tagged(const PropertyReport& sub, const std::string& tag);
};

} // namespace corrfix

#endif
