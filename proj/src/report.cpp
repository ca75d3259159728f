#include "corrfix/report.hpp"

#include <algorithm>

namespace corrfix {

void PropertyReport::sort_violations() {
  std::stable_sort(violations.begin(), violations.end(),
                   [](const Violation& a, const Violation& b) {
                     if (a.context != b.context) return a.context < b.context;
                     return lex_less(a.location, b.location);
                   });
}

void PropertyReport::merge_tagged(const PropertyReport& sub, const std::string& tag) {
  combinations_tested += sub.combinations_tested;
  for (auto v : sub.violations) {
    v.context = v.context.empty() ? tag : tag + ";" + v.context;
    violations.push_back(std::move(v));
  }
  for (const auto& [k, val] : sub.stats) {
    stats[tag + "." + k] = val;
  }
  for (const auto& n : sub.notes) notes.push_back(tag + ": " + n);
}

} // namespace corrfix
