#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace gfield {

// One line of a property-suite report: value vs reference at a tolerance.
struct CheckItem {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool gram_exact = false;  // settled at Gram level, no solver involved
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool all_pass() const {
    return std::all_of(items.begin(), items.end(),
                       [](const CheckItem& c) { return c.pass; });
  }

  CheckItem& add(std::string name, double value, double reference, double tol) {
    CheckItem item;
    item.name = std::move(name);
    item.value = value;
    item.reference = reference;
    item.tolerance = tol;
    item.pass = std::abs(value - reference) <= tol;
    items.push_back(std::move(item));
    return items.back();
  }
};

} // namespace gfield
