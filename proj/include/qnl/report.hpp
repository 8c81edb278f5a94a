#pragma once

#include <string>
#include <vector>

namespace qnl {

struct CheckEntry {
  std::string check;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<CheckEntry> entries;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }

  void add(std::string name, double value, double threshold, bool pass) {
    entries.push_back({std::move(name), value, threshold, pass});
  }
};

}  // namespace qnl
