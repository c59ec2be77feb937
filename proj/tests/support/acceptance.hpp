#pragma once

// Acceptance suite shared by the ctest driver and `lmo selftest`.

#include <functional>
#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // first failure, or a short summary
  double seconds = 0;
};

struct Options {
  int workers = 2;  // the determinism check also compares against 1
  int closure_rounds = 4;
};

// Runs criteria 1..13 in order; report is called after each one.
std::vector<Outcome> run_all(const Options& opt, const std::function<void(const Outcome&)>& report = {});

std::string format_line(const Outcome& o);

}  // namespace acceptance
