#include <iostream>

#include "support/acceptance.hpp"

int main() {
  acceptance::Options opt;
  opt.workers = 4;
  bool ok = true;
  acceptance::run_all(opt, [&](const acceptance::Outcome& o) {
    std::cout << acceptance::format_line(o) << std::endl;
    ok = ok && o.pass;
  });
  return ok ? 0 : 1;
}
