// lmo: command-line front end for the truncated LMO invariant.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lmo/associator.hpp"
#include "lmo/io.hpp"
#include "support/acceptance.hpp"

using namespace lmo;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kBudget = 3 };

struct Job {
  std::string input;
  int degree = 2;
  int n = 2;
  std::string format = "json";
  int workers = 1;
  int rounds = 4;
  std::string table = "associator";
  int weight = 4;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Stable 64-bit FNV-1a, used only to name cache files.
std::string cache_key(const std::string& text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Results are deterministic, so a finished output can be reused verbatim.
// The worker count is left out of the key on purpose.
template <class F>
std::string cached(const std::string& key_text, F compute) {
  const char* dir = std::getenv("LMO_CACHE_DIR");
  if (!dir || !*dir) return compute();
  const fs::path file = fs::path(dir) / (cache_key(key_text) + ".out");
  std::ifstream in(file, std::ios::binary);
  if (in) {
    std::string head;
    std::getline(in, head);
    if (head == key_text.substr(0, key_text.find('\n'))) {
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }
  }
  std::string out = compute();
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary);
    o << key_text.substr(0, key_text.find('\n')) << '\n' << out;
  }
  fs::rename(tmp, file, ec);
  return out;
}

IotaOptions iota_options(const Job& j) { return {j.workers, j.rounds}; }

std::string emit(const Json& doc, const std::string& text, const Job& j) {
  return j.format == "json" ? doc.dump(2) + "\n" : text;
}

std::string key_for(const std::string& cmd, const Job& j, const std::string& input) {
  std::ostringstream os;
  os << "lmo " << cmd << " degree=" << j.degree << " n=" << j.n << " format=" << j.format << " rounds=" << j.rounds
     << " input=" << cache_key(input) << "\n"
     << input;
  return os.str();
}

std::string cmd_z(const Job& j) {
  const std::string input = read_file(j.input);
  const SurgeryPresentation p = parse_presentation(input);
  return cached(key_for("z", j, input), [&] {
    const LinkDiagram d = add_framing_curls(p.diagram, p.framings);
    const Element z = check_z(d, {j.degree, 0});
    Json doc = element_to_json(z);
    doc["degree_cap"] = j.degree;
    std::string text = "check-Z to degree " + std::to_string(j.degree) + " on " + skeleton_string(z.skeleton()) +
                       "\n" + element_to_text(z);
    return emit(doc, text, j);
  });
}

std::string cmd_invariant(const Job& j) {
  const std::string input = read_file(j.input);
  const SurgeryPresentation p = parse_presentation(input);
  return cached(key_for("invariant", j, input), [&] {
    const OmegaResult r = omega_n(p, j.n, iota_options(j));
    std::ostringstream t;
    t << "Omega_" << j.n << "  sigma+ " << r.sigma.positive << "  sigma- " << r.sigma.negative << "  caps degree "
      << r.degree_cap << " legs " << r.leg_cap << "\n"
      << "degree 0: " << r.value.constant().to_string() << "\n"
      << "theta: " << theta_coefficient(r.value).to_string() << "\n"
      << element_to_text(r.value);
    return emit(omega_to_json(r, j.n), t.str(), j);
  });
}

std::string cmd_omega(const Job& j) {
  const std::string input = read_file(j.input);
  const SurgeryPresentation p = parse_presentation(input);
  return cached(key_for("omega", j, input), [&] {
    const Element w = omega_log(omega_series(p, j.degree, iota_options(j)), j.degree, j.rounds);
    const Signature s = signature(linking_matrix(add_framing_curls(p.diagram, p.framings), p.framings));
    Json doc;
    doc["degree_cap"] = j.degree;
    doc["terms"] = element_to_json(w)["terms"];
    doc["theta_coefficient"] = scalar_to_json(theta_coefficient(w));
    doc["sigma_plus"] = s.positive;
    doc["sigma_minus"] = s.negative;
    doc["b1"] = s.zero;
    doc["theta_interpretation"] = "(-1)^(b1+1) * 3 * lambda_tilde(M)";
    // reported only; nothing here assumes z3 cancels
    Scalar z3_total;
    std::vector<std::string> formal;
    const Monomial z3{*SymbolRegistry::instance().find("z3")};
    Json residual = Json::array();
    for (auto& [code, c] : w.terms()) {
      if (c.coefficient(z3) != 0) residual.push_back({{"diagram_code", code}, {"z3", c.coefficient(z3).get_str()}});
      for (auto& f : c.formal_symbols())
        if (std::find(formal.begin(), formal.end(), f) == formal.end()) formal.push_back(f);
    }
    doc["z3_residual"] = residual;
    doc["formal_symbols"] = formal;
    std::string text = "omega to degree " + std::to_string(j.degree) + "\ntheta: " +
                       theta_coefficient(w).to_string() + "\nb1: " + std::to_string(s.zero) +
                       "\nz3 residual terms: " + std::to_string(residual.size()) + "\n" + element_to_text(w);
    return emit(doc, text, j);
  });
}

std::string cmd_tables(const Job& j) {
  if (j.table == "associator") {
    Json doc = Json::object();
    for (auto& [word, c] : phi(j.weight).terms()) doc[word.empty() ? "1" : word] = scalar_to_json(c);
    std::ostringstream t;
    for (auto& [word, c] : phi(j.weight).terms()) t << (word.empty() ? "1" : word) << "  " << c.to_string() << "\n";
    return emit(doc, t.str(), j);
  }
  if (j.table == "mzv") {
    Json doc = Json::object();
    for (auto& [idx, e] : active_table().entries())
      doc["zeta(" + idx.to_string() + ")"] = {{"coefficient", e.coeff.get_str()}, {"generator", e.generator}};
    return emit(doc, active_table().serialize(), j);
  }
  throw ParseError("unknown table '" + j.table + "' (associator or mzv)");
}

int cmd_selftest(const Job& j) {
  acceptance::Options opt;
  opt.workers = std::max(2, j.workers);
  opt.closure_rounds = j.rounds;
  bool ok = true;
  acceptance::run_all(opt, [&](const acceptance::Outcome& o) {
    std::cout << acceptance::format_line(o) << std::endl;
    ok = ok && o.pass;
  });
  return ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree-truncated LMO invariant of surgery presentations"};
  app.require_subcommand(1);
  Job job;

  auto add_common = [&](CLI::App* c, bool needs_file) {
    c->add_option("--format", job.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    c->add_option("--workers", job.workers, "Worker threads for circle elimination")->check(CLI::Range(1, 256));
    c->add_option("--rounds", job.rounds, "Closure budget in relation rounds")->check(CLI::Range(0, 1000));
    if (needs_file) c->add_option("FILE", job.input, "Surgery presentation (JSON or token text)")->required();
  };

  auto* z = app.add_subcommand("z", "Normalized Kontsevich integral of the framed link");
  z->add_option("--degree", job.degree, "Degree cap")->check(CLI::Range(0, 12));
  add_common(z, true);

  auto* inv = app.add_subcommand("invariant", "Omega_n of the surgered manifold");
  inv->add_option("--n", job.n, "Level n")->check(CLI::Range(1, 6));
  add_common(inv, true);

  auto* om = app.add_subcommand("omega", "omega(M) up to the degree cap");
  om->add_option("--degree", job.degree, "Degree cap")->check(CLI::Range(0, 6));
  add_common(om, true);

  auto* tab = app.add_subcommand("tables", "Dump the associator or the MZV table");
  tab->add_option("TABLE", job.table, "associator or mzv");
  tab->add_option("--weight", job.weight, "Associator weight")->check(CLI::Range(0, 8));
  add_common(tab, false);

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  add_common(self, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    std::string out;
    if (z->parsed()) out = cmd_z(job);
    else if (inv->parsed()) out = cmd_invariant(job);
    else if (om->parsed()) out = cmd_omega(job);
    else if (tab->parsed()) out = cmd_tables(job);
    else return cmd_selftest(job);
    std::cout << out;
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << "lmo: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ClosureBudgetExceeded& e) {
    std::cerr << "lmo: closure budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "lmo: " << e.what() << "\n";
    return kFailure;
  }
}
