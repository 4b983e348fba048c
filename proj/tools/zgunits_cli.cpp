#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "zgunits/abgroup.hpp"
#include "zgunits/cycunits.hpp"
#include "zgunits/error.hpp"
#include "zgunits/groupring.hpp"
#include "zgunits/hoechsmann.hpp"
#include "zgunits/merge.hpp"
#include "zgunits/relations.hpp"

using json = nlohmann::ordered_json;
using namespace zgunits;

namespace {

struct Config {
  unsigned precision = kDefaultPrecision;
  unsigned max_doublings = 3;
  std::uint64_t max_enum = 1'000'000;
  std::string format = "text";
  std::uint64_t seed = 0;
  bool no_saturation = false;

  bool as_json() const { return format == "json"; }

  MergeOptions merge_options() const {
    MergeOptions o;
    o.ring_units.enumeration_bound = max_enum;
    o.ring_units.seed = seed;
    o.component_units.saturate = !no_saturation;
    o.component_units.saturation.precision = precision;
    o.component_units.saturation.seed = seed;
    return o;
  }
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedConductor:
    case ErrorKind::ParseError:
    case ErrorKind::BadParameters:
      return 2;
    case ErrorKind::EnumerationBoundExceeded:
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::PrecisionUnachievable:
      return 3;
    default:
      return 1;
  }
}

json int_array(const std::vector<Int>& v) {
  json a = json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p())
      a.push_back(x.get_si());
    else
      a.push_back(x.get_str());
  }
  return a;
}

std::string bracket(const std::vector<Int>& v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i].get_str();
  out << ']';
  return out.str();
}

json element_list(const AbelianGroup& g) {
  json a = json::array();
  for (long i = 0; i < g.order(); ++i) a.push_back(g.element(static_cast<std::size_t>(i)).exponents);
  return a;
}

int cmd_units(const std::string& spec, const Config& cfg) {
  const AbelianGroup g = AbelianGroup::parse(spec);
  const ZGUnitGroup z = unit_group_zg(g, cfg.merge_options());
  std::vector<std::size_t> tors, free;
  for (std::size_t i = 0; i < z.generators.size(); ++i) (z.orders[i] == 0 ? free : tors).push_back(i);
  if (cfg.as_json()) {
    json out;
    out["group"] = g.name();
    out["order"] = g.order();
    out["elements"] = element_list(g);
    out["rank"] = z.rank();
    out["ayoub_rank"] = ayoub_rank(g);
    json t;
    t["order"] = z.presentation.torsion_order().get_str();
    t["generators"] = json::array();
    for (auto i : tors)
      t["generators"].push_back({{"order", z.orders[i].get_str()}, {"coeffs", int_array(z.generators[i].int_coeffs())}});
    out["torsion"] = t;
    out["generators"] = json::array();
    for (auto i : free) out["generators"].push_back(int_array(z.generators[i].int_coeffs()));
    json steps = json::array();
    for (const auto& s : z.report.steps)
      steps.push_back({{"conductor", s.conductor},
                       {"ring_size", s.ring_size},
                       {"ring_units", s.ring_unit_order.get_str()},
                       {"seconds", s.seconds}});
    out["timings"] = {{"relations_s", z.report.component_seconds},
                      {"merge_s", z.report.merge_seconds},
                      {"lift_s", z.report.lift_seconds},
                      {"total_s", z.report.total_seconds},
                      {"steps", steps}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "group " << g.name() << " (order " << g.order() << ")\n";
    std::cout << "rank " << z.rank() << " (rank formula " << ayoub_rank(g) << ")\n";
    std::cout << "torsion order " << z.presentation.torsion_order().get_str() << '\n';
    for (auto i : tors)
      std::cout << "torsion generator of order " << z.orders[i].get_str() << ": "
                << bracket(z.generators[i].int_coeffs()) << '\n';
    for (auto i : free) std::cout << "free generator: " << bracket(z.generators[i].int_coeffs()) << '\n';
    std::cout << "time " << z.report.total_seconds << " s (component units " << z.report.component_seconds
              << " s)\n";
  }
  return 0;
}

int cmd_hind(const std::string& spec, const Config& cfg) {
  const AbelianGroup g = AbelianGroup::parse(spec);
  const ZGUnitGroup z = unit_group_zg(g, cfg.merge_options());
  HoechsmannOptions o;
  o.merge = cfg.merge_options();
  const HoechsmannResult r = hoechsmann_index(z, o);
  const std::string index = r.index ? r.index->get_str() : "infinite";
  if (cfg.as_json()) {
    json out;
    out["group"] = g.name();
    out["hind"] = r.index ? json(index) : json(nullptr);
    out["rank"] = r.rank;
    out["constructable_rank"] = r.constructable_rank;
    out["constructable_generators"] = r.num_generators;
    out["timings"] = {{"units_s", z.report.total_seconds}, {"index_s", r.seconds}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << index << '\n';
  }
  return 0;
}

int cmd_decompose(const std::string& spec, const Config& cfg) {
  const AbelianGroup g = AbelianGroup::parse(spec);
  const auto d = decomposition(g);
  if (cfg.as_json()) {
    json out;
    out["group"] = g.name();
    out["components"] = json::array();
    for (const auto& [n, t] : d) out["components"].push_back({{"conductor", n}, {"count", t}});
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << '[';
    for (std::size_t i = 0; i < d.size(); ++i)
      std::cout << (i ? "," : "") << '(' << d[i].first << ',' << d[i].second << ')';
    std::cout << "]\n";
  }
  return 0;
}

long parse_conductor(const std::string& text) {
  try {
    std::size_t used = 0;
    const long n = std::stol(text, &used);
    if (used == text.size() && n > 0) return n;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::ParseError, "bad conductor '" + text + "'");
}

int cmd_cycunits(const std::string& text, const Config& cfg) {
  const long n = parse_conductor(text);
  FullUnitOptions o;
  o.saturate = !cfg.no_saturation;
  o.saturation.precision = cfg.precision;
  o.saturation.seed = cfg.seed;
  const UnitGroupDesc d = full_unit_group(n, o);
  std::ostringstream reg;
  {
    PrecisionScope scope(30);
    reg << regulator(d, cfg.precision).str(25);
  }
  if (cfg.as_json()) {
    json out;
    out["conductor"] = d.conductor;
    out["torsion"] = {{"order", d.torsion_order}, {"generator", d.torsion_gen.to_string()}};
    out["rank"] = d.rank();
    out["generators"] = json::array();
    for (const auto& u : d.free_gens) out["generators"].push_back(u.to_string());
    out["complete"] = d.complete;
    out["regulator"] = reg.str();
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "conductor " << d.conductor << '\n';
    std::cout << "torsion order " << d.torsion_order << ": " << d.torsion_gen.to_string() << '\n';
    std::cout << "rank " << d.rank() << (d.complete ? "" : " (not saturated)") << '\n';
    for (const auto& u : d.free_gens) std::cout << "free generator: " << u.to_string() << '\n';
    std::cout << "regulator " << reg.str() << '\n';
  }
  return 0;
}

int cmd_relations(const std::string& text, const std::string& file, const Config& cfg) {
  const long n = parse_conductor(text);
  std::ifstream in(file);
  if (!in) fail(ErrorKind::ParseError, "cannot read '" + file + "'");
  std::vector<CycElt> units;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    if (line.find('@') == std::string::npos) line += "@" + std::to_string(n);
    CycElt u = CycElt::parse(line);
    if (u.conductor() != normalize_conductor(n))
      fail(ErrorKind::ParseError, "'" + line + "' does not lie in Q(zeta_" + std::to_string(n) + ")");
    units.push_back(u);
  }
  RelationOptions o;
  o.precision = cfg.precision;
  o.max_doublings = cfg.max_doublings;
  const Lattice l = relation_lattice_cyc(units, o);
  if (cfg.as_json()) {
    json out;
    out["conductor"] = n;
    out["units"] = units.size();
    out["basis"] = json::array();
    for (std::size_t i = 0; i < l.rank(); ++i) out["basis"].push_back(int_array(l.basis().row_vector(i)));
    std::cout << out.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < l.rank(); ++i) {
      const auto r = l.basis().row_vector(i);
      std::cout << '(';
      for (std::size_t j = 0; j < r.size(); ++j) std::cout << (j ? "," : "") << r[j].get_str();
      std::cout << ")\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit groups of integral group rings of finite abelian groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--precision", cfg.precision, "initial working precision in decimal digits")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-doublings", cfg.max_doublings, "precision doublings before giving up");
  app.add_option("--max-enum", cfg.max_enum, "largest finite ring enumerated element by element")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", cfg.seed, "seed for randomized steps");
  app.add_flag("--no-saturation", cfg.no_saturation, "skip saturation of cyclotomic units (diagnostic)");

  std::string spec, conductor, file;
  auto* units = app.add_subcommand("units", "generators of (ZG)^*");
  units->add_option("group", spec, "group such as C5, C2xC4 or [2,4]")->required();
  auto* hind = app.add_subcommand("hind", "index of the constructable units in (ZG)^*");
  hind->add_option("group", spec)->required();
  auto* decompose = app.add_subcommand("decompose", "Wedderburn components of QG");
  decompose->add_option("group", spec)->required();
  auto* cycunits = app.add_subcommand("cycunits", "generators of Z[zeta_n]^*");
  cycunits->add_option("n", conductor)->required();
  auto* relations = app.add_subcommand("relations", "relation lattice of units of Z[zeta_n] listed in a file");
  relations->add_option("n", conductor)->required();
  relations->add_option("file", file, "one element per line, [c0,c1,...] power sums")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*units) return cmd_units(spec, cfg);
    if (*hind) return cmd_hind(spec, cfg);
    if (*decompose) return cmd_decompose(spec, cfg);
    if (*cycunits) return cmd_cycunits(conductor, cfg);
    if (*relations) return cmd_relations(conductor, file, cfg);
  } catch (const Error& e) {
    if (cfg.as_json()) {
      json out;
      out["error"] = {{"kind", std::string(error_kind_name(e.kind()))}, {"message", e.what()}};
      std::cout << out.dump(2) << '\n';
    } else {
      std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << '\n';
    }
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
