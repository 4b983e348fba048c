// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--stretch]
// The stretch criterion is skipped unless --stretch is given.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "zgunits/cycunits.hpp"
#include "zgunits/hoechsmann.hpp"
#include "zgunits/merge.hpp"
#include "zgunits/quotring.hpp"
#include "zgunits/relations.hpp"

using namespace zgunits;
using namespace zgunits::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

int failures = 0;

void report(int number, const std::string& title, Verdict& v) {
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
  const std::string d = v.detail.str();
  if (!d.empty()) std::cout << " (" << d << ")";
  std::cout << std::endl;
  if (!v.pass) ++failures;
}

// Runs body, turning an exception into a failure.
void guarded(Verdict& v, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
}

GroupRingElement multiply(const GroupRingElement& a, const GroupRingElement& b) { return a * b; }

bool plus_minus_group_element(const GroupRingElement& u) {
  int nonzero = 0;
  for (const auto& c : u.coeffs()) {
    if (c == 0) continue;
    if (abs(c) != 1) return false;
    ++nonzero;
  }
  return nonzero == 1;
}

// Criterion 7a: lattice operations against brute force.
std::size_t lattice_oracle() {
  std::size_t bad = 0;
  std::mt19937_64 rng(20240517);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    IntMatrix m = random_matrix(rng, rows, cols, -5, 5);
    IntMatrix m2 = random_matrix(rng, rows, cols, -5, 5);
    auto s = snf(m);
    if (!(s.u * m * s.v == s.d)) ++bad;
    Lattice k = integer_kernel(m);
    if (k.rank() != rows - rational_rank(m)) ++bad;
    for_each_in_box(rows, 6, [&](const std::vector<long>& v) {
      auto w = vec(v);
      if (is_zero(row_times(w, m)) != k.contains(w)) ++bad;
    });
    Lattice l = Lattice::from_generators(m), l2 = Lattice::from_generators(m2);
    Lattice pc = pure_closure(l), both = intersect(l, l2);
    for_each_in_box(cols, 3, [&](const std::vector<long>& v) {
      auto w = vec(v);
      IntMatrix aug = l.basis();
      aug.append_row(w);
      if (pc.contains(w) != (rational_rank(aug) == l.rank())) ++bad;
      if (both.contains(w) != (l.contains(w) && l2.contains(w))) ++bad;
    });
  }
  return bad;
}

// Criterion 7b: enumeration and local decomposition on 50 random finite rings.
std::size_t ring_oracle() {
  std::size_t bad = 0;
  std::mt19937_64 rng(99);
  const std::vector<long> conductors{1, 3, 4, 5, 7, 8, 9, 12, 15, 16};
  std::uniform_int_distribution<std::size_t> pick(0, conductors.size() - 1);
  std::uniform_int_distribution<long> coeff(-3, 3), modulus(2, 12);
  int done = 0;
  while (done < 50) {
    const long n = conductors[pick(rng)];
    const std::size_t phi = cyc_field(n).phi;
    IntMatrix rows = IntMatrix::diagonal(std::vector<Int>(phi, modulus(rng)));
    for (int t = 0; t < 2; ++t) {
      std::vector<Int> c(phi);
      for (auto& x : c) x = coeff(rng);
      const CycElt a = CycElt::from_int_coeffs(n, c);
      for (std::size_t k = 0; k < phi; ++k) rows.append_row((a * CycElt::zeta(n, static_cast<long>(k))).numerators());
    }
    FiniteRing r = FiniteRing::quotient(OrderLattice::cyclotomic_integers(n), Lattice::from_generators(rows));
    if (r.size() > 10000 || r.size() < 2) continue;
    ++done;
    UnitGroupOptions ea, lo;
    ea.strategy = UnitStrategy::Enumerate;
    lo.strategy = UnitStrategy::Local;
    FiniteUnitGroup a = unit_group(r, ea), b = unit_group(r, lo);
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < r.size(); ++i) count += r.is_unit(r.element(i));
    if (a.orders() != b.orders() || a.order() != Int(static_cast<unsigned long>(count))) ++bad;
    for (const auto& g : a.generators())
      if (!(b.evaluate(b.discrete_log(g)) == g)) ++bad;
    for (const auto& g : b.generators())
      if (!(a.evaluate(a.discrete_log(g)) == g)) ++bad;
  }
  return bad;
}

// Criterion 7c: relation lattices against exhaustive search over |alpha| <= 6.
std::size_t relation_oracle() {
  std::size_t bad = 0;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> small(-3, 3);
  const long box = 6;
  for (long n : {5L, 8L, 12L}) {
    const CycElt w = torsion_generator(n);
    const CycElt f = full_unit_group(n).free_gens.at(0);
    const long m = torsion_order(n);
    for (int trial = 0; trial < 6; ++trial) {
      const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
      std::vector<CycElt> units;
      for (std::size_t i = 0; i < k; ++i) units.push_back(w.pow(((small(rng) % m) + m) % m) * f.pow(small(rng)));
      const Lattice rel = relation_lattice_cyc(units);
      std::vector<std::vector<CycElt>> pw(k);
      for (std::size_t i = 0; i < k; ++i)
        for (long e = -box; e <= box; ++e) pw[i].push_back(units[i].pow(e));
      for_each_in_box(k, box, [&](const std::vector<long>& a) {
        CycElt p = CycElt::one(n);
        for (std::size_t i = 0; i < k; ++i) p = p * pw[i][static_cast<std::size_t>(a[i] + box)];
        if (p.is_one() != rel.contains(vec(a))) ++bad;
      });
    }
  }
  return bad;
}

}  // namespace

int main(int argc, char** argv) {
  bool stretch = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--stretch") == 0) stretch = true;

  const auto groups = abelian_groups_up_to(24);
  std::vector<ZGUnitGroup> results;

  {
    Verdict v;
    const auto start = Clock::now();
    std::size_t checked = 0;
    guarded(v, [&] {
      for (const auto& g : groups) {
        results.push_back(unit_group_zg(g));
        const long rank = static_cast<long>(results.back().rank());
        if (rank != ayoub_rank(g))
          v.fail(g.name() + " has rank " + std::to_string(rank) + ", formula " + std::to_string(ayoub_rank(g)));
        ++checked;
      }
    });
    const double t = seconds_since(start);
    if (t > 15 * 60) v.fail("took " + std::to_string(t) + " s");
    if (v.pass) v.detail << checked << " groups, " << t << " s";
    report(1, "rank equals the rank formula for all abelian groups of order at most 24", v);
  }

  {
    Verdict v;
    guarded(v, [&] {
      for (const char* spec : {"C1", "C2", "C3", "C4", "C6", "C2xC2"}) {
        const AbelianGroup g = AbelianGroup::parse(spec);
        const ZGUnitGroup z = unit_group_zg(g);
        if (z.rank() != 0) v.fail(std::string(spec) + " has positive rank");
        if (z.presentation.torsion_order() != 2 * g.order()) v.fail(std::string(spec) + " torsion is not +-G");
        for (const auto& u : z.generators)
          if (!plus_minus_group_element(u)) v.fail(std::string(spec) + " generator " + u.to_string() + " is not +-g");
      }
    });
    report(2, "(ZG)^* = +-G for C1, C2, C3, C4, C6, C2xC2", v);
  }

  {
    Verdict v;
    guarded(v, [&] {
      const UnitGroupDesc d = full_unit_group(5);
      if (d.rank() != 1) {
        v.fail("rank " + std::to_string(d.rank()));
        return;
      }
      PrecisionScope scope(kDefaultPrecision);
      const Real golden = (1 + sqrt(Real(5))) / 2;
      const Real diff = abs(regulator(d) - log(golden));
      if (diff >= Real("1e-20")) v.fail("regulator differs by " + diff.str(5));
      const CycElt base = CycElt::from_power_sum(5, {0, 0, 1, 1});
      bool found = false;
      for (long k = 0; k < 5; ++k)
        for (int s : {1, -1})
          for (const CycElt& b : {base, unit_inverse(base)})
            found = found || d.free_gens[0] == b * CycElt::zeta(5, k) * Int(s);
      if (!found) v.fail("generator " + d.free_gens[0].to_string() + " is not +-zeta^k (zeta^2+zeta^3)^(+-1)");
      if (v.pass) v.detail << "regulator error " << diff.str(3);
    });
    report(3, "Z[zeta_5]^* has rank 1 with regulator log of the golden ratio", v);
  }

  {
    Verdict v;
    std::size_t gens = 0, rels = 0;
    guarded(v, [&] {
      for (const auto& z : results) {
        const auto& g = z.merged.group;
        std::vector<GroupRingElement> inv;
        for (const auto& u : z.generators) {
          inv.push_back(inverse_in_zg(u));
          if (!(u * inv.back()).is_one()) v.fail(g.name() + ": inverse does not verify");
          ++gens;
        }
        const Lattice rel = relation_lattice_toral(z.generators, z.merged.maps);
        for (std::size_t i = 0; i < rel.rank(); ++i) {
          auto p = power_product(z.generators, inv, rel.basis().row(i), GroupRingElement::one(g), multiply);
          if (!p.is_one()) v.fail(g.name() + ": relation does not verify");
          ++rels;
        }
        std::vector<Int> diag;
        for (const auto& o : z.orders) diag.push_back(o);
        if (!(rel == Lattice::from_generators(IntMatrix::diagonal(diag))))
          v.fail(g.name() + ": relations differ from the presentation");
      }
    });
    if (v.pass) v.detail << gens << " generators, " << rels << " relations";
    report(4, "every generator has an exact inverse in ZG and every relation verifies exactly", v);
  }

  {
    Verdict v;
    const auto start = Clock::now();
    std::size_t checked = 0;
    guarded(v, [&] {
      for (const auto& z : results) {
        const auto& g = z.merged.group;
        if (g.order() <= 4 || z.rank() == 0) continue;
        const auto r = hoechsmann_index(z);
        if (!r.index || *r.index != 1)
          v.fail("Hind(" + g.name() + ") = " + (r.index ? r.index->get_str() : std::string("infinite")));
        ++checked;
      }
    });
    const double t = seconds_since(start);
    if (t > 30 * 60) v.fail("took " + std::to_string(t) + " s");
    if (v.pass) v.detail << checked << " groups, " << t << " s";
    report(5, "Hind(G) = 1 for 4 < |G| <= 24 with positive rank", v);
  }

  if (stretch) {
    Verdict v;
    guarded(v, [&] {
      for (const char* spec : {"C40", "C2xC20"}) {
        const auto start = Clock::now();
        const auto r = hoechsmann_index(AbelianGroup::parse(spec));
        const double t = seconds_since(start);
        if (!r.index || *r.index != 2)
          v.fail(std::string("Hind(") + spec + ") = " + (r.index ? r.index->get_str() : std::string("infinite")));
        if (t > 4 * 3600) v.fail(std::string(spec) + " exceeded the time budget");
        if (v.pass) v.detail << (std::strcmp(spec, "C40") ? ", " : "") << spec << " " << t << " s";
      }
    });
    report(6, "Hind(C40) = 2 and Hind(C2xC20) = 2", v);
  } else {
    std::cout << "SKIP criterion 6: Hind(C40) and Hind(C2xC20) (run with --stretch)" << std::endl;
  }

  {
    Verdict v;
    guarded(v, [&] {
      if (auto bad = lattice_oracle()) v.fail("lattice oracle: " + std::to_string(bad) + " mismatches");
      if (auto bad = ring_oracle()) v.fail("finite ring oracle: " + std::to_string(bad) + " mismatches");
      if (auto bad = relation_oracle()) v.fail("relation oracle: " + std::to_string(bad) + " mismatches");
    });
    if (v.pass) v.detail << "100 lattices, 50 finite rings, 18 relation boxes";
    report(7, "oracle suites agree with brute force", v);
  }

  {
    Verdict v;
    guarded(v, [&] {
      for (long n = 1; n <= 400; ++n)
        if (conductor_supported(n) != (euler_phi(normalize_conductor(n)) < 66))
          v.fail("support of conductor " + std::to_string(n));
      for (const char* spec : {"C67", "C256", "C2xC134"}) {
        try {
          unit_group_zg(AbelianGroup::parse(spec));
          v.fail(std::string(spec) + " was not rejected");
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::UnsupportedConductor) v.fail(std::string(spec) + ": " + e.what());
        }
      }
    });
    if (v.pass) v.detail << "published timings are not reproduced; conductors with phi >= 66 are rejected";
    report(8, "unsupported conductors are guarded", v);
  }

  return failures == 0 ? 0 : 1;
}
