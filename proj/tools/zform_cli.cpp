#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "checks.hpp"
#include "zform/affine.hpp"
#include "zform/contragredient.hpp"

using namespace zform;

namespace {

enum Exit { kPass = 0, kFail = 1, kParse = 2, kPrecondition = 3 };

struct Options {
  std::string lattice = "a1";
  std::string lie = "sl2";
  std::string sector;
  std::string output;
  std::string cutoff_text;
  std::string generate_text;
  long window = -1;
  long k = 1;
  long level = 1;
  int kmax = 0;
  bool quotient = false;
};

Rational cutoff_of(const Options& o, const Rational& fallback) {
  if (o.cutoff_text.empty()) return fallback;
  Rational c = parse_rational(o.cutoff_text);
  if (c < 0) throw PreconditionError("cutoff must be non-negative");
  return c;
}

std::optional<long> window_of(const Options& o) {
  if (o.window < 0) return std::nullopt;
  return o.window;
}

// Lattice with a scale vector plus the base change from the input coordinates.
struct Prepared {
  Lattice input;
  AlignedLattice aligned;
};

Prepared prepare(const Options& o, std::ostream& out) {
  Lattice L = lattice_by_name(o.lattice);
  if (!L.is_even()) throw PreconditionError("lattice is not even");
  AlignedLattice a = with_scale(L);
  bool moved = false;
  for (std::size_t i = 0; i < a.change.size(); ++i)
    for (std::size_t j = 0; j < a.change.size(); ++j) moved |= a.change[i][j] != (i == j ? 1 : 0);
  out << "aligned=" << (moved ? "true" : "false") << "\n";
  if (moved) {
    out << "gram_aligned=";
    for (std::size_t i = 0; i < a.lattice.rank(); ++i) out << (i ? ";" : "") << to_string(a.lattice.gram()[i]);
    out << "\nchange=";
    for (std::size_t i = 0; i < a.change.size(); ++i) out << (i ? ";" : "") << to_string(a.change[i]);
    out << "\n";
  }
  return Prepared{L, a};
}

LatticeVector sector_of(const Options& o, const AlignedLattice& a) {
  const std::size_t r = a.lattice.rank();
  LatticeVector g(r, Rational(0));
  if (o.sector.empty()) return g;
  std::stringstream ss(o.sector);
  std::string tok;
  std::vector<Rational> vals;
  while (std::getline(ss, tok, ',')) vals.push_back(parse_rational(tok));
  if (vals.size() != r) throw ParseError("sector needs " + std::to_string(r) + " coordinates");
  auto inv = inverse(to_rational(a.change));
  g = multiply(*inv, vals);
  if (!a.lattice.in_dual(g)) throw PreconditionError("sector " + o.sector + " is not in the dual lattice");
  return g;
}

void print_lattice(const Lattice& L, std::ostream& out) {
  out << "rank=" << L.rank() << "\n";
  out << "determinant=" << L.determinant().get_str() << "\n";
  out << "even=" << (L.is_even() ? "true" : "false") << "\n";
  out << "positive_definite=" << (L.is_positive_definite() ? "true" : "false") << "\n";
  out << "self_dual=" << (L.is_self_dual() ? "true" : "false") << "\n";
  for (std::size_t i = 0; i < L.rank(); ++i) {
    RatVector col(L.rank());
    for (std::size_t j = 0; j < L.rank(); ++j) col[j] = L.dual_basis()[j][i];
    out << "dual_" << i + 1 << "=" << to_string(col) << "\n";
  }
}

int cmd_lattice_check(const Options& o, std::ostream& out) {
  Lattice L = lattice_by_name(o.lattice);
  print_lattice(L, out);
  if (L.scale()) out << "scale=" << to_string(*L.scale()) << "\n";
  out << "verdict=" << (L.is_even() ? "pass" : "fail") << "\n";
  return L.is_even() ? kPass : kFail;
}

int cmd_cocycle(const Options& o, std::ostream& out) {
  Prepared p = prepare(o, out);
  Cocycle c = build_cocycle(p.aligned.lattice);
  out << render_cocycle(c);
  const bool ok = verify_parity(c, p.aligned.lattice);
  out << "verify_parity=" << (ok ? "true" : "false") << "\n";
  return ok ? kPass : kFail;
}

int cmd_vl_closure(const Options& o, std::ostream& out) {
  Prepared p = prepare(o, out);
  LatticeVOA V(p.aligned.lattice);
  const LatticeVector beta = sector_of(o, p.aligned);
  const Rational cutoff = cutoff_of(o, 4);
  Window w = make_window(V.lattice(), cutoff, window_of(o));
  Rational gen_cutoff = o.generate_text.empty() ? cutoff : parse_rational(o.generate_text);
  if (gen_cutoff < cutoff) throw PreconditionError("generate-cutoff must be at least the cutoff");
  out << render_cocycle(V.cocycle());
  out << "generate_cutoff=" << gen_cutoff << "\n";
  ClosureStats stats;
  GradedZSpan gen = generated_span(V, beta, make_window(V.lattice(), gen_cutoff, window_of(o)), std::nullopt, &stats);
  GradedZSpan yb = ybasis_span(V, beta, w);
  auto verdict = certify_integral_form(V.lattice(), gen, yb, w.bidegrees(V.lattice(), beta));
  out << render_verdict(verdict);
  out << "slices=" << verdict.slices.size() << "\n";
  out << "vectors_pushed=" << stats.pushed << "\n";
  out << "verdict=" << (verdict.ok() ? "pass" : "fail") << "\n";
  return verdict.ok() ? kPass : kFail;
}

int cmd_basis_table(const Options& o, std::ostream& out) {
  Prepared p = prepare(o, out);
  LatticeVOA V(p.aligned.lattice);
  const LatticeVector beta = sector_of(o, p.aligned);
  Window w = make_window(V.lattice(), cutoff_of(o, 2), window_of(o));
  for (const auto& d : w.bidegrees(V.lattice(), beta)) {
    auto elems = V.zbasis_elements(d);
    out << "slice gamma=" << to_string(d.gamma) << " weight=" << d.weight.get_str() << " dim=" << elems.size()
        << "\n";
    for (std::size_t i = 0; i < elems.size(); ++i) out << "  y" << i + 1 << "=" << render(elems[i]) << "\n";
  }
  return kPass;
}

int cmd_omega_test(const Options& o, std::ostream& out) {
  Prepared p = prepare(o, out);
  LatticeVOA V(p.aligned.lattice);
  auto m = omega_membership(V);
  const ConformalData conf = conformal_vector(V.lattice());
  out << "self_dual=" << (V.lattice().is_self_dual() ? "true" : "false") << "\n";
  out << "omega=" << render(conf.omega) << "\n";
  out << "central_charge=" << conf.central_charge.get_str() << "\n";
  out << "dual_criterion=" << (m.dual_criterion ? "true" : "false") << "\n";
  out << "omega_member=" << (m.hnf_member ? "true" : "false") << "\n";
  out << "coordinates=" << m.coordinates << "\n";
  auto k = minimal_k(conf.central_charge);
  out << "k_min=" << (k ? k->get_str() : "none") << "\n";
  out << "verdict=" << (m.agree() ? "pass" : "fail") << "\n";
  return m.agree() ? kPass : kFail;
}

int cmd_omega_extend(const Options& o, std::ostream& out) {
  Prepared p = prepare(o, out);
  LatticeVOA V(p.aligned.lattice);
  const Lattice& L = V.lattice();
  Window w = make_window(L, cutoff_of(o, 4), window_of(o));
  const LatticeVector zero(L.rank(), Rational(0));
  GradedZSpan span = generated_span(V, zero, w);
  const ConformalData conf = conformal_vector(L);
  auto rep = extend_by_k_omega(L, span, Integer(o.k), conf, w);
  for (const auto& [d, slice] : rep.span)
    if (w.admits(L, d))
      out << "slice gamma=" << to_string(d.gamma) << " weight=" << d.weight.get_str() << " dim=" << slice.dim()
          << " rank=" << slice.rank() << " denominator=" << slice.denominator().get_str() << "\n";
  out << "k=" << o.k << "\n";
  out << "added=" << rep.added << "\n";
  out << "contains_k_omega=" << (rep.contains_k_omega ? "true" : "false") << "\n";
  out << "ranks_full=" << (rep.ranks_full ? "true" : "false") << "\n";
  out << "stable_under_kL=" << (rep.stable_under_k_virasoro ? "true" : "false") << "\n";
  for (const auto& f : rep.failures) out << "failure=" << f << "\n";
  const bool ok = rep.contains_k_omega && rep.ranks_full && rep.stable_under_k_virasoro;
  out << "verdict=" << (ok ? "pass" : "fail") << "\n";
  return ok ? kPass : kFail;
}

int cmd_affine_build(const Options& o, std::ostream& out) {
  LieData g = lie_by_name(o.lie);
  auto val = validate(g);
  out << "lie=" << g.name << "\n";
  out << "dim=" << g.dim << "\n";
  out << "jacobi=" << (val.jacobi ? "true" : "false") << "\n";
  out << "form_invariant=" << (val.form_invariant ? "true" : "false") << "\n";
  if (!val.ok()) {
    for (const auto& f : val.failures) out << "failure=" << f << "\n";
    throw PreconditionError("Lie data failed validation");
  }
  const int cutoff = static_cast<int>(to_long(to_integer(cutoff_of(o, 3))));
  AffineModule M(g, Integer(o.level));
  AffineSpan G = M.garland_span(cutoff);
  bool closed = true;
  for (const auto& [w, slice] : G) {
    out << "garland weight=" << w << " dim=" << slice.dim() << " rank=" << slice.rank() << "\n";
    for (const auto& b : slice.basis()) {
      const PBWElement v = M.from_coords(b, w);
      for (std::size_t a : g.roots())
        for (int m = -cutoff; m <= cutoff; ++m)
          for (int k = 1; k <= cutoff; ++k) {
            const int t = w - m * k;
            if (t < 0 || t > cutoff) continue;
            PBWElement x = M.divided_power(a, m, k, v);
            if (!x.empty() && !G.at(t).contains(M.coords(x, t))) closed = false;
          }
    }
  }
  out << "garland_closed=" << (closed ? "true" : "false") << "\n";
  bool ok = closed;
  if (o.quotient) {
    auto q = M.irreducible_quotient(cutoff);
    AffineSpan GQ = quotient_span(M, G, q), PQ = quotient_span(M, M.pbw_span(cutoff), q);
    const int kmax = o.kmax > 0 ? o.kmax : static_cast<int>(std::max<long>(1, o.level));
    AffineSpan VQ = quotient_span(M, M.vertex_span(cutoff, kmax), q);
    for (const auto& s : q) {
      const bool gp = GQ.at(s.weight) == PQ.at(s.weight);
      const bool gv = GQ.at(s.weight) == VQ.at(s.weight);
      out << "quotient weight=" << s.weight << " verma_dim=" << s.verma_dim << " dim=" << s.dim
          << " garland_rank=" << GQ.at(s.weight).rank() << " garland_equals_pbw=" << (gp ? "true" : "false")
          << " garland_equals_vertex=" << (gv ? "true" : "false") << "\n";
      ok &= GQ.at(s.weight).rank() == s.dim;
    }
    out << "vertex_kmax=" << kmax << "\n";
    if (g.name == "sl2" && o.level >= 0 && cutoff >= o.level + 1) {
      PBWElement v = M.highest();
      for (long i = 0; i <= o.level; ++i) v = M.act(g.index_of("e"), -1, v);
      const bool rad = is_zero(M.quotient_image(q[static_cast<std::size_t>(o.level + 1)], v));
      out << "singular_vector_in_radical=" << (rad ? "true" : "false") << "\n";
      ok &= rad;
    }
  }
  out << "omega=" << render(g, M.omega_affine()) << "\n";
  out << "verdict=" << (ok ? "pass" : "fail") << "\n";
  return ok ? kPass : kFail;
}

int cmd_contra_check(const Options& o, std::ostream& out) {
  Prepared p = prepare(o, out);
  LatticeVOA V(p.aligned.lattice);
  const Lattice& L = V.lattice();
  Window w = make_window(L, cutoff_of(o, 4), window_of(o));
  const LatticeVector zero(L.rank(), Rational(0));
  GradedZSpan span = generated_span(V, zero, w);
  InvariantForm F(V);
  const FockElement one = FockElement::vacuum(L.rank());
  out << "vacuum_pairing=" << F.pairing(one, one).get_str() << "\n";
  auto self = certify_self_pairing_integral(F, span);
  out << "pairs=" << self.pairs << "\n";
  out << "pairing_integral=" << (self.pass ? "true" : "false") << "\n";
  if (self.witness)
    out << "witness bidegree=" << render_bidegree(self.witness->degree) << " u=" << to_string(self.witness->u)
        << " v=" << to_string(self.witness->v) << " value=" << self.witness->value.get_str() << "\n";
  const Rational inv_cut = std::min(cutoff_of(o, 4), Rational(3));
  Window wi = make_window(L, inv_cut, window_of(o) ? window_of(o) : std::optional<long>(2));
  std::vector<FockElement> vs;
  for (const auto& d : wi.bidegrees(L, zero))
    for (const auto& m : monomial_basis(L, d)) vs.push_back(FockElement::basis(d.gamma, m));
  bool inv = true;
  for (const auto& a : V.generators()) {
    auto r = check_invariance(V, F, FockElement::basis(a), vs, vs);
    out << "invariance generator=" << to_string(a) << " checks=" << r.checks << " pass=" << (r.pass ? "true" : "false")
        << "\n";
    if (!r.pass) out << "witness=" << r.witness << "\n";
    inv &= r.pass;
  }
  bool l1 = true;
  for (const auto& [d, slice] : span)
    for (const auto& b : slice.basis())
      for (int n = 1; n <= 3; ++n)
        if (!contains_element(span, L, l1_divided_action(L, from_coords(L, d, b), n))) l1 = false;
  out << "l1_divided_stable=" << (l1 ? "true" : "false") << "\n";
  const bool ok = self.pass && inv && l1 && F.pairing(one, one) == 1;
  out << "verdict=" << (ok ? "pass" : "fail") << "\n";
  return ok ? kPass : kFail;
}

int cmd_acceptance(const Options&, std::ostream& out) {
  bool all = true;
  checks::run_all([&](const checks::Result& r) {
    out << checks::format(r) << std::endl;
    all &= r.pass;
  });
  out << "verdict=" << (all ? "pass" : "fail") << "\n";
  return all ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral forms of lattice and affine vertex algebras"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--output,-o", o.output, "write the report to this file");

  auto lattice_opt = [&](CLI::App* s) { s->add_option("--lattice", o.lattice, "a1, a2, ii11, e8 or a lattice file"); };
  auto cutoff_opt = [&](CLI::App* s) { s->add_option("--cutoff", o.cutoff_text, "weight cutoff"); };
  auto window_opt = [&](CLI::App* s) {
    s->add_option("--window", o.window, "bound on |gamma| coordinates (required for indefinite lattices)");
  };

  std::map<CLI::App*, int (*)(const Options&, std::ostream&)> handlers;
  auto add = [&](const char* name, const char* help, int (*h)(const Options&, std::ostream&)) {
    CLI::App* s = app.add_subcommand(name, help);
    handlers[s] = h;
    return s;
  };

  lattice_opt(add("lattice-check", "lattice invariants", cmd_lattice_check));
  lattice_opt(add("cocycle", "central extension data", cmd_cocycle));
  {
    auto* s = add("vl-closure", "certify the integral form of V_L", cmd_vl_closure);
    lattice_opt(s);
    cutoff_opt(s);
    window_opt(s);
    s->add_option("--sector", o.sector, "coset representative, comma separated");
    s->add_option("--generate-cutoff", o.generate_text, "weight cutoff for intermediate states (default: --cutoff)");
  }
  {
    auto* s = add("basis-table", "list the y-monomial basis", cmd_basis_table);
    lattice_opt(s);
    cutoff_opt(s);
    window_opt(s);
    s->add_option("--sector", o.sector, "coset representative, comma separated");
  }
  lattice_opt(add("omega-test", "conformal vector membership", cmd_omega_test));
  {
    auto* s = add("omega-extend", "extend the integral form by k omega", cmd_omega_extend);
    lattice_opt(s);
    cutoff_opt(s);
    window_opt(s);
    s->add_option("--k", o.k, "multiplier k");
  }
  {
    auto* s = add("affine-build", "divided-power forms of affine vertex algebras", cmd_affine_build);
    s->add_option("--lie", o.lie, "sl2, sl3 or a Lie data file");
    s->add_option("--level", o.level, "level");
    cutoff_opt(s);
    s->add_flag("--quotient", o.quotient, "compute the irreducible quotient");
    s->add_option("--kmax", o.kmax, "largest k for the vertex-operator span (default: level)");
  }
  {
    auto* s = add("contra-check", "contragredient integrality", cmd_contra_check);
    lattice_opt(s);
    cutoff_opt(s);
    window_opt(s);
  }
  add("acceptance", "run every acceptance criterion", cmd_acceptance);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) {
      std::cerr << "error: cannot write " << o.output << "\n";
      return kParse;
    }
  }
  std::ostream& out = o.output.empty() ? std::cout : file;
  try {
    for (auto* s : app.get_subcommands()) return handlers.at(s)(o, out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const PreconditionError& e) {
    out << "precondition=" << e.what() << "\n";
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  }
  return kParse;
}
