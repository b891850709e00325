#include <doctest.h>

#include "ksv/error.hpp"
#include "ksv/generators.hpp"
#include "ksv/poscor.hpp"
#include "ksv/random.hpp"
#include "oracles.hpp"

using namespace ksv;

namespace {

SizeCaps small_caps() {
  SizeCaps c;
  c.max_block = 2;
  c.max_module_dim = 3;
  return c;
}

Diagram small_diagram(std::uint64_t seed) {
  Rng rng(seed);
  const AlgebraShape a = random_shape(rng, small_caps());
  return random_diagram(a, rng, small_caps());
}

PosCorObject small_object(std::uint64_t seed) {
  Rng rng(seed);
  const AlgebraShape a = random_shape(rng, small_caps()), b = random_shape(rng, small_caps());
  return make_object(random_cp(a, random_module(b, rng, 3), rng.next()));
}

}  // namespace

TEST_SUITE("poscor") {

TEST_CASE("identity morphisms") {
  const PosCorObject x = small_object(1);
  const PosCorMorphism id = poscor_identity(x);
  CHECK(check_poscor_morphism(id, x, x).pass);
  const Inclusion inc = inclusion_unitary(x.module());
  CHECK(realized_norm(id.eta.matrix - inc.iota.matrix, id.domain_tensor.result, x.module()) < 1e-10);
  CHECK(morphism_distance(poscor_compose(id, id), id) < 1e-8);
  CHECK(unitarity_residual(id.eta) < 1e-8);
}

TEST_CASE("category laws on random diagrams") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const Diagram d = small_diagram(s);
    CHECK(d.objects.size() == 3);
    CHECK(d.arrows.size() == 6);
    const LawReport r = check_category_laws(d);
    CHECK(r.pass);
    CHECK(r.left_identity < 1e-8);
    CHECK(r.right_identity < 1e-8);
    CHECK(r.associativity < 1e-8);
  }
}

TEST_CASE("identity-only diagrams have zero residuals") {
  Diagram d;
  d.objects.push_back(small_object(2));
  d.arrows.push_back({0, 0, poscor_identity(d.objects[0])});
  const LawReport r = check_category_laws(d);
  CHECK(r.pass);
  CHECK(r.left_identity < 1e-12);
  CHECK(r.associativity < 1e-12);
}

TEST_CASE("a corrupted arrow is located") {
  int tried = 0;
  for (std::uint64_t seed = 7; tried < 3 && seed < 40; ++seed) {
    Diagram d = small_diagram(seed);
    auto& arrow = d.arrows[1];
    Rng rng(seed);
    const HilbertModule& f = d.objects[arrow.cod].module();
    const CMatrix t = commutant_average(f, rng.ginibre(f.dim(), f.dim()));
    const CMatrix pre = eta_pre(arrow.m) + 0.1 * t * eta_pre(arrow.m);
    arrow.m = make_morphism(d.objects[arrow.dom], d.objects[arrow.cod], arrow.m.rho, pre, arrow.m.alpha);
    // t may commute with the codomain map, then nothing was corrupted
    if (check_poscor_morphism(arrow.m, d.objects[arrow.dom], d.objects[arrow.cod]).pass) continue;
    ++tried;
    const LawReport r = check_category_laws(d);
    CHECK_FALSE(r.pass);
    CHECK(r.worst_arrow == 1);
  }
  CHECK(tried == 3);
}

TEST_CASE("composition checks endpoints") {
  const PosCorObject x = small_object(3), y = small_object(4);
  try {
    poscor_compose(poscor_identity(x), poscor_identity(y));
    FAIL("expected ObjectMismatch");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ObjectMismatch);
  }
}

TEST_CASE("unitary morphisms compose to unitaries") {
  const PosCorObject x = small_object(5);
  const CMatrix w1 = random_module_unitary(x.module(), 1);
  const Automorphism a1 = random_automorphism(x.phi.algebra, 1);
  const PosCorObject y = make_object(conjugate(x.phi, w1, a1));
  const CMatrix w2 = random_module_unitary(y.module(), 2);
  const Automorphism a2 = random_automorphism(x.phi.algebra, 2);
  const PosCorObject z = make_object(conjugate(y.phi, w2, a2));
  const PosCorMorphism idx = poscor_identity(x), idy = poscor_identity(y);
  const PosCorMorphism m1 = make_morphism(x, y, idx.rho, w1 * eta_pre(idx), a1);
  const PosCorMorphism m2 = make_morphism(y, z, idy.rho, w2 * eta_pre(idy), a2);
  CHECK(check_poscor_morphism(m1, x, y).pass);
  const PosCorMorphism m21 = poscor_compose(m2, m1);
  CHECK(check_poscor_morphism(m21, x, z).pass);
  CHECK(unitarity_residual(m21.eta) < 1e-8);
}

TEST_CASE("pseudometric") {
  const Diagram d = small_diagram(9);
  const auto& m = d.arrows[0].m;
  const auto& m2 = d.arrows[1].m;
  Rng rng(9);
  const AlgebraElement b = AlgebraElement::random(m.rho.domain(), 1);
  const CVector x = rng.gaussian_vector(m.domain_tensor.pre_dim());
  const AlgebraElement a = AlgebraElement::random(m.alpha.shape(), 2);
  CHECK(poscor_pseudometric(m, m, b, x, a) == 0.0);
  CHECK(poscor_pseudometric(m, m2, b, x, a) >= 0.0);
  CHECK(poscor_pseudometric(m, m2, b, x, a) == doctest::Approx(poscor_pseudometric(m2, m, b, x, a)));
}

TEST_CASE("commuting unitary") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    Rng rng(s + 30);
    const PosCorObject x = small_object(s + 30);
    const KsgnsTriple t = ksgns(x.phi);
    const CPMap pi = random_correspondence(x.coefficients(), random_shape(rng, small_caps()), rng.next(), 4);
    const CommutingUnitary cu = commuting_unitary(t, pi);
    CHECK(cu.left.module.dim() == cu.right.result.dim());
    CHECK(oracle::svd_rank(cu.left.module.gram()) == oracle::svd_rank(cu.right.result.gram()));
    CHECK(unitarity_residual(cu.v) < 1e-8);
  }
  // F = C over itself, π = inc: V is the composite of inclusion unitaries
  const PosCorObject x = small_object(40);
  const KsgnsTriple t = ksgns(x.phi);
  const CommutingUnitary cu = commuting_unitary(t, left_regular(StarMap::identity(x.coefficients())));
  CHECK(unitarity_residual(cu.v) < 1e-8);
  CHECK(cu.left.module.dim() == t.module.dim());
}

TEST_CASE("KSGNS functor on PosCor(A)") {
  const Diagram d = small_diagram(11);
  KsgnsFunctor f;
  for (const auto& o : d.objects) {
    const PosCorMorphism id = poscor_identity(o);
    const PosCorMorphism fid = f.morphism(id, o, o);
    const PosCorObject& fo = f.object(o);
    CHECK(morphism_distance(fid, poscor_identity(fo)) < 1e-8);

    const PosCorMorphism idem = f.idempotency(o);
    CHECK(unitarity_residual(idem.eta) < 1e-8);
    CHECK(check_poscor_morphism(idem, fo, f.object(fo)).pass);
  }
  for (const auto& a : d.arrows)
    for (const auto& b : d.arrows) {
      if (a.cod != b.dom || a.dom == a.cod || b.dom == b.cod) continue;
      const auto& x = d.objects[a.dom];
      const auto& y = d.objects[a.cod];
      const auto& z = d.objects[b.cod];
      const PosCorMorphism lhs = f.morphism(poscor_compose(b.m, a.m), x, z);
      const PosCorMorphism rhs = poscor_compose(f.morphism(b.m, y, z), f.morphism(a.m, x, y));
      CHECK(morphism_distance(lhs, rhs) < 1e-8);
      CHECK(check_poscor_morphism(f.morphism(a.m, x, y), f.object(x), f.object(y)).pass);

      // naturality of KSGNS → KSGNS²
      const PosCorMorphism fa = f.morphism(a.m, x, y);
      const PosCorMorphism ffa = f.morphism(fa, f.object(x), f.object(y));
      const PosCorMorphism n1 = poscor_compose(f.idempotency(y), fa);
      const PosCorMorphism n2 = poscor_compose(ffa, f.idempotency(x));
      CHECK(morphism_distance(n1, n2) < 1e-8);
    }
}

}
