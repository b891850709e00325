#include "ksv/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ksv {

using io::json;

namespace {

const char* kKsgns = "KSGNS Construction";
const char* kLifting = "Lifting result";
const char* kEndofunctor = "KSGNS Endofunctor";
const char* kIdempotency = "Idempotency of KSGNS";
const char* kTensorObjects = "Tensor functor on objects";
const char* kLift2 = "Lift 2";
const char* kTensorFunctor = "Tensor Functor";
const char* kInclusion = "Inclusion tensor functor";
const char* kComposition = "Composition and tensor";
const char* kCategory = "PosCor(A) category";
const char* kFunctor2 = "KSGNS Functor 2";
const char* kEspc = "ESPC as Functors";
const char* kDilation = "Dilation Result";
const char* kContinuity = "KSGNS Endofunctor continuity";

const char* main_anchor(const std::string& suite) {
  if (suite == "ksgns") return kKsgns;
  if (suite == "lift") return kEndofunctor;
  if (suite == "idempotency") return kIdempotency;
  if (suite == "tensor") return kTensorFunctor;
  if (suite == "category") return kCategory;
  if (suite == "equivariant") return kEspc;
  if (suite == "continuity") return kContinuity;
  return kDilation;
}

double phi_norm(const CPMap& phi) {
  return realized_norm(phi(AlgebraElement::unit(phi.algebra)), phi.module, phi.module);
}

double choi_violation(const CpReport& r) {
  double worst = 0;
  for (double e : r.min_choi_eigenvalue) worst = std::max(worst, -e);
  return worst;
}

double morphism_residual(const MorphismReport& r) {
  return std::max({r.intertwining, r.adjoint_side, r.commutation, r.linearity});
}

double poscor_residual(const PosCorMorphismReport& r) {
  return std::max({r.rho.multiplicativity, r.rho.star_preservation, r.rho.unitality, morphism_residual(r.intertwiner)});
}

CMatrix module_inverse(const CMatrix& m) { return m.fullPivLu().inverse(); }

struct Recorder {
  std::string suite;
  std::uint64_t seed;
  std::vector<CheckRecord> out;

  void add(const std::string& check, const char* anchor, double residual, double threshold) {
    out.push_back(make_record(suite, seed, check, anchor, residual, threshold));
  }
  void morphism(const std::string& check, const char* anchor, const MorphismReport& r) {
    add(check, anchor, morphism_residual(r), r.threshold);
  }
};

std::vector<AlgebraElement> random_elements(const AlgebraShape& a, Rng& rng, int n) {
  std::vector<AlgebraElement> out;
  for (int i = 0; i < n; ++i) out.push_back(AlgebraElement::random(a, rng.next()));
  return out;
}

std::vector<CVector> random_vectors(int dim, Rng& rng, int n) {
  std::vector<CVector> out;
  for (int i = 0; i < n; ++i) out.push_back(rng.gaussian_vector(dim));
  return out;
}

double family_size(const std::vector<AlgebraElement>& as, const std::vector<CVector>& xs, const HilbertModule& e) {
  double s = 0;
  for (size_t i = 0; i < xs.size(); ++i) s += as[i].norm() * e.norm(xs[i]);
  return s;
}

json cp_list(const std::vector<CPMap>& phis, io::ModuleWriter& w) {
  json out = json::array();
  for (const auto& p : phis) out.push_back(io::to_json(p, w));
  return out;
}

std::vector<CPMap> cp_list_from(const json& j, const io::ModuleReader& r) {
  std::vector<CPMap> out;
  for (const auto& p : j) out.push_back(io::cp_from_json(p, r));
  return out;
}

std::vector<Intertwiner> arrows_from(const json& j, const io::ModuleReader& r) {
  std::vector<Intertwiner> out;
  for (const auto& a : j) out.push_back(io::intertwiner_from_json(a, r));
  return out;
}

void require_chain(const std::vector<CPMap>& phis, const std::vector<Intertwiner>& arrows) {
  bool ok = phis.size() == arrows.size() + 1;
  for (size_t k = 0; ok && k < arrows.size(); ++k)
    ok = arrows[k].eta.source.same(phis[k].module) && arrows[k].eta.target.same(phis[k + 1].module) &&
         phis[k].algebra == phis[k + 1].algebra && arrows[k].alpha.shape() == phis[k].algebra;
  if (!ok) throw Error(ErrorKind::ValidationError, "morphism chain does not match its maps");
}

// ---------------------------------------------------------------- generation

CPMap certified_cp(const AlgebraShape& a, const HilbertModule& e, Rng& rng, const Tolerance& tol) {
  CPMap phi = random_cp(a, e, rng.next());
  if (!check_cp(phi, tol).is_cp) throw Error(ErrorKind::NotCP, "generated map failed the Choi test");
  return phi;
}

MorphismChain certified_chain(const CPMap& start, int length, int extra, Rng& rng, const Tolerance& tol) {
  MorphismChain chain = random_chain(start, length, extra, rng, tol);
  for (size_t k = 0; k < chain.arrows.size(); ++k)
    if (!check_morphism(chain.arrows[k], chain.phis[k], chain.phis[k + 1], tol).pass ||
        module_operator_norm(chain.arrows[k].eta) < 0.1)
      throw Error(ErrorKind::ValidationError, "generated intertwiner failed its own check");
  return chain;
}

json chain_payload(const MorphismChain& c, io::ModuleWriter& w) {
  json arrows = json::array();
  for (const auto& a : c.arrows) arrows.push_back(io::to_json(a, w));
  return {{"phis", cp_list(c.phis, w)}, {"arrows", arrows}};
}

int square_cap(const AlgebraShape& a, const SizeCaps& caps, int budget) {
  return std::clamp(budget / (a.dim() * a.dim()), 1, caps.max_module_dim);
}

EquivariantCorrespondence certified_equivariant(Rng& rng, const SizeCaps& caps, const Tolerance& tol) {
  const auto groups = test_groups(caps.max_group_order);
  const FiniteGroup& g = groups[rng.next() % groups.size()];
  const AlgebraShape a = random_shape(rng, caps), b = random_shape(rng, caps);
  EquivariantCorrespondence c = random_equivariant(a, b, g, rng.next(), caps.max_module_dim);
  if (!check_equivariant(c, tol).pass || !check_cp(c.phi, tol).is_cp)
    throw Error(ErrorKind::ValidationError, "generated equivariant correspondence failed its own check");
  return c;
}

json build_payload(const std::string& suite, Rng& rng, const SizeCaps& caps, const Tolerance& tol,
                   io::ModuleWriter& w) {
  if (suite == "ksgns") {
    const AlgebraShape a = random_shape(rng, caps), b = random_shape(rng, caps);
    return {{"phi", io::to_json(certified_cp(a, random_module(b, rng, caps.max_module_dim), rng, tol), w)}};
  }
  if (suite == "lift" || suite == "idempotency" || suite == "continuity") {
    const AlgebraShape a = random_shape(rng, caps), b = random_shape(rng, caps);
    const int length = suite == "lift" ? 2 : 1;
    const int cap = suite == "idempotency" ? square_cap(a, caps, 400) : std::max(1, caps.max_module_dim - 2);
    const CPMap start = certified_cp(a, random_module(b, rng, cap), rng, tol);
    const MorphismChain chain = certified_chain(start, length, 2, rng, tol);
    json p = chain_payload(chain, w);
    if (suite == "continuity") {
      const Intertwiner& m = chain.arrows[0];
      p["direction"] = io::to_json(random_intertwiner(chain.phis[0], chain.phis[1], m.alpha, rng, tol));
      json eps = json::array();
      for (int k = 1; k <= 20; ++k) eps.push_back(std::pow(10.0, -0.5 * k));
      p["eps"] = eps;
      json samples = json::array();
      for (int i = 0; i < 3; ++i)
        samples.push_back({{"x", io::to_json(CVector(rng.gaussian_vector(start.module.dim())))},
                           {"a", io::to_json(AlgebraElement::random(a, rng.next()))}});
      p["samples"] = samples;
    }
    return p;
  }
  if (suite == "tensor") {
    const AlgebraShape a = random_shape(rng, caps), b = random_shape(rng, caps), c = random_shape(rng, caps);
    const CPMap start = certified_cp(a, random_module(b, rng, std::min(4, caps.max_module_dim)), rng, tol);
    const MorphismChain chain = certified_chain(start, 1, 2, rng, tol);
    const CPMap pi = random_correspondence(b, c, rng.next(), caps.max_module_dim);
    if (!check_correspondence(pi, tol).pass)
      throw Error(ErrorKind::ValidationError, "generated correspondence failed its own check");
    const StarMap rho1 = random_star_map(b, rng, caps);
    const StarMap rho2 = random_star_map(rho1.codomain(), rng, caps);
    json p = chain_payload(chain, w);
    p["pi"] = io::to_json(pi, w);
    p["rho1"] = io::to_json(rho1);
    p["rho2"] = io::to_json(rho2);
    return p;
  }
  if (suite == "category") {
    const AlgebraShape a = random_shape(rng, caps);
    const Diagram d = random_diagram(a, rng, caps, tol);
    for (const auto& arrow : d.arrows)
      if (!check_poscor_morphism(arrow.m, d.objects[arrow.dom], d.objects[arrow.cod], tol).pass)
        throw Error(ErrorKind::ValidationError, "generated arrow failed its own check");
    return {{"diagram", io::to_json(d, w)}};
  }
  if (suite == "equivariant" || suite == "dilation")
    return {{"c", io::to_json(certified_equivariant(rng, caps, tol), w)}};
  if (suite == "uniqueness") {
    const EquivariantCorrespondence c = certified_equivariant(rng, caps, tol);
    const KsgnsTriple t = ksgns(c.phi, tol);
    const CMatrix z = random_module_unitary(t.module, rng.next());
    return {{"c", io::to_json(c, w)}, {"planted_pre", io::to_json(CMatrix(t.s * z * t.q))}};
  }
  throw Error(ErrorKind::InvalidConfig, "unknown suite " + suite);
}

// ---------------------------------------------------------------- checks

void run_ksgns(const json& p, const io::ModuleReader& mr, const Tolerance& tol, Recorder& rec) {
  const CPMap phi = io::cp_from_json(p.at("phi"), mr);
  const double s = phi_norm(phi);
  const CpReport cp = check_cp(phi, tol);
  rec.add("complete_positivity", kKsgns, choi_violation(cp), tol.scaled(s));
  rec.add("hermiticity", kKsgns, cp.hermiticity, tol.scaled(s));
  const KsgnsTriple t = ksgns(phi, tol);
  const TripleReport r = check_triple(t, tol);
  rec.add("reconstruction", kKsgns, r.reconstruction, tol.scaled(s));
  rec.add("adjoint_formula", kKsgns, r.adjoint_formula, tol.scaled(s));
  rec.add("multiplicativity", kKsgns, r.multiplicativity, tol.scaled(1));
  rec.add("unitality", kKsgns, r.unitality, tol.scaled(1));
  rec.add("spanning_rank", kKsgns, std::abs(r.spanning_rank - r.dim), 0);
  rec.add("v_linearity", kKsgns, linearity_residual(t.v), tol.scaled(std::sqrt(s)));
  const double vn = module_operator_norm(t.v);
  rec.add("v_norm_squared", kKsgns, std::abs(vn * vn - s), tol.scaled(s));
}

void run_lift(const json& p, const io::ModuleReader& mr, std::uint64_t seed, const Tolerance& tol, Recorder& rec) {
  const auto phis = cp_list_from(p.at("phis"), mr);
  const auto arrows = arrows_from(p.at("arrows"), mr);
  require_chain(phis, arrows);
  std::vector<KsgnsTriple> t;
  for (const auto& phi : phis) t.push_back(ksgns(phi, tol));
  std::vector<Intertwiner> lifts;
  for (size_t k = 0; k < arrows.size(); ++k) {
    const std::string tag = "_" + std::to_string(k);
    rec.morphism("input_morphism" + tag, kLifting, check_morphism(arrows[k], phis[k], phis[k + 1], tol));
    const double en = module_operator_norm(arrows[k].eta);
    const double s = std::max(phi_norm(phis[k]), phi_norm(phis[k + 1]));
    lifts.push_back(ksgns_lift(arrows[k], t[k], t[k + 1], tol));
    const LiftReport lr = check_lift(arrows[k], lifts[k], t[k], t[k + 1]);
    rec.add("lift_embedding" + tag, kLifting, lr.embedding, tol.scaled(en * (1 + s)));
    rec.add("lift_adjoint_formula" + tag, kLifting, lr.adjoint_formula, tol.scaled(en * (1 + s)));
    rec.add("lift_contraction" + tag, kEndofunctor, lr.norm_excess, tol.ctol);
    rec.morphism("lifted_morphism" + tag, kEndofunctor, check_morphism(lifts[k], t[k].rep, t[k + 1].rep, tol));
  }
  const Intertwiner id = ksgns_lift(identity_intertwiner(phis[0].module, phis[0].algebra), t[0], t[0], tol);
  const HilbertModule& f0 = t[0].module;
  rec.add("lift_identity", kEndofunctor,
          realized_norm(id.eta.matrix - CMatrix::Identity(f0.dim(), f0.dim()), f0, f0), tol.scaled(1));
  if (arrows.size() >= 2) {
    const Intertwiner direct = ksgns_lift(compose(arrows[1], arrows[0]), t[0], t[2], tol);
    const Intertwiner chained = compose(lifts[1], lifts[0]);
    const double scale = module_operator_norm(arrows[0].eta) * module_operator_norm(arrows[1].eta);
    rec.add("lift_composition", kEndofunctor,
            realized_norm(direct.eta.matrix - chained.eta.matrix, f0, t[2].module), tol.scaled(scale));
  }

  Rng rng(mix_seed(seed ^ 0x11f7));
  const Intertwiner& m = arrows[0];
  const double en = module_operator_norm(m.eta);
  const double s = std::max(phi_norm(phis[0]), phi_norm(phis[1]));
  for (int n = 1; n <= 4; ++n) {
    const auto as = random_elements(phis[0].algebra, rng, n);
    const auto xs = random_vectors(phis[0].module.dim(), rng, n);
    const auto ys = random_vectors(phis[1].module.dim(), rng, n);
    const double size = std::max(family_size(as, xs, phis[0].module), family_size(as, ys, phis[1].module));
    rec.add("bounded_family_n" + std::to_string(n), "Bounded 1 Lemma",
            bounded_family_excess(m, phis[0], phis[1], as, xs, ys), tol.scaled(en * en * s * size * size));
    const PropertiesReport pr = properties_lemma(m, phis[0], phis[1], as[0]);
    const double an = as[0].norm();
    rec.add("properties_adjoint_side_n" + std::to_string(n), "Properties Lemma", pr.adjoint_side,
            tol.scaled(en * s * an));
    rec.add("properties_commutation_n" + std::to_string(n), "Properties Lemma", pr.commutation,
            tol.scaled(en * en * s * an));
    rec.add("properties_lower_n" + std::to_string(n), "Properties Lemma", pr.lower_positivity,
            tol.scaled(en * en * s * an * an));
    rec.add("properties_upper_n" + std::to_string(n), "Properties Lemma", pr.upper_positivity,
            tol.scaled(en * en * s * an * an));
  }
}

void run_idempotency(const json& p, const io::ModuleReader& mr, const Tolerance& tol, Recorder& rec) {
  const auto phis = cp_list_from(p.at("phis"), mr);
  const auto arrows = arrows_from(p.at("arrows"), mr);
  require_chain(phis, arrows);
  rec.morphism("input_morphism", kIdempotency, check_morphism(arrows[0], phis[0], phis[1], tol));
  std::vector<KsgnsTriple> t;
  std::vector<Idempotency> id;
  for (size_t k = 0; k < 2; ++k) {
    const std::string tag = "_" + std::to_string(k);
    t.push_back(ksgns(phis[k], tol));
    id.push_back(idempotency_unitary(t[k], tol));
    rec.add("unitarity" + tag, kIdempotency, unitarity_residual(id[k].v), tol.scaled(1));
    rec.add("dimension" + tag, kIdempotency, std::abs(id[k].inner.module.dim() - t[k].module.dim()), 0);
    rec.add("intertwining" + tag, kIdempotency, idempotency_intertwining(t[k], id[k]), tol.scaled(1));
  }
  const Intertwiner once = ksgns_lift(arrows[0], t[0], t[1], tol);
  const Intertwiner twice = ksgns_lift(once, id[0].inner, id[1].inner, tol);
  const CMatrix square = twice.eta.matrix * id[0].v.matrix - id[1].v.matrix * once.eta.matrix;
  rec.add("naturality", kIdempotency, realized_norm(square, t[0].module, id[1].inner.module),
          tol.scaled(module_operator_norm(arrows[0].eta)));

  KsgnsFunctor functor(tol);
  const PosCorObject obj = make_object(phis[0]);
  functor.adopt(obj, t[0]);
  const PosCorMorphism m = functor.idempotency(obj);
  const PosCorObject& once_obj = functor.object(obj);
  const PosCorObject& twice_obj = functor.object(once_obj);
  rec.add("poscor_invariants", kIdempotency, poscor_residual(check_poscor_morphism(m, once_obj, twice_obj, tol)),
          tol.scaled(1));
  rec.add("poscor_unitarity", kIdempotency, unitarity_residual(m.eta), tol.scaled(1));
}

void run_tensor(const json& p, const io::ModuleReader& mr, std::uint64_t seed, const Tolerance& tol, Recorder& rec) {
  const auto phis = cp_list_from(p.at("phis"), mr);
  const auto arrows = arrows_from(p.at("arrows"), mr);
  require_chain(phis, arrows);
  const CPMap pi = io::cp_from_json(p.at("pi"), mr);
  const StarMap rho1 = io::star_map_from_json(p.at("rho1"));
  const StarMap rho2 = io::star_map_from_json(p.at("rho2"));
  if (!(pi.algebra == phis[0].module.algebra()) || !(rho1.domain() == pi.algebra) ||
      !(rho2.domain() == rho1.codomain()))
    throw Error(ErrorKind::ValidationError, "tensor instance algebras do not fit together");
  const Intertwiner& m = arrows[0];
  const double en = module_operator_norm(m.eta);

  const CorrespondenceReport pc = check_correspondence(pi, tol);
  rec.add("pi_correspondence", kTensorObjects, std::max(pc.multiplicativity, pc.unitality), tol.scaled(1));
  rec.morphism("input_morphism", kLift2, check_morphism(m, phis[0], phis[1], tol));

  const TensorModule t1 = interior_tensor(phis[0].module, pi, tol);
  const TensorModule t2 = interior_tensor(phis[1].module, pi, tol);
  rec.add("balance", kTensorObjects, balance_residual(t1), tol.scaled(1));
  const CPMap tilde1 = tensor_cp(phis[0], t1, tol), tilde2 = tensor_cp(phis[1], t2, tol);
  rec.add("tensor_cp", kTensorObjects, choi_violation(check_cp(tilde1, tol)), tol.scaled(phi_norm(phis[0])));
  const Intertwiner hat = tensor_lift(m, t1, t2, tol);
  rec.morphism("lifted_morphism", kLift2, check_morphism(hat, tilde1, tilde2, tol));
  rec.add("lift_contraction", kLift2, module_operator_norm(hat.eta) - en, tol.ctol);
  const Intertwiner hid = tensor_lift(identity_intertwiner(phis[0].module, phis[0].algebra), t1, t1, tol);
  rec.add("tensor_identity", kTensorFunctor,
          realized_norm(hid.eta.matrix - CMatrix::Identity(t1.result.dim(), t1.result.dim()), t1.result, t1.result),
          tol.scaled(1));

  Rng rng(mix_seed(seed ^ 0x7e50));
  for (int n = 1; n <= 4; ++n) {
    const auto xs = random_vectors(phis[0].module.dim(), rng, n);
    const auto ys = random_vectors(phis[1].module.dim(), rng, n);
    const auto fs = random_vectors(pi.module.dim(), rng, n);
    double size = 0;
    for (int i = 0; i < n; ++i)
      size += std::max(phis[0].module.norm(xs[i]), phis[1].module.norm(ys[i])) * pi.module.norm(fs[i]);
    rec.add("bound_family_n" + std::to_string(n), "Bound 2", tensor_family_excess(m.eta, pi, xs, ys, fs),
            tol.scaled(en * en * size * size));
  }

  const KsgnsTriple k1 = ksgns(phis[0], tol), k2 = ksgns(phis[1], tol);
  const CommutingUnitary c1 = commuting_unitary(k1, pi, tol), c2 = commuting_unitary(k2, pi, tol);
  const double s = phi_norm(phis[0]);
  rec.add("commuting_unitarity", kTensorFunctor, std::max(unitarity_residual(c1.v), unitarity_residual(c2.v)),
          tol.scaled(1));
  rec.add("commuting_linearity", kTensorFunctor, linearity_residual(c1.v), tol.scaled(1));
  double rep = 0;
  for (int b = 0; b < phis[0].algebra.dim(); ++b) {
    const ModuleMap pib = tensor_extend_operator(k1.rep.image_map(AlgebraElement::matrix_unit(phis[0].algebra, b)),
                                                 c1.right, tol);
    const CMatrix diff = c1.v.matrix * c1.left.rep.images[b] - pib.matrix * c1.v.matrix;
    rep = std::max(rep, realized_norm(diff, c1.left.module, c1.right.result));
  }
  rec.add("commuting_representation", kTensorFunctor, rep, tol.scaled(1));
  const ModuleMap vext = tensor_extend(k1.v, c1.inner, c1.right, tol);
  rec.add("commuting_embedding", kTensorFunctor,
          realized_norm(c1.v.matrix * c1.left.v.matrix - vext.matrix, c1.inner.result, c1.right.result),
          tol.scaled(std::sqrt(s)));
  const Intertwiner inner_hat = tensor_lift(m, c1.inner, c2.inner, tol);
  const Intertwiner left_lift = ksgns_lift(inner_hat, c1.left, c2.left, tol);
  const Intertwiner lift = ksgns_lift(m, k1, k2, tol);
  const ModuleMap right_ext = tensor_extend(lift.eta, c1.right, c2.right, tol);
  rec.add("commuting_naturality", kTensorFunctor,
          realized_norm(c2.v.matrix * left_lift.eta.matrix - right_ext.matrix * c1.v.matrix, c1.left.module,
                        c2.right.result),
          tol.scaled(en));

  const HilbertModule& e = phis[0].module;
  const ModuleMap t{e, e, random_adjointable(e, rng.next())};
  const double tn = module_operator_norm(t);
  const Inclusion inc = inclusion_unitary(e, tol);
  rec.add("inclusion_unitarity", kInclusion, unitarity_residual(inc.iota), tol.scaled(1));
  rec.add("inclusion_linearity", kInclusion, linearity_residual(inc.iota), tol.scaled(1));
  const ModuleMap ti = tensor_extend_operator(t, inc.tensor, tol);
  rec.add("inclusion_naturality", kInclusion,
          realized_norm(inc.iota.matrix * ti.matrix - t.matrix * inc.iota.matrix, inc.tensor.result, e),
          tol.scaled(tn));

  const CompositionTensor ct = composition_unitary(e, rho1, rho2, tol);
  rec.add("composition_unitarity", kComposition, unitarity_residual(ct.u), tol.scaled(1));
  rec.add("composition_linearity", kComposition, linearity_residual(ct.u), tol.scaled(1));
  const ModuleMap t_first = tensor_extend_operator(t, ct.first, tol);
  const ModuleMap t_second = tensor_extend_operator(t_first, ct.second, tol);
  const ModuleMap t_direct = tensor_extend_operator(t, ct.direct, tol);
  rec.add("composition_naturality", kComposition,
          realized_norm(ct.u.matrix * t_second.matrix - t_direct.matrix * ct.u.matrix, ct.second.result,
                        ct.direct.result),
          tol.scaled(tn));
}

void run_category(const json& p, const io::ModuleReader& mr, const Tolerance& tol, Recorder& rec) {
  const Diagram d = io::diagram_from_json(p.at("diagram"), mr, tol);
  double scale = 0;
  for (const auto& a : d.arrows) scale = std::max(scale, module_operator_norm(a.m.eta));
  const double s3 = std::max(1.0, scale * scale * scale);
  const LawReport law = check_category_laws(d, tol);
  rec.add("left_identity", kCategory, law.left_identity, tol.scaled(scale));
  rec.add("right_identity", kCategory, law.right_identity, tol.scaled(scale));
  rec.add("associativity", kCategory, law.associativity, tol.scaled(s3));
  rec.add("arrow_invariants", kCategory, law.invariants, tol.scaled(s3));

  KsgnsFunctor functor(tol);
  double invariants = 0, identity = 0, composition = 0;
  std::vector<PosCorMorphism> lifted;
  for (const auto& a : d.arrows) {
    lifted.push_back(functor.morphism(a.m, d.objects[a.dom], d.objects[a.cod]));
    invariants = std::max(invariants, poscor_residual(check_poscor_morphism(
                                          lifted.back(), functor.object(d.objects[a.dom]),
                                          functor.object(d.objects[a.cod]), tol)));
  }
  for (const auto& o : d.objects) {
    const PosCorMorphism fid = functor.morphism(poscor_identity(o, tol), o, o);
    identity = std::max(identity, morphism_distance(fid, poscor_identity(functor.object(o), tol)));
  }
  for (size_t i = 0; i < d.arrows.size(); ++i)
    for (size_t j = 0; j < d.arrows.size(); ++j) {
      const auto& a = d.arrows[i];
      const auto& b = d.arrows[j];
      if (a.cod != b.dom) continue;
      const PosCorMorphism direct =
          functor.morphism(poscor_compose(b.m, a.m, tol), d.objects[a.dom], d.objects[b.cod]);
      const PosCorMorphism chained = poscor_compose(lifted[j], lifted[i], tol);
      composition = std::max(composition, morphism_distance(direct, chained));
    }
  rec.add("functor_invariants", kFunctor2, invariants, tol.scaled(std::max(1.0, scale)));
  rec.add("functor_identity", kFunctor2, identity, tol.scaled(1));
  rec.add("functor_composition", kFunctor2, composition, tol.scaled(std::max(1.0, scale * scale)));
}

void equivariance_records(const EquivariantReport& r, const char* anchor, const std::string& prefix, Recorder& rec) {
  rec.add(prefix + "homomorphism", anchor, r.homomorphism, r.threshold);
  rec.add(prefix + "twisted_linearity", anchor, r.twisted_linearity, r.threshold);
  rec.add(prefix + "pairing_twist", anchor, r.pairing_twist, r.threshold);
  rec.add(prefix + "covariance", anchor, r.covariance, r.threshold);
}

void run_equivariant(const json& p, const io::ModuleReader& mr, const Tolerance& tol, Recorder& rec) {
  const EquivariantCorrespondence c = io::equivariant_from_json(p.at("c"), mr);
  rec.add("action_alpha", kEspc, action_residual(c.a_sys), tol.scaled(1));
  rec.add("action_beta", kEspc, action_residual(c.b_sys), tol.scaled(1));
  rec.add("complete_positivity", kEspc, choi_violation(check_cp(c.phi, tol)), tol.scaled(phi_norm(c.phi)));
  equivariance_records(check_equivariant(c, tol), kEspc, "", rec);
  const FunctorFamily f = correspondence_to_functor(c, tol);
  const double s = phi_norm(c.phi);
  rec.add("functor_unitarity", kEspc, f.unitarity, tol.scaled(1));
  rec.add("functor_composition", kEspc, f.composition, tol.scaled(1));
  rec.add("functor_identity", kEspc, f.identity, tol.scaled(1));
  rec.add("functor_round_trip", kEspc, f.round_trip, tol.scaled(1));
  rec.add("functor_invariants", kEspc, f.invariants, tol.scaled(s));
}

void run_dilation(const json& p, const io::ModuleReader& mr, const Tolerance& tol, Recorder& rec) {
  const EquivariantCorrespondence c = io::equivariant_from_json(p.at("c"), mr);
  const double s = phi_norm(c.phi);
  const DilationQuadruple d = dilate(c, tol);
  const DilationReport r = check_dilation(c, d, tol);
  equivariance_records(r.equivariance, kDilation, "dilated_", rec);
  rec.add("embedding", kDilation, r.embedding, tol.scaled(std::sqrt(s)));
  rec.add("spanning_rank", kDilation, std::abs(r.spanning_rank - r.dim), 0);
  rec.add("reconstruction", kDilation, r.reconstruction, tol.scaled(s));
  rec.add("categorical_agreement", kDilation, categorical_dilation_residual(c, d, tol), tol.scaled(1));
}

void run_continuity(const json& p, const io::ModuleReader& mr, const Tolerance& tol, Recorder& rec) {
  const auto phis = cp_list_from(p.at("phis"), mr);
  const auto arrows = arrows_from(p.at("arrows"), mr);
  require_chain(phis, arrows);
  const Intertwiner& limit = arrows[0];
  const CMatrix dir = io::matrix_from_json(p.at("direction"));
  if (dir.rows() != limit.eta.matrix.rows() || dir.cols() != limit.eta.matrix.cols())
    throw Error(ErrorKind::ValidationError, "path direction has the wrong size");
  rec.morphism("input_morphism", kContinuity, check_morphism(limit, phis[0], phis[1], tol));
  std::vector<Intertwiner> path;
  for (const auto& e : p.at("eps"))
    path.push_back({{limit.eta.source, limit.eta.target, limit.eta.matrix + e.get<double>() * dir}, limit.alpha});
  std::vector<ProbeSample> samples;
  for (const auto& s : p.at("samples")) {
    ProbeSample ps{io::vector_from_json(s.at("x")), io::element_from_json(s.at("a"))};
    if (ps.x.size() != phis[0].module.dim() || ps.a.shape() != phis[0].algebra)
      throw Error(ErrorKind::ValidationError, "probe sample has the wrong size");
    samples.push_back(std::move(ps));
  }
  Intertwiner target = limit;
  if (p.contains("limit_override")) target.eta.matrix = io::matrix_from_json(p.at("limit_override"));
  const KsgnsTriple t1 = ksgns(phis[0], tol), t2 = ksgns(phis[1], tol);
  const ProbeReport r = continuity_probe(path, target, t1, t2, samples, tol);
  rec.add("input_convergence", kContinuity, r.input.back(), 10 * tol.ctol);
  rec.add("lifted_monotone", kContinuity, r.monotonicity, 1e-9);
  rec.add("lifted_final", kContinuity, r.lifted.back(), 10 * tol.ctol);
  double excess = 0;
  for (size_t k = 0; k < r.input.size(); ++k) excess = std::max(excess, r.lifted[k] - r.constant * r.input[k]);
  rec.add("lifted_bound", kContinuity, excess, tol.ctol);
}

void run_uniqueness(const json& p, const io::ModuleReader& mr, const Tolerance& tol, Recorder& rec) {
  const EquivariantCorrespondence c = io::equivariant_from_json(p.at("c"), mr);
  const KsgnsTriple t = ksgns(c.phi, tol);
  const CMatrix pre = io::matrix_from_json(p.at("planted_pre"));
  if (pre.rows() != t.pre_dim() || pre.cols() != t.pre_dim())
    throw Error(ErrorKind::ValidationError, "planted unitary has the wrong size");
  const CMatrix z = t.q * pre * t.s;
  const DilationQuadruple d = dilate(c, t, tol);
  const UniquenessReport u = uniqueness_unitary(d, conjugate_quadruple(d, z), tol);
  const HilbertModule& f = t.module;
  rec.add("planted_recovery", kDilation, realized_norm(u.w.matrix - module_inverse(z), f, f), 10 * tol.ctol);
  rec.add("w_unitarity", kDilation, u.unitarity, tol.scaled(1));
  rec.add("w_representation", kDilation, u.representation, tol.scaled(1));
  rec.add("w_embedding", kDilation, u.embedding, tol.scaled(std::sqrt(phi_norm(c.phi))));
  rec.add("w_symmetry", kDilation, u.symmetry, tol.scaled(1));
}

CMatrix shifted_identity(const CMatrix& m, double shift) {
  return m + shift * CMatrix::Identity(m.rows(), m.cols());
}

}  // namespace

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> s = {"ksgns",       "lift",     "idempotency", "tensor",    "category",
                                             "equivariant", "dilation", "continuity",  "uniqueness"};
  return s;
}

void validate(const SuiteConfig& config) {
  validate_caps(config.caps);
  if (config.jobs < 1) throw Error(ErrorKind::InvalidConfig, "jobs must be positive");
  if (!(config.tolerance.ctol > 0) || !(config.tolerance.rtol > 0))
    throw Error(ErrorKind::InvalidConfig, "tolerances must be positive");
  for (const auto& s : config.suites)
    if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
      throw Error(ErrorKind::InvalidConfig, "unknown suite " + s);
}

CheckRecord make_record(std::string suite, std::uint64_t seed, std::string check, std::string anchor, double residual,
                        double threshold) {
  CheckRecord r{std::move(suite), seed, std::move(check), std::move(anchor), residual, threshold, false, 0.0};
  r.pass = residual <= threshold;
  return r;
}

std::size_t Report::passed() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.pass; }));
}

double Report::max_residual() const {
  double m = 0;
  for (const auto& r : records)
    if (std::isfinite(r.residual)) m = std::max(m, r.residual);
  return m;
}

json generate_instance(const std::string& suite, std::uint64_t seed, const SizeCaps& caps, const Tolerance& tol) {
  validate_caps(caps);
  std::string last_error;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Rng rng(attempt == 0 ? seed : mix_seed(seed + attempt));
    io::ModuleWriter w;
    try {
      json payload = build_payload(suite, rng, caps, tol, w);
      return {{"suite", suite}, {"seed", seed}, {"faulted", false}, {"modules", w.table()}, {"payload", payload}};
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  throw Error(ErrorKind::ValidationError, "could not generate a valid " + suite + " instance: " + last_error);
}

json inject_fault(const json& instance, const Tolerance& tol) {
  return io::guarded([&] {
    json doc = instance;
    const std::string suite = doc.at("suite").get<std::string>();
    json& p = doc.at("payload");
    auto shift_first = [](json& cp) {
      cp["images"][0] = io::to_json(shifted_identity(io::matrix_from_json(cp["images"][0]), 0.1));
    };
    auto scale = [](json& m) { m = io::to_json(CMatrix(1.1 * io::matrix_from_json(m))); };
    if (suite == "ksgns") {
      const io::ModuleReader mr(doc.at("modules"), tol);
      const CPMap phi = io::cp_from_json(p.at("phi"), mr);
      const CMatrix r = realize(phi.images[0], phi.module, phi.module);
      const double low = herm_eig(0.5 * (r + r.adjoint()), tol).values(0);
      p["phi"]["images"][0] = io::to_json(shifted_identity(phi.images[0], -(low + 0.1)));
    } else if (suite == "lift" || suite == "idempotency") {
      shift_first(p["phis"][1]);
    } else if (suite == "tensor") {
      shift_first(p["pi"]);
    } else if (suite == "category") {
      shift_first(p["diagram"]["objects"][1]);
    } else if (suite == "equivariant" || suite == "dilation") {
      scale(p["c"]["u"].back());
    } else if (suite == "continuity") {
      json m = p["arrows"][0]["eta"]["matrix"];
      scale(m);
      p["limit_override"] = m;
    } else if (suite == "uniqueness") {
      scale(p["planted_pre"]);
    } else {
      throw Error(ErrorKind::ValidationError, "unknown suite " + suite);
    }
    doc["faulted"] = true;
    return doc;
  });
}

std::vector<CheckRecord> run_instance(const json& instance, const Tolerance& tol) {
  std::string suite = "unknown";
  std::uint64_t seed = 0;
  if (instance.is_object()) {
    suite = instance.value("suite", suite);
    if (instance.contains("seed") && instance["seed"].is_number_unsigned()) seed = instance["seed"].get<std::uint64_t>();
  }
  Recorder rec{suite, seed, {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    io::guarded([&] {
      if (std::find(all_suites().begin(), all_suites().end(), suite) == all_suites().end())
        throw Error(ErrorKind::ValidationError, "unknown suite " + suite);
      const io::ModuleReader mr(instance.at("modules"), tol);
      const json& p = instance.at("payload");
      if (suite == "ksgns") run_ksgns(p, mr, tol, rec);
      else if (suite == "lift") run_lift(p, mr, seed, tol, rec);
      else if (suite == "idempotency") run_idempotency(p, mr, tol, rec);
      else if (suite == "tensor") run_tensor(p, mr, seed, tol, rec);
      else if (suite == "category") run_category(p, mr, tol, rec);
      else if (suite == "equivariant") run_equivariant(p, mr, tol, rec);
      else if (suite == "dilation") run_dilation(p, mr, tol, rec);
      else if (suite == "continuity") run_continuity(p, mr, tol, rec);
      else run_uniqueness(p, mr, tol, rec);
    });
  } catch (const Error& e) {
    rec.add(std::string("error:") + std::string(to_string(e.kind())), main_anchor(suite),
            std::numeric_limits<double>::infinity(), 0);
  } catch (const std::exception& e) {
    rec.add("error:exception", main_anchor(suite), std::numeric_limits<double>::infinity(), 0);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : rec.out) r.wall_time = wall;
  return rec.out;
}

std::vector<std::uint64_t> instance_seeds(const SuiteConfig& config, const std::string& suite) {
  std::vector<std::uint64_t> out;
  for (int k = 0; k < config.caps.instances_per_suite; ++k) out.push_back(derive_seed(config.seed, suite, k));
  return out;
}

namespace {

struct Task {
  std::string suite;
  std::uint64_t seed;
  std::filesystem::path file;  // empty: generate in memory
};

json load_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + p.string());
  return io::guarded([&] { return json::parse(in); });
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + p.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + p.string());
}

Report execute(const std::vector<Task>& tasks, const SuiteConfig& config) {
  std::vector<std::vector<CheckRecord>> results(tasks.size());
  const int n = static_cast<int>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(config.jobs)
  for (int i = 0; i < n; ++i) {
    const Task& t = tasks[i];
    try {
      json inst;
      if (t.file.empty()) {
        inst = generate_instance(t.suite, t.seed, config.caps, config.tolerance);
        if (config.inject_faults) inst = inject_fault(inst, config.tolerance);
      } else {
        inst = load_json(t.file);
      }
      results[i] = run_instance(inst, config.tolerance);
    } catch (const Error& e) {
      results[i] = {make_record(t.suite, t.seed, std::string("error:") + std::string(to_string(e.kind())),
                                main_anchor(t.suite), std::numeric_limits<double>::infinity(), 0)};
    }
  }
  Report r;
  for (auto& v : results) r.records.insert(r.records.end(), v.begin(), v.end());
  return r;
}

}  // namespace

void generate(const SuiteConfig& config, const std::filesystem::path& out) {
  validate(config);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out.string());
  write_file(out / "config.json", config_to_json(config).dump(2) + "\n");
  for (const auto& suite : config.suites) {
    const auto dir = out / suite;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string());
    const auto seeds = instance_seeds(config, suite);
    std::vector<std::string> texts(seeds.size());
    const int n = static_cast<int>(seeds.size());
#pragma omp parallel for schedule(dynamic) num_threads(config.jobs)
    for (int k = 0; k < n; ++k) {
      json inst = generate_instance(suite, seeds[k], config.caps, config.tolerance);
      if (config.inject_faults) inst = inject_fault(inst, config.tolerance);
      texts[k] = inst.dump() + "\n";
    }
    for (int k = 0; k < n; ++k) write_file(dir / (std::to_string(k) + ".json"), texts[k]);
  }
}

Report run(const SuiteConfig& config) {
  validate(config);
  std::vector<Task> tasks;
  for (const auto& suite : config.suites)
    for (auto seed : instance_seeds(config, suite)) tasks.push_back({suite, seed, {}});
  return execute(tasks, config);
}

Report run_directory(const SuiteConfig& config, const std::filesystem::path& dir) {
  validate(config);
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::IoError, dir.string() + " is not a directory");
  std::vector<Task> tasks;
  for (const auto& suite : config.suites) {
    const auto sub = dir / suite;
    if (!std::filesystem::is_directory(sub)) continue;
    std::vector<std::pair<long, std::filesystem::path>> files;
    for (const auto& entry : std::filesystem::directory_iterator(sub)) {
      if (entry.path().extension() != ".json") continue;
      const std::string stem = entry.path().stem().string();
      char* end = nullptr;
      const long k = std::strtol(stem.c_str(), &end, 10);
      files.emplace_back(*end == '\0' ? k : -1, entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) tasks.push_back({suite, 0, f.second});
  }
  return execute(tasks, config);
}

json config_to_json(const SuiteConfig& c) {
  return {{"seed", c.seed},
          {"tolerance", {{"rtol", c.tolerance.rtol}, {"ctol", c.tolerance.ctol}}},
          {"caps",
           {{"max_block", c.caps.max_block},
            {"max_blocks", c.caps.max_blocks},
            {"max_module_dim", c.caps.max_module_dim},
            {"max_group_order", c.caps.max_group_order},
            {"instances_per_suite", c.caps.instances_per_suite}}},
          {"suites", c.suites},
          {"inject_faults", c.inject_faults}};
}

SuiteConfig config_from_json(const json& j) {
  return io::guarded([&] {
    SuiteConfig c;
    c.seed = j.value("seed", c.seed);
    if (j.contains("tolerance")) {
      c.tolerance.rtol = j["tolerance"].value("rtol", c.tolerance.rtol);
      c.tolerance.ctol = j["tolerance"].value("ctol", c.tolerance.ctol);
    }
    if (j.contains("caps")) {
      const json& k = j["caps"];
      c.caps.max_block = k.value("max_block", c.caps.max_block);
      c.caps.max_blocks = k.value("max_blocks", c.caps.max_blocks);
      c.caps.max_module_dim = k.value("max_module_dim", c.caps.max_module_dim);
      c.caps.max_group_order = k.value("max_group_order", c.caps.max_group_order);
      c.caps.instances_per_suite = k.value("instances_per_suite", c.caps.instances_per_suite);
    }
    if (j.contains("suites")) c.suites = j["suites"].get<std::vector<std::string>>();
    c.inject_faults = j.value("inject_faults", false);
    validate(c);
    return c;
  });
}

std::string report_emit(const Report& r, Format f) {
  if (f == Format::Json) {
    json records = json::array();
    for (const auto& c : r.records) {
      json residual = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
      json threshold = std::isfinite(c.threshold) ? json(c.threshold) : json(nullptr);
      records.push_back({{"suite", c.suite},
                         {"instance_seed", c.instance_seed},
                         {"check_name", c.check_name},
                         {"paper_anchor", c.paper_anchor},
                         {"residual", residual},
                         {"threshold", threshold},
                         {"pass", c.pass},
                         {"wall_time", c.wall_time}});
    }
    json doc = {{"records", records},
                {"summary",
                 {{"total", r.total()},
                  {"passed", r.passed()},
                  {"failed", r.total() - r.passed()},
                  {"max_residual", r.max_residual()}}}};
    return doc.dump(2) + "\n";
  }
  std::vector<const CheckRecord*> sorted;
  for (const auto& c : r.records) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const CheckRecord* a, const CheckRecord* b) {
    return std::tie(a->suite, a->instance_seed, a->check_name) < std::tie(b->suite, b->instance_seed, b->check_name);
  });
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-4s  %-12s  %-20s  %-32s  %-11s  %-11s  %s\n", "", "suite", "seed", "check",
                "residual", "threshold", "anchor");
  out << line;
  for (const auto* c : sorted) {
    std::snprintf(line, sizeof line, "%-4s  %-12s  %-20llu  %-32s  %-11.3e  %-11.3e  %s\n", c->pass ? "PASS" : "FAIL",
                  c->suite.c_str(), static_cast<unsigned long long>(c->instance_seed), c->check_name.c_str(),
                  c->residual, c->threshold, c->paper_anchor.c_str());
    out << line;
  }
  std::snprintf(line, sizeof line, "total %zu  passed %zu  failed %zu  max_residual %.3e\n", r.total(), r.passed(),
                r.total() - r.passed(), r.max_residual());
  out << line;
  return out.str();
}

Report report_parse(const std::string& json_text) {
  return io::guarded([&] {
    const json doc = json::parse(json_text);
    Report r;
    auto number = [](const json& v) {
      return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
    };
    for (const auto& c : doc.at("records")) {
      CheckRecord rec{c.at("suite").get<std::string>(),
                      c.at("instance_seed").get<std::uint64_t>(),
                      c.at("check_name").get<std::string>(),
                      c.at("paper_anchor").get<std::string>(),
                      number(c.at("residual")),
                      number(c.at("threshold")),
                      c.at("pass").get<bool>(),
                      c.at("wall_time").get<double>()};
      if (rec.pass != (rec.residual <= rec.threshold))
        throw Error(ErrorKind::ValidationError, "record pass flag disagrees with residual and threshold");
      r.records.push_back(std::move(rec));
    }
    const json& s = doc.at("summary");
    if (s.at("total").get<std::size_t>() != r.total() || s.at("passed").get<std::size_t>() != r.passed())
      throw Error(ErrorKind::ValidationError, "summary does not match the records");
    return r;
  });
}

}  // namespace ksv
