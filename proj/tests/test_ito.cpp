#include "qsc/app/checks.hpp"
#include "qsc/ito/char_fn_generator.hpp"
#include "qsc/ito/io_relations.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace qsc;

namespace {

const FormalScalar a = FormalScalar::symbol(Symbol::alpha);
const FormalScalar k = FormalScalar::symbol(Symbol::k);
const FormalScalar l = FormalScalar::symbol(Symbol::l);
const FormalScalar I = FormalScalar::i();
const OpPoly x = OpPoly::x();
const OpPoly p = OpPoly::p();

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(QSC_SOURCE_DIR) + "/tests/golden/" + name);
  EXPECT_TRUE(in.good()) << "missing golden file " << name;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ItoDifferential general(int base) {
  return {WeylTerm(OpPoly::monomial(1, 0, base)), WeylTerm(OpPoly::monomial(0, 1, base + 1)),
          WeylTerm(OpPoly::monomial(1, 1, base + 2))};
}

}  // namespace

TEST(ItoProduct, Table) {
  EXPECT_EQ(ito_product(ItoDifferential::dA(), ItoDifferential::dAstar()), ItoDifferential::dt());
  EXPECT_TRUE(ito_product(ItoDifferential::dAstar(), ItoDifferential::dA()).is_zero());
  EXPECT_TRUE(ito_product(ItoDifferential::dt(), ItoDifferential::dt()).is_zero());
  EXPECT_TRUE(ito_product(ItoDifferential::dA(), ItoDifferential::dA()).is_zero());
  EXPECT_TRUE(ito_product(ItoDifferential::dAstar(), ItoDifferential::dt()).is_zero());
}

TEST(ItoProduct, GeneralIsCGdt) {
  const ItoDifferential dx = general(1);  // C = x, D = 2p, E = 3xp
  const ItoDifferential dy = general(4);  // F = 4x, G = 5p, H = 6xp
  const ItoDifferential prod = ito_product(dx, dy);
  EXPECT_EQ(prod, ItoDifferential::dt(WeylTerm(x * OpPoly::monomial(0, 1, 5))));
}

TEST(SubsetDifferential, TwoFactors) {
  const ItoDifferential dx = general(1);
  const ItoDifferential dy = general(4);
  const WeylTerm X(p);
  const WeylTerm Y(x * x);
  const SubsetExpansion e = subset_differential({{"X", X, dx, false}, {"Y", Y, dy, false}});
  ASSERT_EQ(e.terms.size(), 3u);
  const ItoDifferential expected{X * dy.cA + dx.cA * Y, X * dy.cAstar + dx.cAstar * Y,
                                 X * dy.cT + dx.cT * Y + dx.cA * dy.cAstar};
  EXPECT_EQ(e.total, expected);
}

TEST(SubsetDifferential, ThreeFactorsSevenTerms) {
  const SubsetExpansion e = subset_differential(
      {{"A", WeylTerm(1), ItoDifferential::dA(), false}, {"B", WeylTerm(1), ItoDifferential::dAstar(), false},
       {"C", WeylTerm(1), ItoDifferential::dA() + ItoDifferential::dAstar(), false}});
  ASSERT_EQ(e.terms.size(), 7u);
  const char* names[] = {"{1}", "{2}", "{3}", "{12}", "{13}", "{23}", "{123}"};
  for (std::size_t n = 0; n < 7; ++n) EXPECT_EQ(detail::subset_name(e.terms[n].subset), names[n]);
  EXPECT_TRUE(e.terms[6].value.is_zero());  // triple increments vanish
}

TEST(FlowDifferential, Position) {
  const HPSystem sys = double_pass_system();
  const ItoDifferential d = flow_differential(sys, x);
  EXPECT_TRUE(d.cT.is_zero());
  const InputQuadratureSplit in = split_input_quadratures(d);
  EXPECT_TRUE(in.x_in.is_zero());
  EXPECT_EQ(in.p_in, OpPoly(a));
}

TEST(FlowDifferential, Momentum) {
  const HPSystem sys = double_pass_system();
  const ItoDifferential d = flow_differential(sys, p);
  EXPECT_EQ(d.cT, WeylTerm(-(a * a) * p));
  const InputQuadratureSplit in = split_input_quadratures(d);
  EXPECT_EQ(in.x_in, OpPoly(-a));
  EXPECT_TRUE(in.p_in.is_zero());
  EXPECT_EQ(vacuum_expectation(d), WeylTerm(-(a * a) * p));
}

TEST(FlowDifferential, IdentityIsZero) {
  EXPECT_TRUE(flow_differential(double_pass_system(), WeylTerm(1)).is_zero());
}

TEST(FlowDifferential, ArgumentFormCoefficients) {
  const HPSystem sys = double_pass_system();
  for (const OpPoly& z : {x * x, p * x, p * p * p, x + p}) {
    const ItoDifferential d = flow_differential(sys, z);
    EXPECT_EQ(d.cA.as_poly(), commutator(sys.L_star(), z));
    EXPECT_EQ(d.cAstar.as_poly(), commutator(z, sys.L()));
    EXPECT_EQ(d.cT, lindblad(sys, z));
  }
}

TEST(Lindblad, Examples) {
  const HPSystem sys = double_pass_system();
  EXPECT_EQ(lindblad(sys, p), WeylTerm(-(a * a) * p));
  EXPECT_TRUE(lindblad(sys, x).is_zero());
  const WeylTerm e = WeylTerm::exponential(Axis::p, l);
  const WeylTerm expected = FormalScalar::rational(-1, 4) * a * a * l * l * e - I * a * a * l * (e * WeylTerm(p));
  EXPECT_EQ(lindblad(sys, e), expected);
  EXPECT_EQ(flow_differential(sys, e).cT, expected);
}

TEST(VacuumExpectation, DropsIncrements) {
  EXPECT_TRUE(vacuum_expectation(ItoDifferential::dA()).is_zero());
  EXPECT_EQ(vacuum_expectation(ItoDifferential::dt(WeylTerm(x))), WeylTerm(x));
}

TEST(HPSystem, RejectsNonHermitianH) {
  EXPECT_THROW(HPSystem(x, I * x), InvalidInput);
}

TEST(SeriesProduct, DoublePass) {
  EXPECT_EQ(series_product(single_pass_p(), single_pass_x()), double_pass_system());
  EXPECT_TRUE(app::check_series_product().pass);
}

TEST(SeriesProduct, TrivialFirst) {
  const HPSystem sys = double_pass_system();
  EXPECT_EQ(series_product(HPSystem::trivial(), sys), sys);
  EXPECT_EQ(series_product(sys, HPSystem::trivial()), sys);
}

TEST(SeriesProduct, SwappedOrderFlipsH) {
  const HPSystem swapped = series_product(single_pass_x(), single_pass_p());
  EXPECT_EQ(swapped.L(), double_pass_system().L());
  EXPECT_EQ(swapped.H(), FormalScalar::rational(-1, 4) * a * a * (p * x + x * p));
}

TEST(IORelations, DoublePass) {
  const IORelations r = output_quadrature_relations(double_pass_system());
  EXPECT_EQ(r.x_ph.algebraic_form, "x_ph^out(t) = x_ph^in(t) + a*p_at^out(t)");
  EXPECT_EQ(r.p_ph.algebraic_form, "p_ph^out(t) = p_ph^in(t) - a*x_at^out(t)");
  EXPECT_EQ(r.x_at.algebraic_form, "dx_at^out(t)/dt = a*p_ph^in(t)");
  EXPECT_EQ(r.p_at.algebraic_form, "dp_at^out(t)/dt = -a*x_ph^in(t) - a^2*p_at^out(t)");
  EXPECT_EQ(r.output_commutator, I * FormalScalar::symbol(Symbol::t));
  EXPECT_TRUE(app::check_io_relations().pass);
}

TEST(IORelations, Uncoupled) {
  const IORelations r = output_quadrature_relations(HPSystem::trivial());
  EXPECT_EQ(r.x_ph.algebraic_form, "x_ph^out(t) = x_ph^in(t)");
  EXPECT_EQ(r.p_ph.algebraic_form, "p_ph^out(t) = p_ph^in(t)");
  EXPECT_EQ(r.output_commutator, I * FormalScalar::symbol(Symbol::t));
}

TEST(CharFnGenerator, Lemma) {
  const HPSystem sys = double_pass_system();
  const PdeCoefficients f = char_fn_generator(sys, CharFamily::F);
  EXPECT_EQ(f.c0, FormalScalar::rational(-1, 4) * (a * l - k) * (a * l - k));
  EXPECT_EQ(f.c1, -a * (a * l - k));
  const PdeCoefficients g = char_fn_generator(sys, CharFamily::G);
  EXPECT_EQ(g.c0, FormalScalar::rational(-1, 4) * (a * l + k) * (a * l + k));
  EXPECT_EQ(g.c1, -a * k);
  EXPECT_LE(f.c0.degree_in({Symbol::k, Symbol::l}), 2);
  EXPECT_TRUE(app::check_char_generator().pass);
}

TEST(CharFnGenerator, Uncoupled) {
  const PdeCoefficients f = char_fn_generator(HPSystem::trivial(), CharFamily::F);
  EXPECT_EQ(f.c0, FormalScalar::rational(-1, 4) * k * k);
  EXPECT_TRUE(f.c1.is_zero());
}

TEST(CharFnGenerator, RejectsNonlinearCoupling) {
  const HPSystem cubic(x * x, OpPoly{});
  EXPECT_THROW(char_fn_generator(cubic, CharFamily::F), UnsupportedFragment);
}

TEST(Golden, FlowTranscriptOfP) {
  EXPECT_EQ(flow_transcript(double_pass_system(), p), read_golden("flow_p.txt"));
}

TEST(Golden, CharTranscriptF) {
  EXPECT_EQ(char_fn_transcript(double_pass_system(), CharFamily::F), read_golden("char_F.txt"));
}

TEST(Golden, IORelationsText) {
  EXPECT_EQ(io_relations_text(output_quadrature_relations(double_pass_system())), read_golden("io_relations.txt"));
}
