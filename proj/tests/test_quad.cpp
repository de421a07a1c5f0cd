#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "membrane/quad.hpp"
#include "membrane/verify.hpp"

using namespace membrane;

namespace {

Form2 poly(std::vector<PolyTerm> t) { return Form2::polynomial(std::move(t)); }
const Form2 kOne = Form2::constant(1);
const Form2 kX = poly({{1, 1, 0}});
const Form2 kY = poly({{1, 0, 1}});
const Form2 kXY = poly({{1, 1, 1}});

Permutation P(std::vector<int> v) { return Permutation(std::move(v)); }

QuadratureConfig gauss(int q) {
    QuadratureConfig c;
    c.points = q;
    return c;
}

}  // namespace

// Values frozen from tests/oracles/freeze_values.py (sympy nested integration).
TEST_CASE("exact iterated integrals") {
    const RationalRectangle unit(0, 1, 0, 1);
    CHECK(poly_oracle({kXY, kOne}, P({1, 2}), P({1, 2}), unit) == Rational(1, 36));
    CHECK(poly_oracle({kOne, kOne, kOne}, Permutation::identity(3), Permutation::identity(3), unit) == Rational(1, 36));
    CHECK(poly_oracle_indexed({kOne, kOne}, P({1, 2}), P({1, 2}), 1, unit, RationalRectangle(1, 2, 0, 1)) == Rational(1, 2));
    CHECK(poly_oracle_indexed({kX, kY}, P({1, 2}), P({1, 2}), 1, unit, RationalRectangle(1, 2, 0, 1)) == Rational(1, 6));
    const auto f1 = poly({{1, 2, 1}}), f2 = poly({{1, 1, 0}, {1, 0, 3}});
    CHECK(poly_oracle({f1, f2}, P({2, 1}), P({1, 2}), RationalRectangle(0, 2, 1, 3)) == Rational(640, 3));
    CHECK(poly_oracle({kX, kY, kXY}, P({3, 1, 2}), P({2, 3, 1}), unit) == Rational(1, 1600));
    CHECK(poly_oracle({kOne}, P({1}), P({1}), RationalRectangle(0, 2, 0, 3)) == 6);
    CHECK(poly_oracle({kOne, kOne}, P({1, 2}), P({1, 2}), unit) == Rational(1, 4));
}

TEST_CASE("Gauss quadrature reproduces the exact values") {
    const auto f1 = poly({{1, 2, 1}}), f2 = poly({{1, 1, 0}, {1, 0, 3}});
    const auto r = eval_iterated({f1, f2}, P({2, 1}), P({1, 2}), Rectangle(0, 2, 1, 3), gauss(8));
    CHECK(r.value == doctest::Approx(640.0 / 3).epsilon(1e-13));
    const auto s = eval_iterated({kX, kY, kXY}, P({3, 1, 2}), P({2, 3, 1}), Rectangle(0, 1, 0, 1), gauss(6));
    CHECK(std::abs(s.value - 1.0 / 1600) < 1e-15);
    const auto t = eval_indexed({kX, kY}, P({1, 2}), P({1, 2}), 1, Rectangle(0, 1, 0, 1), Rectangle(1, 2, 0, 1), gauss(4));
    CHECK(std::abs(t.value - 1.0 / 6) < 1e-14);
}

TEST_CASE("Gauss-Legendre rule is exact to degree 2q-1") {
    for (int q : {1, 3, 8, 20}) {
        const auto& rule = gauss_legendre01(q);
        double s = 0;
        for (const auto& [x, w] : rule) s += w * std::pow(x, 2 * q - 1);
        CHECK(s == doctest::Approx(1.0 / (2 * q)).epsilon(1e-13));
    }
}

TEST_CASE("chain node weights sum to the ordered volume") {
    const auto a = chain_nodes(AxisChain{0, 2, {}, 0, {0.5, 1.5}}, 3, 4);
    double s = 0;
    for (double w : a.weights) s += w;
    CHECK(s == doctest::Approx(8.0 / 6));
    // with a cut: two points in [0,1], one in [1,3]
    const auto b = chain_nodes(AxisChain{0, 3, 1.0, 2, {}}, 3, 3);
    s = 0;
    for (double w : b.weights) s += w;
    CHECK(s == doctest::Approx(0.5 * 2));
    for (std::size_t k = 0; k < b.size(); ++k) {
        const int* n = b.node(k);
        CHECK(b.atoms[static_cast<std::size_t>(n[0])] <= b.atoms[static_cast<std::size_t>(n[1])]);
        CHECK(b.atoms[static_cast<std::size_t>(n[1])] <= 1.0);
        CHECK(b.atoms[static_cast<std::size_t>(n[2])] >= 1.0);
    }
}

TEST_CASE("evaluator forms converge") {
    const auto e = Form2::evaluator([](double x, double y) { return std::exp(x * y); });
    const auto lo = eval_iterated({e, e}, P({1, 2}), P({2, 1}), Rectangle(0, 1, 0, 1), gauss(6));
    const auto hi = eval_iterated({e, e}, P({1, 2}), P({2, 1}), Rectangle(0, 1, 0, 1), gauss(12));
    CHECK(std::abs(lo.value - hi.value) < 1e-10);
    CHECK(hi.est_error < 1e-12);
}

TEST_CASE("Monte Carlo is seeded and within its error bar") {
    QuadratureConfig c;
    c.method = Method::MonteCarlo;
    c.samples = 100000;
    c.seed = 7;
    const auto a = eval_iterated({kXY, kOne}, P({1, 2}), P({1, 2}), Rectangle(0, 1, 0, 1), c);
    const auto b = eval_iterated({kXY, kOne}, P({1, 2}), P({1, 2}), Rectangle(0, 1, 0, 1), c);
    CHECK(a.value == b.value);
    CHECK(std::abs(a.value - 1.0 / 36) < 5 * a.est_error);
    c.seed = 8;
    CHECK(eval_iterated({kXY, kOne}, P({1, 2}), P({1, 2}), Rectangle(0, 1, 0, 1), c).value != a.value);
}

TEST_CASE("results do not depend on the thread count") {
    QuadratureConfig c;
    c.method = Method::MonteCarlo;
    c.samples = 50000;
    const auto e = Form2::evaluator([](double x, double y) { return std::sin(x + 2 * y); });
    auto run = [&](const char* threads) {
        setenv("MEMBRANE_THREADS", threads, 1);
        const double mc = eval_iterated({e, e, kX}, P({2, 3, 1}), P({1, 3, 2}), Rectangle(0, 1, 0, 2), c).value;
        const double g = eval_iterated({e, e, kX}, P({2, 3, 1}), P({1, 3, 2}), Rectangle(0, 1, 0, 2), gauss(8)).value;
        return std::make_pair(mc, g);
    };
    const auto one = run("1"), many = run("7");
    unsetenv("MEMBRANE_THREADS");
    CHECK(one.first == many.first);
    CHECK(one.second == many.second);
}

TEST_CASE("path iterated integrals") {
    const std::vector<std::function<double(double)>> f{[](double s) { return s; }, [](double) { return 1.0; }};
    // ∫_{s1<s2} s1 = 1/6 ; reversed order ∫_{s1<s2} s2 = 1/3
    CHECK(eval_path_iterated(f, P({1, 2}), 0, 1, gauss(4)).value == doctest::Approx(1.0 / 6));
    CHECK(eval_path_iterated(f, P({2, 1}), 0, 1, gauss(4)).value == doctest::Approx(1.0 / 3));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(Rectangle(1, 1, 0, 1), InvalidInput);
    CHECK_THROWS_AS(Rectangle(0, 1, 2, 1), InvalidInput);
    CHECK_THROWS_AS(eval_iterated({kOne}, P({1, 2}), P({1}), Rectangle(0, 1, 0, 1), gauss(4)), InvalidInput);
    const auto bad = Form2::evaluator([](double x, double) { return 1 / x; }, false, "1/x");
    CHECK_THROWS_AS(eval_iterated({bad}, P({1}), P({1}), Rectangle(0, 1, 0, 1), gauss(4)), IntegrabilityError);
    CHECK_THROWS_AS(poly({{1, 1, 0}, {2, 1, 0}}), InvalidInput);
    QuadratureConfig c;
    c.points = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
}

TEST_CASE("pairwise sum") {
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.0));
    CHECK(pairwise_sum({}) == 0);
}

TEST_CASE("shuffle relation and gluing lemmas, exact") {
    const auto s = shuffle_relation_suite(4, 4, 11);
    CHECK(s.passed());
    CHECK(s.max_deviation == 0);
    const auto l = lemma_suite(2, 3, 12);
    CHECK(l.passed());
}

TEST_CASE("gluing theorem through degree 2, exact and by quadrature") {
    std::mt19937_64 rng(3);
    const std::vector<Form2> alpha{random_polynomial_form(rng), random_polynomial_form(rng)};
    const auto r = verify_gluing_theorem(alpha, 2, RationalRectangle(0, 1, 0, 1), RationalRectangle(1, 2, 0, 1), NumericContext{});
    CHECK(r.passed(0.0));
    NumericContext q{false, gauss(8)};
    const auto n = verify_gluing_theorem(alpha, 2, RationalRectangle(0, 1, 0, 1), RationalRectangle(1, 2, 0, 1), q);
    CHECK(n.multiplicity_failures == 0);
    CHECK(n.max_decomposition_deviation < 1e-12);
    CHECK(n.max_cross_product_deviation < 1e-12);
}

TEST_CASE("oracle J is group-like") {
    std::mt19937_64 rng(5);
    const std::vector<Form2> alpha{random_polynomial_form(rng), random_polynomial_form(rng)};
    const auto J = oracle_J(alpha, 3, RationalRectangle(0, 1, 0, 1));
    CHECK(group_like_check(J).passed(0.0));
    const auto Jq = quadrature_J(alpha, 3, Rectangle(0, 1, 0, 1), gauss(8));
    CHECK(group_like_check(Jq).passed(1e-12));
}
