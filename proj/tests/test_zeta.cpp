#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>

#include "membrane/zeta.hpp"
#include "oracles/brute_force.hpp"
#include "oracles/zeta_oracles.hpp"

using namespace membrane;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

// Frozen with mpmath in tests/oracles/freeze_values.py.
TEST_CASE("theta over Q") {
    const auto Q = NumberFieldSpec::rational();
    CHECK(theta_minus_one(Q, 10) == doctest::Approx(4.5422021366481876774e-14).epsilon(1e-12));
    CHECK(1 + theta_minus_one(Q, 2) == doctest::Approx(1.003734885487739091).epsilon(1e-15));
    CHECK(1 + theta_minus_one(Q, 0.5) == doctest::Approx(1.4194954880837661234).epsilon(1e-15));
    // the direct sum agrees with the Poisson side where both are cheap
    for (double t : {0.2, 0.7, 1.3})
        CHECK(close(theta_rational(t).minus_one, oracle::theta_minus_one_Q(t), 1e-14));
}

TEST_CASE("truncated theta sums stay within their tail bound") {
    TruncationPolicy small;
    small.radius = 2;
    for (double t : {0.05, 0.3, 1.0}) {
        const auto cut = theta_rational(t, small), full = theta_rational(t);
        CHECK(full.minus_one - cut.minus_one <= cut.tail_bound);
        CHECK(full.minus_one - cut.minus_one >= 0);
    }
    const auto L = imag_quadratic_lattice(NumberFieldSpec::imag_quadratic(-7));
    for (double t : {0.05, 0.3, 1.0}) {
        const auto cut = L.theta_direct(t, 2.5), full = L.theta_direct(t);
        CHECK(full.minus_one - cut.minus_one <= cut.tail_bound);
    }
}

TEST_CASE("binary-form theta: direct, dual and box sums agree") {
    for (int D : {-1, -3, -7, -163}) {
        const auto L = imag_quadratic_lattice(NumberFieldSpec::imag_quadratic(D));
        for (double t : {0.15, 1.0, 3.0}) {
            const double box = oracle::theta_box(L.a, L.b, L.c, t, 60);
            CHECK(L.theta(t).minus_one == doctest::Approx(box).epsilon(1e-12));
            CHECK(L.theta_direct(t).minus_one == doctest::Approx(box).epsilon(1e-12));
        }
    }
    const Lattice2 skew{2.0, 0.7, 0.5};
    for (double t : {0.1, 0.5, 4.0})
        CHECK(skew.theta(t).minus_one == doctest::Approx(oracle::theta_box(2.0, 0.7, 0.5, t, 80)).epsilon(1e-12));
    CHECK_THROWS_AS(Lattice2({1.0, 2.0, 1.0}).theta_direct(1.0), InvalidInput);
    CHECK_THROWS_AS(theta_rational(0.0), DomainError);
}

TEST_CASE("field parsing and invariants") {
    CHECK(NumberFieldSpec::parse("Q").kind == FieldKind::Rational);
    CHECK(NumberFieldSpec::parse("Qi").discriminant == -4);
    CHECK(NumberFieldSpec::parse("Q:sqrt-3").discriminant == -3);
    CHECK(NumberFieldSpec::parse("Q:sqrt-3").roots_of_unity == 6);
    CHECK(NumberFieldSpec::parse("Q:sqrt5").discriminant == 5);
    CHECK(NumberFieldSpec::parse("Q(sqrt2)").discriminant == 8);
    CHECK(NumberFieldSpec::parse("Q:sqrt-163").name() == "Q:sqrt-163");
    for (const char* bad : {"Q:sqrt10", "Q:sqrt4", "Q:sqrt1", "Q:sqrt-5", "Q:sqrtx", "R", "Q:sqrt5x"})
        CHECK_THROWS_AS(NumberFieldSpec::parse(bad), InvalidInput);
}

TEST_CASE("fundamental units") {
    auto unit = [](int D) {
        const auto K = NumberFieldSpec::real_quadratic(D);
        return std::vector<long>{K.unit_a, K.unit_b, K.unit_c};
    };
    CHECK(unit(5) == std::vector<long>{1, 1, 2});
    CHECK(unit(2) == std::vector<long>{1, 1, 1});
    CHECK(unit(3) == std::vector<long>{2, 1, 1});
    CHECK(unit(13) == std::vector<long>{3, 1, 2});
    CHECK(unit(19) == std::vector<long>{170, 39, 1});
    CHECK(unit(29) == std::vector<long>{5, 1, 2});
    for (int D : supported_real_quadratic()) {
        const auto K = NumberFieldSpec::real_quadratic(D);
        CHECK(K.u1 > 1);
        CHECK(std::abs(K.u2) < 1);
        CHECK(std::abs(std::abs(K.u1 * K.u2) - 1) < 1e-12);
    }
}

TEST_CASE("real quadratic theta is periodic under the unit") {
    for (int D : {2, 5, 13}) {
        const auto K = NumberFieldSpec::real_quadratic(D);
        for (double x : {-0.3, 0.2})
            for (double t : {0.1, 0.8}) {
                const double a = real_quadratic_lattice(K, x).theta(t).minus_one;
                const double b = real_quadratic_lattice(K, x + K.membrane_width()).theta(t).minus_one;
                CHECK(a == doctest::Approx(b).epsilon(1e-12));
            }
        // covolume of O_K under the form is √D_K for every x
        CHECK(real_quadratic_lattice(K, 0.4).det() == doctest::Approx(K.discriminant));
    }
}

TEST_CASE("Kronecker symbols and ideal counts") {
    for (long p : {5, 13, 17}) CHECK(kronecker(-4, p) == 1);
    for (long p : {3, 7, 11}) CHECK(kronecker(-4, p) == -1);
    CHECK(kronecker(-4, 2) == 0);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(5, 11) == 1);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(-7, 2) == 1);
    const auto a = ideal_counts(NumberFieldSpec::imag_quadratic(-1), 10);
    CHECK(std::vector<long>(a.begin() + 1, a.end()) == std::vector<long>{1, 1, 0, 1, 2, 0, 0, 1, 1, 2});
    const auto b = ideal_counts(NumberFieldSpec::real_quadratic(5), 11);
    CHECK(b[2] == 0);
    CHECK(b[4] == 1);
    CHECK(b[5] == 1);
    CHECK(b[11] == 2);
}

TEST_CASE("Dedekind zeta series") {
    const auto v = dedekind_zeta_oracle(NumberFieldSpec::real_quadratic(5), 2.0);
    CHECK(std::abs(v.value - 1.1616711956186385498) <= v.tail_bound);
    CHECK(v.tail_bound < 1e-4);
    const auto i = dedekind_zeta_oracle(NumberFieldSpec::imag_quadratic(-1), 3.0, 200000);
    CHECK(std::abs(i.value - boost::math::zeta(3.0) * oracle::beta_series(3.0)) <= i.tail_bound + 1e-15);
    CHECK_THROWS_AS(dedekind_zeta_oracle(NumberFieldSpec::rational(), 1.0), DomainError);
}

TEST_CASE("completed zeta against closed forms") {
    const auto Q = NumberFieldSpec::rational();
    CHECK(close(completed_zeta(Q, 2).value, 1.0471975511965977462, 1e-13));
    CHECK(close(completed_zeta(Q, 3).value, 0.38262659603117034225, 1e-13));
    CHECK(close(completed_zeta(Q, 4).value, 0.21932454224643019153, 1e-13));
    CHECK(close(completed_zeta(Q, 6).value, 0.13124349917587225471, 1e-13));
    const auto Qi = NumberFieldSpec::imag_quadratic(-1);
    CHECK(close(completed_zeta(Qi, 2).value, 0.61064372945147934337, 1e-12));
    CHECK(close(completed_zeta(Qi, 3).value, 0.30051422578989857135, 1e-12));
    for (int D : {-3, -7, -163}) {
        const auto K = NumberFieldSpec::imag_quadratic(D);
        const double s = 3;
        const auto z = dedekind_zeta_oracle(K, s, 400000);
        const double want = K.roots_of_unity * std::pow(kPi, -s) * std::tgamma(s) * z.value;
        CHECK(close(completed_zeta(K, s).value, want, 1e-9));
    }
}

TEST_CASE("the fold continues past the half-plane of convergence") {
    const auto Q = NumberFieldSpec::rational();
    for (double s : {0.3, -2.5, 1.5})
        CHECK(completed_zeta(Q, s).value == doctest::Approx(completed_zeta(Q, 1 - s).value).epsilon(1e-12));
    const auto Qi = NumberFieldSpec::imag_quadratic(-1);
    // θ for a rank-two lattice behaves like 1/t, so the reflection is again s ↔ 1 - s
    for (double s : {0.3, -1.5})
        CHECK(completed_zeta(Qi, s).value == doctest::Approx(completed_zeta(Qi, 1 - s).value).epsilon(1e-12));
    CHECK_THROWS_AS(completed_zeta(Q, 1), DomainError);
    CHECK_THROWS_AS(completed_zeta(Q, 0), DomainError);
    CHECK_THROWS_AS(completed_zeta(NumberFieldSpec::real_quadratic(5), 2), InvalidInput);
}

TEST_CASE("a short t-range is an accuracy error, not a silent answer") {
    TruncationPolicy trunc;
    trunc.t_max = 2;
    CHECK_THROWS_AS(completed_zeta(NumberFieldSpec::rational(), 2, trunc), AccuracyError);
    trunc.t_max = 50;
    trunc.t_min = 0.5;
    CHECK_THROWS_AS(completed_zeta(NumberFieldSpec::rational(), 2, trunc), AccuracyError);
}

TEST_CASE("path iteration reproduces the single completed zeta") {
    for (const auto& K : {NumberFieldSpec::rational(), NumberFieldSpec::imag_quadratic(-1)})
        for (double s : {2.0, 3.0, 4.0}) {
            const auto p = multiple_completed_zeta_path(K, {s});
            CHECK(close(p.value, completed_zeta(K, s).value, 1e-10));
        }
}

TEST_CASE("double path integral over Q") {
    const auto Q = NumberFieldSpec::rational();
    const double a = multiple_completed_zeta_path(Q, {4, 2}).value;
    const double b = multiple_completed_zeta_path(Q, {2, 4}).value;
    CHECK(close(a, 0.0422070359588887865, 1e-10));
    CHECK(close(a, oracle::nested_path_Q(4, 2), 1e-8));
    // shuffle relation for paths
    CHECK(close(a + b, 0.229676123557776446, 1e-10));
    CHECK_THROWS_AS(multiple_completed_zeta_path(Q, {4, 1}), DomainError);
    CHECK_THROWS_AS(multiple_completed_zeta_path(Q, {}), InvalidInput);
}

TEST_CASE("triple path integrals satisfy the shuffle relation") {
    const auto Q = NumberFieldSpec::rational();
    const double s1 = 3, s2 = 4, s3 = 5;
    const double lhs = multiple_completed_zeta_path(Q, {s1}).value * multiple_completed_zeta_path(Q, {s2, s3}).value;
    const double rhs = multiple_completed_zeta_path(Q, {s1, s2, s3}).value + multiple_completed_zeta_path(Q, {s2, s1, s3}).value +
                       multiple_completed_zeta_path(Q, {s2, s3, s1}).value;
    CHECK(close(lhs, rhs, 1e-11));
}

TEST_CASE("word-encoded evaluator") {
    const auto Q = NumberFieldSpec::rational();
    const auto v = word_encoded_path_integral(Q, {true, false, true});
    CHECK(v.real() == 0);
    CHECK(std::isfinite(v.imag()));
    // a single letter is ∫(θ-1)dz = i ζ̂(2)
    const auto one = word_encoded_path_integral(Q, {true});
    CHECK(close(one.imag(), completed_zeta(Q, 2).value, 1e-9));
    CHECK_THROWS_AS(word_encoded_path_integral(Q, {true, false}), DomainError);
    CHECK_THROWS_AS(word_encoded_path_integral(NumberFieldSpec::imag_quadratic(-1), {true}), DomainError);
}

TEST_CASE("the geodesic membrane") {
    const auto K = NumberFieldSpec::real_quadratic(5);
    TruncationPolicy trunc;
    const auto M = membrane_M(K, trunc);
    CHECK(M.target_dim == 4);
    // bottom face on z₁ = z₂; the top face is its image under diag(u, u⁻¹),
    // which scales z₁ by u₁² and z₂ by u₂² = u₁⁻²
    const auto b = M(0.4, 0), t = M(0.4, 1);
    CHECK(b[1] == doctest::Approx(b[3]));
    CHECK(t[1] == doctest::Approx(std::pow(K.u1, 4) * t[3]));
    CHECK(b[0] == 0);
    // dz₁/z₁ ∧ dz₂/z₂ = -2 dt/t ∧ dx
    double du[4], dw[4];
    M.partials(0.3, 0.6, du, dw);
    const auto p = M(0.3, 0.6);
    const double wedge = (du[1] / p[1]) * (dw[3] / p[3]) - (dw[1] / p[1]) * (du[3] / p[3]);
    const double dl = std::log(trunc.t_max / trunc.t_min), L = K.membrane_width();
    CHECK(wedge == doctest::Approx(-2 * dl * L));
    CHECK_THROWS_AS(membrane_M(NumberFieldSpec::rational()), InvalidInput);
}

TEST_CASE("single membrane integral is pi^-s Gamma(s/2)^2 zeta_K(s)") {
    const auto K = NumberFieldSpec::real_quadratic(5);
    const auto I = Permutation::identity(1);
    const auto r = multiple_completed_dedekind_2d(K, {2}, I, I);
    CHECK(close(r.value, 0.11770190054329016166, 1e-9));
    CHECK(close(r.value, oracle::unfolding_membrane_1(5, 2), 1e-4));
    const auto K2 = NumberFieldSpec::real_quadratic(2);
    const double s = 3;
    const double want = std::pow(kPi, -s) * std::pow(std::tgamma(s / 2), 2) * dedekind_zeta_oracle(K2, s, 400000).value;
    CHECK(close(multiple_completed_dedekind_2d(K2, {s}, I, I).value, want, 1e-9));
}

TEST_CASE("double membrane integrals") {
    const auto K = NumberFieldSpec::real_quadratic(5);
    const auto I1 = Permutation::identity(1);
    const double a = multiple_completed_dedekind_2d(K, {4}, I1, I1).value;
    const double b = multiple_completed_dedekind_2d(K, {3}, I1, I1).value;
    double total = 0, corner = 0;
    for (const auto& s1 : all_permutations(2))
        for (const auto& s2 : all_permutations(2)) {
            const auto r = multiple_completed_dedekind_2d(K, {4, 3}, s1, s2);
            const double v = r.value;
            total += v;
            corner += r.tails.small_t;
            // θ(t, x) = θ(t, L - x), so reversing the x-order changes nothing
            CHECK(v == doctest::Approx(multiple_completed_dedekind_2d(K, {4, 3}, s1, Permutation({s2(2), s2(1)})).value).epsilon(1e-12));
            if (s1.is_identity())
                CHECK(close(v, oracle::unfolding_membrane_2(5, {4, 3}, s1.images(), s2.images()), 1e-6));
        }
    // shuffle relation on both axes, up to the corners below the lowered t_min
    CHECK(close(total, a * b, corner + 1e-14));
}

TEST_CASE("membrane input checks and Monte Carlo") {
    const auto K = NumberFieldSpec::real_quadratic(5);
    const auto I = Permutation::identity(1);
    CHECK_THROWS_AS(multiple_completed_dedekind_2d(K, {1.0}, I, I), DomainError);
    CHECK_THROWS_AS(multiple_completed_dedekind_2d(K, {2, 2}, I, I), InvalidInput);
    CHECK_THROWS_AS(multiple_completed_dedekind_2d(NumberFieldSpec::rational(), {2}, I, I), InvalidInput);
    QuadratureConfig mc;
    mc.method = Method::MonteCarlo;
    mc.samples = 100000;
    const auto r = multiple_completed_dedekind_2d(K, {2}, I, I, {}, mc);
    CHECK(std::abs(r.value - 0.11770190054329016166) < 5 * r.est_error);
    CHECK(r.value == multiple_completed_dedekind_2d(K, {2}, I, I, {}, mc).value);
}
