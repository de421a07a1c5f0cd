#include "oracles/zeta_oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

namespace oracle {

namespace {
constexpr double kPi = std::numbers::pi;
}

double completed_zeta_Q(double s) {
    return 2 * std::pow(kPi, -s / 2) * std::tgamma(s / 2) * boost::math::zeta(s);
}

double beta_series(double s, long K) {
    long double sum = 0;
    for (long k = K - 1; k >= 0; --k)
        sum += std::pow(4.0L * k + 1, -static_cast<long double>(s)) - std::pow(4.0L * k + 3, -static_cast<long double>(s));
    return static_cast<double>(sum);
}

double completed_zeta_Qi(double s) {
    return 4 * std::pow(kPi, -s) * std::tgamma(s) * boost::math::zeta(s) * beta_series(s);
}

double theta_minus_one_Q(double t) {
    auto sum = [](double u) {
        double v = 0;
        for (int n = 1; n < 60; ++n) v += std::exp(-kPi * n * n * u);
        return 2 * v;
    };
    if (t >= 1) return sum(t);
    return (1 + sum(1 / t)) / std::sqrt(t) - 1;
}

double nested_path_Q(double s1, double s2) {
    const double a = s1 / 2, b = s2 / 2;
    // ∫_0^t (θ-1)(u) u^{a-1} du = 2 Σ_n (πn²)^{-a} γ(a, πn²t)
    auto inner = [a](double t) {
        double v = 0;
        const int N = 4000;
        for (int n = N; n >= 1; --n) {
            const double x = kPi * n * n;
            v += std::pow(x, -a) * boost::math::tgamma_lower(a, x * t);
        }
        // terms past N are saturated at Γ(a)(πn²)^{-a} once πN²t is large;
        // otherwise they are ≈ t^a/a each and the Poisson side is used instead
        v += std::tgamma(a) * std::pow(kPi, -a) * std::pow(static_cast<double>(N), 1 - 2 * a) / (2 * a - 1);
        return 2 * v;
    };
    auto outer = [&](double t) { return theta_minus_one_Q(t) * std::pow(t, b - 1) * inner(t); };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    // a crude tail term above only holds for t ≳ 1/N²; below 1e-5 the
    // integrand is O(t^{a+b-1/2}) and the piece is negligible
    return ts.integrate(outer, 1e-5, 1.0) + es.integrate(outer, 1.0, std::numeric_limits<double>::infinity());
}

namespace {

struct RealField {
    double w1, w2, L, DK;
};

RealField real_field(int D) {
    const double r = std::sqrt(static_cast<double>(D));
    const bool one = ((D % 4) + 4) % 4 == 1;
    RealField f;
    f.w1 = one ? (1 + r) / 2 : r;
    f.w2 = one ? (1 - r) / 2 : -r;
    f.DK = one ? D : 4.0 * D;
    // fundamental units of the fields the tests use
    double u;
    switch (D) {
        case 2: u = 1 + r; break;
        case 3: u = 2 + r; break;
        case 5: u = (1 + r) / 2; break;
        case 13: u = (3 + r) / 2; break;
        default: throw std::invalid_argument("unfolding oracle: unit for D not tabulated");
    }
    f.L = 2 * std::log(u);
    return f;
}

template <class F>
void for_each_norm(const RealField& f, double x, double R2, F&& cb) {
    // |p + qω₁| ≤ R e^{-x/2}, |p + qω₂| ≤ R e^{x/2}
    const double r1 = std::sqrt(R2) * std::exp(-x / 2), r2 = std::sqrt(R2) * std::exp(x / 2);
    const int qmax = static_cast<int>(std::ceil((r1 + r2) / (f.w1 - f.w2)));
    for (int q = -qmax; q <= qmax; ++q) {
        const int plo = static_cast<int>(std::floor(-q * f.w1 - r1)), phi = static_cast<int>(std::ceil(-q * f.w1 + r1));
        for (int p = plo; p <= phi; ++p) {
            if (p == 0 && q == 0) continue;
            const double e1 = p + q * f.w1, e2 = p + q * f.w2;
            const double Q = std::exp(x) * e1 * e1 + std::exp(-x) * e2 * e2;
            if (Q <= R2) cb(Q);
        }
    }
}

}  // namespace

double unfolding_membrane_1(int D, double s, double R2) {
    const auto f = real_field(D);
    auto epstein = [&](double x) {
        double v = 0;
        for_each_norm(f, x, R2, [&](double Q) { v += std::pow(Q, -s); });
        return v + kPi / std::sqrt(f.DK) * std::pow(R2, 1 - s) / (s - 1);
    };
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(epstein, 0.0, f.L, 8, 1e-12);
    return std::tgamma(s) * std::pow(kPi, -s) * I;
}

double unfolding_membrane_2(int D, const std::vector<int>& s, const std::vector<int>& sigma1,
                            const std::vector<int>& sigma2, double R2, int xpoints) {
    if (s.size() != 2 || sigma1.size() != 2 || sigma2.size() != 2) throw std::invalid_argument("d = 2 only");
    const auto f = real_field(D);
    const int first = sigma1[0] - 1, second = sigma1[1] - 1;
    const int s1 = s[static_cast<std::size_t>(first)], s2 = s[static_cast<std::size_t>(second)];
    // ∫_{0<t₁<t₂} e^{-a t₁} t₁^{s₁-1} e^{-b t₂} t₂^{s₂-1}
    auto T = [&](double a, double b) {
        double sub = 0;
        for (int k = 0; k < s1; ++k)
            sub += std::pow(a, k) / boost::math::factorial<double>(k) * std::tgamma(s2 + k) / std::pow(a + b, s2 + k);
        return std::tgamma(s1) / std::pow(a, s1) * (std::tgamma(s2) / std::pow(b, s2) - sub);
    };
    auto norms = [&](double x) {
        std::vector<double> v;
        for_each_norm(f, x, R2, [&](double Q) { v.push_back(kPi * Q); });
        return v;
    };
    // x-coordinates: point sigma2[0] below point sigma2[1]; integrate the
    // triangle 0 < lo < hi < L with Gauss in (lo, hi) = (hi·u, hi)
    boost::math::quadrature::gauss<double, 30> rule;
    (void)xpoints;
    auto at_hi = [&](double hi) {
        auto at_lo = [&](double lo) {
            double xs[2];
            xs[sigma2[0] - 1] = lo;
            xs[sigma2[1] - 1] = hi;
            const auto A = norms(xs[first]), B = norms(xs[second]);
            double v = 0;
            for (double a : A)
                for (double b : B) v += T(a, b);
            return v;
        };
        return rule.integrate(at_lo, 0.0, hi);
    };
    return rule.integrate(at_hi, 0.0, f.L);
}

}  // namespace oracle
