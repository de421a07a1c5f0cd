#include <algorithm>
#include <cmath>
#include <numbers>

#include "membrane/zeta.hpp"

namespace membrane {

namespace {

constexpr double kPi = std::numbers::pi;

int mod4(int D) { return ((D % 4) + 4) % 4; }

bool is_square(long long v, long long& root) {
    if (v < 0) return false;
    root = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(v))));
    while (root * root > v) --root;
    while ((root + 1) * (root + 1) <= v) ++root;
    return root * root == v;
}

}  // namespace

const std::vector<int>& supported_imag_quadratic() {
    static const std::vector<int> v{-1, -2, -3, -7, -11, -19, -43, -67, -163};
    return v;
}

const std::vector<int>& supported_real_quadratic() {
    static const std::vector<int> v{2, 3, 5, 6, 7, 11, 13, 14, 17, 19, 21, 22, 23, 29};
    return v;
}

NumberFieldSpec NumberFieldSpec::rational() { return {}; }

NumberFieldSpec NumberFieldSpec::imag_quadratic(int D) {
    const auto& ok = supported_imag_quadratic();
    if (std::find(ok.begin(), ok.end(), D) == ok.end())
        throw InvalidInput("Q(sqrt(" + std::to_string(D) + ")) is not a supported imaginary quadratic field");
    NumberFieldSpec K;
    K.kind = FieldKind::ImagQuadratic;
    K.radicand = D;
    K.discriminant = mod4(D) == 1 ? D : 4 * D;
    K.roots_of_unity = D == -1 ? 4 : D == -3 ? 6 : 2;
    return K;
}

NumberFieldSpec NumberFieldSpec::real_quadratic(int D) {
    const auto& ok = supported_real_quadratic();
    if (std::find(ok.begin(), ok.end(), D) == ok.end())
        throw InvalidInput("Q(sqrt(" + std::to_string(D) + ")) is not a supported real quadratic field");
    NumberFieldSpec K;
    K.kind = FieldKind::RealQuadratic;
    K.radicand = D;
    K.discriminant = mod4(D) == 1 ? D : 4 * D;
    K.roots_of_unity = 2;
    // smallest unit (a + b√D)/c > 1: first b with a² = Db² ∓ c², norm -1 preferred
    const long c = mod4(D) == 1 ? 2 : 1;
    for (long b = 1;; ++b) {
        long long a = 0;
        const long long base = static_cast<long long>(D) * b * b;
        if (is_square(base - c * c, a) && a > 0) {
        } else if (!is_square(base + c * c, a)) {
            continue;
        }
        K.unit_a = static_cast<long>(a);
        K.unit_b = b;
        K.unit_c = c;
        break;
    }
    const double r = std::sqrt(static_cast<double>(D));
    K.u1 = (static_cast<double>(K.unit_a) + static_cast<double>(K.unit_b) * r) / static_cast<double>(c);
    // conjugate through the norm to avoid cancellation: u₂ = N(u)/u₁
    const long long norm = (K.unit_a * K.unit_a - static_cast<long long>(D) * K.unit_b * K.unit_b) / (c * c);
    K.u2 = static_cast<double>(norm) / K.u1;
    return K;
}

NumberFieldSpec NumberFieldSpec::parse(const std::string& name) {
    if (name == "Q") return rational();
    if (name == "Qi" || name == "Q(i)") return imag_quadratic(-1);
    std::string rest;
    if (name.rfind("Q:sqrt", 0) == 0)
        rest = name.substr(6);
    else if (name.rfind("Q(sqrt", 0) == 0 && name.back() == ')')
        rest = name.substr(6, name.size() - 7);
    else
        throw InvalidInput("unknown field '" + name + "' (use Q, Qi or Q:sqrtD)");
    std::size_t used = 0;
    int D = 0;
    try {
        D = std::stoi(rest, &used);
    } catch (const std::exception&) {
        throw InvalidInput("cannot read the radicand in '" + name + "'");
    }
    if (used != rest.size()) throw InvalidInput("cannot read the radicand in '" + name + "'");
    if (D < 0) return imag_quadratic(D);
    if (D > 1) return real_quadratic(D);
    throw InvalidInput("radicand must be a squarefree integer other than 0 and 1");
}

std::string NumberFieldSpec::name() const {
    switch (kind) {
        case FieldKind::Rational: return "Q";
        case FieldKind::ImagQuadratic: return radicand == -1 ? "Qi" : "Q:sqrt" + std::to_string(radicand);
        case FieldKind::RealQuadratic: return "Q:sqrt" + std::to_string(radicand);
    }
    return "?";
}

double NumberFieldSpec::omega_trace() const { return mod4(radicand) == 1 ? 1.0 : 0.0; }
double NumberFieldSpec::omega_norm() const {
    return mod4(radicand) == 1 ? (1.0 - radicand) / 4.0 : -static_cast<double>(radicand);
}
double NumberFieldSpec::omega1() const {
    const double r = std::sqrt(static_cast<double>(radicand));
    return mod4(radicand) == 1 ? (1 + r) / 2 : r;
}
double NumberFieldSpec::omega2() const {
    const double r = std::sqrt(static_cast<double>(radicand));
    return mod4(radicand) == 1 ? (1 - r) / 2 : -r;
}

void TruncationPolicy::validate() const {
    if (radius < 0) throw InvalidInput("lattice radius must be non-negative");
    if (!(t_min > 0) || !(t_max > t_min)) throw InvalidInput("need 0 < t_min < t_max");
}

// --- one-dimensional theta -------------------------------------------------

ThetaValue theta_rational(double t, const TruncationPolicy& trunc) {
    if (!(t > 0)) throw DomainError("theta needs t > 0");
    const double R = trunc.radius > 0 ? std::floor(trunc.radius) : std::ceil(std::sqrt(45.0 / (kPi * t)));
    double s = 0;
    for (double n = R; n >= 1; n -= 1) s += std::exp(-kPi * n * n * t);  // small terms first
    ThetaValue v;
    v.minus_one = 2 * s;
    v.value = 1 + v.minus_one;
    const double Rn = R + 1;  // first dropped |n|
    v.tail_bound = 2 * std::exp(-kPi * Rn * Rn * t) / (1 - std::exp(-kPi * (2 * Rn + 1) * t));
    return v;
}

namespace {

ThetaValue theta_rational_auto(double t) {
    if (t >= 1) return theta_rational(t);
    // θ(t) = t^{-1/2} θ(1/t)
    const auto d = theta_rational(1 / t);
    const double f = 1 / std::sqrt(t);
    ThetaValue v;
    v.value = f * d.value;
    v.minus_one = v.value - 1;
    v.tail_bound = f * d.tail_bound;
    return v;
}

}  // namespace

// --- binary forms ----------------------------------------------------------

double Lattice2::min_eigenvalue() const {
    const double tr = a + c, disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4 * b * b));
    return (tr - disc) / 2;
}

void Lattice2::enumerate(double bound, const std::function<void(double)>& f) const {
    if (!(a > 0) || !(det() > 0)) throw InvalidInput("binary form is not positive definite");
    const double D = det();
    const long qmax = static_cast<long>(std::floor(std::sqrt(bound * a / D)));
    for (long q = -qmax; q <= qmax; ++q) {
        const double qd = static_cast<double>(q);
        const double rest = bound - D * qd * qd / a;
        if (rest < 0) continue;
        const double center = -b * qd / a, half = std::sqrt(rest / a);
        for (long p = static_cast<long>(std::ceil(center - half)); p <= static_cast<long>(std::floor(center + half)); ++p) {
            if (p == 0 && q == 0) continue;
            const double pd = static_cast<double>(p);
            const double Q = a * pd * pd + 2 * b * pd * qd + c * qd * qd;
            if (Q <= bound) f(Q);
        }
    }
}

ThetaValue Lattice2::theta_direct(double t, double radius) const {
    if (!(t > 0)) throw DomainError("theta needs t > 0");
    const double R2 = radius > 0 ? radius * radius : 45.0 / (kPi * t) + 4 * std::max(a, c);
    double s = 0;
    enumerate(R2, [&](double Q) { s += std::exp(-kPi * t * Q); });
    ThetaValue v;
    v.minus_one = s;
    v.value = 1 + s;
    // #{Q ≤ X} ≤ (π/√det)(√X + d)², d the half-diameter of a fundamental cell;
    // integrate by parts against e^{-πtX} and use (u+d)² ≤ 2u² + 2d²
    const double d2 = std::max(a + 2 * b + c, a - 2 * b + c) / 4;
    v.tail_bound = 2 * kPi / std::sqrt(det()) * std::exp(-kPi * t * R2) * (R2 + 1 / (kPi * t) + d2);
    return v;
}

ThetaValue Lattice2::theta(double t) const {
    if (!(t > 0)) throw DomainError("theta needs t > 0");
    const double root = std::sqrt(det());
    if (t * root >= 1) return theta_direct(t);
    // Poisson: θ_L(t) = θ_{L*}(1/t) / (t √det)
    const auto d = dual().theta_direct(1 / t);
    const double f = 1 / (t * root);
    ThetaValue v;
    v.value = f * d.value;
    v.minus_one = v.value - 1;
    v.tail_bound = f * d.tail_bound;
    return v;
}

Lattice2 imag_quadratic_lattice(const NumberFieldSpec& K) {
    if (K.kind != FieldKind::ImagQuadratic) throw InvalidInput("not an imaginary quadratic field");
    // N(p + qω) = p² + Tr(ω) pq + N(ω) q²
    return {1.0, K.omega_trace() / 2, K.omega_norm()};
}

Lattice2 real_quadratic_lattice(const NumberFieldSpec& K, double x) {
    if (K.kind != FieldKind::RealQuadratic) throw InvalidInput("not a real quadratic field");
    // e^x (p + qω₁)² + e^{-x} (p + qω₂)²
    const double ex = std::exp(x), emx = std::exp(-x), w1 = K.omega1(), w2 = K.omega2();
    return {ex + emx, ex * w1 + emx * w2, ex * w1 * w1 + emx * w2 * w2};
}

ThetaValue theta_imag_quadratic(double t, const NumberFieldSpec& K, const TruncationPolicy& trunc) {
    return imag_quadratic_lattice(K).theta_direct(t, trunc.radius);
}

ThetaValue theta_real_quadratic(double t, double x, const NumberFieldSpec& K, const TruncationPolicy& trunc) {
    return real_quadratic_lattice(K, x).theta_direct(t, trunc.radius);
}

double theta_minus_one(const NumberFieldSpec& K, double t) {
    switch (K.kind) {
        case FieldKind::Rational: return theta_rational_auto(t).minus_one;
        case FieldKind::ImagQuadratic: return imag_quadratic_lattice(K).theta(t).minus_one;
        case FieldKind::RealQuadratic:
            throw InvalidInput("the real quadratic theta depends on (t, x); use real_quadratic_lattice");
    }
    return 0;
}

// --- Dirichlet series ------------------------------------------------------

namespace {

long long powmod(long long b, long long e, long long m) {
    long long r = 1;
    b %= m;
    if (b < 0) b += m;
    while (e > 0) {
        if (e & 1) r = static_cast<long long>(static_cast<__int128>(r) * b % m);
        b = static_cast<long long>(static_cast<__int128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

int kronecker_prime(long D, long p) {
    if (p == 2) {
        if (D % 2 == 0) return 0;
        const long r = ((D % 8) + 8) % 8;
        return (r == 1 || r == 7) ? 1 : -1;
    }
    const long long r = powmod(D, (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

}  // namespace

int kronecker(long D, long n) {
    if (n < 1) throw InvalidInput("kronecker symbol needs n ≥ 1");
    int result = 1;
    for (long p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            result *= kronecker_prime(D, p);
            n /= p;
        }
    if (n > 1) result *= kronecker_prime(D, n);
    return result;
}

std::vector<long> ideal_counts(const NumberFieldSpec& K, long n_max) {
    if (n_max < 1) throw InvalidInput("n_max must be positive");
    std::vector<long> a(static_cast<std::size_t>(n_max + 1), 0);
    if (K.kind == FieldKind::Rational) {
        std::fill(a.begin() + 1, a.end(), 1);
        return a;
    }
    std::vector<int> spf(static_cast<std::size_t>(n_max + 1), 0);
    for (long i = 2; i <= n_max; ++i)
        if (spf[static_cast<std::size_t>(i)] == 0)
            for (long j = i; j <= n_max; j += i)
                if (spf[static_cast<std::size_t>(j)] == 0) spf[static_cast<std::size_t>(j)] = static_cast<int>(i);
    a[1] = 1;
    for (long n = 2; n <= n_max; ++n) {
        const long p = spf[static_cast<std::size_t>(n)];
        long m = n;
        int k = 0;
        while (m % p == 0) {
            m /= p;
            ++k;
        }
        const int chi = kronecker_prime(K.discriminant, p);
        const long local = chi == 1 ? k + 1 : chi == -1 ? (k % 2 == 0 ? 1 : 0) : 1;
        a[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(m)] * local;
    }
    return a;
}

SeriesValue dedekind_zeta_oracle(const NumberFieldSpec& K, double s, long n_max) {
    if (!(s > 1)) throw DomainError("the Dirichlet series needs s > 1");
    const auto a = ideal_counts(K, n_max);
    long double sum = 0;
    for (long n = n_max; n >= 1; --n)  // small terms first
        if (a[static_cast<std::size_t>(n)]) sum += a[static_cast<std::size_t>(n)] * std::pow(static_cast<long double>(n), -s);
    SeriesValue v;
    v.value = static_cast<double>(sum);
    const double N = static_cast<double>(n_max);
    if (K.kind == FieldKind::Rational) {
        v.tail_bound = std::pow(N, 1 - s) / (s - 1);
    } else {
        // a_n ≤ d(n) and Σ_{n ≤ x} d(n) ≤ x(ln x + 1); partial summation
        v.tail_bound = s * std::pow(N, 1 - s) * ((std::log(N) + 1) / (s - 1) + 1 / ((s - 1) * (s - 1)));
    }
    return v;
}

}  // namespace membrane
