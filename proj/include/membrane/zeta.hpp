#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "membrane/geometry.hpp"
#include "membrane/quad.hpp"

namespace membrane {

enum class FieldKind { Rational, ImagQuadratic, RealQuadratic };

// ℚ, or ℚ(√D) for a squarefree D on the class-number-one allowlist.
struct NumberFieldSpec {
    FieldKind kind = FieldKind::Rational;
    int radicand = 1;
    int discriminant = 1;    // D_K
    int roots_of_unity = 2;  // w
    // Real quadratic only: fundamental unit (a + b√D)/c and its embeddings.
    long unit_a = 1, unit_b = 0, unit_c = 1;
    double u1 = 1, u2 = 1;

    static NumberFieldSpec rational();
    static NumberFieldSpec imag_quadratic(int D);
    static NumberFieldSpec real_quadratic(int D);
    // "Q", "Qi", "Q:sqrtD" (D may be negative)
    static NumberFieldSpec parse(const std::string& name);

    std::string name() const;
    // O_K = Z[ω]; embeddings of ω (real case) or its trace and norm.
    double omega_trace() const;
    double omega_norm() const;
    double omega1() const;  // real case: (1+√D)/2 or √D
    double omega2() const;  // its conjugate
    // x-range [0, 2 log u₁] of the geodesic membrane.
    double membrane_width() const { return 2 * std::log(u1); }
};

const std::vector<int>& supported_imag_quadratic();
const std::vector<int>& supported_real_quadratic();

struct TruncationPolicy {
    double radius = 0;  // 0: choose per evaluation so the dropped tail is negligible
    double t_min = 1e-4;
    double t_max = 50;
    bool report_tail = true;
    void validate() const;
};

struct ThetaValue {
    double value = 0;       // θ
    double minus_one = 0;   // θ - 1, without cancellation for large t
    double tail_bound = 0;  // bound on the dropped lattice terms
};

// Direct lattice sums with the stated radius.
ThetaValue theta_rational(double t, const TruncationPolicy& trunc = {});
ThetaValue theta_imag_quadratic(double t, const NumberFieldSpec& K, const TruncationPolicy& trunc = {});
ThetaValue theta_real_quadratic(double t, double x, const NumberFieldSpec& K,
                                const TruncationPolicy& trunc = {});

// Positive-definite binary form a p² + 2b pq + c q² (a Gram matrix), with a
// theta evaluator that switches to the Poisson-dual sum when that is cheaper.
struct Lattice2 {
    double a, b, c;
    double det() const { return a * c - b * b; }
    Lattice2 dual() const { return {c / det(), -b / det(), a / det()}; }
    double min_eigenvalue() const;
    // Calls f(Q) for every lattice vector with 0 < Q ≤ bound.
    void enumerate(double bound, const std::function<void(double)>& f) const;
    ThetaValue theta_direct(double t, double radius = 0) const;
    ThetaValue theta(double t) const;
};

Lattice2 imag_quadratic_lattice(const NumberFieldSpec& K);
Lattice2 real_quadratic_lattice(const NumberFieldSpec& K, double x);

// θ - 1 for the field's trace form: ℚ uses the one-dimensional lattice.
double theta_minus_one(const NumberFieldSpec& K, double t);

struct TailBounds {
    double small_t = 0;
    double large_t = 0;
    double lattice = 0;
};

struct ZetaResult {
    double value = 0;
    double est_error = 0;
    TailBounds tails;
    std::string normalization;
    std::vector<std::string> notes;
};

// ∫₀^∞ (θ_K - 1) t^{e} dt/t with e = s/2 (ℚ) or s (imaginary quadratic).
// Folds [0,1] onto [1,∞) through the Poisson dual.
ZetaResult completed_zeta(const NumberFieldSpec& K, double s, const TruncationPolicy& trunc = {},
                          const QuadratureConfig& cfg = {});

// A letter g(t) dt of a path word on (0, ∞): its value and the power terms
// Σ c t^p that describe it as t → 0.
struct PowerTerm {
    double coeff;
    double power;
};
struct PathLetter {
    std::function<double(double)> g;
    std::vector<PowerTerm> small_t;
};

// ∫_{0<t₁<...<t_d<∞} g₁(t₁)...g_d(t_d) dt, integrated on log-spaced panels
// over [t_min, t_max]; [0, t_min] is handled through the power terms.
ZetaResult path_iterated_integral(const std::vector<PathLetter>& letters, const TruncationPolicy& trunc,
                                  int points = 24, double panel_width = 0.5);

// Iterated Mellin integral over 0 < t₁ < ... < t_d of Π (θ-1)(t_k) t_k^{e_k} dt_k/t_k.
ZetaResult multiple_completed_zeta_path(const NumberFieldSpec& K, const std::vector<double>& s,
                                        const TruncationPolicy& trunc = {},
                                        const QuadratureConfig& cfg = {});

// Path word in the letters (θ-1)dz (true) and dz (false) along z = it.
// Experimental: reported, never compared against the Mellin version.
std::complex<double> word_encoded_path_integral(const NumberFieldSpec& K, const std::vector<bool>& word,
                                                const TruncationPolicy& trunc = {});

// (t, x) ↦ (i t e^x, i t e^{-x}) on [t_min, t_max] × [0, 2 log u₁], with the
// unit square rescaled onto that box (t log-spaced). Coordinates are
// (Re z₁, Im z₁, Re z₂, Im z₂).
Membrane membrane_M(const NumberFieldSpec& K, const TruncationPolicy& trunc = {});

// Iterated integral over M^d of ½(θ_K-1)(-z₁z₂)^{s_k/2} dz₁/z₁∧dz₂/z₂,
// i.e. of (θ_K-1)(t,x) t^{s_k-1} dt dx, with σ₁ ordering the t-coordinates
// and σ₂ the x-coordinates.
ZetaResult multiple_completed_dedekind_2d(const NumberFieldSpec& K, const std::vector<double>& s,
                                          const Permutation& sigma1, const Permutation& sigma2,
                                          const TruncationPolicy& trunc = {},
                                          const QuadratureConfig& cfg = {});

struct SeriesValue {
    double value = 0;
    double tail_bound = 0;
};

// Kronecker symbol (D/n).
int kronecker(long D, long n);
// a_n = number of ideals of norm n, for n ≤ n_max.
std::vector<long> ideal_counts(const NumberFieldSpec& K, long n_max);
// Σ_{n ≤ n_max} a_n n^{-s} with a rigorous tail bound.
SeriesValue dedekind_zeta_oracle(const NumberFieldSpec& K, double s, long n_max = 2000000);

}  // namespace membrane
