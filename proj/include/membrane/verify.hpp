#pragma once

#include <random>
#include <string>
#include <vector>

#include "membrane/geometry.hpp"
#include "membrane/hopf.hpp"
#include "membrane/quad.hpp"

namespace membrane {

// Polynomial form with 1..max_terms terms, exponents ≤ max_deg, and small
// rational coefficients p/q (p ∈ ±[1,3], q ∈ [1,3]).
Form2 random_polynomial_form(std::mt19937_64& rng, int max_terms = 3, int max_deg = 2);

// How iterated integrals of polynomial forms are evaluated in the checks.
struct NumericContext {
    bool exact = true;          // poly_oracle; otherwise quadrature with cfg
    QuadratureConfig cfg;
};

struct GluingReport {
    int indexed_checked = 0;
    int pairs_checked = 0;
    // indexed monomials whose multiplicity in J_A ×₁ J_B or in i(J_{A×₁B})
    // differs from 1, plus monomials present on one side only
    int multiplicity_failures = 0;
    // |I_{A×₁B}(c) - Σ_j I^j(c)|
    double max_decomposition_deviation = 0;
    // |I_A(a)·I_B(b) - Σ_{t ∈ a×₁b} I^m(t)|
    double max_cross_product_deviation = 0;
    bool exact = true;
    bool passed(double tol) const {
        return multiplicity_failures == 0 && max_decomposition_deviation <= tol &&
               max_cross_product_deviation <= tol;
    }
};

// i(J_{A×₁B}) = J_A ×₁ J_B through degree N for the given polynomial alphabet.
// A and B must share the face {A.bx} × [A.ay, A.by].
GluingReport verify_gluing_theorem(const std::vector<Form2>& alphabet, int N, const RationalRectangle& A,
                           const RationalRectangle& B, const NumericContext& ctx);

// J of every class of degree ≤ N with coefficients from the oracle or from
// quadrature on A.
Series<Rational> oracle_J(const std::vector<Form2>& alphabet, int N, const RationalRectangle& A);
Series<double> quadrature_J(const std::vector<Form2>& alphabet, int N, const Rectangle& A,
                            const QuadratureConfig& cfg);

struct SuiteReport {
    std::string name;
    int checks = 0;
    int failures = 0;
    double max_deviation = 0;
    std::vector<std::string> notes;
    bool passed() const { return failures == 0; }
};

// I(σ)·I(τ) = Σ over shuffles, for `tuples` random form tuples and every
// permutation pair with n₁ + n₂ ≤ max_total. Exact.
SuiteReport shuffle_relation_suite(int tuples, int max_total, std::uint64_t seed);

// Decomposition (Σ_i I^i = I over the union) and cross product (I_A·I_B = Σ I^m)
// on [0,1]² and [1,2]×[0,1] for n ≤ max_n, all permutations. Exact.
SuiteReport lemma_suite(int tuples, int max_n, std::uint64_t seed);

struct CompositionEntry {
    MonomialClass cls;
    double horizontal = 0;
    double vertical = 0;
};

struct CompositionReport {
    std::vector<CompositionEntry> entries;
    std::vector<double> max_deviation_by_degree;
    double max_deviation = 0;
    double tolerance = 0;
    bool passed = false;
};

// Δ₃ | Δ₁ glued horizontally (Δ₃ on the left) and Δ₀ over Δ₂ glued
// vertically (Δ₂ below). Compares J of the two composites class by class,
// computing each through times1 / times2 of the formal pieces and the indexed
// integrals over the split domains.
CompositionReport composition_identity_check(const Membrane& d3, const Membrane& d1,
                                             const Membrane& d2, const Membrane& d0,
                                             const std::vector<Target2Form>& alphabet, int N,
                                             const QuadratureConfig& cfg, double tolerance = 1e-5);

// f = left(x,y) for x < cut, right(x - cut, y) otherwise (and the y analogue).
Form2 glue_horizontal(const Form2& left, const Form2& right, double cut = 1.0);
Form2 glue_vertical(const Form2& lower, const Form2& upper, double cut = 1.0);

// The fixed configurations behind `verify homotopy` and `verify cocycle`.
// Three polynomial 2-forms on R^2.
std::vector<Target2Form> scenario_forms();
// The identity square and a copy bent in the interior (same boundary).
std::pair<Membrane, Membrane> homotopy_scenario(double amplitude = 0.1);
// Four pieces of the unit square: left and right halves (glued horizontally),
// lower and upper halves (glued vertically), each bent in its interior so the
// two composites differ away from the boundary.
struct CocycleScenario {
    Membrane d3, d1, d2, d0;
};
CocycleScenario cocycle_scenario(double amplitude = 0.05);

}  // namespace membrane
