#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "membrane/hopf.hpp"
#include "membrane/perms.hpp"

namespace membrane {

struct Rectangle {
    double ax, bx, ay, by;
    Rectangle(double ax_, double bx_, double ay_, double by_);
    double area() const { return (bx - ax) * (by - ay); }
};

struct RationalRectangle {
    Rational ax, bx, ay, by;
    RationalRectangle(Rational ax_, Rational bx_, Rational ay_, Rational by_);
    Rectangle to_double() const;
};

// c · x^px · y^py
struct PolyTerm {
    Rational coeff;
    int px = 0;
    int py = 0;
};

// f(x,y) dx∧dy, either an explicit polynomial or an opaque evaluator.
class Form2 {
public:
    static Form2 polynomial(std::vector<PolyTerm> terms);
    static Form2 constant(const Rational& c);
    // integrable = false marks an evaluator the caller knows has a
    // non-integrable singularity on the domain; integrating it throws.
    static Form2 evaluator(std::function<double(double, double)> f, bool integrable = true,
                           std::string name = {});

    bool is_polynomial() const { return !fn_; }
    const std::vector<PolyTerm>& terms() const { return terms_; }
    bool integrable() const { return integrable_; }
    const std::string& name() const { return name_; }
    double operator()(double x, double y) const;

private:
    std::vector<PolyTerm> terms_;
    std::vector<std::pair<double, std::pair<int, int>>> numeric_terms_;
    std::function<double(double, double)> fn_;
    bool integrable_ = true;
    std::string name_;
};

enum class Method { GaussCell, MonteCarlo };

struct QuadratureConfig {
    Method method = Method::GaussCell;
    int points = 8;            // Gauss-Legendre nodes per simplex coordinate
    long samples = 200000;     // Monte Carlo
    std::uint64_t seed = 0;
    double abs_tolerance = 1e-10;
    void validate() const;
};

struct QuadResult {
    double value = 0;
    double est_error = 0;
};

// One coordinate axis of an ordered domain. Points are listed in chain order
// s_1 ≤ ... ≤ s_n inside [lo, hi]. With a cut, the first `split` of them lie
// in [lo, cut] and the rest in [cut, hi]. Extra breakpoints subdivide the
// axis into panels without changing the domain.
struct AxisChain {
    double lo = 0, hi = 1;
    std::optional<double> cut;
    int split = 0;
    std::vector<double> breakpoints;
};

// Tensor Gauss nodes for an ordered chain of n points. Each node stores, for
// every chain position, an index into `atoms` (the distinct coordinates).
struct ChainNodes {
    int n = 0;
    std::vector<double> atoms;
    std::vector<int> index;  // node-major, n entries per node
    std::vector<double> weights;
    std::size_t size() const { return weights.size(); }
    const int* node(std::size_t k) const { return index.data() + k * static_cast<std::size_t>(n); }
};

ChainNodes chain_nodes(const AxisChain& axis, int n, int points);

// Gauss-Legendre rule on [0,1].
const std::vector<std::pair<double, double>>& gauss_legendre01(int points);

// Σ over node pairs of w_x·w_y·Π_p f(p, x-atom, y-atom), where the point
// occupying x-chain position k is σx(k) (likewise for y). Deterministic:
// fixed chunking and pairwise combination independent of thread count.
double integrate_nodes(const ChainNodes& xs, const Permutation& sx, const ChainNodes& ys,
                       const Permutation& sy,
                       const std::function<double(int point, int xatom, int yatom)>& f);

// Number of worker threads: MEMBRANE_THREADS if set, else the hardware count.
unsigned worker_threads();

// Runs body(chunk) for chunk in [0, chunks) on the worker threads.
void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

// Pairwise sum; the reduction order depends only on the input length.
double pairwise_sum(const std::vector<double>& v);

// ∫ over Δ(σx)×Δ(σy) of Π_i f_i(x^i, y^i), with the chains described by x and y.
QuadResult eval_chains(const std::vector<Form2>& forms, const Permutation& sx,
                       const Permutation& sy, const AxisChain& x, const AxisChain& y,
                       const QuadratureConfig& cfg);

QuadResult eval_iterated(const std::vector<Form2>& forms, const Permutation& sx,
                         const Permutation& sy, const Rectangle& A, const QuadratureConfig& cfg);

// I^i over A ×₁ B: the first i points in σx-order lie in A's x-range.
QuadResult eval_indexed(const std::vector<Form2>& forms, const Permutation& sx,
                        const Permutation& sy, int split, const Rectangle& A, const Rectangle& B,
                        const QuadratureConfig& cfg);

// Vertical analogue: C sits on top of A; the first i points in σy-order lie in A.
QuadResult eval_indexed_vertical(const std::vector<Form2>& forms, const Permutation& sx,
                                 const Permutation& sy, int split, const Rectangle& A,
                                 const Rectangle& C, const QuadratureConfig& cfg);

// Path iterated integral ∫_{s_1<...<s_n} Π f_{σ(k)}(s_k) ds over [lo, hi].
QuadResult eval_path_iterated(const std::vector<std::function<double(double)>>& fns,
                              const Permutation& sigma, double lo, double hi,
                              const QuadratureConfig& cfg);

// --- exact mode -------------------------------------------------------------

struct RationalAxisChain {
    Rational lo, hi;
    std::optional<Rational> cut;
    int split = 0;
};

// Exact value for polynomial forms: expand the product, integrate each x- and
// y-chain by nested antiderivatives, multiply.
Rational poly_oracle_chains(const std::vector<Form2>& forms, const Permutation& sx,
                            const Permutation& sy, const RationalAxisChain& x,
                            const RationalAxisChain& y);

Rational poly_oracle(const std::vector<Form2>& forms, const Permutation& sx,
                     const Permutation& sy, const RationalRectangle& A);

Rational poly_oracle_indexed(const std::vector<Form2>& forms, const Permutation& sx,
                             const Permutation& sy, int split, const RationalRectangle& A,
                             const RationalRectangle& B);

// ∫_{lo<s_1<...<s_n<hi} Π s_k^{e_k} ds, exactly.
Rational chain_integral(const Rational& lo, const Rational& hi, const std::vector<int>& exponents);

// Shorthand: iterated-integral value of a class with the given forms
// (letter i ↦ forms[i-1]).
std::vector<Form2> forms_for_word(const std::vector<Form2>& alphabet, const Word& word);

}  // namespace membrane
