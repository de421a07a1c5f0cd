#pragma once

#include <functional>
#include <map>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "membrane/errors.hpp"
#include "membrane/perms.hpp"

namespace membrane {

using Rational = mpq_class;

// A monomial z_{w_1} ... z_{w_n} in the free algebra on z_1..z_k.
using Word = std::vector<int>;

// Canonical representative of [M, σ₁, σ₂] with σ₁ = identity.
//
// Read as an integral: point k carries letter word[k], the x-coordinates are
// ordered x^1 < ... < x^n and the y-coordinates y^{σ₂(1)} < ... < y^{σ₂(n)}.
struct MonomialClass {
    Word word;
    Permutation sigma2;

    MonomialClass() = default;
    MonomialClass(Word w, Permutation s2);

    int degree() const { return static_cast<int>(word.size()); }
    std::string str() const;
    // degree first, then word, then σ₂
    std::strong_ordering operator<=>(const MonomialClass& o) const;
    bool operator==(const MonomialClass&) const = default;
};

// Relabels the points so that the x-order is the identity:
// word'[k] = word[σ₁(k)], σ₂' = σ₁⁻¹ ∘ σ₂.
MonomialClass canonicalize(const Word& word, const Permutation& sigma1, const Permutation& sigma2);

// A class living over two glued rectangles. x_split = i means the first i
// points in x-order lie in the left cell (×₁ family); y_split likewise for the
// lower cell (×₂ family). A grid composite carries both.
struct IndexedMonomial {
    Word word;
    Permutation sigma2;
    std::optional<int> x_split;
    std::optional<int> y_split;

    IndexedMonomial() = default;
    IndexedMonomial(Word w, Permutation s2, std::optional<int> xs, std::optional<int> ys = {});

    int degree() const { return static_cast<int>(word.size()); }
    MonomialClass base() const { return {word, sigma2}; }
    std::string str() const;
    std::strong_ordering operator<=>(const IndexedMonomial& o) const;
    bool operator==(const IndexedMonomial&) const = default;
};

template <class C>
bool coeff_is_zero(const C& c) {
    return c == 0;
}

// mpq_class has no implicit conversion to double.
template <class R, class C>
R coeff_cast(const C& c) {
    if constexpr (std::is_same_v<R, double> && std::is_same_v<C, mpq_class>)
        return c.get_d();
    else
        return R(c);
}

inline double to_double(const mpq_class& q) { return q.get_d(); }
inline double to_double(double d) { return d; }

// Graded finite sum of classes truncated at degree N. Terms of degree > N are
// dropped on insertion and zero coefficients are never stored.
template <class Key, class Coeff>
class FormalSeries {
public:
    using key_type = Key;
    using coeff_type = Coeff;

    FormalSeries(int alphabet, int truncation) : alphabet_(alphabet), truncation_(truncation) {
        if (alphabet < 1) throw InvalidInput("alphabet size must be positive");
        if (truncation < 0) throw InvalidInput("truncation must be non-negative");
    }

    static FormalSeries unit(int alphabet, int truncation) {
        FormalSeries s(alphabet, truncation);
        s.add(Key{}, Coeff(1));
        return s;
    }

    int alphabet() const { return alphabet_; }
    int truncation() const { return truncation_; }
    const std::map<Key, Coeff>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    void add(const Key& key, const Coeff& c) {
        for (int letter : key.word)
            if (letter < 1 || letter > alphabet_)
                throw InvalidInput("letter " + std::to_string(letter) + " outside alphabet of size " +
                                   std::to_string(alphabet_));
        if (key.degree() > truncation_) return;
        auto [it, fresh] = terms_.try_emplace(key, c);
        if (!fresh) it->second += c;
        if (coeff_is_zero(it->second)) terms_.erase(it);
    }

    Coeff coefficient(const Key& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    FormalSeries& operator+=(const FormalSeries& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    FormalSeries& operator-=(const FormalSeries& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    FormalSeries scaled(const Coeff& f) const {
        FormalSeries out(alphabet_, truncation_);
        for (const auto& [k, c] : terms_) out.add(k, c * f);
        return out;
    }
    bool operator==(const FormalSeries& o) const {
        return alphabet_ == o.alphabet_ && truncation_ == o.truncation_ && terms_ == o.terms_;
    }

    void check_compatible(const FormalSeries& o) const {
        if (alphabet_ != o.alphabet_ || truncation_ != o.truncation_)
            throw InvalidInput("series differ in alphabet size or truncation");
    }

private:
    int alphabet_;
    int truncation_;
    std::map<Key, Coeff> terms_;
};

template <class Key, class Coeff>
FormalSeries<Key, Coeff> operator+(FormalSeries<Key, Coeff> a, const FormalSeries<Key, Coeff>& b) {
    return a += b;
}
template <class Key, class Coeff>
FormalSeries<Key, Coeff> operator-(FormalSeries<Key, Coeff> a, const FormalSeries<Key, Coeff>& b) {
    return a -= b;
}

template <class Coeff>
using Series = FormalSeries<MonomialClass, Coeff>;
template <class Coeff>
using IndexedSeries = FormalSeries<IndexedMonomial, Coeff>;

// Pairs of classes; used as the target of the coproduct.
template <class Coeff>
struct TensorSeries {
    int truncation = 0;
    std::map<std::pair<MonomialClass, MonomialClass>, Coeff> terms;

    void add(const MonomialClass& a, const MonomialClass& b, const Coeff& c) {
        if (a.degree() + b.degree() > truncation) return;
        auto [it, fresh] = terms.try_emplace({a, b}, c);
        if (!fresh) it->second += c;
        if (coeff_is_zero(it->second)) terms.erase(it);
    }
    Coeff coefficient(const MonomialClass& a, const MonomialClass& b) const {
        auto it = terms.find({a, b});
        return it == terms.end() ? Coeff(0) : it->second;
    }
};

// --- merge products --------------------------------------------------------
//
// All products in this module glue two point configurations and sum over
// the admissible relative orders on each axis:
//   shuffle     - any interleaving (plain product)
//   restricted  - interleavings that keep each operand's cut
//   concatenate - the second operand lies entirely after the first (gluing)
enum class AxisMerge { Shuffle, Restricted, Concatenate };

// Every canonical term of the merged configuration, with repetition.
std::vector<IndexedMonomial> merge_terms(const IndexedMonomial& a, const IndexedMonomial& b,
                                         AxisMerge x, AxisMerge y);

// r(M,1,σ)·r(N,1,τ) as a list of classes (with repetition).
std::vector<MonomialClass> mul_terms(const MonomialClass& a, const MonomialClass& b);

template <class Coeff>
Series<Coeff> mul_RA(const Series<Coeff>& a, const Series<Coeff>& b) {
    a.check_compatible(b);
    Series<Coeff> out(a.alphabet(), a.truncation());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            if (ka.degree() + kb.degree() > a.truncation()) continue;
            const Coeff c = ca * cb;
            for (const auto& t : mul_terms(ka, kb)) out.add(t, c);
        }
    return out;
}

namespace detail {
template <class Coeff, class InKey>
IndexedSeries<Coeff> merge_series(const FormalSeries<InKey, Coeff>& a,
                                   const FormalSeries<InKey, Coeff>& b, AxisMerge x, AxisMerge y) {
    a.check_compatible(b);
    IndexedSeries<Coeff> out(a.alphabet(), a.truncation());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            if (ka.degree() + kb.degree() > a.truncation()) continue;
            const Coeff c = ca * cb;
            IndexedMonomial ia, ib;
            if constexpr (std::is_same_v<InKey, MonomialClass>) {
                ia = IndexedMonomial(ka.word, ka.sigma2, std::nullopt);
                ib = IndexedMonomial(kb.word, kb.sigma2, std::nullopt);
            } else {
                ia = ka;
                ib = kb;
            }
            for (const auto& t : merge_terms(ia, ib, x, y)) out.add(t, c);
        }
    return out;
}
}  // namespace detail

// Product in the indexed ring: restricted shuffles on x, shuffles on y.
std::vector<IndexedMonomial> mul_RAB_terms(const IndexedMonomial& a, const IndexedMonomial& b);

template <class Coeff>
IndexedSeries<Coeff> mul_RAB(const IndexedSeries<Coeff>& a, const IndexedSeries<Coeff>& b) {
    return detail::merge_series(a, b, AxisMerge::Restricted, AxisMerge::Shuffle);
}

// Horizontal gluing: B to the right of A.
template <class Coeff>
IndexedSeries<Coeff> times1(const Series<Coeff>& a, const Series<Coeff>& b) {
    return detail::merge_series(a, b, AxisMerge::Concatenate, AxisMerge::Shuffle);
}
// Horizontal gluing of two vertically composite pieces (interchange law).
template <class Coeff>
IndexedSeries<Coeff> times1(const IndexedSeries<Coeff>& a, const IndexedSeries<Coeff>& b) {
    return detail::merge_series(a, b, AxisMerge::Concatenate, AxisMerge::Restricted);
}
// Vertical gluing: B above A.
template <class Coeff>
IndexedSeries<Coeff> times2(const Series<Coeff>& a, const Series<Coeff>& b) {
    return detail::merge_series(a, b, AxisMerge::Shuffle, AxisMerge::Concatenate);
}
template <class Coeff>
IndexedSeries<Coeff> times2(const IndexedSeries<Coeff>& a, const IndexedSeries<Coeff>& b) {
    return detail::merge_series(a, b, AxisMerge::Restricted, AxisMerge::Concatenate);
}

// i(r) = Σ_j r^j, the split running over 0..deg on the x-axis (embed_i) or
// the y-axis (embed_i2).
std::vector<IndexedMonomial> embed_i_terms(const MonomialClass& m);
std::vector<IndexedMonomial> embed_i2_terms(const MonomialClass& m);

template <class Coeff>
IndexedSeries<Coeff> embed_i(const Series<Coeff>& s) {
    IndexedSeries<Coeff> out(s.alphabet(), s.truncation());
    for (const auto& [k, c] : s.terms())
        for (const auto& t : embed_i_terms(k)) out.add(t, c);
    return out;
}
template <class Coeff>
IndexedSeries<Coeff> embed_i2(const Series<Coeff>& s) {
    IndexedSeries<Coeff> out(s.alphabet(), s.truncation());
    for (const auto& [k, c] : s.terms())
        for (const auto& t : embed_i2_terms(k)) out.add(t, c);
    return out;
}

// --- Hopf structure --------------------------------------------------------

// Nonzero pieces Δ^i(m) = m' ⊗ m'' in increasing i. Δ^i survives iff σ₂ maps
// {1..i} onto itself.
std::vector<std::pair<MonomialClass, MonomialClass>> coproduct_terms(const MonomialClass& m);

TensorSeries<Rational> coproduct(const MonomialClass& m, int truncation);

template <class Coeff>
TensorSeries<Coeff> coproduct(const Series<Coeff>& s) {
    TensorSeries<Coeff> out{s.truncation(), {}};
    for (const auto& [k, c] : s.terms())
        for (const auto& [l, r] : coproduct_terms(k)) out.add(l, r, c);
    return out;
}

template <class Key, class Coeff>
Coeff counit(const FormalSeries<Key, Coeff>& s) {
    return s.coefficient(Key{});
}

// S(m) by the recursion m∘(S⊗id)∘Δ = u∘ε, memoized across calls.
class Antipode {
public:
    Antipode(int alphabet, int truncation) : alphabet_(alphabet), truncation_(truncation) {}
    const Series<Rational>& operator()(const MonomialClass& m);

private:
    int alphabet_;
    int truncation_;
    std::map<MonomialClass, Series<Rational>> cache_;
};

Series<Rational> antipode(const MonomialClass& m, int alphabet);

// Every canonical class of degree exactly n (k^n · n! of them), sorted.
std::vector<MonomialClass> classes_of_degree(int alphabet, int n);
std::vector<MonomialClass> classes_up_to(int alphabet, int max_degree);

template <class Coeff>
Series<Coeff> truncated_J(int alphabet, int truncation,
                          const std::function<Coeff(const MonomialClass&)>& coeff) {
    Series<Coeff> out(alphabet, truncation);
    for (const auto& c : classes_up_to(alphabet, truncation)) {
        try {
            out.add(c, coeff(c));
        } catch (const std::exception& e) {
            throw std::runtime_error("evaluating coefficient of " + c.str() + ": " + e.what());
        }
    }
    return out;
}

// Σ coeff·v(key): the value of a formal element under a valuation of its
// generators.
template <class Key, class Coeff, class V>
auto evaluate(const FormalSeries<Key, Coeff>& s, V&& valuation) {
    using R = decltype(valuation(std::declval<const Key&>()));
    R total(0);
    for (const auto& [k, c] : s.terms()) total += coeff_cast<R>(c) * valuation(k);
    return total;
}

// --- verification reports --------------------------------------------------

struct AxiomReport {
    int classes_checked = 0;
    int pairs_checked = 0;
    int coassociativity_failures = 0;
    int counit_failures = 0;
    int antipode_failures = 0;
    int bialgebra_failures = 0;
    std::vector<std::string> first_failures;
    bool passed() const {
        return coassociativity_failures + counit_failures + antipode_failures +
                   bialgebra_failures == 0;
    }
};

// Coassociativity, both counit laws, both antipode laws on every class of
// degree ≤ N, and Δ(ab) = Δ(a)Δ(b) on every pair with deg a + deg b ≤ N.
AxiomReport verify_hopf_axioms(int alphabet, int max_degree);

struct GroupLikeReport {
    int pairs_checked = 0;
    // pairs (a,b) whose coproduct multiplicity in ΔJ is not exactly 1
    int multiplicity_failures = 0;
    // |ΔJ - J⊗J| over all pairs, with ΔJ built from J's own coefficients
    double max_coproduct_deviation = 0;
    // |J[a]J[b] - Σ_c mult(ab→c) J[c]|: the dual shuffle-character identity
    double max_character_deviation = 0;
    bool passed(double tol) const {
        return multiplicity_failures == 0 && max_coproduct_deviation <= tol &&
               max_character_deviation <= tol;
    }
};

// J is read as Σ_c J[c]·[c]: each class appears once, carrying its value.
// ΔJ then has coefficient mult(a,b)·J[a]J[b] on a⊗b, and J⊗J has J[a]J[b].
GroupLikeReport group_like_check(const Series<Rational>& J);
GroupLikeReport group_like_check(const Series<double>& J);

}  // namespace membrane
