#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace membrane {

// A bijection of {1..n}, stored as its one-line image sequence.
//
// Blocks over shifted ground sets {offset+1..offset+n} are always stored
// normalized to {1..n}; the shift is supplied by the operation that needs it
// (see GroundSet and the shuffle functions).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int n);
    // Parses "[2,1,3]" (whitespace tolerated); "[]" is the empty permutation.
    static Permutation parse(const std::string& text);

    int size() const { return static_cast<int>(images_.size()); }
    bool empty() const { return images_.empty(); }
    // 1-based access: p(k) is σ(k).
    int operator()(int k) const { return images_[static_cast<std::size_t>(k - 1)]; }
    const std::vector<int>& images() const { return images_; }

    bool is_identity() const;
    Permutation inverse() const;
    std::string str() const;

    auto operator<=>(const Permutation&) const = default;

private:
    std::vector<int> images_;
};

// (a ∘ b)(k) = a(b(k)).
Permutation compose(const Permutation& a, const Permutation& b);

// {offset+1, ..., offset+n}.
struct GroundSet {
    int offset = 0;
    int n = 0;
};

// Every permutation of {1..n} in lexicographic order.
std::vector<Permutation> all_permutations(int n);

// Shuffles of σ on {1..m} with τ on {m+1..m+n}; τ is passed normalized.
// A shuffle ρ is a permutation of {1..m+n} whose image sequence, restricted
// to {1..m}, is σ's sequence and, restricted to {m+1..m+n}, is τ's sequence
// shifted by m. Lexicographic order, no duplicates.
std::vector<Permutation> shuffles(const Permutation& sigma, const Permutation& tau);

// Same, with explicit ground sets; they must be {1..m} and {m+1..m+n}.
std::vector<Permutation> shuffles(const Permutation& sigma, GroundSet sigma_set,
                                  const Permutation& tau, GroundSet tau_set);

// Direct check of the defining order-refinement property.
bool is_shuffle(const Permutation& rho, const Permutation& sigma, const Permutation& tau);
bool is_shuffle(const Permutation& rho, const Permutation& sigma, GroundSet sigma_set,
                const Permutation& tau, GroundSet tau_set);

// ρ(k) = σ(k) for k ≤ m, ρ(m+k) = τ(k) + m.
Permutation concat_perm(const Permutation& sigma, const Permutation& tau);

// Shuffles that respect a cut: the first i+j entries of ρ shuffle the first
// i entries of σ with the first j of τ, and the remaining entries shuffle the
// rest. Labels are as in shuffles().
std::vector<Permutation> restricted_shuffles(const Permutation& sigma, const Permutation& tau,
                                             int i, int j);

// Σ(σ)(τ)(ζ) over {1..a}, {a+1..a+b}, {a+b+1..a+b+c}.
std::vector<Permutation> triple_shuffles(const Permutation& sigma, const Permutation& tau,
                                         const Permutation& zeta);

// Used for counting checks; exact for the small arguments this library sees.
unsigned long long binomial(int n, int k);

}  // namespace membrane
