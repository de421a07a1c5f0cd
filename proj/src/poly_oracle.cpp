#include <map>

#include "membrane/quad.hpp"

namespace membrane {

Rational chain_integral(const Rational& lo, const Rational& hi, const std::vector<int>& exponents) {
    // F_0 = 1, F_k(t) = ∫_lo^t F_{k-1}(s) s^{e_k} ds; answer F_n(hi)
    std::vector<Rational> F{Rational(1)};
    for (int e : exponents) {
        std::vector<Rational> G(F.size() + static_cast<std::size_t>(e) + 1);
        for (std::size_t j = 0; j < F.size(); ++j) {
            const std::size_t deg = j + static_cast<std::size_t>(e) + 1;
            G[deg] = F[j] / Rational(static_cast<long>(deg));
        }
        Rational at_lo = 0, pw = 1;
        for (std::size_t j = 0; j < G.size(); ++j, pw *= lo) at_lo += G[j] * pw;
        G[0] -= at_lo;
        F = std::move(G);
    }
    Rational v = 0, pw = 1;
    for (std::size_t j = 0; j < F.size(); ++j, pw *= hi) v += F[j] * pw;
    return v;
}

namespace {

void check_chain(const RationalAxisChain& c, int n) {
    if (!(c.lo < c.hi)) throw InvalidInput("axis range must satisfy lo < hi");
    if (c.cut && (!(c.lo < *c.cut && *c.cut < c.hi) || c.split < 0 || c.split > n))
        throw InvalidInput("invalid cut");
}

class ChainCache {
public:
    explicit ChainCache(const RationalAxisChain& c) : chain_(c) {}
    const Rational& operator()(const std::vector<int>& e) {
        auto it = memo_.find(e);
        if (it != memo_.end()) return it->second;
        Rational v;
        if (chain_.cut) {
            const auto k = static_cast<std::ptrdiff_t>(chain_.split);
            v = chain_integral(chain_.lo, *chain_.cut, std::vector<int>(e.begin(), e.begin() + k)) *
                chain_integral(*chain_.cut, chain_.hi, std::vector<int>(e.begin() + k, e.end()));
        } else {
            v = chain_integral(chain_.lo, chain_.hi, e);
        }
        return memo_.emplace(e, std::move(v)).first->second;
    }

private:
    RationalAxisChain chain_;
    std::map<std::vector<int>, Rational> memo_;
};

}  // namespace

Rational poly_oracle_chains(const std::vector<Form2>& forms, const Permutation& sx,
                            const Permutation& sy, const RationalAxisChain& x,
                            const RationalAxisChain& y) {
    const int n = static_cast<int>(forms.size());
    if (sx.size() != n || sy.size() != n) throw InvalidInput("poly_oracle: permutation size mismatch");
    for (const auto& f : forms)
        if (!f.is_polynomial()) throw InvalidInput("poly_oracle needs polynomial forms");
    check_chain(x, n);
    check_chain(y, n);
    ChainCache cx(x), cy(y);
    std::vector<int> ex(static_cast<std::size_t>(n)), ey(static_cast<std::size_t>(n));
    std::vector<const PolyTerm*> pick(static_cast<std::size_t>(n));
    Rational total = 0;
    // choose one term per form, then integrate each axis chain in its order
    std::function<void(int)> expand = [&](int p) {
        if (p == n) {
            Rational c = 1;
            for (int k = 1; k <= n; ++k) {
                ex[static_cast<std::size_t>(k - 1)] = pick[static_cast<std::size_t>(sx(k) - 1)]->px;
                ey[static_cast<std::size_t>(k - 1)] = pick[static_cast<std::size_t>(sy(k) - 1)]->py;
            }
            for (const auto* t : pick) c *= t->coeff;
            total += c * cx(ex) * cy(ey);
            return;
        }
        for (const auto& t : forms[static_cast<std::size_t>(p)].terms()) {
            pick[static_cast<std::size_t>(p)] = &t;
            expand(p + 1);
        }
    };
    expand(0);
    return total;
}

Rational poly_oracle(const std::vector<Form2>& forms, const Permutation& sx, const Permutation& sy,
                     const RationalRectangle& A) {
    return poly_oracle_chains(forms, sx, sy, {A.ax, A.bx, std::nullopt, 0},
                              {A.ay, A.by, std::nullopt, 0});
}

Rational poly_oracle_indexed(const std::vector<Form2>& forms, const Permutation& sx,
                             const Permutation& sy, int split, const RationalRectangle& A,
                             const RationalRectangle& B) {
    if (A.bx != B.ax || A.ay != B.ay || A.by != B.by)
        throw InvalidInput("B must sit directly to the right of A with the same y-extent");
    if (split < 0 || split > static_cast<int>(forms.size())) throw InvalidInput("split out of range");
    return poly_oracle_chains(forms, sx, sy, {A.ax, B.bx, A.bx, split}, {A.ay, A.by, std::nullopt, 0});
}

}  // namespace membrane
