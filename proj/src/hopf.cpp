#include "membrane/hopf.hpp"

#include <cmath>
#include <tuple>

namespace membrane {

namespace {

std::string word_str(const Word& w) {
    std::string s;
    for (int l : w) s += "z" + std::to_string(l);
    return s.empty() ? "1" : s;
}

std::strong_ordering compare_core(const Word& wa, const Permutation& pa, const Word& wb,
                                  const Permutation& pb) {
    if (auto c = wa.size() <=> wb.size(); c != 0) return c;
    if (auto c = wa <=> wb; c != 0) return c;
    return pa <=> pb;
}

Word concat_words(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

}  // namespace

MonomialClass::MonomialClass(Word w, Permutation s2) : word(std::move(w)), sigma2(std::move(s2)) {
    if (sigma2.size() != degree())
        throw InvalidInput("class " + word_str(word) + " has permutation of wrong size " +
                           sigma2.str());
}

std::string MonomialClass::str() const { return "(" + word_str(word) + "," + sigma2.str() + ")"; }

std::strong_ordering MonomialClass::operator<=>(const MonomialClass& o) const {
    return compare_core(word, sigma2, o.word, o.sigma2);
}

IndexedMonomial::IndexedMonomial(Word w, Permutation s2, std::optional<int> xs,
                                 std::optional<int> ys)
    : word(std::move(w)), sigma2(std::move(s2)), x_split(xs), y_split(ys) {
    if (sigma2.size() != degree()) throw InvalidInput("indexed monomial: permutation size mismatch");
    for (auto sp : {x_split, y_split})
        if (sp && (*sp < 0 || *sp > degree()))
            throw InvalidInput("indexed monomial: split out of range");
}

std::string IndexedMonomial::str() const {
    std::string s = "(" + word_str(word) + "," + sigma2.str();
    if (x_split) s += ",x|" + std::to_string(*x_split);
    if (y_split) s += ",y|" + std::to_string(*y_split);
    return s + ")";
}

std::strong_ordering IndexedMonomial::operator<=>(const IndexedMonomial& o) const {
    if (auto c = compare_core(word, sigma2, o.word, o.sigma2); c != 0) return c;
    if (auto c = x_split <=> o.x_split; c != 0) return c;
    return y_split <=> o.y_split;
}

MonomialClass canonicalize(const Word& word, const Permutation& sigma1, const Permutation& sigma2) {
    const int n = static_cast<int>(word.size());
    if (sigma1.size() != n || sigma2.size() != n)
        throw InvalidInput("canonicalize: permutation sizes must equal the word length");
    Word w(word.size());
    for (int k = 1; k <= n; ++k) w[static_cast<std::size_t>(k - 1)] = word[static_cast<std::size_t>(sigma1(k) - 1)];
    return {std::move(w), compose(sigma1.inverse(), sigma2)};
}

namespace {

struct AxisCandidates {
    std::vector<Permutation> orders;
    std::optional<int> split;
};

AxisCandidates axis_candidates(AxisMerge mode, const Permutation& sa, std::optional<int> cut_a,
                               const Permutation& sb, std::optional<int> cut_b, const char* axis) {
    const bool has_a = cut_a.has_value(), has_b = cut_b.has_value();
    switch (mode) {
        case AxisMerge::Shuffle:
            if (has_a || has_b)
                throw InvalidInput(std::string("plain shuffle on the ") + axis +
                                   "-axis of a split monomial");
            return {shuffles(sa, sb), std::nullopt};
        case AxisMerge::Restricted:
            if (!has_a || !has_b)
                throw InvalidInput(std::string("restricted product needs ") + axis +
                                   "-splits on both factors");
            return {restricted_shuffles(sa, sb, *cut_a, *cut_b), *cut_a + *cut_b};
        case AxisMerge::Concatenate:
            if (has_a || has_b)
                throw InvalidInput(std::string("cannot glue along the ") + axis +
                                   "-axis twice");
            return {{concat_perm(sa, sb)}, sa.size()};
    }
    return {};
}

}  // namespace

std::vector<IndexedMonomial> merge_terms(const IndexedMonomial& a, const IndexedMonomial& b,
                                         AxisMerge x, AxisMerge y) {
    const auto xs = axis_candidates(x, Permutation::identity(a.degree()), a.x_split,
                                    Permutation::identity(b.degree()), b.x_split, "x");
    const auto ys = axis_candidates(y, a.sigma2, a.y_split, b.sigma2, b.y_split, "y");
    const Word w = concat_words(a.word, b.word);
    std::vector<IndexedMonomial> out;
    out.reserve(xs.orders.size() * ys.orders.size());
    for (const auto& rx : xs.orders)
        for (const auto& ry : ys.orders) {
            auto c = canonicalize(w, rx, ry);
            out.emplace_back(std::move(c.word), std::move(c.sigma2), xs.split, ys.split);
        }
    return out;
}

std::vector<MonomialClass> mul_terms(const MonomialClass& a, const MonomialClass& b) {
    const Word w = concat_words(a.word, b.word);
    const auto xs = shuffles(Permutation::identity(a.degree()), Permutation::identity(b.degree()));
    const auto ys = shuffles(a.sigma2, b.sigma2);
    std::vector<MonomialClass> out;
    out.reserve(xs.size() * ys.size());
    for (const auto& rx : xs)
        for (const auto& ry : ys) out.push_back(canonicalize(w, rx, ry));
    return out;
}

std::vector<IndexedMonomial> mul_RAB_terms(const IndexedMonomial& a, const IndexedMonomial& b) {
    return merge_terms(a, b, AxisMerge::Restricted, AxisMerge::Shuffle);
}

std::vector<IndexedMonomial> embed_i_terms(const MonomialClass& m) {
    std::vector<IndexedMonomial> out;
    for (int j = 0; j <= m.degree(); ++j) out.emplace_back(m.word, m.sigma2, j);
    return out;
}

std::vector<IndexedMonomial> embed_i2_terms(const MonomialClass& m) {
    std::vector<IndexedMonomial> out;
    for (int j = 0; j <= m.degree(); ++j) out.emplace_back(m.word, m.sigma2, std::nullopt, j);
    return out;
}

std::vector<std::pair<MonomialClass, MonomialClass>> coproduct_terms(const MonomialClass& m) {
    const int n = m.degree();
    std::vector<std::pair<MonomialClass, MonomialClass>> out;
    int prefix_max = 0;
    for (int i = 0; i <= n; ++i) {
        if (i > 0) prefix_max = std::max(prefix_max, m.sigma2(i));
        if (prefix_max != i) continue;  // σ₂ does not preserve {1..i}
        std::vector<int> left, right;
        for (int k = 1; k <= i; ++k) left.push_back(m.sigma2(k));
        for (int k = i + 1; k <= n; ++k) right.push_back(m.sigma2(k) - i);
        Word wl(m.word.begin(), m.word.begin() + i), wr(m.word.begin() + i, m.word.end());
        out.emplace_back(MonomialClass(std::move(wl), Permutation(std::move(left))),
                         MonomialClass(std::move(wr), Permutation(std::move(right))));
    }
    return out;
}

TensorSeries<Rational> coproduct(const MonomialClass& m, int truncation) {
    TensorSeries<Rational> out{truncation, {}};
    for (const auto& [l, r] : coproduct_terms(m)) out.add(l, r, Rational(1));
    return out;
}

const Series<Rational>& Antipode::operator()(const MonomialClass& m) {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    Series<Rational> s(alphabet_, truncation_);
    if (m.degree() == 0) {
        s.add(m, Rational(1));
    } else {
        s.add(m, Rational(-1));
        for (const auto& [l, r] : coproduct_terms(m)) {
            if (l.degree() == 0 || r.degree() == 0) continue;
            Series<Rational> right(alphabet_, truncation_);
            right.add(r, Rational(1));
            // std::map references survive the insertions made by the recursion
            s -= mul_RA((*this)(l), right);
        }
    }
    return cache_.emplace(m, std::move(s)).first->second;
}

Series<Rational> antipode(const MonomialClass& m, int alphabet) {
    Antipode table(alphabet, m.degree());
    return table(m);
}

std::vector<MonomialClass> classes_of_degree(int alphabet, int n) {
    std::vector<MonomialClass> out;
    const auto perms = all_permutations(n);
    Word w(static_cast<std::size_t>(n), 1);
    while (true) {
        for (const auto& p : perms) out.emplace_back(w, p);
        int k = n - 1;
        while (k >= 0 && w[static_cast<std::size_t>(k)] == alphabet) w[static_cast<std::size_t>(k--)] = 1;
        if (k < 0) break;
        ++w[static_cast<std::size_t>(k)];
    }
    return out;
}

std::vector<MonomialClass> classes_up_to(int alphabet, int max_degree) {
    std::vector<MonomialClass> out;
    for (int n = 0; n <= max_degree; ++n) {
        auto c = classes_of_degree(alphabet, n);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

namespace {

using Triple = std::tuple<MonomialClass, MonomialClass, MonomialClass>;

template <class K>
void bump(std::map<K, int>& m, const K& k, int by = 1) {
    auto& v = m[k];
    v += by;
    if (v == 0) m.erase(k);
}

void note(AxiomReport& r, const std::string& msg) {
    if (r.first_failures.size() < 10) r.first_failures.push_back(msg);
}

}  // namespace

AxiomReport verify_hopf_axioms(int alphabet, int max_degree) {
    AxiomReport report;
    Antipode S(alphabet, max_degree);
    const auto classes = classes_up_to(alphabet, max_degree);
    const MonomialClass one;
    for (const auto& c : classes) {
        ++report.classes_checked;
        const auto delta = coproduct_terms(c);

        std::map<Triple, int> lhs, rhs;
        for (const auto& [l, r] : delta) {
            for (const auto& [ll, lr] : coproduct_terms(l)) bump(lhs, Triple{ll, lr, r});
            for (const auto& [rl, rr] : coproduct_terms(r)) bump(rhs, Triple{l, rl, rr});
        }
        if (lhs != rhs) {
            ++report.coassociativity_failures;
            note(report, "coassociativity " + c.str());
        }

        std::map<MonomialClass, int> left_counit, right_counit;
        for (const auto& [l, r] : delta) {
            if (l.degree() == 0) bump(left_counit, r);
            if (r.degree() == 0) bump(right_counit, l);
        }
        const std::map<MonomialClass, int> expect{{c, 1}};
        if (left_counit != expect || right_counit != expect) {
            ++report.counit_failures;
            note(report, "counit " + c.str());
        }

        Series<Rational> conv_left(alphabet, max_degree), conv_right(alphabet, max_degree);
        for (const auto& [l, r] : delta) {
            Series<Rational> ls(alphabet, max_degree), rs(alphabet, max_degree);
            ls.add(l, 1);
            rs.add(r, 1);
            conv_left += mul_RA(S(l), rs);
            conv_right += mul_RA(ls, S(r));
        }
        Series<Rational> unit_eps(alphabet, max_degree);
        if (c.degree() == 0) unit_eps.add(one, 1);
        if (!(conv_left == unit_eps) || !(conv_right == unit_eps)) {
            ++report.antipode_failures;
            note(report, "antipode " + c.str());
        }
    }

    // Δ(ab) = Δ(a)Δ(b): both sides as multisets of tensor pairs
    for (const auto& a : classes)
        for (const auto& b : classes) {
            if (a.degree() + b.degree() > max_degree) continue;
            ++report.pairs_checked;
            using Pair = std::pair<MonomialClass, MonomialClass>;
            std::map<Pair, int> lhs, rhs;
            for (const auto& c : mul_terms(a, b))
                for (const auto& t : coproduct_terms(c)) bump(lhs, t);
            for (const auto& [al, ar] : coproduct_terms(a))
                for (const auto& [bl, br] : coproduct_terms(b))
                    for (const auto& l : mul_terms(al, bl))
                        for (const auto& r : mul_terms(ar, br)) bump(rhs, Pair{l, r});
            if (lhs != rhs) {
                ++report.bialgebra_failures;
                note(report, "bialgebra " + a.str() + "*" + b.str());
            }
        }
    return report;
}

namespace {

template <class Coeff>
GroupLikeReport group_like_impl(const Series<Coeff>& J) {
    GroupLikeReport report;
    const int N = J.truncation();
    const auto classes = classes_up_to(J.alphabet(), N);
    std::map<std::pair<MonomialClass, MonomialClass>, int> mult;
    for (const auto& c : classes)
        for (const auto& t : coproduct_terms(c)) ++mult[t];

    for (const auto& a : classes)
        for (const auto& b : classes) {
            if (a.degree() + b.degree() > N) continue;
            ++report.pairs_checked;
            const Coeff ja = J.coefficient(a), jb = J.coefficient(b);
            const Coeff prod = ja * jb;
            auto it = mult.find({a, b});
            const int m = it == mult.end() ? 0 : it->second;
            if (m != 1) ++report.multiplicity_failures;
            const Coeff dev = Coeff(m - 1) * prod;
            report.max_coproduct_deviation =
                std::max(report.max_coproduct_deviation, std::abs(to_double(Coeff(dev))));

            Coeff sum(0);
            for (const auto& c : mul_terms(a, b)) sum += J.coefficient(c);
            const Coeff diff = prod - sum;
            report.max_character_deviation =
                std::max(report.max_character_deviation, std::abs(to_double(diff)));
        }
    return report;
}

}  // namespace

GroupLikeReport group_like_check(const Series<Rational>& J) { return group_like_impl(J); }
GroupLikeReport group_like_check(const Series<double>& J) { return group_like_impl(J); }

}  // namespace membrane
