#include "membrane/verify.hpp"

#include <cmath>
#include <map>

namespace membrane {

Form2 random_polynomial_form(std::mt19937_64& rng, int max_terms, int max_deg) {
    std::uniform_int_distribution<int> nterms(1, max_terms), deg(0, max_deg), num(1, 3), den(1, 3),
        sign(0, 1);
    std::map<std::pair<int, int>, Rational> terms;
    const int T = nterms(rng);
    for (int t = 0; t < T; ++t) {
        const int px = deg(rng), py = deg(rng);
        Rational c(num(rng) * (sign(rng) ? 1 : -1), den(rng));
        c.canonicalize();
        terms[{px, py}] += c;
    }
    std::vector<PolyTerm> out;
    for (const auto& [e, c] : terms)
        if (c != 0) out.push_back({c, e.first, e.second});
    if (out.empty()) out.push_back({Rational(1), 0, 0});
    return Form2::polynomial(std::move(out));
}

namespace {

double absd(const Rational& q) { return std::abs(q.get_d()); }
double absd(double v) { return std::abs(v); }

// Valuations of classes over A, B, A∪B and of indexed classes, memoized.
template <class V>
class Valuations {
public:
    Valuations(const std::vector<Form2>& alphabet, const RationalRectangle& A, const RationalRectangle& B,
               const NumericContext& ctx)
        : alphabet_(alphabet), A_(A), B_(B), ctx_(ctx) {}

    V on_A(const MonomialClass& c) { return cached(a_, c, chain(A_.ax, A_.bx), chain(A_.ay, A_.by), c); }
    V on_B(const MonomialClass& c) { return cached(b_, c, chain(B_.ax, B_.bx), chain(A_.ay, A_.by), c); }
    V on_union(const MonomialClass& c) {
        return cached(u_, c, chain(A_.ax, B_.bx), chain(A_.ay, A_.by), c);
    }
    V indexed(const IndexedMonomial& t) {
        RationalAxisChain x{A_.ax, B_.bx, std::nullopt, 0};
        if (*t.x_split >= 0) {
            x.cut = A_.bx;
            x.split = *t.x_split;
        }
        return cached(idx_, t, x, chain(A_.ay, A_.by), t.base());
    }

private:
    static RationalAxisChain chain(const Rational& lo, const Rational& hi) { return {lo, hi, std::nullopt, 0}; }

    template <class K>
    V cached(std::map<K, V>& memo, const K& key, const RationalAxisChain& x, const RationalAxisChain& y,
             const MonomialClass& c) {
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const auto forms = forms_for_word(alphabet_, c.word);
        const auto sx = Permutation::identity(c.degree());
        V v;
        if constexpr (std::is_same_v<V, Rational>) {
            v = poly_oracle_chains(forms, sx, c.sigma2, x, y);
        } else {
            AxisChain xd{x.lo.get_d(), x.hi.get_d(), std::nullopt, x.split, {}};
            if (x.cut) xd.cut = x.cut->get_d();
            AxisChain yd{y.lo.get_d(), y.hi.get_d(), std::nullopt, 0, {}};
            v = c.degree() == 0 ? 1.0 : eval_chains(forms, sx, c.sigma2, xd, yd, ctx_.cfg).value;
        }
        return memo.emplace(key, v).first->second;
    }

    std::vector<Form2> alphabet_;
    RationalRectangle A_, B_;
    NumericContext ctx_;
    std::map<MonomialClass, V> a_, b_, u_;
    std::map<IndexedMonomial, V> idx_;
};

template <class V>
void numeric_part(GluingReport& rep, const std::vector<Form2>& alphabet, int N, const RationalRectangle& A,
                  const RationalRectangle& B, const NumericContext& ctx) {
    Valuations<V> val(alphabet, A, B, ctx);
    const int k = static_cast<int>(alphabet.size());
    const auto classes = classes_up_to(k, N);
    for (const auto& c : classes) {
        V sum = 0;
        for (const auto& t : embed_i_terms(c)) sum += val.indexed(t);
        const V diff = val.on_union(c) - sum;
        rep.max_decomposition_deviation = std::max(rep.max_decomposition_deviation, absd(diff));
    }
    for (const auto& a : classes)
        for (const auto& b : classes) {
            if (a.degree() + b.degree() > N) continue;
            ++rep.pairs_checked;
            IndexedMonomial ia(a.word, a.sigma2, std::nullopt), ib(b.word, b.sigma2, std::nullopt);
            V sum = 0;
            for (const auto& t : merge_terms(ia, ib, AxisMerge::Concatenate, AxisMerge::Shuffle))
                sum += val.indexed(t);
            const V diff = val.on_A(a) * val.on_B(b) - sum;
            rep.max_cross_product_deviation = std::max(rep.max_cross_product_deviation, absd(diff));
        }
}

}  // namespace

GluingReport verify_gluing_theorem(const std::vector<Form2>& alphabet, int N, const RationalRectangle& A,
                           const RationalRectangle& B, const NumericContext& ctx) {
    if (A.bx != B.ax || A.ay != B.ay || A.by != B.by)
        throw InvalidInput("gluing check: B must share A's right face");
    if (alphabet.empty()) throw InvalidInput("empty alphabet");
    const int k = static_cast<int>(alphabet.size());
    GluingReport rep;
    rep.exact = ctx.exact;

    const std::function<Rational(const MonomialClass&)> one = [](const MonomialClass&) { return Rational(1); };
    const auto JA = truncated_J<Rational>(k, N, one);
    const auto lhs = times1(JA, JA);  // formal: same unit coefficients on both sides
    const auto rhs = embed_i(JA);
    for (const auto& [t, c] : rhs.terms()) {
        ++rep.indexed_checked;
        if (c != 1 || lhs.coefficient(t) != 1) ++rep.multiplicity_failures;
    }
    for (const auto& [t, c] : lhs.terms())
        if (rhs.coefficient(t) == 0) ++rep.multiplicity_failures;

    if (ctx.exact)
        numeric_part<Rational>(rep, alphabet, N, A, B, ctx);
    else
        numeric_part<double>(rep, alphabet, N, A, B, ctx);
    return rep;
}

Series<Rational> oracle_J(const std::vector<Form2>& alphabet, int N, const RationalRectangle& A) {
    const std::function<Rational(const MonomialClass&)> f = [&](const MonomialClass& c) {
        if (c.degree() == 0) return Rational(1);
        return poly_oracle(forms_for_word(alphabet, c.word), Permutation::identity(c.degree()), c.sigma2, A);
    };
    return truncated_J<Rational>(static_cast<int>(alphabet.size()), N, f);
}

Series<double> quadrature_J(const std::vector<Form2>& alphabet, int N, const Rectangle& A,
                            const QuadratureConfig& cfg) {
    const std::function<double(const MonomialClass&)> f = [&](const MonomialClass& c) {
        if (c.degree() == 0) return 1.0;
        return eval_iterated(forms_for_word(alphabet, c.word), Permutation::identity(c.degree()), c.sigma2, A,
                             cfg)
            .value;
    };
    return truncated_J<double>(static_cast<int>(alphabet.size()), N, f);
}

SuiteReport shuffle_relation_suite(int tuples, int max_total, std::uint64_t seed) {
    SuiteReport rep;
    rep.name = "shuffle-relation";
    std::mt19937_64 rng(seed);
    const RationalRectangle unit(0, 1, 0, 1);
    for (int t = 0; t < tuples; ++t) {
        std::vector<Form2> forms;
        for (int i = 0; i < max_total; ++i) forms.push_back(random_polynomial_form(rng));
        for (int n1 = 1; n1 < max_total; ++n1)
            for (int n2 = 1; n1 + n2 <= max_total; ++n2) {
                const std::vector<Form2> f1(forms.begin(), forms.begin() + n1);
                const std::vector<Form2> f2(forms.begin() + n1, forms.begin() + n1 + n2);
                const std::vector<Form2> all(forms.begin(), forms.begin() + n1 + n2);
                for (const auto& sx : all_permutations(n1))
                    for (const auto& sy : all_permutations(n1))
                        for (const auto& tx : all_permutations(n2))
                            for (const auto& ty : all_permutations(n2)) {
                                const Rational lhs = poly_oracle(f1, sx, sy, unit) * poly_oracle(f2, tx, ty, unit);
                                Rational rhs = 0;
                                for (const auto& rx : shuffles(sx, tx))
                                    for (const auto& ry : shuffles(sy, ty)) rhs += poly_oracle(all, rx, ry, unit);
                                ++rep.checks;
                                if (lhs != rhs) {
                                    ++rep.failures;
                                    rep.max_deviation = std::max(rep.max_deviation, absd(Rational(lhs - rhs)));
                                    if (rep.notes.size() < 5)
                                        rep.notes.push_back("tuple " + std::to_string(t) + " " + sx.str() + sy.str() +
                                                            tx.str() + ty.str());
                                }
                            }
            }
    }
    return rep;
}

SuiteReport lemma_suite(int tuples, int max_n, std::uint64_t seed) {
    SuiteReport rep;
    rep.name = "decomposition+cross-product";
    std::mt19937_64 rng(seed);
    const RationalRectangle A(0, 1, 0, 1), B(1, 2, 0, 1), AB(0, 2, 0, 1);
    auto record = [&](const Rational& d, const std::string& what) {
        ++rep.checks;
        if (d != 0) {
            ++rep.failures;
            rep.max_deviation = std::max(rep.max_deviation, absd(d));
            if (rep.notes.size() < 5) rep.notes.push_back(what);
        }
    };
    for (int t = 0; t < tuples; ++t) {
        std::vector<Form2> forms;
        for (int i = 0; i < max_n; ++i) forms.push_back(random_polynomial_form(rng));
        for (int n = 1; n <= max_n; ++n) {
            const std::vector<Form2> f(forms.begin(), forms.begin() + n);
            for (const auto& sx : all_permutations(n))
                for (const auto& sy : all_permutations(n)) {
                    Rational sum = 0;
                    for (int i = 0; i <= n; ++i) sum += poly_oracle_indexed(f, sx, sy, i, A, B);
                    record(poly_oracle(f, sx, sy, AB) - sum, "decomposition n=" + std::to_string(n) + " " + sx.str() + sy.str());
                }
        }
        for (int n1 = 1; n1 < max_n; ++n1)
            for (int n2 = 1; n1 + n2 <= max_n; ++n2) {
                const std::vector<Form2> f1(forms.begin(), forms.begin() + n1);
                const std::vector<Form2> f2(forms.begin() + n1, forms.begin() + n1 + n2);
                const std::vector<Form2> all(forms.begin(), forms.begin() + n1 + n2);
                for (const auto& sx : all_permutations(n1))
                    for (const auto& sy : all_permutations(n1))
                        for (const auto& tx : all_permutations(n2))
                            for (const auto& ty : all_permutations(n2)) {
                                const Rational lhs = poly_oracle(f1, sx, sy, A) * poly_oracle(f2, tx, ty, B);
                                Rational rhs = 0;
                                const auto rx = concat_perm(sx, tx);
                                for (const auto& ry : shuffles(sy, ty))
                                    rhs += poly_oracle_indexed(all, rx, ry, n1, A, B);
                                record(lhs - rhs, "cross product " + sx.str() + sy.str() + tx.str() + ty.str());
                            }
            }
    }
    return rep;
}

Form2 glue_horizontal(const Form2& left, const Form2& right, double cut) {
    return Form2::evaluator([left, right, cut](double x, double y) { return x < cut ? left(x, y) : right(x - cut, y); });
}

Form2 glue_vertical(const Form2& lower, const Form2& upper, double cut) {
    return Form2::evaluator([lower, upper, cut](double x, double y) { return y < cut ? lower(x, y) : upper(x, y - cut); });
}

namespace {

double trace_distance(const Membrane& a, double ax, double ay, const Membrane& b, double bx, double by) {
    const auto pa = a(ax, ay), pb = b(bx, by);
    double d = 0;
    for (std::size_t i = 0; i < pa.size(); ++i) d = std::max(d, std::abs(pa[i] - pb[i]));
    return d;
}

}  // namespace

CompositionReport composition_identity_check(const Membrane& d3, const Membrane& d1,
                                             const Membrane& d2, const Membrane& d0,
                                             const std::vector<Target2Form>& alphabet, int N,
                                             const QuadratureConfig& cfg, double tolerance) {
    const int dim = d3.target_dim;
    for (const Membrane* m : {&d1, &d2, &d0})
        if (m->target_dim != dim) throw InvalidInput("composition check: membranes have different targets");
    for (const auto& w : alphabet)
        if (w.dim != dim) throw InvalidInput("composition check: form dimension differs from target");

    // adjacency and shared outer boundary, sampled
    constexpr int S = 64;
    double glue = 0, outer = 0;
    auto H = [&](double x, double y, double& hx, double& hy, const Membrane*& m) {
        m = x < 0.5 ? &d3 : &d1;
        hx = x < 0.5 ? 2 * x : 2 * x - 1;
        hy = y;
    };
    auto V = [&](double x, double y, double& vx, double& vy, const Membrane*& m) {
        m = y < 0.5 ? &d2 : &d0;
        vx = x;
        vy = y < 0.5 ? 2 * y : 2 * y - 1;
    };
    for (int i = 0; i <= S; ++i) {
        const double s = static_cast<double>(i) / S;
        glue = std::max(glue, trace_distance(d3, 1, s, d1, 0, s));
        glue = std::max(glue, trace_distance(d2, s, 1, d0, s, 0));
        const double pts[4][2] = {{s, 0}, {1, s}, {s, 1}, {0, s}};
        for (const auto& p : pts) {
            double hx, hy, vx, vy;
            const Membrane *mh, *mv;
            H(p[0], p[1], hx, hy, mh);
            V(p[0], p[1], vx, vy, mv);
            outer = std::max(outer, trace_distance(*mh, hx, hy, *mv, vx, vy));
        }
    }
    if (glue > 1e-9) throw InvalidInput("composition check: glued faces do not match");
    if (outer > 1e-9) throw InvalidInput("composition check: composites do not share their boundary");

    std::vector<Form2> horiz, vert;
    for (const auto& w : alphabet) {
        horiz.push_back(glue_horizontal(pullback_form(d3, w), pullback_form(d1, w)));
        vert.push_back(glue_vertical(pullback_form(d2, w), pullback_form(d0, w)));
    }

    const int k = static_cast<int>(alphabet.size());
    const std::function<Rational(const MonomialClass&)> one = [](const MonomialClass&) { return Rational(1); };
    const auto J = truncated_J<Rational>(k, N, one);
    const auto h_terms = times1(J, J);
    const auto v_terms = times2(J, J);

    CompositionReport rep;
    rep.tolerance = tolerance;
    rep.max_deviation_by_degree.assign(static_cast<std::size_t>(N + 1), 0.0);
    std::map<MonomialClass, double> hval, vval;
    for (const auto& [t, c] : h_terms.terms()) {
        double v = 1;
        if (t.degree() > 0)
            v = eval_chains(forms_for_word(horiz, t.word), Permutation::identity(t.degree()), t.sigma2,
                            AxisChain{0, 2, 1.0, *t.x_split, {}}, AxisChain{0, 1, {}, 0, {}}, cfg)
                    .value;
        hval[t.base()] += c.get_d() * v;
    }
    for (const auto& [t, c] : v_terms.terms()) {
        double v = 1;
        if (t.degree() > 0)
            v = eval_chains(forms_for_word(vert, t.word), Permutation::identity(t.degree()), t.sigma2,
                            AxisChain{0, 1, {}, 0, {}}, AxisChain{0, 2, 1.0, *t.y_split, {}}, cfg)
                    .value;
        vval[t.base()] += c.get_d() * v;
    }
    for (const auto& [c, _] : J.terms()) {
        CompositionEntry e{c, hval[c], vval[c]};
        const double d = std::abs(e.horizontal - e.vertical);
        auto& slot = rep.max_deviation_by_degree[static_cast<std::size_t>(c.degree())];
        slot = std::max(slot, d);
        rep.max_deviation = std::max(rep.max_deviation, d);
        rep.entries.push_back(std::move(e));
    }
    rep.passed = rep.max_deviation <= tolerance;
    return rep;
}

}  // namespace membrane

namespace membrane {

std::vector<Target2Form> scenario_forms() {
    return {Target2Form::planar_polynomial({{Rational(1), 0, 0}, {Rational(1), 1, 0}}),
            Target2Form::planar_polynomial({{Rational(1), 1, 1}}),
            Target2Form::planar_polynomial({{Rational(1), 0, 2}, {Rational(-1, 2), 1, 0}})};
}

namespace {
void tilt(double, double, double* d) {
    d[0] = 1;
    d[1] = 0.5;
}
void twist(double x, double y, double* d) {
    d[0] = y - 0.5;
    d[1] = 0.5 - x;
}
}  // namespace

std::pair<Membrane, Membrane> homotopy_scenario(double amplitude) {
    const auto id = identity_membrane();
    return {id, perturbed_membrane(id, amplitude, tilt)};
}

CocycleScenario cocycle_scenario(double amplitude) {
    CocycleScenario c;
    c.d3 = perturbed_membrane(affine_membrane(0.5, 0, 0, 1, 0, 0), amplitude, tilt);
    c.d1 = perturbed_membrane(affine_membrane(0.5, 0, 0, 1, 0.5, 0), amplitude, twist);
    c.d2 = perturbed_membrane(affine_membrane(1, 0, 0, 0.5, 0, 0), amplitude, twist);
    c.d0 = perturbed_membrane(affine_membrane(1, 0, 0, 0.5, 0, 0.5), amplitude, tilt);
    return c;
}

}  // namespace membrane
