#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "membrane/zeta.hpp"

namespace membrane {

namespace {

constexpr double kPi = std::numbers::pi;

// ∫_0^{log U} f(e^v) dv on equal panels of width ≤ width.
template <class F>
double log_integral(F&& f, double U, int q, double width) {
    if (U <= 1) return 0;
    const double L = std::log(U);
    const int panels = std::max(1, static_cast<int>(std::ceil(L / width)));
    const double h = L / panels;
    const auto& rule = gauss_legendre01(q);
    std::vector<double> parts;
    parts.reserve(static_cast<std::size_t>(panels) * rule.size());
    for (int p = 0; p < panels; ++p)
        for (const auto& [z, w] : rule) parts.push_back(h * w * f(std::exp((p + z) * h)));
    return pairwise_sum(parts);
}

double min_norm(const Lattice2& L) {
    double m = std::max(L.a, L.c);
    L.enumerate(m, [&](double Q) { m = std::min(m, Q); });
    return m;
}

// Bound on ∫_U^∞ φ(u) u^{p-1} du when φ is a sum of e^{-πuQ} with Q ≥ qmin.
double exp_tail(double phi_U, double U, double p, double qmin) {
    const double rate = kPi * qmin - std::max(0.0, p - 1) / U;
    if (rate <= 0) return std::numeric_limits<double>::infinity();
    return phi_U * std::pow(U, p - 1) / rate;
}

struct FoldSide {
    std::function<ThetaValue(double)> theta;  // direct sum, u ≥ 1
    double qmin;
};

}  // namespace

ZetaResult completed_zeta(const NumberFieldSpec& K, double s, const TruncationPolicy& trunc,
                          const QuadratureConfig& cfg) {
    trunc.validate();
    cfg.validate();
    if (K.kind == FieldKind::RealQuadratic)
        throw InvalidInput("real quadratic fields go through the membrane integral");
    if (!std::isfinite(s)) throw InvalidInput("s must be finite");

    double e, half_rank, covol;
    FoldSide direct, dual;
    if (K.kind == FieldKind::Rational) {
        e = s / 2;
        half_rank = 0.5;
        covol = 1;
        direct = {[trunc](double u) { return theta_rational(u, trunc); }, 1.0};
        dual = direct;
    } else {
        const Lattice2 L = imag_quadratic_lattice(K), Ls = L.dual();
        e = s;
        half_rank = 1;
        covol = std::sqrt(L.det());
        const double r = trunc.radius;
        direct = {[L, r](double u) { return L.theta_direct(u, r); }, min_norm(L)};
        dual = {[Ls, r](double u) { return Ls.theta_direct(u, r); }, min_norm(Ls)};
    }
    if (e == 0 || e == half_rank) throw DomainError("the completed zeta function has a pole at s = " + std::to_string(s));

    // t ∈ [1, t_max] directly; t ∈ [t_min, 1] through u = 1/t on the dual side
    const double U1 = std::max(1.0, trunc.t_max), U2 = std::max(1.0, 1 / trunc.t_min);
    const double p1 = e, p2 = half_rank - e;
    auto run = [&](int q, double* lattice) {
        std::vector<double> tails;
        auto side = [&](const FoldSide& S, double p, double U, double scale) {
            return log_integral(
                [&](double u) {
                    const auto th = S.theta(u);
                    if (lattice) *lattice += scale * th.tail_bound * std::pow(u, p);
                    return th.minus_one * std::pow(u, p);
                },
                U, q, 0.25);
        };
        const double I1 = side(direct, p1, U1, 1.0);
        const double I2 = side(dual, p2, U2, 1 / covol);
        return I1 + I2 / covol + 1 / (covol * (e - half_rank)) - 1 / e;
    };

    ZetaResult r;
    double lattice = 0;
    r.value = run(20, &lattice);
    r.est_error = std::abs(r.value - run(14, nullptr));
    r.tails.lattice = lattice;
    r.tails.large_t = exp_tail(direct.theta(U1).minus_one, U1, p1, direct.qmin);
    r.tails.small_t = exp_tail(dual.theta(U2).minus_one, U2, p2, dual.qmin) / covol;
    r.normalization = K.kind == FieldKind::Rational ? "pi^(-s/2) Gamma(s/2) zeta(s) * 2"
                                                    : "w pi^(-s) Gamma(s) zeta_K(s)";
    r.notes.push_back("[0,1] folded onto [1,inf) by Poisson summation; valid for all s except the poles");
    const double total = r.tails.large_t + r.tails.small_t + r.tails.lattice;
    if (total > cfg.abs_tolerance)
        throw AccuracyError("truncation tail " + std::to_string(total) + " exceeds tolerance; raise t_max or lower t_min",
                            total, cfg.abs_tolerance);
    return r;
}

// --- iterated path integrals ------------------------------------------------

namespace {

std::vector<PowerTerm> multiply(const std::vector<PowerTerm>& a, const std::vector<PowerTerm>& b) {
    std::vector<PowerTerm> out;
    for (const auto& x : a)
        for (const auto& y : b) {
            const double p = x.power + y.power;
            auto it = std::find_if(out.begin(), out.end(), [&](const PowerTerm& t) { return std::abs(t.power - p) < 1e-12; });
            if (it == out.end())
                out.push_back({x.coeff * y.coeff, p});
            else
                it->coeff += x.coeff * y.coeff;
        }
    return out;
}

double eval_terms(const std::vector<PowerTerm>& f, double t) {
    double v = 0;
    for (const auto& term : f) v += term.coeff * std::pow(t, term.power);
    return v;
}

// Q[j][k] = ∫_{-1}^{x_j} ℓ_k(y) dy for the Lagrange basis on the Gauss nodes.
struct SpectralRule {
    std::vector<double> x, w;  // on [-1, 1]
    std::vector<std::vector<double>> Q;
};

SpectralRule spectral_rule(int q) {
    SpectralRule R;
    for (const auto& [z, w] : gauss_legendre01(q)) {
        R.x.push_back(2 * z - 1);
        R.w.push_back(2 * w);
    }
    auto lagrange = [&](int k, double y) {
        double v = 1;
        for (int i = 0; i < q; ++i)
            if (i != k) v *= (y - R.x[static_cast<std::size_t>(i)]) / (R.x[static_cast<std::size_t>(k)] - R.x[static_cast<std::size_t>(i)]);
        return v;
    };
    R.Q.assign(static_cast<std::size_t>(q), std::vector<double>(static_cast<std::size_t>(q), 0));
    for (int j = 0; j < q; ++j) {
        const double half = (R.x[static_cast<std::size_t>(j)] + 1) / 2;
        for (int k = 0; k < q; ++k) {
            double s = 0;
            for (int m = 0; m < q; ++m) s += R.w[static_cast<std::size_t>(m)] * lagrange(k, -1 + half * (1 + R.x[static_cast<std::size_t>(m)]));
            R.Q[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = half * s;
        }
    }
    return R;
}

double path_value(const std::vector<PathLetter>& letters, const TruncationPolicy& trunc, int q, double width,
                  double* tail_estimate) {
    const double v0 = std::log(trunc.t_min), v1 = std::log(trunc.t_max);
    const int panels = std::max(1, static_cast<int>(std::ceil((v1 - v0) / width)));
    const double h = (v1 - v0) / panels;
    const auto R = spectral_rule(q);
    const std::size_t nq = static_cast<std::size_t>(q), N = static_cast<std::size_t>(panels) * nq;

    std::vector<double> vs(N);
    for (int p = 0; p < panels; ++p)
        for (std::size_t j = 0; j < nq; ++j) vs[static_cast<std::size_t>(p) * nq + j] = v0 + h * (p + (R.x[j] + 1) / 2);

    std::vector<double> F(N, 1.0), G(N);
    std::vector<PowerTerm> series{{1.0, 0.0}};
    double end = 1, tail = 0;
    for (const auto& letter : letters) {
        series = multiply(series, letter.small_t);
        for (auto& term : series) {
            if (term.power <= -1) throw DomainError("iterated integral diverges at t = 0 (power " + std::to_string(term.power) + ")");
            term.coeff /= term.power + 1;
            term.power += 1;
        }
        const double g_end = letter.g(trunc.t_max);
        tail += std::abs(g_end) * trunc.t_max * std::max(1.0, std::abs(end));
        double start = eval_terms(series, trunc.t_min);
        std::vector<double> I(nq);
        for (int p = 0; p < panels; ++p) {
            const std::size_t base = static_cast<std::size_t>(p) * nq;
            for (std::size_t j = 0; j < nq; ++j) {
                const double t = std::exp(vs[base + j]);
                I[j] = letter.g(t) * t * F[base + j];
            }
            double total = 0;
            for (std::size_t j = 0; j < nq; ++j) {
                double acc = 0;
                for (std::size_t k = 0; k < nq; ++k) acc += R.Q[j][k] * I[k];
                G[base + j] = start + h / 2 * acc;
                total += R.w[j] * I[j];
            }
            start += h / 2 * total;
        }
        end = start;
        F.swap(G);
    }
    if (tail_estimate) *tail_estimate = tail;
    return end;
}

}  // namespace

ZetaResult path_iterated_integral(const std::vector<PathLetter>& letters, const TruncationPolicy& trunc, int points,
                                  double panel_width) {
    trunc.validate();
    if (letters.empty()) throw InvalidInput("a path word needs at least one letter");
    if (points < 4 || points > 64) throw InvalidInput("points must lie in [4, 64]");
    if (!(panel_width > 0)) throw InvalidInput("panel width must be positive");
    ZetaResult r;
    r.value = path_value(letters, trunc, points, panel_width, &r.tails.large_t);
    r.est_error = std::abs(r.value - path_value(letters, trunc, points - 4, panel_width, nullptr));
    return r;
}

namespace {

struct ThetaLetterShape {
    double dual_coeff;  // θ - 1 ≈ dual_coeff t^{-r/2} - 1 as t → 0
    double half_rank;
};

ThetaLetterShape theta_shape(const NumberFieldSpec& K) {
    switch (K.kind) {
        case FieldKind::Rational: return {1.0, 0.5};
        case FieldKind::ImagQuadratic: return {1 / std::sqrt(imag_quadratic_lattice(K).det()), 1.0};
        case FieldKind::RealQuadratic: break;
    }
    throw InvalidInput("real quadratic fields go through the membrane integral");
}

}  // namespace

ZetaResult multiple_completed_zeta_path(const NumberFieldSpec& K, const std::vector<double>& s,
                                        const TruncationPolicy& trunc, const QuadratureConfig& cfg) {
    cfg.validate();
    if (s.empty()) throw InvalidInput("need at least one exponent");
    const auto shape = theta_shape(K);
    const double scale = K.kind == FieldKind::Rational ? 0.5 : 1.0;  // t^{s/2} over ℚ
    std::vector<PathLetter> letters;
    double small_t = 0;
    for (double sk : s) {
        const double e = scale * sk;
        if (!(e > shape.half_rank)) throw DomainError("each exponent must exceed 1 for the iterated integral to converge");
        letters.push_back({[K, e](double t) { return theta_minus_one(K, t) * std::pow(t, e - 1); },
                           {{shape.dual_coeff, e - 1 - shape.half_rank}, {-1.0, e - 1}}});
        // size of what the power terms miss at t_min, times the length of [0, t_min]
        const double t0 = trunc.t_min;
        small_t += std::abs(letters.back().g(t0) - eval_terms(letters.back().small_t, t0)) * t0;
    }
    auto r = path_iterated_integral(letters, trunc, std::max(cfg.points, 8) * 3, 0.5);
    r.tails.small_t = small_t;
    r.normalization = K.kind == FieldKind::Rational ? "each letter (theta-1)(t) t^(s_k/2) dt/t" : "each letter (theta_K-1)(t) t^(s_k) dt/t";
    r.notes.push_back("letter k sits at the k-th smallest t");
    if (cfg.method == Method::MonteCarlo) r.notes.push_back("path integrals always use the spectral Gauss engine");
    return r;
}

std::complex<double> word_encoded_path_integral(const NumberFieldSpec& K, const std::vector<bool>& word,
                                                const TruncationPolicy& trunc) {
    if (word.empty()) throw InvalidInput("empty word");
    if (!word.back()) throw DomainError("a word ending in dz diverges at infinity");
    const auto shape = theta_shape(K);
    std::vector<PathLetter> letters;
    for (bool theta : word) {
        if (theta)
            letters.push_back({[K](double t) { return theta_minus_one(K, t); },
                               {{shape.dual_coeff, -shape.half_rank}, {-1.0, 0.0}}});
        else
            letters.push_back({[](double) { return 1.0; }, {{1.0, 0.0}}});
    }
    const double real = path_iterated_integral(letters, trunc).value;
    // dz = i dt on the imaginary axis
    std::complex<double> phase{1, 0};
    for (std::size_t k = 0; k < word.size(); ++k) phase *= std::complex<double>{0, 1};
    return phase * real;
}

// --- the geodesic membrane --------------------------------------------------

Membrane membrane_M(const NumberFieldSpec& K, const TruncationPolicy& trunc) {
    if (K.kind != FieldKind::RealQuadratic) throw InvalidInput("the membrane needs a real quadratic field");
    trunc.validate();
    const double l0 = std::log(trunc.t_min), dl = std::log(trunc.t_max) - l0, L = K.membrane_width();
    Membrane m;
    m.target_dim = 4;
    m.map = [=](double u, double w, double* out) {
        const double t = std::exp(l0 + u * dl), x = w * L;
        out[0] = 0;
        out[1] = t * std::exp(x);
        out[2] = 0;
        out[3] = t * std::exp(-x);
    };
    m.partials = [=](double u, double w, double* du, double* dw) {
        const double t = std::exp(l0 + u * dl), x = w * L;
        const double z1 = t * std::exp(x), z2 = t * std::exp(-x);
        du[0] = du[2] = dw[0] = dw[2] = 0;
        du[1] = z1 * dl;
        du[3] = z2 * dl;
        dw[1] = z1 * L;
        dw[3] = -z2 * L;
    };
    m.faces = {"gamma_{0,1,inf}: z1 = z2 (x = 0)", "t = t_max, toward the cusp at inf",
               "gamma_{0,u^2,inf} = A_{u^2} gamma_{0,1,inf}: z1 = u1^4 z2 (x = 2 log u1)", "t = t_min, toward the cusp at 0"};
    return m;
}

namespace {

// Upper bound for the single integral ∫∫|θ-1| t^{s-1} dt dx over one period:
// π^{-s} Γ(s/2)² ζ_K(s) with ζ_K(s) ≤ ζ(s)² ≤ (s/(s-1))².
double single_bound(double s) {
    const double z = s / (s - 1);
    return std::pow(kPi, -s) * std::tgamma(s / 2) * std::tgamma(s / 2) * z * z;
}

// ∫_0^{t0} (θ-1) t^{s-1} dt over the period, from θ ≈ 1/(t√D_K) below t0.
double corner_term(double s, double t0, double L, double D) {
    return L * (std::pow(t0, s - 1) / ((s - 1) * std::sqrt(D)) - std::pow(t0, s) / s);
}

}  // namespace

ZetaResult multiple_completed_dedekind_2d(const NumberFieldSpec& K, const std::vector<double>& s,
                                          const Permutation& sigma1, const Permutation& sigma2,
                                          const TruncationPolicy& trunc, const QuadratureConfig& cfg) {
    if (K.kind != FieldKind::RealQuadratic) throw InvalidInput("the membrane integral needs a real quadratic field");
    trunc.validate();
    cfg.validate();
    const int d = static_cast<int>(s.size());
    if (d == 0) throw InvalidInput("need at least one exponent");
    if (sigma1.size() != d || sigma2.size() != d) throw InvalidInput("permutations must have one entry per exponent");
    for (double sk : s)
        if (!(sk > 1)) throw DomainError("each exponent must exceed 1 for the membrane integral to converge");

    const double L = K.membrane_width(), D = K.discriminant;
    ZetaResult r;
    r.normalization = "(1/2)(theta_K-1)(-z1 z2)^(s/2) dz1/z1^dz2/z2 = (theta_K-1) t^(s-1) dt dx; d=1 gives pi^(-s) Gamma(s/2)^2 zeta_K(s)";

    double t0 = trunc.t_min;
    double corner = 0;
    if (d == 1) {
        corner = corner_term(s[0], t0, L, D);
    } else {
        // the σ₁-first point has the smallest t; shrink t_min until that corner is negligible
        const double sf = s[static_cast<std::size_t>(sigma1(1) - 1)];
        double others = 1;
        for (int k = 0; k < d; ++k)
            if (k != sigma1(1) - 1) others *= single_bound(s[static_cast<std::size_t>(k)]);
        auto bound = [&](double t) { return corner_term(sf, t, L, D) * others; };
        while (bound(t0) > 1e-9 && t0 > 1e-12) t0 /= 10;
        r.tails.small_t = bound(t0);
        if (t0 != trunc.t_min) r.notes.push_back("t_min lowered to " + std::to_string(t0) + " to bound the corner");
    }

    const double v0 = std::log(t0), v1 = std::log(trunc.t_max);
    std::vector<double> breaks;
    const int vpanels = std::max(1, static_cast<int>(std::ceil((v1 - v0) / 0.5)));
    for (int p = 1; p < vpanels; ++p) breaks.push_back(v0 + (v1 - v0) * p / vpanels);
    const AxisChain vaxis{v0, v1, {}, 0, breaks};
    const AxisChain xaxis{0, L, {}, 0, {}};

    auto theta_at = [&K](double v, double x) { return real_quadratic_lattice(K, x).theta(std::exp(v)).minus_one; };

    if (cfg.method == Method::MonteCarlo) {
        std::vector<Form2> forms;
        for (double sk : s)
            forms.push_back(Form2::evaluator([theta_at, sk](double v, double x) { return theta_at(v, x) * std::exp(v * sk); }));
        const auto q = eval_chains(forms, sigma1, sigma2, vaxis, xaxis, cfg);
        r.value = q.value + corner;
        r.est_error = q.est_error;
        return r;
    }

    auto run = [&](int qv, int qx) {
        const auto vs = chain_nodes(vaxis, d, qv);
        const auto xs = chain_nodes(xaxis, d, qx);
        std::vector<Lattice2> lattices;
        for (double x : xs.atoms) lattices.push_back(real_quadratic_lattice(K, x));
        const std::size_t nx = xs.atoms.size();
        std::vector<double> table(vs.atoms.size() * nx);
        const std::size_t chunk = 16, chunks = (vs.atoms.size() + chunk - 1) / chunk;
        parallel_chunks(chunks, [&](std::size_t c) {
            for (std::size_t i = c * chunk; i < std::min(vs.atoms.size(), (c + 1) * chunk); ++i) {
                const double t = std::exp(vs.atoms[i]);
                for (std::size_t j = 0; j < nx; ++j) table[i * nx + j] = lattices[j].theta(t).minus_one;
            }
        });
        return integrate_nodes(vs, sigma1, xs, sigma2, [&](int point, int va, int xa) {
            return table[static_cast<std::size_t>(va) * nx + static_cast<std::size_t>(xa)] *
                   std::exp(vs.atoms[static_cast<std::size_t>(va)] * s[static_cast<std::size_t>(point)]);
        });
    };
    const int qv = std::max(cfg.points, 4) + 4, qx = 2 * std::max(cfg.points, 4);
    r.value = run(qv, qx) + corner;
    r.est_error = std::abs(r.value - corner - run(qv - 2, qx - 4));
    if (d == 1) r.notes.push_back("[0, t_min] added from theta ~ 1/(t sqrt D_K)");
    double large = 0;
    for (double x : {0.0, L / 2, L}) large = std::max(large, real_quadratic_lattice(K, x).theta(trunc.t_max).minus_one);
    double smax = *std::max_element(s.begin(), s.end());
    r.tails.large_t = large * std::pow(trunc.t_max, smax - 1) * L / kPi;
    return r;
}

}  // namespace membrane
