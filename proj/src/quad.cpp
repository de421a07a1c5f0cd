#include "membrane/quad.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace membrane {

Rectangle::Rectangle(double ax_, double bx_, double ay_, double by_)
    : ax(ax_), bx(bx_), ay(ay_), by(by_) {
    if (!(std::isfinite(ax) && std::isfinite(bx) && std::isfinite(ay) && std::isfinite(by)))
        throw InvalidInput("rectangle bounds must be finite");
    if (!(ax < bx) || !(ay < by)) throw InvalidInput("degenerate or inverted rectangle");
}

RationalRectangle::RationalRectangle(Rational ax_, Rational bx_, Rational ay_, Rational by_)
    : ax(std::move(ax_)), bx(std::move(bx_)), ay(std::move(ay_)), by(std::move(by_)) {
    if (!(ax < bx) || !(ay < by)) throw InvalidInput("degenerate or inverted rectangle");
}

Rectangle RationalRectangle::to_double() const {
    return {ax.get_d(), bx.get_d(), ay.get_d(), by.get_d()};
}

Form2 Form2::polynomial(std::vector<PolyTerm> terms) {
    Form2 f;
    std::map<std::pair<int, int>, bool> seen;
    for (auto& t : terms) {
        if (t.px < 0 || t.py < 0) throw InvalidInput("negative exponent in polynomial form");
        if (!seen.emplace(std::make_pair(t.px, t.py), true).second)
            throw InvalidInput("duplicate monomial x^" + std::to_string(t.px) + " y^" +
                               std::to_string(t.py) + " in polynomial form");
        t.coeff.canonicalize();
        f.numeric_terms_.push_back({t.coeff.get_d(), {t.px, t.py}});
    }
    f.terms_ = std::move(terms);
    return f;
}

Form2 Form2::constant(const Rational& c) { return polynomial({{c, 0, 0}}); }

Form2 Form2::evaluator(std::function<double(double, double)> fn, bool integrable, std::string name) {
    if (!fn) throw InvalidInput("empty evaluator");
    Form2 f;
    f.fn_ = std::move(fn);
    f.integrable_ = integrable;
    f.name_ = std::move(name);
    return f;
}

double Form2::operator()(double x, double y) const {
    if (fn_) return fn_(x, y);
    double s = 0;
    for (const auto& [c, e] : numeric_terms_) {
        double v = c;
        for (int k = 0; k < e.first; ++k) v *= x;
        for (int k = 0; k < e.second; ++k) v *= y;
        s += v;
    }
    return s;
}

void QuadratureConfig::validate() const {
    if (points < 1) throw InvalidInput("points per axis must be positive");
    if (samples < 1) throw InvalidInput("sample count must be positive");
    if (!(abs_tolerance > 0)) throw InvalidInput("tolerance must be positive");
}

// --- Gauss-Legendre --------------------------------------------------------

const std::vector<std::pair<double, double>>& gauss_legendre01(int q) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(q); it != cache.end()) return it->second;
    if (q < 1) throw InvalidInput("Gauss rule needs at least one node");
    std::vector<std::pair<double, double>> rule(static_cast<std::size_t>(q));
    // Newton iteration on P_q from the Chebyshev-like initial guesses
    for (int i = 0; i < q; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1, p1 = x;
        for (int k = 2; k <= q; ++k) {
            const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = q * (x * p1 - p0) / (x * x - 1);
        const double w = 2 / ((1 - x * x) * dp * dp);
        rule[static_cast<std::size_t>(q - 1 - i)] = {(1 + x) / 2, w / 2};
    }
    return cache.emplace(q, std::move(rule)).first->second;
}

// --- ordered-chain nodes ---------------------------------------------------

namespace {

struct Panel {
    double a, b;
};

void check_axis(const AxisChain& ax, int n) {
    if (!(std::isfinite(ax.lo) && std::isfinite(ax.hi) && ax.lo < ax.hi))
        throw InvalidInput("axis range must satisfy lo < hi");
    if (ax.cut) {
        if (!(ax.lo < *ax.cut && *ax.cut < ax.hi)) throw InvalidInput("cut must lie inside the axis");
        if (ax.split < 0 || ax.split > n) throw InvalidInput("split out of range");
    }
}

std::vector<double> panel_edges(const AxisChain& ax, int& cut_panel) {
    std::vector<double> e{ax.lo};
    for (double b : ax.breakpoints)
        if (b > ax.lo && b < ax.hi && (!ax.cut || b != *ax.cut)) e.push_back(b);
    if (ax.cut) e.push_back(*ax.cut);
    e.push_back(ax.hi);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    cut_panel = -1;
    if (ax.cut)
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k] == *ax.cut) cut_panel = static_cast<int>(k);
    return e;
}

// Ordered g-point rule on [a,b]: s_g = a + (b-a)u_g, s_j = a + (s_{j+1}-a)u_j.
struct Block {
    std::vector<double> coords;  // g per node
    std::vector<double> weights;
};

Block simplex_block(int g, double a, double b, int q) {
    const auto& rule = gauss_legendre01(q);
    Block blk;
    std::vector<int> idx(static_cast<std::size_t>(g), 0);
    std::vector<double> s(static_cast<std::size_t>(g));
    while (true) {
        double w = 1;
        double upper = b;
        for (int j = g - 1; j >= 0; --j) {
            const auto& [u, wu] = rule[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            w *= wu * (upper - a);
            s[static_cast<std::size_t>(j)] = a + (upper - a) * u;
            upper = s[static_cast<std::size_t>(j)];
        }
        blk.coords.insert(blk.coords.end(), s.begin(), s.end());
        blk.weights.push_back(w);
        int k = g - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == q - 1) idx[static_cast<std::size_t>(k--)] = 0;
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
    }
    return blk;
}

}  // namespace

ChainNodes chain_nodes(const AxisChain& axis, int n, int q) {
    check_axis(axis, n);
    ChainNodes out;
    out.n = n;
    if (n == 0) {
        out.weights.push_back(1);
        return out;
    }
    int cut_panel = -1;
    const auto edges = panel_edges(axis, cut_panel);
    const int P = static_cast<int>(edges.size()) - 1;
    std::map<double, int> atom_of;
    auto atom = [&](double v) {
        auto [it, fresh] = atom_of.try_emplace(v, static_cast<int>(out.atoms.size()));
        if (fresh) out.atoms.push_back(v);
        return it->second;
    };

    std::vector<int> p(static_cast<std::size_t>(n), 0);
    auto admissible = [&]() {
        if (cut_panel < 0) return true;
        for (int k = 0; k < n; ++k)
            if ((k < axis.split) != (p[static_cast<std::size_t>(k)] < cut_panel)) return false;
        return true;
    };
    std::map<std::tuple<int, int>, Block> block_cache;
    while (true) {
        if (admissible()) {
            // split the assignment into runs of equal panels
            std::vector<const Block*> blocks;
            std::vector<int> sizes;
            for (int k = 0; k < n;) {
                int e = k;
                while (e < n && p[static_cast<std::size_t>(e)] == p[static_cast<std::size_t>(k)]) ++e;
                const int panel = p[static_cast<std::size_t>(k)], g = e - k;
                auto key = std::make_tuple(panel, g);
                auto it = block_cache.find(key);
                if (it == block_cache.end())
                    it = block_cache
                             .emplace(key, simplex_block(g, edges[static_cast<std::size_t>(panel)],
                                                         edges[static_cast<std::size_t>(panel + 1)], q))
                             .first;
                blocks.push_back(&it->second);
                sizes.push_back(g);
                k = e;
            }
            // tensor product over blocks
            std::vector<std::size_t> bi(blocks.size(), 0);
            while (true) {
                double w = 1;
                for (std::size_t b = 0; b < blocks.size(); ++b) {
                    const auto g = static_cast<std::size_t>(sizes[b]);
                    w *= blocks[b]->weights[bi[b]];
                    for (std::size_t j = 0; j < g; ++j) out.index.push_back(atom(blocks[b]->coords[bi[b] * g + j]));
                }
                out.weights.push_back(w);
                std::size_t b = blocks.size();
                while (b > 0 && bi[b - 1] + 1 == blocks[b - 1]->weights.size()) bi[--b] = 0;
                if (b == 0) break;
                ++bi[b - 1];
            }
        }
        // next nondecreasing assignment
        int k = n - 1;
        while (k >= 0 && p[static_cast<std::size_t>(k)] == P - 1) --k;
        if (k < 0) break;
        const int v = p[static_cast<std::size_t>(k)] + 1;
        for (int j = k; j < n; ++j) p[static_cast<std::size_t>(j)] = v;
    }
    return out;
}

// --- parallel plumbing -----------------------------------------------------

unsigned worker_threads() {
    if (const char* env = std::getenv("MEMBRANE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
    const unsigned T = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), chunks));
    if (T <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    auto run = [&] {
        for (std::size_t c; (c = next++) < chunks;) {
            try {
                body(c);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
                next = chunks;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double pairwise_sum(const std::vector<double>& v) {
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t lo, std::size_t hi) {
        if (hi - lo <= 8) {
            double s = 0;
            for (std::size_t k = lo; k < hi; ++k) s += v[k];
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return v.empty() ? 0.0 : rec(0, v.size());
}

double integrate_nodes(const ChainNodes& xs, const Permutation& sx, const ChainNodes& ys,
                       const Permutation& sy,
                       const std::function<double(int, int, int)>& f) {
    const int n = xs.n;
    if (ys.n != n || sx.size() != n || sy.size() != n)
        throw InvalidInput("integrate_nodes: dimension mismatch");
    // point p sits at chain position pos[p]
    std::vector<int> posx(static_cast<std::size_t>(n)), posy(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        posx[static_cast<std::size_t>(sx(k) - 1)] = k - 1;
        posy[static_cast<std::size_t>(sy(k) - 1)] = k - 1;
    }
    constexpr std::size_t chunk = 16;
    const std::size_t chunks = (xs.size() + chunk - 1) / chunk;
    std::vector<double> partial(chunks, 0.0);
    parallel_chunks(chunks, [&](std::size_t c) {
        std::vector<int> xa(static_cast<std::size_t>(n));
        std::vector<double> inner;
        inner.reserve(ys.size());
        double acc = 0;
        for (std::size_t i = c * chunk; i < std::min(xs.size(), (c + 1) * chunk); ++i) {
            const int* xn = xs.node(i);
            for (int p = 0; p < n; ++p) xa[static_cast<std::size_t>(p)] = xn[posx[static_cast<std::size_t>(p)]];
            inner.clear();
            for (std::size_t j = 0; j < ys.size(); ++j) {
                const int* yn = ys.node(j);
                double v = ys.weights[j];
                for (int p = 0; p < n && v != 0; ++p)
                    v *= f(p, xa[static_cast<std::size_t>(p)], yn[posy[static_cast<std::size_t>(p)]]);
                inner.push_back(v);
            }
            acc += xs.weights[i] * pairwise_sum(inner);
        }
        partial[c] = acc;
    });
    return pairwise_sum(partial);
}

// --- front ends -----------------------------------------------------------

namespace {

void check_forms(const std::vector<Form2>& forms, const Permutation& sx, const Permutation& sy) {
    const int n = static_cast<int>(forms.size());
    if (sx.size() != n || sy.size() != n)
        throw InvalidInput("need one form per point: " + std::to_string(n) + " forms, permutations of size " +
                           std::to_string(sx.size()) + " and " + std::to_string(sy.size()));
    for (const auto& f : forms)
        if (!f.integrable())
            throw IntegrabilityError("form " + (f.name().empty() ? std::string("<evaluator>") : f.name()) +
                                     " is flagged non-integrable on this domain");
}

double gauss_value(const std::vector<Form2>& forms, const Permutation& sx, const Permutation& sy,
                   const AxisChain& x, const AxisChain& y, int q) {
    const int n = static_cast<int>(forms.size());
    const auto xs = chain_nodes(x, n, q);
    const auto ys = chain_nodes(y, n, q);
    return integrate_nodes(xs, sx, ys, sy, [&](int p, int a, int b) {
        return forms[static_cast<std::size_t>(p)](xs.atoms[static_cast<std::size_t>(a)],
                                                  ys.atoms[static_cast<std::size_t>(b)]);
    });
}

// Uniform point in the ordered chain domain with its Jacobian.
double sample_chain(const AxisChain& ax, int n, std::mt19937_64& rng, std::vector<double>& s) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    s.assign(static_cast<std::size_t>(n), 0.0);
    double w = 1;
    auto fill = [&](int from, int to, double a, double b) {
        double upper = b;
        for (int j = to - 1; j >= from; --j) {
            w *= upper - a;
            s[static_cast<std::size_t>(j)] = a + (upper - a) * U(rng);
            upper = s[static_cast<std::size_t>(j)];
        }
    };
    if (ax.cut) {
        fill(0, ax.split, ax.lo, *ax.cut);
        fill(ax.split, n, *ax.cut, ax.hi);
    } else {
        fill(0, n, ax.lo, ax.hi);
    }
    return w;
}

QuadResult monte_carlo(const std::vector<Form2>& forms, const Permutation& sx, const Permutation& sy,
                       const AxisChain& x, const AxisChain& y, const QuadratureConfig& cfg) {
    const int n = static_cast<int>(forms.size());
    constexpr long chunk = 4096;
    const auto N = static_cast<std::size_t>(cfg.samples);
    const std::size_t chunks = (N + chunk - 1) / chunk;
    std::vector<double> sums(chunks), squares(chunks);
    parallel_chunks(chunks, [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(c)};
        std::mt19937_64 rng(seq);
        std::vector<double> xv, yv, vals;
        std::vector<double> px(static_cast<std::size_t>(n)), py(static_cast<std::size_t>(n));
        const std::size_t begin = c * chunk, end = std::min(N, begin + chunk);
        for (std::size_t k = begin; k < end; ++k) {
            double v = sample_chain(x, n, rng, xv) * sample_chain(y, n, rng, yv);
            // chain position k holds point σ(k)
            for (int k2 = 1; k2 <= n; ++k2) {
                px[static_cast<std::size_t>(sx(k2) - 1)] = xv[static_cast<std::size_t>(k2 - 1)];
                py[static_cast<std::size_t>(sy(k2) - 1)] = yv[static_cast<std::size_t>(k2 - 1)];
            }
            for (int p = 0; p < n; ++p)
                v *= forms[static_cast<std::size_t>(p)](px[static_cast<std::size_t>(p)], py[static_cast<std::size_t>(p)]);
            vals.push_back(v);
        }
        sums[c] = pairwise_sum(vals);
        for (double& v : vals) v *= v;
        squares[c] = pairwise_sum(vals);
    });
    const double mean = pairwise_sum(sums) / static_cast<double>(N);
    const double meansq = pairwise_sum(squares) / static_cast<double>(N);
    const double var = std::max(0.0, meansq - mean * mean) * static_cast<double>(N) /
                       std::max<double>(1.0, static_cast<double>(N) - 1);
    return {mean, std::sqrt(var / static_cast<double>(N))};
}

}  // namespace

QuadResult eval_chains(const std::vector<Form2>& forms, const Permutation& sx,
                       const Permutation& sy, const AxisChain& x, const AxisChain& y,
                       const QuadratureConfig& cfg) {
    cfg.validate();
    check_forms(forms, sx, sy);
    const int n = static_cast<int>(forms.size());
    check_axis(x, n);
    check_axis(y, n);
    if (cfg.method == Method::MonteCarlo) return monte_carlo(forms, sx, sy, x, y, cfg);
    const double v = gauss_value(forms, sx, sy, x, y, cfg.points);
    // compare against a coarser rule; cheap relative to the main pass for n ≥ 2
    const int coarse = cfg.points > 2 ? cfg.points - 2 : cfg.points + 1;
    const double w = gauss_value(forms, sx, sy, x, y, coarse);
    return {v, std::abs(v - w)};
}

QuadResult eval_iterated(const std::vector<Form2>& forms, const Permutation& sx,
                         const Permutation& sy, const Rectangle& A, const QuadratureConfig& cfg) {
    return eval_chains(forms, sx, sy, AxisChain{A.ax, A.bx, {}, 0, {}}, AxisChain{A.ay, A.by, {}, 0, {}},
                       cfg);
}

namespace {
bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }
}  // namespace

QuadResult eval_indexed(const std::vector<Form2>& forms, const Permutation& sx,
                        const Permutation& sy, int split, const Rectangle& A, const Rectangle& B,
                        const QuadratureConfig& cfg) {
    if (!same(A.bx, B.ax) || !same(A.ay, B.ay) || !same(A.by, B.by))
        throw InvalidInput("B must sit directly to the right of A with the same y-extent");
    if (split < 0 || split > static_cast<int>(forms.size())) throw InvalidInput("split out of range");
    return eval_chains(forms, sx, sy, AxisChain{A.ax, B.bx, A.bx, split, {}},
                       AxisChain{A.ay, A.by, {}, 0, {}}, cfg);
}

QuadResult eval_indexed_vertical(const std::vector<Form2>& forms, const Permutation& sx,
                                 const Permutation& sy, int split, const Rectangle& A,
                                 const Rectangle& C, const QuadratureConfig& cfg) {
    if (!same(A.by, C.ay) || !same(A.ax, C.ax) || !same(A.bx, C.bx))
        throw InvalidInput("C must sit directly above A with the same x-extent");
    if (split < 0 || split > static_cast<int>(forms.size())) throw InvalidInput("split out of range");
    return eval_chains(forms, sx, sy, AxisChain{A.ax, A.bx, {}, 0, {}},
                       AxisChain{A.ay, C.by, A.by, split, {}}, cfg);
}

QuadResult eval_path_iterated(const std::vector<std::function<double(double)>>& fns,
                              const Permutation& sigma, double lo, double hi,
                              const QuadratureConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(fns.size());
    if (sigma.size() != n) throw InvalidInput("path integral: permutation size mismatch");
    auto run = [&](int q) {
        const auto nodes = chain_nodes(AxisChain{lo, hi, {}, 0, {}}, n, q);
        std::vector<double> terms;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            double v = nodes.weights[k];
            for (int pos = 1; pos <= n; ++pos)
                v *= fns[static_cast<std::size_t>(sigma(pos) - 1)](
                    nodes.atoms[static_cast<std::size_t>(nodes.node(k)[pos - 1])]);
            terms.push_back(v);
        }
        return pairwise_sum(terms);
    };
    const double v = run(cfg.points);
    return {v, std::abs(v - run(cfg.points > 2 ? cfg.points - 2 : cfg.points + 1))};
}

std::vector<Form2> forms_for_word(const std::vector<Form2>& alphabet, const Word& word) {
    std::vector<Form2> out;
    for (int l : word) {
        if (l < 1 || l > static_cast<int>(alphabet.size())) throw InvalidInput("letter outside alphabet");
        out.push_back(alphabet[static_cast<std::size_t>(l - 1)]);
    }
    return out;
}

}  // namespace membrane
