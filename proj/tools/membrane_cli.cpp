// membrane: shuffle enumeration, property suites, iterated integrals and
// completed zeta values from the command line.
//
// Exit codes: 0 pass, 1 property failure, 2 usage, 3 domain, 4 accuracy.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "membrane/geometry.hpp"
#include "membrane/hopf.hpp"
#include "membrane/perms.hpp"
#include "membrane/quad.hpp"
#include "membrane/series_json.hpp"
#include "membrane/verify.hpp"
#include "membrane/zeta.hpp"

using namespace membrane;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kDomain = 3, kAccuracy = 4 };

struct Global {
    bool json = false;
    std::uint64_t seed = 0;
    std::optional<double> tolerance;
};

void emit(const Global& g, const json& j, const std::string& human) {
    if (g.json)
        std::cout << j.dump() << '\n';
    else
        std::cout << human;
}

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(15);
    o << v;
    return o.str();
}

// --- shuffle ---------------------------------------------------------------

struct ShuffleArgs {
    int m = 0, n = 0;
    std::string sigma, tau;
    std::vector<int> restricted;
};

int cmd_shuffle(const Global& g, const ShuffleArgs& a) {
    if (a.m < 0 || a.n < 0) throw InvalidInput("sizes must be non-negative");
    const auto sigma = a.sigma.empty() ? Permutation::identity(a.m) : Permutation::parse(a.sigma);
    const auto tau = a.tau.empty() ? Permutation::identity(a.n) : Permutation::parse(a.tau);
    if (sigma.size() != a.m || tau.size() != a.n) throw InvalidInput("permutation sizes must match m and n");
    std::vector<Permutation> rs;
    json j{{"m", a.m}, {"n", a.n}, {"sigma", sigma.str()}, {"tau", tau.str()}};
    if (!a.restricted.empty()) {
        rs = restricted_shuffles(sigma, tau, a.restricted[0], a.restricted[1]);
        j["restricted"] = a.restricted;
    } else {
        rs = shuffles(sigma, tau);
    }
    std::string human;
    json list = json::array();
    for (const auto& r : rs) {
        list.push_back(r.str());
        human += r.str() + '\n';
    }
    j["shuffles"] = list;
    j["count"] = rs.size();
    human += "count: " + std::to_string(rs.size()) + '\n';
    emit(g, j, human);
    return kPass;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::string suite;
    std::optional<int> max_degree;
    int alphabet = 2;
    std::optional<int> tuples;
    int points = 10;
};

// One JSON line per check, then a summary line.
class Lines {
public:
    Lines(const Global& g, std::string suite) : g_(g), suite_(std::move(suite)) {}
    void check(const std::string& name, bool ok, json extra = json::object()) {
        extra["suite"] = suite_;
        extra["check"] = name;
        extra["passed"] = ok;
        all_ &= ok;
        if (g_.json)
            std::cout << extra.dump() << '\n';
        else
            std::cout << (ok ? "PASS " : "FAIL ") << suite_ << '/' << name << ' ' << extra.dump() << '\n';
    }
    int finish() {
        json s{{"suite", suite_}, {"summary", true}, {"passed", all_}};
        if (g_.json)
            std::cout << s.dump() << '\n';
        else
            std::cout << suite_ << ": " << (all_ ? "pass" : "FAIL") << '\n';
        return all_ ? kPass : kFail;
    }

private:
    const Global& g_;
    std::string suite_;
    bool all_ = true;
};

std::vector<Form2> random_alphabet(int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Form2> out;
    for (int i = 0; i < k; ++i) out.push_back(random_polynomial_form(rng));
    return out;
}

int cmd_verify(const Global& g, const VerifyArgs& a) {
    if (a.alphabet < 1) throw InvalidInput("alphabet size must be positive");
    if (a.max_degree && *a.max_degree < 0) throw InvalidInput("max degree must be non-negative");
    Lines out(g, a.suite);
    const Rectangle unit(0, 1, 0, 1);
    if (a.suite == "hopf") {
        const auto r = verify_hopf_axioms(a.alphabet, a.max_degree.value_or(4));
        const json base{{"classes", r.classes_checked}, {"pairs", r.pairs_checked}};
        auto with = [&](int failures) {
            json j = base;
            j["failures"] = failures;
            return j;
        };
        out.check("coassociativity", r.coassociativity_failures == 0, with(r.coassociativity_failures));
        out.check("counit", r.counit_failures == 0, with(r.counit_failures));
        out.check("antipode", r.antipode_failures == 0, with(r.antipode_failures));
        out.check("bialgebra", r.bialgebra_failures == 0, with(r.bialgebra_failures));
    } else if (a.suite == "shuffle-relation" || a.suite == "lemma21") {
        const bool shuffle = a.suite == "shuffle-relation";
        const auto r = shuffle ? shuffle_relation_suite(a.tuples.value_or(20), a.max_degree.value_or(4), g.seed)
                               : lemma_suite(a.tuples.value_or(5), a.max_degree.value_or(3), g.seed);
        out.check(r.name, r.passed(), {{"checks", r.checks}, {"failures", r.failures}, {"max_deviation", r.max_deviation}, {"notes", r.notes}});
    } else if (a.suite == "thm15") {
        const auto forms = random_alphabet(a.alphabet, g.seed);
        const auto r = verify_gluing_theorem(forms, a.max_degree.value_or(3), RationalRectangle(0, 1, 0, 1),
                                      RationalRectangle(1, 2, 0, 1), NumericContext{});
        const double tol = g.tolerance.value_or(0.0);
        out.check("multiplicity", r.multiplicity_failures == 0,
                  {{"indexed_monomials", r.indexed_checked}, {"failures", r.multiplicity_failures}});
        out.check("decomposition", r.max_decomposition_deviation <= tol, {{"max_deviation", r.max_decomposition_deviation}, {"exact", r.exact}});
        out.check("cross-product", r.max_cross_product_deviation <= tol,
                  {{"pairs", r.pairs_checked}, {"max_deviation", r.max_cross_product_deviation}, {"exact", r.exact}});
    } else if (a.suite == "group-like") {
        const auto forms = random_alphabet(a.alphabet, g.seed);
        const auto J = oracle_J(forms, a.max_degree.value_or(3), RationalRectangle(0, 1, 0, 1));
        const auto r = group_like_check(J);
        const double tol = g.tolerance.value_or(0.0);
        out.check("coproduct", r.multiplicity_failures == 0 && r.max_coproduct_deviation <= tol,
                  {{"pairs", r.pairs_checked}, {"multiplicity_failures", r.multiplicity_failures},
                   {"max_deviation", r.max_coproduct_deviation}});
        out.check("character", r.max_character_deviation <= tol, {{"max_deviation", r.max_character_deviation}});
    } else if (a.suite == "homotopy") {
        const int n = a.max_degree.value_or(2);
        if (n < 1) throw InvalidInput("homotopy suite needs degree ≥ 1");
        const auto [m0, m1] = homotopy_scenario();
        const auto forms = scenario_forms();
        QuadratureConfig cfg;
        cfg.points = a.points;
        const double tol = g.tolerance.value_or(1e-6);
        // all words of length n in the three forms, all permutation pairs
        std::vector<std::vector<int>> words{{}};
        for (int k = 0; k < n; ++k) {
            std::vector<std::vector<int>> next;
            for (const auto& w : words)
                for (int l = 0; l < static_cast<int>(forms.size()); ++l) {
                    auto v = w;
                    v.push_back(l);
                    next.push_back(v);
                }
            words = next;
        }
        for (const auto& w : words) {
            std::vector<Target2Form> fw;
            std::string label;
            for (int l : w) {
                fw.push_back(forms[static_cast<std::size_t>(l)]);
                label += "w" + std::to_string(l + 1);
            }
            for (const auto& sx : all_permutations(n))
                for (const auto& sy : all_permutations(n)) {
                    const auto r = homotopy_invariance_check(m0, m1, fw, sx, sy, cfg, tol);
                    out.check(label + " " + sx.str() + " " + sy.str(), r.passed,
                              {{"value_identity", r.value0}, {"value_bent", r.value1}, {"abs_diff", r.abs_diff},
                               {"est_error", std::max(r.error0, r.error1)}, {"tolerance", tol}});
                }
        }
    } else if (a.suite == "cocycle") {
        const auto c = cocycle_scenario();
        QuadratureConfig cfg;
        cfg.points = a.points;
        const double tol = g.tolerance.value_or(1e-5);
        const int N = a.max_degree.value_or(2);
        const auto r = composition_identity_check(c.d3, c.d1, c.d2, c.d0, scenario_forms(), N, cfg, tol);
        for (int d = 1; d <= N; ++d) {
            const double dev = r.max_deviation_by_degree[static_cast<std::size_t>(d)];
            out.check("degree " + std::to_string(d), dev <= tol, {{"max_deviation", dev}, {"tolerance", tol}});
        }
    } else {
        throw CLI::ValidationError("unknown suite '" + a.suite + "'");
    }
    return out.finish();
}

// --- integrate -------------------------------------------------------------

struct IntegrateArgs {
    std::string spec;
    std::string sx, sy;
    std::string method;
    int points = 8;
    long samples = 200000;
    bool oracle = false;
};

Rational read_rational(const json& v) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) {
        Rational r;
        if (r.set_str(v.get<std::string>(), 10) != 0) throw InvalidInput("bad rational '" + v.get<std::string>() + "'");
        r.canonicalize();
        return r;
    }
    if (v.is_number()) return Rational(v.get<double>());
    throw InvalidInput("expected a number or a \"p/q\" string");
}

Form2 read_form(const json& f, const Rectangle& box) {
    if (f.contains("terms")) {
        std::vector<PolyTerm> terms;
        for (const auto& t : f.at("terms"))
            terms.push_back({read_rational(t.at("coeff")), t.value("x", 0), t.value("y", 0)});
        return Form2::polynomial(terms);
    }
    const auto name = f.at("builtin").get<std::string>();
    if (name == "one") return Form2::constant(1);
    if (name == "exp_xy") return Form2::evaluator([](double x, double y) { return std::exp(x * y); }, true, name);
    if (name == "inv_x")
        return Form2::evaluator([](double x, double) { return 1 / x; }, box.ax > 0, name);
    throw InvalidInput("unknown builtin form '" + name + "'");
}

int cmd_integrate(const Global& g, const IntegrateArgs& a) {
    std::ifstream in(a.spec);
    if (!in) throw InvalidInput("cannot open spec file '" + a.spec + "'");
    json spec;
    try {
        spec = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("spec file does not parse: ") + e.what());
    }
    std::vector<Form2> forms;
    std::optional<RationalRectangle> exact_box;
    Rectangle box(0, 1, 0, 1);
    try {
        const auto& r = spec.at("rectangle");
        if (r.size() != 4) throw InvalidInput("rectangle must be [ax, bx, ay, by]");
        exact_box.emplace(read_rational(r[0]), read_rational(r[1]), read_rational(r[2]), read_rational(r[3]));
        box = exact_box->to_double();
        for (const auto& f : spec.at("forms")) forms.push_back(read_form(f, box));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed spec: ") + e.what());
    }
    const int n = static_cast<int>(forms.size());
    const auto sx = a.sx.empty() ? Permutation::identity(n) : Permutation::parse(a.sx);
    const auto sy = a.sy.empty() ? Permutation::identity(n) : Permutation::parse(a.sy);
    if (sx.size() != n || sy.size() != n) throw InvalidInput("permutation sizes must match the number of forms");

    const bool polynomial = std::all_of(forms.begin(), forms.end(), [](const Form2& f) { return f.is_polynomial(); });
    const std::string method = a.method.empty() ? (polynomial ? "exact" : "gauss") : a.method;
    json j{{"n", n}, {"sx", sx.str()}, {"sy", sy.str()}, {"method", method}, {"seed", g.seed}};
    std::string human;
    std::optional<Rational> exact;
    if (method == "exact" || a.oracle) {
        if (!polynomial) throw InvalidInput("exact mode needs polynomial forms");
        exact = poly_oracle(forms, sx, sy, *exact_box);
    }
    if (method == "exact") {
        j["value"] = exact->get_d();
        j["exact"] = exact->get_str();
        j["est_error"] = 0.0;
        human = exact->get_str() + '\n';
    } else {
        QuadratureConfig cfg;
        cfg.method = method == "mc" ? Method::MonteCarlo : Method::GaussCell;
        cfg.points = a.points;
        cfg.samples = a.samples;
        cfg.seed = g.seed;
        const auto r = eval_iterated(forms, sx, sy, box, cfg);
        j["value"] = r.value;
        j["est_error"] = r.est_error;
        j[method == "mc" ? "samples" : "points"] = method == "mc" ? a.samples : a.points;
        human = fmt(r.value) + " +- " + fmt(r.est_error) + '\n';
        if (exact) {
            j["oracle"] = exact->get_str();
            j["difference"] = r.value - exact->get_d();
            human += "oracle " + exact->get_str() + " difference " + fmt(r.value - exact->get_d()) + '\n';
            if (g.tolerance && std::abs(r.value - exact->get_d()) > *g.tolerance) {
                emit(g, j, human);
                return kFail;
            }
        }
    }
    emit(g, j, human);
    return kPass;
}

// --- zeta ------------------------------------------------------------------

struct ZetaArgs {
    std::string field = "Q";
    std::vector<double> s;
    std::string sigma1, sigma2;
    double radius = 0;
    double tmin = 1e-4, tmax = 50;
    std::string method = "gauss";
    int points = 8;
    long samples = 200000;
    bool membrane = false;
    std::string word;
    bool timing = false;
};

int cmd_zeta(const Global& g, const ZetaArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    const auto K = NumberFieldSpec::parse(a.field);
    TruncationPolicy trunc;
    trunc.radius = a.radius;
    trunc.t_min = a.tmin;
    trunc.t_max = a.tmax;
    trunc.validate();
    QuadratureConfig cfg;
    cfg.method = a.method == "mc" ? Method::MonteCarlo : Method::GaussCell;
    cfg.points = a.points;
    cfg.samples = a.samples;
    cfg.seed = g.seed;
    if (g.tolerance) cfg.abs_tolerance = *g.tolerance;

    json j{{"field", K.name()}, {"method", a.method}, {"seed", g.seed},
           {"truncation", {{"radius", a.radius}, {"t_min", a.tmin}, {"t_max", a.tmax}}}};

    if (!a.word.empty()) {
        // experimental word encoding: letters T = (θ-1)dz, d = dz
        std::vector<bool> w;
        for (char c : a.word) {
            if (c == 'T') w.push_back(true);
            else if (c == 'd') w.push_back(false);
            else if (c != ',') throw InvalidInput("word letters are T and d");
        }
        const auto v = word_encoded_path_integral(K, w, trunc);
        j["route"] = "word-encoded path (experimental)";
        j["word"] = a.word;
        j["value"] = {{"re", v.real()}, {"im", v.imag()}};
        if (a.timing) j["runtime_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        emit(g, j, fmt(v.real()) + " + " + fmt(v.imag()) + "i\n");
        return kPass;
    }

    if (a.s.empty()) throw InvalidInput("give at least one --s");
    const int d = static_cast<int>(a.s.size());
    const auto sigma1 = a.sigma1.empty() ? Permutation::identity(d) : Permutation::parse(a.sigma1);
    const auto sigma2 = a.sigma2.empty() ? Permutation::identity(d) : Permutation::parse(a.sigma2);
    if (sigma1.size() != d || sigma2.size() != d) throw InvalidInput("permutations need one entry per exponent");

    ZetaResult r;
    if (K.kind == FieldKind::RealQuadratic) {
        r = multiple_completed_dedekind_2d(K, a.s, sigma1, sigma2, trunc, cfg);
        j["route"] = "membrane";
        j["membrane"] = {{"x_range", {0.0, K.membrane_width()}},
                         {"fundamental_unit", {{"a", K.unit_a}, {"b", K.unit_b}, {"c", K.unit_c}}}};
    } else {
        if (a.membrane) throw InvalidInput("--membrane needs a real quadratic field");
        if (!sigma2.is_identity()) throw InvalidInput("a path has one ordering; sigma2 must be the identity");
        if (cfg.method == Method::MonteCarlo) throw UnsupportedError("Monte Carlo is available for membrane integrals only");
        if (d == 1) {
            r = completed_zeta(K, a.s[0], trunc, cfg);
            j["route"] = "fold";
        } else {
            // σ₁(k) names the exponent at the k-th smallest t
            std::vector<double> ordered;
            for (int k = 1; k <= d; ++k) ordered.push_back(a.s[static_cast<std::size_t>(sigma1(k) - 1)]);
            r = multiple_completed_zeta_path(K, ordered, trunc, cfg);
            j["route"] = "path";
        }
    }
    j["value"] = r.value;
    j["est_error"] = r.est_error;
    j["tail_bounds"] = {{"small_t", r.tails.small_t}, {"large_t", r.tails.large_t}, {"lattice", r.tails.lattice}};
    j["normalization"] = "s/2";
    j["normalization_detail"] = r.normalization;
    j["exponents"] = a.s;
    j["permutations"] = {{"sigma1", sigma1.str()}, {"sigma2", sigma2.str()}};
    j["notes"] = r.notes;
    if (a.timing) j["runtime_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    emit(g, j, fmt(r.value) + " +- " + fmt(r.est_error) + "  (tails: small " + fmt(r.tails.small_t) + ", large " +
                   fmt(r.tails.large_t) + ", lattice " + fmt(r.tails.lattice) + ")\n");
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterated integrals over membranes, their Hopf algebra, and completed zeta values"};
    app.require_subcommand(1, 1);
    Global g;
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--seed", g.seed, "Random seed (default 0)");
    app.add_option("--tolerance", g.tolerance, "Override the pass tolerance");

    ShuffleArgs sh;
    auto* shuffle = app.add_subcommand("shuffle", "List the shuffles of two permutations");
    shuffle->add_option("m", sh.m)->required();
    shuffle->add_option("n", sh.n)->required();
    shuffle->add_option("--sigma", sh.sigma, "Permutation of 1..m, e.g. \"[2,1]\"");
    shuffle->add_option("--tau", sh.tau, "Permutation of 1..n");
    shuffle->add_option("--restricted", sh.restricted, "Cut sizes i j")->expected(2);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run a property suite");
    verify->add_option("suite", va.suite)
        ->required()
        ->check(CLI::IsMember({"hopf", "shuffle-relation", "lemma21", "thm15", "homotopy", "cocycle", "group-like"}));
    verify->add_option("--max-degree", va.max_degree);
    verify->add_option("--alphabet", va.alphabet);
    verify->add_option("--tuples", va.tuples);
    verify->add_option("--points", va.points, "Gauss points for the quadrature suites");

    IntegrateArgs ia;
    auto* integrate = app.add_subcommand("integrate", "Iterated integral of a JSON form specification");
    integrate->add_option("spec", ia.spec)->required();
    integrate->add_option("--sx", ia.sx);
    integrate->add_option("--sy", ia.sy);
    integrate->add_option("--method", ia.method)->check(CLI::IsMember({"exact", "gauss", "mc"}));
    integrate->add_option("--points", ia.points);
    integrate->add_option("--samples", ia.samples);
    integrate->add_flag("--oracle", ia.oracle, "Also print the exact polynomial value");

    ZetaArgs za;
    auto* zeta = app.add_subcommand("zeta", "Completed and multiple completed zeta values");
    zeta->add_option("--field", za.field);
    zeta->add_option("--s", za.s)->allow_extra_args(false);
    zeta->add_option("--sigma1", za.sigma1);
    zeta->add_option("--sigma2", za.sigma2);
    zeta->add_option("--radius", za.radius);
    zeta->add_option("--tmin", za.tmin);
    zeta->add_option("--tmax", za.tmax);
    zeta->add_option("--method", za.method)->check(CLI::IsMember({"gauss", "mc"}));
    zeta->add_option("--points", za.points);
    zeta->add_option("--samples", za.samples);
    zeta->add_flag("--membrane", za.membrane);
    zeta->add_option("--word", za.word, "Experimental: letters T=(theta-1)dz, d=dz, e.g. T,d,T");
    zeta->add_flag("--timing", za.timing, "Include runtime_ms (breaks byte-identical output)");

    for (auto* sub : {shuffle, verify, integrate, zeta}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*shuffle) return cmd_shuffle(g, sh);
        if (*verify) return cmd_verify(g, va);
        if (*integrate) return cmd_integrate(g, ia);
        return cmd_zeta(g, za);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidInput& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const UnsupportedError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << " (estimate " << e.estimate() << ", bound " << e.bound() << ")\n";
        return kAccuracy;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const IntegrabilityError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const EvaluationError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
}
