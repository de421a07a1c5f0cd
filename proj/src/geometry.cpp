#include "membrane/geometry.hpp"

#include <cmath>
#include <memory>

namespace membrane {

Point Membrane::operator()(double x, double y) const {
    Point p(static_cast<std::size_t>(target_dim));
    map(x, y, p.data());
    return p;
}

Point Path::operator()(double t) const {
    Point p(static_cast<std::size_t>(target_dim));
    map(t, p.data());
    return p;
}

Target2Form Target2Form::planar(std::function<double(double, double)> g) {
    Target2Form w;
    w.dim = 2;
    w.coeffs = [g = std::move(g)](const double* p, double* c) { c[0] = g(p[0], p[1]); };
    return w;
}

Target2Form Target2Form::planar_polynomial(const std::vector<PolyTerm>& terms) {
    auto f = std::make_shared<Form2>(Form2::polynomial(terms));
    return planar([f](double X, double Y) { return (*f)(X, Y); });
}

Membrane identity_membrane() { return affine_membrane(1, 0, 0, 1, 0, 0); }

Membrane affine_membrane(double a11, double a12, double a21, double a22, double b1, double b2) {
    Membrane m;
    m.target_dim = 2;
    m.map = [=](double x, double y, double* o) {
        o[0] = a11 * x + a12 * y + b1;
        o[1] = a21 * x + a22 * y + b2;
    };
    m.partials = [=](double, double, double* dx, double* dy) {
        dx[0] = a11;
        dx[1] = a21;
        dy[0] = a12;
        dy[1] = a22;
    };
    m.faces = {"affine bottom", "affine right", "affine top", "affine left"};
    return m;
}

Membrane bilinear_membrane(const Point& p00, const Point& p10, const Point& p01, const Point& p11) {
    const auto d = p00.size();
    if (p10.size() != d || p01.size() != d || p11.size() != d || d == 0)
        throw InvalidInput("bilinear membrane: corners must share a positive dimension");
    Membrane m;
    m.target_dim = static_cast<int>(d);
    m.map = [=](double x, double y, double* o) {
        for (std::size_t i = 0; i < d; ++i)
            o[i] = (1 - x) * (1 - y) * p00[i] + x * (1 - y) * p10[i] + (1 - x) * y * p01[i] + x * y * p11[i];
    };
    m.partials = [=](double x, double y, double* dx, double* dy) {
        for (std::size_t i = 0; i < d; ++i) {
            dx[i] = (1 - y) * (p10[i] - p00[i]) + y * (p11[i] - p01[i]);
            dy[i] = (1 - x) * (p01[i] - p00[i]) + x * (p11[i] - p10[i]);
        }
    };
    m.faces = {"segment p00-p10", "segment p10-p11", "segment p01-p11", "segment p00-p01"};
    return m;
}

Membrane perturbed_membrane(const Membrane& base, double amplitude,
                            std::function<void(double, double, double*)> direction) {
    Membrane m = base;
    const int d = base.target_dim;
    m.map = [=](double x, double y, double* o) {
        base.map(x, y, o);
        std::vector<double> dir(static_cast<std::size_t>(d));
        direction(x, y, dir.data());
        const double bump = 16 * x * (1 - x) * y * (1 - y);
        for (int i = 0; i < d; ++i) o[i] += amplitude * bump * dir[static_cast<std::size_t>(i)];
    };
    m.partials = nullptr;  // the direction field is opaque; fall back to differences
    return m;
}

namespace {

bool near_kink(double v, const std::vector<double>& kinks) {
    for (double k : kinks)
        if (std::abs(v - k) < 1e-13) return true;
    return false;
}

bool kink_between(double a, double b, const std::vector<double>& kinks) {
    for (double k : kinks)
        if (k > std::min(a, b) && k < std::max(a, b)) return true;
    return false;
}

// Derivative of g at v ∈ [0,1] with step h, staying inside [0,1] and away
// from kinks. Second order stencils plus one Richardson step.
template <class G>
void derivative(const G& g, double v, double h, const std::vector<double>& kinks, int d,
                double* out) {
    const bool left_ok = v - h >= 0 && !kink_between(v - h, v, kinks);
    const bool right_ok = v + 2 * h <= 1 && !kink_between(v, v + 2 * h, kinks);
    const bool left2_ok = v - 2 * h >= 0 && !kink_between(v - 2 * h, v, kinks);
    std::vector<double> a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d)),
        c(static_cast<std::size_t>(d));
    auto stencil = [&](double step, double* res) {
        if (left_ok && v + step <= 1 && !kink_between(v, v + step, kinks)) {
            g(v + step, a.data());
            g(v - step, b.data());
            for (int i = 0; i < d; ++i) res[i] = (a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) / (2 * step);
        } else if (right_ok) {
            g(v, a.data());
            g(v + step, b.data());
            g(v + 2 * step, c.data());
            for (int i = 0; i < d; ++i)
                res[i] = (-3 * a[static_cast<std::size_t>(i)] + 4 * b[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(i)]) / (2 * step);
        } else if (left2_ok) {
            g(v, a.data());
            g(v - step, b.data());
            g(v - 2 * step, c.data());
            for (int i = 0; i < d; ++i)
                res[i] = (3 * a[static_cast<std::size_t>(i)] - 4 * b[static_cast<std::size_t>(i)] + c[static_cast<std::size_t>(i)]) / (2 * step);
        } else {
            throw EvaluationError("no admissible difference stencil near v = " + std::to_string(v));
        }
    };
    std::vector<double> coarse(static_cast<std::size_t>(d)), fine(static_cast<std::size_t>(d));
    stencil(h, coarse.data());
    stencil(h / 2, fine.data());
    for (int i = 0; i < d; ++i)
        out[i] = (4 * fine[static_cast<std::size_t>(i)] - coarse[static_cast<std::size_t>(i)]) / 3;
}

}  // namespace

Form2 pullback_form(const Membrane& m, const Target2Form& omega, double h) {
    if (omega.dim != m.target_dim) throw InvalidInput("2-form and membrane target dimensions differ");
    if (!(h > 0 && h < 0.1)) throw InvalidInput("difference step must lie in (0, 0.1)");
    const int d = m.target_dim;
    return Form2::evaluator([m, omega, h, d](double x, double y) {
        if (near_kink(x, m.kink_x) || near_kink(y, m.kink_y))
            throw EvaluationError("pullback evaluated on a non-smooth line at (" + std::to_string(x) + "," +
                                  std::to_string(y) + ")");
        std::vector<double> p(static_cast<std::size_t>(d)), dx(static_cast<std::size_t>(d)),
            dy(static_cast<std::size_t>(d));
        m.map(x, y, p.data());
        if (m.partials) {
            m.partials(x, y, dx.data(), dy.data());
        } else {
            derivative([&](double v, double* o) { m.map(v, y, o); }, x, h, m.kink_x, d, dx.data());
            derivative([&](double v, double* o) { m.map(x, v, o); }, y, h, m.kink_y, d, dy.data());
        }
        std::vector<double> c(static_cast<std::size_t>(d * (d - 1) / 2));
        omega.coeffs(p.data(), c.data());
        double f = 0;
        std::size_t idx = 0;
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b, ++idx) {
                const auto A = static_cast<std::size_t>(a), B = static_cast<std::size_t>(b);
                f += c[idx] * (dx[A] * dy[B] - dx[B] * dy[A]);
            }
        return f;
    });
}

namespace {
template <class T>
std::vector<T> weights_impl(const std::vector<T>& x) {
    std::vector<T> t;
    T rest = 1;  // Π_{j<i} (1 - x_j)
    for (const auto& xi : x) {
        t.push_back(rest * xi);
        rest *= T(1) - xi;
    }
    t.push_back(rest);
    return t;
}
}  // namespace

std::vector<double> alpha_weights(const std::vector<double>& x) { return weights_impl(x); }
std::vector<Rational> alpha_weights(const std::vector<Rational>& x) { return weights_impl(x); }

std::variant<Path, Membrane> alpha_map(int k, const std::vector<Point>& vertices) {
    if (k < 1) throw InvalidInput("alpha_map needs k ≥ 1");
    if (k > 2) throw UnsupportedError("alpha_map is implemented for k ≤ 2 only");
    if (static_cast<int>(vertices.size()) != k + 1) throw InvalidInput("alpha_map needs k+1 vertices");
    const auto d = vertices[0].size();
    for (const auto& v : vertices)
        if (v.size() != d || d == 0) throw InvalidInput("vertices must share a positive dimension");
    if (k == 1) {
        Path p;
        p.target_dim = static_cast<int>(d);
        p.map = [vertices, d](double t, double* o) {
            const auto w = alpha_weights(std::vector<double>{t});
            for (std::size_t i = 0; i < d; ++i) o[i] = w[0] * vertices[0][i] + w[1] * vertices[1][i];
        };
        return p;
    }
    Membrane m;
    m.target_dim = static_cast<int>(d);
    m.map = [vertices, d](double x1, double x2, double* o) {
        const auto w = alpha_weights(std::vector<double>{x1, x2});
        for (std::size_t i = 0; i < d; ++i)
            o[i] = w[0] * vertices[0][i] + w[1] * vertices[1][i] + w[2] * vertices[2][i];
    };
    m.partials = [vertices, d](double x1, double x2, double* dx, double* dy) {
        for (std::size_t i = 0; i < d; ++i) {
            dx[i] = vertices[0][i] - x2 * vertices[1][i] - (1 - x2) * vertices[2][i];
            dy[i] = (1 - x1) * (vertices[1][i] - vertices[2][i]);
        }
    };
    // x₂ = 0: P2 → P0; x₁ = 1: collapsed to P0; x₂ = 1: P1 → P0; x₁ = 0: P2 → P1
    m.faces = {"edge P2-P0", "vertex P0", "edge P1-P0", "edge P2-P1"};
    return m;
}

double boundary_mismatch(const Membrane& a, const Membrane& b, int samples) {
    if (a.target_dim != b.target_dim) throw InvalidInput("membranes have different targets");
    double worst = 0;
    for (int i = 0; i <= samples; ++i) {
        const double s = static_cast<double>(i) / samples;
        const double pts[4][2] = {{s, 0}, {1, s}, {s, 1}, {0, s}};
        for (const auto& q : pts) {
            const auto pa = a(q[0], q[1]), pb = b(q[0], q[1]);
            for (std::size_t k = 0; k < pa.size(); ++k) worst = std::max(worst, std::abs(pa[k] - pb[k]));
        }
    }
    return worst;
}

HomotopyReport homotopy_invariance_check(const Membrane& m0, const Membrane& m1,
                                         const std::vector<Target2Form>& forms,
                                         const Permutation& sx, const Permutation& sy,
                                         const QuadratureConfig& cfg, double tolerance) {
    const double mismatch = boundary_mismatch(m0, m1);
    if (mismatch > 1e-9)
        throw InvalidInput("membranes disagree on the boundary by " + std::to_string(mismatch));
    std::vector<Form2> f0, f1;
    for (const auto& w : forms) {
        f0.push_back(pullback_form(m0, w));
        f1.push_back(pullback_form(m1, w));
    }
    const Rectangle unit(0, 1, 0, 1);
    const auto r0 = eval_iterated(f0, sx, sy, unit, cfg);
    const auto r1 = eval_iterated(f1, sx, sy, unit, cfg);
    HomotopyReport rep;
    rep.value0 = r0.value;
    rep.value1 = r1.value;
    rep.error0 = r0.est_error;
    rep.error1 = r1.est_error;
    rep.abs_diff = std::abs(r0.value - r1.value);
    rep.tolerance = tolerance;
    rep.passed = rep.abs_diff <= tolerance;
    return rep;
}

}  // namespace membrane
