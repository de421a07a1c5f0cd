#pragma once

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "membrane/quad.hpp"

namespace membrane {

using Point = std::vector<double>;

// A map of the unit square into R^d (or into a product of upper half-planes,
// exposed through real coordinates).
struct Membrane {
    int target_dim = 2;
    std::function<void(double x, double y, double* out)> map;
    // Optional exact partial derivatives, each of length target_dim.
    std::function<void(double x, double y, double* dx, double* dy)> partials;
    // Labels of the curves the faces lie on: bottom (y=0), right (x=1),
    // top (y=1), left (x=0).
    std::array<std::string, 4> faces;
    // Lines {x = c} and {y = c} where the map may fail to be smooth.
    std::vector<double> kink_x, kink_y;

    Point operator()(double x, double y) const;
};

struct Path {
    int target_dim = 1;
    std::function<void(double t, double* out)> map;
    Point operator()(double t) const;
};

// A 2-form on R^d: coefficients of dX_a∧dX_b for a < b, lexicographic.
struct Target2Form {
    int dim = 2;
    std::function<void(const double* p, double* coeffs)> coeffs;

    // g(X,Y) dX∧dY on R^2
    static Target2Form planar(std::function<double(double, double)> g);
    static Target2Form planar_polynomial(const std::vector<PolyTerm>& terms);
};

// The maps used throughout the tests and the acceptance runs.
Membrane identity_membrane();
Membrane affine_membrane(double a11, double a12, double a21, double a22, double b1, double b2);
// Bilinear interpolation of four corners p00, p10, p01, p11 in R^d.
Membrane bilinear_membrane(const Point& p00, const Point& p10, const Point& p01, const Point& p11);
// m(x,y) + amplitude·4x(1-x)·4y(1-y)·(direction evaluated at (x,y)); the
// bump vanishes on the whole boundary, so the boundary is unchanged.
Membrane perturbed_membrane(const Membrane& m, double amplitude,
                            std::function<void(double x, double y, double* dir)> direction);

// f with ω(∂θ/∂x, ∂θ/∂y) = f(x,y): exact partials when available, otherwise
// central differences with one Richardson step (one-sided near the edges).
Form2 pullback_form(const Membrane& m, const Target2Form& omega, double h = 1e-5);

// Barycentric weights t₀ = x₁, t₁ = (1-x₁)x₂, ..., t_k = Π(1-x_i).
std::vector<double> alpha_weights(const std::vector<double>& x);
// Same weights in exact arithmetic.
std::vector<Rational> alpha_weights(const std::vector<Rational>& x);

// The cube → simplex map: a path for k = 1, a membrane for k = 2.
std::variant<Path, Membrane> alpha_map(int k, const std::vector<Point>& vertices);

struct HomotopyReport {
    double value0 = 0, value1 = 0;
    double error0 = 0, error1 = 0;
    double abs_diff = 0;
    double tolerance = 0;
    bool passed = false;
};

// Maximum distance between the boundary traces of two membranes, sampled.
double boundary_mismatch(const Membrane& a, const Membrane& b, int samples = 129);

// Evaluates ∫ of the pulled-back forms over Δ(σx)×Δ(σy) for both membranes.
// The membranes must share their boundary (checked by sampling).
HomotopyReport homotopy_invariance_check(const Membrane& m0, const Membrane& m1,
                                         const std::vector<Target2Form>& forms,
                                         const Permutation& sx, const Permutation& sy,
                                         const QuadratureConfig& cfg, double tolerance = 1e-6);

}  // namespace membrane
