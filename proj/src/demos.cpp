#include "maxode/demos.hpp"

namespace maxode {

namespace {

ProblemSpec make_spec(int m, std::vector<std::string> f, std::vector<std::string> maxima,
                      std::vector<double> x0, double T) {
    ProblemSpec spec;
    spec.m = m;
    for (const auto& s : f) spec.f.push_back(parse_expr(s));
    for (const auto& s : maxima) spec.maxima.push_back(parse_expr(s));
    spec.x0 = std::move(x0);
    spec.T = T;
    spec.validate();
    return spec;
}

std::vector<DemoProblem> build() {
    std::vector<DemoProblem> demos;

    // Modified logistic: x' = x - max x^2. T = 0.2 stays inside the
    // admissible horizon 0.25 for alpha = 2.
    demos.push_back({"logistic",
                     make_spec(1, {"x1 - m1"}, {"x1^2"}, {0.5}, 0.2),
                     0.2, true, false,
                     "modified logistic with running max of x^2"});

    // Coupled linear exchange: x' = x - max y, y' = y - max x; monotone
    // iteration converges for every horizon when 0 < y0 < x0.
    demos.push_back({"coupled_linear",
                     make_spec(2, {"x1 - m2", "x2 - m1"}, {"x1", "x2"}, {2.0, 1.0}, 1.0),
                     1.0, true, false,
                     "coupled linear system with exchanged running maxima"});

    // Coupled quadratic: x' = x - max y^2, y' = y - max x^2; (T, c0) = (0.5,
    // 0.2) satisfies the uniform-bound inequalities for x0 = y0 = 0.05.
    demos.push_back({"coupled_quadratic",
                     make_spec(2, {"x1 - m2", "x2 - m1"}, {"x1^2", "x2^2"}, {0.05, 0.05}, 0.5),
                     0.5, true, false,
                     "coupled quadratic system with exchanged squared maxima"});

    // Constant-coefficient system with an explicit decreasing solution:
    // a=b=c=1, d=3 gives x(t) = 2 - e^t, y(t) = 3 - e^t.
    demos.push_back({"constant_coeff",
                     make_spec(2, {"x1 - m2", "x2 - 3*m1"}, {"x1", "x2"}, {1.0, 2.0}, 0.6),
                     0.6, true, false,
                     "constant-coefficient system in the explicit-solution region"});

    // Lotka-Volterra variant with a generalized product functional; solved
    // numerically with no existence guarantee.
    demos.push_back({"lotka_volterra",
                     make_spec(2, {"x1 - m1", "x2 + m1"}, {"x1*x2"}, {0.8, 0.4}, 0.2),
                     0.2, false, false,
                     "Lotka-Volterra variant with running max of x*y (no guarantee)"});

    // Time-dependent coefficients; the comparison interval comes from the
    // contraction-horizon estimate at run time.
    demos.push_back({"logistic_time_dependent",
                     make_spec(1, {"(1 + 0.5*sin(t))*x1 - (1 + 0.25*t)*m1"}, {"x1^2"}, {0.5}, 0.2),
                     0.2, true, true,
                     "logistic variant with time-dependent coefficients"});

    return demos;
}

} // namespace

const std::vector<DemoProblem>& demo_problems() {
    static const std::vector<DemoProblem> demos = build();
    return demos;
}

} // namespace maxode
