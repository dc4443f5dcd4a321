#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cohdyn/bath.hpp"
#include "cohdyn/closed_form.hpp"
#include "cohdyn/quadrature.hpp"
#include "cohdyn/types.hpp"

using namespace cohdyn;

namespace {

const BathSpec kPaperBath{0.1, 0.01, 0.1};

std::vector<double> uniform_grid(double t_max, int samples) {
    std::vector<double> grid(samples);
    const double h = t_max / (samples - 1);
    for (int k = 0; k < samples; ++k) grid[k] = k * h;
    return grid;
}

double rel_dev(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

} // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly", "[bath]") {
    for (int order : {6, 12}) {
        const auto& rule = quad::gl_rule(order);
        REQUIRE(static_cast<int>(rule.size()) == order);
        // Exact through degree 2n-1 on [0, 1].
        for (int degree = 0; degree <= 2 * order - 1; ++degree) {
            double sum = 0.0;
            for (const auto& node : rule) {
                const double x = 0.5 * (node.x + 1.0);
                sum += 0.5 * node.w * std::pow(x, degree);
            }
            CHECK(sum == Catch::Approx(1.0 / (degree + 1)).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(quad::gl_rule(7), ParameterError);
}

TEST_CASE("adaptive quadrature handles smooth and oscillatory integrands",
          "[bath]") {
    const auto sin_result =
        quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI, M_PI);
    CHECK(sin_result.converged);
    CHECK(sin_result.value == Catch::Approx(2.0).epsilon(1e-12));

    // int_0^20 cos(5x) e^-x dx = [e^-x (5 sin 5x - cos 5x)/26] from 0 to 20
    const double closed =
        (std::exp(-20.0) * (5.0 * std::sin(100.0) - std::cos(100.0)) + 1.0) /
        26.0;
    const auto osc = quad::integrate(
        [](double x) { return std::cos(5.0 * x) * std::exp(-x); }, 0.0, 20.0,
        M_PI / 20.0);
    CHECK(osc.converged);
    CHECK(osc.value == Catch::Approx(closed).epsilon(1e-10));
}

TEST_CASE("bath spec validation", "[bath]") {
    CHECK_NOTHROW(kPaperBath.validate());
    CHECK_NOTHROW(BathSpec{0.1, 0.01, 0.0}.validate());
    CHECK_THROWS_AS((BathSpec{0.0, 0.01, 0.1}.validate()), ParameterError);
    CHECK_THROWS_AS((BathSpec{0.1, 0.0, 0.1}.validate()), ParameterError);
    CHECK_THROWS_AS((BathSpec{0.1, 0.01, -0.1}.validate()), ParameterError);
    CHECK_THROWS_AS((BathSpec{0.1, NAN, 0.1}.validate()), ParameterError);
}

TEST_CASE("ohmic spectral density", "[bath]") {
    CHECK(ohmic_j(0.0, kPaperBath) == 0.0);
    CHECK(ohmic_j(0.01, kPaperBath) ==
          Catch::Approx(0.1 * 0.01 * std::exp(-1.0)).epsilon(1e-14));
    // Maximum at omega = Lambda.
    const double peak = ohmic_j(0.01, kPaperBath);
    CHECK(ohmic_j(0.009, kPaperBath) < peak);
    CHECK(ohmic_j(0.011, kPaperBath) < peak);
    CHECK_THROWS_AS(ohmic_j(-1e-9, kPaperBath), ParameterError);
}

TEST_CASE("dephasing rate matches the zero-temperature closed form", "[bath]") {
    const BathSpec cold{0.1, 0.01, 0.0};
    CHECK(gamma_rate(0.0, cold) == 0.0);
    CHECK_THROWS_AS(gamma_rate(-1.0, cold), ParameterError);
    for (double t : {0.5, 5.0, 50.0, 100.0, 350.0}) {
        const double closed = closed_form::zero_temperature_gamma(t, cold);
        CHECK(rel_dev(gamma_rate(t, cold), closed) <= 1e-9);
    }
    // At t = 1/Lambda the rate equals eta*Lambda.
    CHECK(gamma_rate(100.0, cold) == Catch::Approx(0.001).epsilon(1e-9));
    // Independently frozen quadrature value (scipy, tol 1e-12).
    CHECK(gamma_rate(0.5, cold) ==
          Catch::Approx(9.9997500062498464e-06).epsilon(1e-9));
}

TEST_CASE("dephasing rate at finite temperature matches frozen oracles",
          "[bath]") {
    // Values frozen from an independent adaptive-quadrature evaluation.
    CHECK(gamma_rate(10.0, BathSpec{0.1, 0.01, 0.1}) ==
          Catch::Approx(0.0039932688073164467).epsilon(1e-8));
    CHECK(gamma_rate(200.0, BathSpec{0.1, 0.01, 0.1}) ==
          Catch::Approx(0.044291283325542503).epsilon(1e-8));
    CHECK(gamma_rate(100.0, BathSpec{0.1, 0.01, 2.0}) ==
          Catch::Approx(0.62831936405129207).epsilon(1e-8));
    CHECK(gamma_rate(50.0, BathSpec{0.1, 0.01, 10.0}) ==
          Catch::Approx(1.8545906493365376).epsilon(1e-8));
}

TEST_CASE("high-temperature asymptote", "[bath]") {
    const BathSpec hot{0.1, 0.01, 10.0};
    for (double t : {5.0, 50.0, 150.0}) {
        const double asymptote = closed_form::high_temperature_gamma(t, hot);
        CHECK(rel_dev(gamma_rate(t, hot), asymptote) <= 5e-3);
    }
}

TEST_CASE("alpha coefficient", "[bath]") {
    const BathSpec spec = kPaperBath;
    CHECK(alpha_coeff(0.0, spec) == Complex(0.0, 0.0));
    for (double t : {1.0, 10.0, 100.0}) {
        const Complex alpha = alpha_coeff(t, spec);
        // Same integral evaluation feeds both, so the factor 2 is exact.
        CHECK(alpha.real() == 0.5 * gamma_rate(t, spec));
        CHECK(rel_dev(alpha.imag(), closed_form::im_alpha(t, spec)) <= 1e-8);
    }
    // Imaginary part is temperature independent.
    const double im_cold = alpha_coeff(10.0, BathSpec{0.1, 0.01, 0.0}).imag();
    const double im_hot = alpha_coeff(10.0, BathSpec{0.1, 0.01, 10.0}).imag();
    CHECK(rel_dev(im_cold, im_hot) <= 1e-10);
    CHECK(im_cold == Catch::Approx(-9.9009900990098895e-06).epsilon(1e-8));
}

TEST_CASE("series switch point does not move the integral", "[bath]") {
    for (double kT : {0.1, 2.0}) {
        const BathSpec spec{0.1, 0.01, kT};
        for (double t : {1.0, 50.0, 200.0}) {
            const double coarse = bath_detail::thermal_sine_integral(t, spec);
            const double fine =
                bath_detail::thermal_sine_integral(t, spec, 5e-4);
            CHECK(std::abs(coarse - fine) < 1e-10);
        }
    }
}

TEST_CASE("grid validation rejects malformed grids", "[bath]") {
    CHECK_THROWS_AS(check_uniform_grid({}), ParameterError);
    CHECK_THROWS_AS(check_uniform_grid({1.0, 2.0}), ParameterError);
    CHECK_THROWS_AS(check_uniform_grid({0.0, 1.0, 2.5}), ParameterError);
    CHECK_THROWS_AS(check_uniform_grid({0.0, -1.0}), ParameterError);
    CHECK_NOTHROW(check_uniform_grid({0.0}));
    CHECK_NOTHROW(check_uniform_grid(uniform_grid(10.0, 101)));
}

TEST_CASE("cumulative Simpson is exact on quadratics and converges on sin",
          "[bath]") {
    const auto grid = uniform_grid(2.0, 9);
    std::vector<double> squares(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        squares[k] = grid[k] * grid[k];
    const auto integral = bath_detail::cumulative_simpson(squares, 0.25);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double exact = std::pow(grid[k], 3) / 3.0;
        CHECK(integral[k] == Catch::Approx(exact).margin(1e-13));
    }

    const auto fine = uniform_grid(2.0, 201);
    std::vector<double> sines(fine.size());
    for (std::size_t k = 0; k < fine.size(); ++k) sines[k] = std::sin(fine[k]);
    const auto sine_integral = bath_detail::cumulative_simpson(sines, 0.01);
    for (std::size_t k = 0; k < fine.size(); ++k)
        CHECK(std::abs(sine_integral[k] - (1.0 - std::cos(fine[k]))) <= 5e-8);

    // Two samples fall back to the trapezoid.
    const auto pair = bath_detail::cumulative_simpson({0.0, 1.0}, 0.5);
    CHECK(pair[1] == Catch::Approx(0.25));
    CHECK(bath_detail::cumulative_simpson({3.0}, 1.0) ==
          std::vector<double>{0.0});
}

TEST_CASE("rate table accumulates the closed-form exponents", "[bath]") {
    const BathSpec cold{0.1, 0.01, 0.0};
    const RateTable table = build_rate_table(cold, uniform_grid(100.0, 401));
    CHECK(table.gamma.front() == 0.0);
    CHECK(table.Gamma.front() == 0.0);
    CHECK(table.X.front() == 0.0);
    // Gamma(1/Lambda) = eta ln 2.
    CHECK(table.Gamma.back() ==
          Catch::Approx(0.069314718055994526).margin(1e-9));
    for (std::size_t k = 0; k < table.size(); k += 40) {
        CHECK(std::abs(table.Gamma[k] -
                       closed_form::zero_temperature_exponent(table.t[k], cold)) <=
              1e-9);
        CHECK(std::abs(table.X[k] -
                       closed_form::phase_accumulator(table.t[k], cold)) <= 1e-9);
    }
}

TEST_CASE("rate table matches frozen finite-temperature values", "[bath]") {
    const RateTable table =
        build_rate_table(kPaperBath, uniform_grid(200.0, 2001));
    CHECK(rel_dev(table.gamma[100], 0.0039932688073164467) <= 1e-8);  // t = 10
    CHECK(rel_dev(table.Gamma[1000], 1.7569635737971063) <= 1e-7);    // t = 100
    CHECK(rel_dev(table.Gamma[2000], 5.6409793783717834) <= 1e-7);    // t = 200
    CHECK(rel_dev(table.X[2000], 0.089285128220590967) <= 1e-7);
    for (std::size_t k = 1; k < table.size(); k += 200)
        CHECK(rel_dev(table.re_alpha[k], 0.5 * table.gamma[k]) <= 1e-9);
    // Gamma nondecreasing for the paper parameters.
    for (std::size_t k = 1; k < table.size(); ++k)
        CHECK(table.Gamma[k] >= table.Gamma[k - 1] - 1e-12);
}

TEST_CASE("accumulated exponent differentiates back to the rate", "[bath]") {
    const RateTable table = build_rate_table(kPaperBath, uniform_grid(5.0, 101));
    double max_gamma = 0.0;
    for (double g : table.gamma) max_gamma = std::max(max_gamma, g);
    const double h = table.dt();
    for (std::size_t k = 1; k + 1 < table.size(); ++k) {
        const double slope = (table.Gamma[k + 1] - table.Gamma[k - 1]) / (2 * h);
        CHECK(std::abs(slope - table.gamma[k]) <= 1e-6 * max_gamma);
    }
}

TEST_CASE("accumulated phase matches brute-force double quadrature", "[bath]") {
    // X(t) = int J(w) (wt - sin wt)/w^2 dw by exchanging the order of
    // integration; dense Simpson over the frequency axis.
    const BathSpec spec = kPaperBath;
    const RateTable table =
        build_rate_table(spec, uniform_grid(200.0, 2001));
    const auto brute_x = [&](double t) {
        const int n = 200001;
        const double w_max = 50.0 * spec.lambda;
        const double h = w_max / (n - 1);
        const auto f = [&](double w) {
            if (w == 0.0) return 0.0;
            return spec.eta * std::exp(-w / spec.lambda) *
                   (w * t - std::sin(w * t)) / w;
        };
        double sum = f(0.0) + f(w_max);
        for (int k = 1; k < n - 1; ++k)
            sum += (k % 2 == 1 ? 4.0 : 2.0) * f(k * h);
        return sum * h / 3.0;
    };
    for (std::size_t k : {50u, 500u, 2000u}) {
        const double t = table.t[k];
        const double tol = 1e-10 + 1e-7 * std::abs(table.X[k]);
        CHECK(std::abs(table.X[k] - brute_x(t)) <= tol);
        CHECK(std::abs(table.X[k] -
                       closed_form::phase_accumulator(t, spec)) <= tol);
    }
}

TEST_CASE("rate table construction is deterministic", "[bath]") {
    const auto grid = uniform_grid(20.0, 41);
    const RateTable a = build_rate_table(kPaperBath, grid);
    const RateTable b = build_rate_table(kPaperBath, grid);
    CHECK(a.gamma == b.gamma);
    CHECK(a.re_alpha == b.re_alpha);
    CHECK(a.im_alpha == b.im_alpha);
    CHECK(a.Gamma == b.Gamma);
    CHECK(a.X == b.X);
}

TEST_CASE("rate is nonnegative for the paper temperature set", "[bath]") {
    const auto grid = uniform_grid(200.0, 201);
    for (double kT : {0.1, 0.2, 0.5, 2.0, 10.0}) {
        const RateTable table = build_rate_table(BathSpec{0.1, 0.01, kT}, grid);
        for (double g : table.gamma) CHECK(g >= -1e-12);
    }
}

TEST_CASE("exponent ordering in temperature", "[bath]") {
    const auto grid = uniform_grid(100.0, 101);
    std::vector<RateTable> tables;
    for (double kT : {0.1, 0.2, 0.5, 2.0, 10.0})
        tables.push_back(build_rate_table(BathSpec{0.1, 0.01, kT}, grid));
    for (std::size_t k = 1; k < grid.size(); ++k)
        for (std::size_t i = 1; i < tables.size(); ++i)
            CHECK(tables[i].Gamma[k] >= tables[i - 1].Gamma[k] - 1e-12);
}
