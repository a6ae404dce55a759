#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "ddae/builtin_models.hpp"
#include "ddae/errors.hpp"
#include "ddae/linear_model.hpp"
#include "ddae/pencil.hpp"
#include "ddae/spectrum.hpp"
#include "ddae/theta_integrator.hpp"
#include "oracles.hpp"

using namespace ddae;

namespace {

DdaeSystem linear_ode(double a) {
    auto f = [a](const Vector& x, const Vector&, DelayedSamples) -> Vector { return a * x; };
    auto hist = [](double) { return State{Vector::Ones(1), Vector(0)}; };
    return DdaeSystem(1, 0, f, {}, {}, hist, [a](const Vector&, const Vector&, DelayedSamples) {
        return Jacobians{Matrix::Constant(1, 1, a), {}};
    });
}

double scalar_error(double theta, double h) {
    const auto m = scalar_dde({{"a", -1.0}, {"b", -0.5}, {"tau", 1.0}, {"phi", 1.0}});
    const auto res = simulate(m.system, ThetaParams(theta, h), 2.0);
    const double ref = oracle::scalar_dde_reference(-1.0, -0.5, 1.0, 1.0, 2.0);
    return std::abs(res.X(0, static_cast<Eigen::Index>(res.samples()) - 1) - ref);
}

LinearDelayModel from_blocks(const oracle::LinearBlocks& b) {
    return make_linear_model(b.nu, b.mu, b.A0, b.Ak, b.h);
}

}  // namespace

TEST_CASE("history buffer") {
    HistoryBuffer hist(3, Vector::Zero(1));
    for (int i = 1; i <= 4; ++i) {
        hist.push(Vector::Constant(1, i));
    }
    CHECK(hist.sample(0)(0) == 4.0);
    CHECK(hist.sample(1)(0) == 3.0);
    CHECK(hist.sample(2)(0) == 2.0);
    CHECK_THROWS(hist.sample(3));

    const auto m = scalar_dde({{"tau", 0.3}});
    CHECK(required_depth(m.system, 0.1) == 5);
    CHECK(required_depth(linear_ode(-1.0), 0.1) == 2);
}

TEST_CASE("single steps") {
    SUBCASE("delay-free step equals R(ah)") {
        for (double theta : {0.0, 0.3, 0.5, 1.0}) {
            const double a = -3.0;
            const double h = 0.1;
            const DdaeSystem sys = linear_ode(a);
            HistoryBuffer hist(2, Vector::Ones(1));
            const auto r = step(sys, ThetaParams(theta, h), hist);
            const double expected = oracle::theta_rational(theta, a * h).real();
            CHECK(r.v(0) == doctest::Approx(expected).epsilon(1e-13));
        }
    }
    SUBCASE("constant history, a = 0: x1 = 1 + b h") {
        for (double theta : {0.0, 0.5, 1.0}) {
            const double h = 0.1;
            const auto m = scalar_dde({{"a", 0.0}, {"b", -0.7}, {"tau", h}, {"phi", 1.0}});
            HistoryBuffer hist(m.system, h, required_depth(m.system, h));
            const auto r = step(m.system, ThetaParams(theta, h), hist);
            CHECK(r.v(0) == doctest::Approx(1.0 - 0.07).epsilon(1e-13));
        }
    }
    SUBCASE("trapezoidal step is reversible") {
        const DdaeSystem sys = linear_ode(-2.0);
        HistoryBuffer hist(2, Vector::Ones(1));
        const ThetaStepper fwd(sys, 0.5, 0.05);
        const ThetaStepper back(sys, 0.5, -0.05);
        hist.push(fwd.step(hist).v);
        const auto r = back.step(hist);
        CHECK(std::abs(r.v(0) - 1.0) <= 1e-14);
    }
    SUBCASE("signed step needs a delay-free system") {
        const auto m = scalar_dde();
        CHECK_THROWS_AS(ThetaStepper(m.system, 0.5, -0.1), ConfigError);
    }
    SUBCASE("backward Euler with b h = -1.8 and a = 0") {
        const double h = 0.1;
        const auto m = scalar_dde({{"a", 0.0}, {"b", -18.0}, {"tau", h}, {"phi", 1.0}});
        const auto res = simulate(m.system, ThetaParams(0.0, h), 2.0);
        REQUIRE(res.samples() == 21);
        for (std::size_t n = 0; n < res.samples(); ++n) {
            CHECK(res.X(0, static_cast<Eigen::Index>(n)) ==
                  doctest::Approx(std::pow(-0.8, static_cast<double>(n))).epsilon(1e-12));
        }
    }
}

TEST_CASE("global accuracy against a fine reference") {
    const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
    auto fitted_order = [&](double theta) {
        std::vector<double> errs;
        for (double h : hs) {
            errs.push_back(scalar_error(theta, h));
        }
        // least-squares slope of log err against log h
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const double x = std::log(hs[i]);
            const double y = std::log(errs[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(hs.size());
        return std::pair{(n * sxy - sx * sy) / (n * sxx - sx * sx), errs};
    };
    const auto [tm_order, tm_errs] = fitted_order(0.5);
    CHECK(tm_order >= 1.9);
    CHECK(tm_order <= 2.1);
    for (std::size_t i = 0; i < hs.size(); ++i) {
        CHECK(tm_errs[i] <= 0.1 * hs[i] * hs[i]);
    }
    const auto [bem_order, bem_errs] = fitted_order(0.0);
    CHECK(bem_order >= 0.9);
    CHECK(bem_order <= 1.1);
    CHECK(bem_errs.back() > tm_errs.back());
}

TEST_CASE("one step agrees with the linear recurrence") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const auto blocks = oracle::random_blocks(rng, 3, 2, 3);
        const auto model = from_blocks(blocks);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double theta = u(rng);
        const ThetaParams p(theta, model.h);
        const int n = model.dim();
        const DdaeSystem sys = realize(model, {Vector::Zero(model.nu), Vector::Zero(model.mu)});

        const ThetaStepper stepper(sys, p);
        const int depth = std::max(stepper.depth(), model.r() + 1);
        HistoryBuffer hist(depth, Vector::Zero(n));
        std::normal_distribution<double> g(0.0, 1.0);
        for (int lag = depth - 1; lag >= 0; --lag) {
            Vector v(n);
            for (int i = 0; i < n; ++i) v(i) = g(rng);
            hist.push(v);
        }
        const auto r = stepper.step(hist);
        CHECK(r.iterations == 1);

        const ThetaRecurrence rec = theta_recurrence(model, p);
        Vector rhs = Vector::Zero(n);
        for (int j = 0; j <= model.r(); ++j) {
            rhs += rec.D[static_cast<std::size_t>(j)] * hist.sample(j);
        }
        const Vector lhs = rec.M * r.v;
        CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-9 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()));
        CHECK(r.residual <= 1e-9);
    }
}

TEST_CASE("simulation") {
    SUBCASE("grid and bookkeeping") {
        const auto m = scalar_dde();
        const auto res = simulate(m.system, ThetaParams(0.5, 0.1), 1.0);
        CHECK(res.samples() == 11);
        CHECK(res.t.back() == doctest::Approx(1.0));
        CHECK(res.newton_iters.size() == 10);
        CHECK(res.status == SimulationStatus::Completed);
        CHECK(res.X(0, 0) == 1.0);
        CHECK(res.Y.rows() == 0);
    }
    SUBCASE("events set the state at the first grid time") {
        const auto m = scalar_dde({{"b", 0.0}});
        SimulationOptions opt;
        opt.events.push_back({0.95, [](State& s) { s.x(0) = 5.0; }, "kick"});
        const auto res = simulate(m.system, ThetaParams(0.5, 0.1), 2.0, opt);
        CHECK(res.X(0, 10) == 5.0);
        CHECK(res.X(0, 11) == doctest::Approx(5.0 * (1.0 - 0.05) / (1.0 + 0.05)));
    }
    SUBCASE("divergence is a status, not an exception") {
        const auto m = scalar_dde({{"a", 5.0}, {"b", 0.0}});
        const auto res = simulate(m.system, ThetaParams(0.5, 0.1), 100.0);
        CHECK(res.status == SimulationStatus::Diverged);
        REQUIRE(res.diverged_step.has_value());
        CHECK(*res.diverged_step < 1000);
    }
    SUBCASE("singular algebraic block reports the step") {
        Matrix a0(2, 2);
        a0 << -1.0, 0.0, 0.0, 0.0;
        const auto lin = make_linear_model(1, 1, a0, {Matrix::Zero(2, 2)}, 0.1);
        const DdaeSystem sys = realize(lin, {Vector::Ones(1), Vector::Zero(1)});
        try {
            simulate(sys, ThetaParams(0.5, 0.1), 1.0);
            FAIL("expected a singular iteration");
        } catch (const SingularIteration& e) {
            REQUIRE(e.step().has_value());
            CHECK(*e.step() == 1);
        }
    }
    SUBCASE("growth rate") {
        const auto m = scalar_dde({{"a", 0.3}, {"b", 0.0}});
        const auto res = simulate(m.system, ThetaParams(0.5, 0.01), 10.0);
        CHECK(growth_rate(res) == doctest::Approx(0.3).epsilon(1e-4));
        SimulationResult tiny;
        CHECK_THROWS_AS(growth_rate(tiny), ConfigError);
    }
    CHECK_THROWS_AS(simulate(scalar_dde().system, ThetaParams(0.5, 0.1), -1.0), ConfigError);
}

TEST_CASE("chain model under the trapezoidal rule") {
    const double h = 0.02;
    SUBCASE("beta = 1.01 grows at the discretised rate while g stays solved") {
        const auto m = multi_delay_chain({{"beta", 1.01}});
        const auto res = simulate(m.system, ThetaParams(0.5, h), 300.0);
        REQUIRE(res.status == SimulationStatus::Completed);
        CHECK(res.max_g_residual <= 1e-9);
        const double rate = growth_rate(res);
        CHECK(rate > 0.0);

        const auto eq = find_equilibrium(m.system, m.equilibrium);
        const auto lin = linearize(m.system, eq, h);
        const auto spec = deformed_spectrum(build_discrete_pencil(lin, ThetaParams(0.5, h)));
        double max_re = -1e300;
        for (const auto& s : spec.roots) max_re = std::max(max_re, s.real());
        CHECK(rate == doctest::Approx(max_re).epsilon(0.05));
    }
    SUBCASE("beta = 0 decays") {
        const auto m = multi_delay_chain({{"beta", 0.0}});
        const auto res = simulate(m.system, ThetaParams(0.5, h), 60.0);
        CHECK(res.status == SimulationStatus::Completed);
        CHECK(growth_rate(res) < 0.0);
    }
}

TEST_CASE("trajectory CSV") {
    const auto m = multi_delay_chain();
    const auto res = simulate(m.system, ThetaParams(0.5, 0.02), 0.1);
    const auto path = std::filesystem::temp_directory_path() / "ddae_traj_test.csv";
    write_trajectory_csv(res, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x1,x2,x3,x4,y1,y2");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 6);
}
