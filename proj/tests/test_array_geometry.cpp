#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dmdoa/array_geometry.hpp"

using namespace dmdoa;

namespace {
constexpr double kFc = 2e9;
constexpr double kPi = std::numbers::pi;
const double kOmegaC = 2.0 * kPi * kFc;

double deg(double d) { return d * kPi / 180.0; }
} // namespace

TEST_CASE("direction_vector convention") {
    const Vec3 broadside = direction_vector(0.0);
    CHECK(broadside[0] == doctest::Approx(0.0));
    CHECK(broadside[1] == doctest::Approx(1.0));
    CHECK(broadside[2] == 0.0);

    const Vec3 endfire = direction_vector(kPi / 2.0);
    CHECK(endfire[0] == doctest::Approx(1.0));
    CHECK(endfire[1] == doctest::Approx(0.0).epsilon(1e-12));

    const Vec3 d30 = direction_vector(deg(30.0));
    CHECK(d30[0] == doctest::Approx(0.5));
    CHECK(d30[1] == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(d30[0] * d30[0] + d30[1] * d30[1] + d30[2] * d30[2] == doctest::Approx(1.0));
}

TEST_CASE("delays: worked half-wavelength example") {
    const auto geom = geometry_from_positions_d({0.0, 5.0, 10.0}, kFc);
    SUBCASE("broadside gives all zeros") {
        for (double tau : delays(geom, 0.0)) CHECK(tau == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("theta = 30 deg, first-element reference") {
        const auto tau = delays(geom, deg(30.0));
        CHECK(tau[0] == doctest::Approx(0.0));
        CHECK(tau[1] == doctest::Approx(0.625e-9).epsilon(1e-9));
        CHECK(tau[2] == doctest::Approx(1.25e-9).epsilon(1e-9));
    }
    SUBCASE("theta = 30 deg, centroid reference") {
        auto centered = geom;
        centered.reference = DelayReference::Centroid;
        const auto tau = delays(centered, deg(30.0));
        CHECK(tau[0] == doctest::Approx(-0.625e-9).epsilon(1e-9));
        CHECK(tau[1] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(tau[2] == doctest::Approx(0.625e-9).epsilon(1e-9));
        double sum = 0.0;
        for (double t : tau) sum += t;
        CHECK(std::abs(sum) < 1e-24);
    }
}

TEST_CASE("delay_stats") {
    const auto centered = geometry_from_positions_d({-5.0, 0.0, 5.0}, kFc, DelayReference::Centroid);
    const auto s = delay_stats(centered, deg(30.0));
    CHECK(s.std_tau == doctest::Approx(0.625e-9 * std::sqrt(2.0 / 3.0)).epsilon(1e-9));
    CHECK(std::abs(s.mu3) < 1e-40);

    SUBCASE("broadside stats vanish") {
        const auto s0 = delay_stats(centered, 0.0);
        CHECK(s0.std_tau == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("std is translation invariant") {
        const auto offset = geometry_from_positions_d({0.0, 5.0, 10.0}, kFc);
        CHECK(delay_stats(offset, deg(30.0)).std_tau == doctest::Approx(s.std_tau).epsilon(1e-12));
    }
}

TEST_CASE("steering_vector basics") {
    const auto geom = geometry_from_positions_d({0.0, 5.0, 10.0}, kFc);
    SUBCASE("broadside is all ones") {
        for (const auto& a : steering_vector(geom, 0.0, kOmegaC)) {
            CHECK(a.real() == doctest::Approx(1.0));
            CHECK(std::abs(a.imag()) < 1e-12);
        }
    }
    SUBCASE("unit modulus per element") {
        for (const auto& a : steering_vector(geom, deg(37.0), kOmegaC))
            CHECK(std::abs(std::abs(a) - 1.0) < 1e-14);
    }
}

TEST_CASE("grating lobes on a 5d ULA") {
    const auto geom = geometry_from_positions_d({0.0, 5.0, 10.0}, kFc);
    const auto lobes = grating_lobe_angles(geom, deg(20.0), kOmegaC);
    CHECK(lobes.size() == 5); // sin(th) = sin(20deg) + 0.4 k inside (-1, 1)

    bool has_true = false;
    for (double th : lobes) {
        if (th == deg(20.0)) has_true = true;
        // every lobe aliases the steering vector up to the reference-element ratio
        const auto a_true = steering_vector(geom, deg(20.0), kOmegaC);
        const auto a_g = steering_vector(geom, th, kOmegaC);
        const auto gamma = a_g[0] * std::conj(a_true[0]);
        double err = 0.0;
        for (std::size_t m = 0; m < a_g.size(); ++m) err += std::norm(a_g[m] - gamma * a_true[m]);
        CHECK(std::sqrt(err) < 1e-9 * std::sqrt(3.0));
    }
    CHECK(has_true);
}

TEST_CASE("grating lobes: half-wavelength spacing is unambiguous") {
    const auto nyquist = geometry_from_positions_d({0.0, 1.0, 2.0}, kFc);
    const auto lobes = grating_lobe_angles(nyquist, deg(20.0), kOmegaC);
    REQUIRE(lobes.size() == 1);
    CHECK(lobes[0] == doctest::Approx(deg(20.0)));
}

TEST_CASE("grating lobes: dense 50d set all alias the steering vector") {
    const auto geom = geometry_from_positions_d({0.0, 50.0, 100.0}, kFc);
    const auto lobes = grating_lobe_angles(geom, deg(20.0), kOmegaC);
    CHECK(lobes.size() > 10);
    const auto a_true = steering_vector(geom, deg(20.0), kOmegaC);
    for (double th : lobes) {
        const auto a_g = steering_vector(geom, th, kOmegaC);
        const auto gamma = a_g[0] * std::conj(a_true[0]);
        double err = 0.0, ref = 0.0;
        for (std::size_t m = 0; m < a_g.size(); ++m) {
            err += std::norm(a_g[m] - gamma * a_true[m]);
            ref += std::norm(a_g[m]);
        }
        CHECK(std::sqrt(err / ref) < 1e-10);
    }
}

TEST_CASE("grating lobes require a ULA") {
    const auto sparse = geometry_from_positions_d({0.0, 0.5, 10.5}, kFc);
    CHECK_THROWS(grating_lobe_angles(sparse, deg(20.0), kOmegaC));
}

TEST_CASE("translation invariance of stats and steering") {
    auto geom = geometry_from_positions_d({0.0, 5.0, 10.0}, kFc);
    auto shifted = geom;
    for (auto& p : shifted.positions) {
        p[0] += 1.25;
        p[1] += -0.75;
        p[2] += 3.0;
    }
    const double th = deg(25.0);
    const auto s1 = delay_stats(geom, th);
    const auto s2 = delay_stats(shifted, th);
    CHECK(s2.std_tau == doctest::Approx(s1.std_tau).epsilon(1e-12));
    CHECK(s2.mu3 == doctest::Approx(s1.mu3).epsilon(1e-9));

    const auto a1 = steering_vector(geom, th, kOmegaC);
    const auto a2 = steering_vector(shifted, th, kOmegaC);
    // first-element referencing already strips the global factor
    for (std::size_t m = 0; m < a1.size(); ++m) CHECK(std::abs(a1[m] - a2[m]) < 1e-9);
}

TEST_CASE("geometry validation") {
    CHECK_THROWS(geometry_from_positions_d({1.0}, kFc));
    CHECK_THROWS(geometry_from_positions_d({1.0, 1.0}, kFc));
}
