#include <doctest.h>

#include <cmath>
#include <random>

#include "tbwsim/atmosphere.hpp"
#include "tbwsim/types.hpp"

using namespace tbwsim;

TEST_CASE("dryden scale lengths and intensities") {
    const double z100ft = 100.0 * kFtToMeter;
    const DrydenParams p = dryden_scales(z100ft, 10.0, 160.0);

    CHECK(p.L_w == doctest::Approx(z100ft));            // L_w = z
    CHECK(p.sigma_w == doctest::Approx(1.0));           // 0.1 * u20
    // independent arithmetic of the scale-length formula at z = 100 ft
    const double expected_Lu_ft = 100.0 / std::pow(0.177 + 0.0823, 1.2);
    CHECK(p.L_u == doctest::Approx(expected_Lu_ft * kFtToMeter).epsilon(1e-12));
    CHECK(p.L_u == p.L_v);
    CHECK(p.sigma_u == p.sigma_v);
    CHECK(p.sigma_u == doctest::Approx(1.0 / std::pow(0.2593, 0.4)).epsilon(1e-12));

    CHECK_THROWS_AS(dryden_scales(0.0, 10.0, 160.0), ConfigError);
    CHECK_THROWS_AS(dryden_scales(-5.0, 10.0, 160.0), ConfigError);
}

TEST_CASE("gust filters decay without noise") {
    WindState wind;
    const DrydenParams p = dryden_scales(100.0, 7.7, 160.0);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        dryden_step(wind, p, Vec3(unit(rng), unit(rng), unit(rng)), 0.01);
    }
    CHECK(wind.W.norm() > 0.0);
    for (int i = 0; i < 40000; ++i) dryden_step(wind, p, Vec3::Zero(), 0.01);
    CHECK(wind.W.norm() < 1e-6);
}

TEST_CASE("gust standard deviations converge to the published intensities") {
    WindState wind;
    const DrydenParams p = dryden_scales(100.0, 7.7, 160.0);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> unit(0.0, 1.0);

    const int warmup = 20000, n = 1000000;
    for (int i = 0; i < warmup; ++i)
        dryden_step(wind, p, Vec3(unit(rng), unit(rng), unit(rng)), 0.01);

    Vec3 sum = Vec3::Zero(), sum2 = Vec3::Zero();
    for (int i = 0; i < n; ++i) {
        dryden_step(wind, p, Vec3(unit(rng), unit(rng), unit(rng)), 0.01);
        sum += wind.W;
        sum2 += wind.W.cwiseProduct(wind.W);
    }
    const Vec3 mean = sum / n;
    const Vec3 var = sum2 / n - mean.cwiseProduct(mean);
    CHECK(std::sqrt(var(0)) == doctest::Approx(p.sigma_u).epsilon(0.10));
    CHECK(std::sqrt(var(1)) == doctest::Approx(p.sigma_v).epsilon(0.10));
    CHECK(std::sqrt(var(2)) == doctest::Approx(p.sigma_w).epsilon(0.10));
}

TEST_CASE("gust output is linear in the intensity") {
    const DrydenParams base = dryden_scales(100.0, 7.7, 160.0);
    DrydenParams doubled = base;
    doubled.sigma_u *= 2.0;
    doubled.sigma_v *= 2.0;
    doubled.sigma_w *= 2.0;

    // one distribution object per stream: the generator caches draws
    WindState w1, w2;
    std::mt19937_64 rng1(23), rng2(23);
    std::normal_distribution<double> unit1(0.0, 1.0), unit2(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const Vec3 n1(unit1(rng1), unit1(rng1), unit1(rng1));
        const Vec3 n2(unit2(rng2), unit2(rng2), unit2(rng2));
        dryden_step(w1, base, n1, 0.01);
        dryden_step(w2, doubled, n2, 0.01);
    }
    CHECK(w2.W(0) == doctest::Approx(2.0 * w1.W(0)).epsilon(1e-9));
    CHECK(w2.W(1) == doctest::Approx(2.0 * w1.W(1)).epsilon(1e-9));
    CHECK(w2.W(2) == doctest::Approx(2.0 * w1.W(2)).epsilon(1e-9));
}

TEST_CASE("identical seeds give identical gust trajectories") {
    const DrydenParams p = dryden_scales(100.0, 7.7, 160.0);
    auto run = [&]() {
        WindState w;
        std::mt19937_64 rng(99);
        std::normal_distribution<double> unit(0.0, 1.0);
        std::vector<double> out;
        for (int i = 0; i < 1000; ++i) {
            dryden_step(w, p, Vec3(unit(rng), unit(rng), unit(rng)), 0.01);
            out.push_back(w.W(2));
        }
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("wind gradients: steady wind and disabled turbulence give zeros") {
    WindState wind;
    wind.active = true;
    wind.W = Vec3(1.0, -2.0, 3.0);
    wind.W_prev = wind.W;
    wind_gradients(wind, 160.0, Mat3::Identity(), 0.01);
    CHECK(wind.dW_dt.norm() == 0.0);
    CHECK(wind.grad_W.norm() == 0.0);

    WindState off;  // inactive
    off.W = Vec3(1.0, 1.0, 1.0);
    wind_gradients(off, 160.0, Mat3::Identity(), 0.01);
    CHECK(off.grad_W.norm() == 0.0);
    CHECK(off.dW_dt.norm() == 0.0);
}

TEST_CASE("frozen-field gradient recovers a sinusoidal gust wavelength") {
    // Wz(t) = A sin(omega t) injected directly; dWz/dx should have amplitude
    // A * omega / u1 under the frozen-turbulence closure
    const double A = 2.0, omega = 3.0, u1 = 160.0, dt = 0.001;
    WindState wind;
    wind.active = true;
    double max_grad = 0.0;
    for (int i = 1; i < 8000; ++i) {
        const double t = i * dt;
        wind.W = Vec3(0.0, 0.0, A * std::sin(omega * t));
        wind_gradients(wind, u1, Mat3::Identity(), dt);
        if (t > 2.0) max_grad = std::max(max_grad, std::abs(wind.grad_W(2, 0)));
    }
    CHECK(max_grad == doctest::Approx(A * omega / u1).epsilon(0.01));
}

TEST_CASE("wind angular rates follow half the curl") {
    CHECK(wind_angular_rates(Mat3::Zero(), Mat3::Identity()).norm() == 0.0);

    // dWz/dy = -dWy/dz = c  ->  omega_x = c
    const double c = 0.4;
    Mat3 grad = Mat3::Zero();
    grad(2, 1) = c;
    grad(1, 2) = -c;
    const Vec3 omega = wind_angular_rates(grad, Mat3::Identity());
    CHECK(omega(0) == doctest::Approx(c));
    CHECK(omega(1) == doctest::Approx(0.0));
    CHECK(omega(2) == doctest::Approx(0.0));
}

TEST_CASE("frozen-field angular rate matches the hand-evaluated curl") {
    // only the x-column is populated: grad(i,0) = dW_i/dx
    Mat3 grad = Mat3::Zero();
    grad(1, 0) = 0.3;   // dWy/dx
    grad(2, 0) = -0.5;  // dWz/dx
    const Vec3 omega = wind_angular_rates(grad, Mat3::Identity());
    // omega = 0.5 * (0 - 0, 0 - dWz/dx, dWy/dx - 0)
    CHECK(omega(0) == doctest::Approx(0.0));
    CHECK(omega(1) == doctest::Approx(0.25));
    CHECK(omega(2) == doctest::Approx(0.15));
}

TEST_CASE("sensor noise statistics and purity") {
    std::mt19937_64 rng(5);
    const auto unchanged = add_sensor_noise(0.3, -0.1, 0.0, 0.0, rng);
    CHECK(unchanged.first == 0.3);
    CHECK(unchanged.second == -0.1);

    const double sigma = deg2rad(0.05);
    double sum = 0.0, sum2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto [theta, q] = add_sensor_noise(0.0, 0.0, sigma, sigma, rng);
        sum += theta;
        sum2 += theta * theta;
    }
    const double std_hat = std::sqrt(sum2 / n - (sum / n) * (sum / n));
    CHECK(std_hat == doctest::Approx(sigma).epsilon(0.05));

    CHECK_THROWS_AS(add_sensor_noise(0.0, 0.0, -1.0, 0.0, rng), ConfigError);
}
