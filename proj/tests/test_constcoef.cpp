#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vekua/constcoef.hpp"

using namespace vekua;

namespace {

ConstOperatorSpec random_spec(std::mt19937& rng, int n, int max_order) {
    std::uniform_int_distribution<int> ord(1, max_order);
    std::uniform_int_distribution<int> nterms(1, 4);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    ConstOperatorSpec spec;
    spec.n = n;
    int T = nterms(rng);
    for (int t = 0; t < T; ++t) {
        int m = ord(rng);
        std::vector<int> alpha(size_t(n), 0);
        for (int u = 0; u < m; ++u) alpha[size_t(rng() % unsigned(n))] += 1;
        spec.terms[alpha] = cx(coef(rng), coef(rng));
    }
    spec.A = cx(coef(rng), coef(rng));
    spec.B = cx(coef(rng), coef(rng));
    return spec;
}

Spectrum random_rhs(std::mt19937& rng, int n, int band) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Spectrum F;
    F.n = n;
    for_each_lattice_point(n, 0.0, double(band), [&](const Freq& xi) {
        F.set(xi, cx(amp(rng), amp(rng)));
    });
    return F;
}

}  // namespace

TEST_CASE("symbol closed forms") {
    // one-dimensional d/dx: sigma = i xi
    ConstOperatorSpec ddx;
    ddx.n = 1;
    ddx.add_term({1}, cx(1.0, 0.0));
    CHECK(std::abs(symbol(ddx, Freq{5}) - cx(0.0, 5.0)) < 1e-14);

    // Laplacian: sigma = -|xi|^2
    ConstOperatorSpec lap = preset_laplace(2);
    CHECK(std::abs(symbol(lap, Freq{3, -4}) - cx(-25.0, 0.0)) < 1e-12);

    // heat d/dt - eta^2 d^2/dx^2: sigma = i tau + eta^2 xi^2
    ConstOperatorSpec heat = preset_heat(1, 2.0);
    CHECK(std::abs(symbol(heat, Freq{3, 5}) - cx(100.0, 3.0)) < 1e-12);

    // wave d^2/dt^2 - eta^2 d^2/dx^2: sigma = -tau^2 + eta^2 xi^2
    ConstOperatorSpec wave = preset_wave(1, 0.5);
    CHECK(std::abs(symbol(wave, Freq{4, 2}) - cx(-15.0, 0.0)) < 1e-12);

    CHECK(lap.order() == 2);
    CHECK(heat.order() == 2);
    CHECK_THROWS_AS(symbol(lap, Freq{1}), std::domain_error);
}

TEST_CASE("alpha = 0 terms are rejected") {
    ConstOperatorSpec spec;
    spec.n = 2;
    CHECK_THROWS_AS(spec.add_term({0, 0}, cx(1.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(spec.add_term({1, -1}, cx(1.0, 0.0)), std::domain_error);
}

TEST_CASE("discriminant conjugate symmetry on random operators") {
    std::mt19937 rng(2024);
    for (int rep = 0; rep < 25; ++rep) {
        int n = 1 + int(rng() % 3);
        ConstOperatorSpec spec = random_spec(rng, n, 4);
        for_each_lattice_point(n, 0.0, 6.0, [&](const Freq& xi) {
            cx d = discriminant(spec, xi);
            cx dm = discriminant(spec, negate(xi));
            CHECK(std::abs(std::conj(d) - dm) <= 1e-12 * (1.0 + std::abs(d)));
        });
    }
}

TEST_CASE("vector field discriminant closed form matches the symbol route") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<cx> C{cx(coef(rng), coef(rng))};
        cx A(coef(rng), coef(rng)), B(coef(rng), coef(rng));
        ConstOperatorSpec spec = preset_vector_field(C);
        spec.A = A;
        spec.B = B;
        for_each_lattice_point(2, 0.0, 8.0, [&](const Freq& zeta) {
            cx lhs = vector_field_discriminant(C, A, B, zeta);
            cx rhs = discriminant(spec, zeta);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
        });
    }
}

TEST_CASE("solve then apply reproduces the data") {
    std::mt19937 rng(99);
    ConstOperatorSpec spec = preset_laplace(2);
    spec.A = cx(1.0, 0.0);
    spec.B = cx(0.5, 0.0);
    Spectrum F = random_rhs(rng, 2, 5);
    auto [U, diag] = solve(spec, F);
    CHECK(diag.ok());
    CHECK(diag.non_unique_modes.empty());
    Spectrum R = apply(spec, U);
    for (const auto& [xi, a] : F.entries)
        CHECK(std::abs(R.entry(xi) - a) < 1e-10);
}

TEST_CASE("rank-deficient modes: compatibility and minimal-norm pick") {
    // d/dx with A = i: Delta_xi = 1 - xi^2 vanishes at xi = +-1
    ConstOperatorSpec spec;
    spec.n = 1;
    spec.add_term({1}, cx(1.0, 0.0));
    spec.A = cx(0.0, 1.0);

    auto bad = solve_mode(spec, Freq{1}, cx(1.0, 0.0), cx(0.0, 0.0));
    REQUIRE(std::holds_alternative<Incompatibility>(bad));
    CHECK(std::get<Incompatibility>(bad).xi == Freq{1});

    auto ok = solve_mode(spec, Freq{1}, cx(0.0, 0.0), cx(1.0, 0.0));
    REQUIRE(std::holds_alternative<ModeSolution>(ok));
    const auto& sol = std::get<ModeSolution>(ok);
    CHECK_FALSE(sol.unique);
    // residual check on the surviving equation
    cx lhs = (symbol(spec, Freq{-1}) - spec.A) * sol.uminus;
    CHECK(std::abs(lhs - cx(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(sol.uplus) < 1e-12);
}

TEST_CASE("zero mode solves as a real 2x2 system") {
    ConstOperatorSpec spec;
    spec.n = 1;
    spec.add_term({1}, cx(1.0, 0.0));
    spec.A = cx(2.0, 1.0);
    spec.B = cx(0.5, -0.3);
    cx f0(0.7, -0.2);
    auto res = solve_mode(spec, Freq{0}, f0, f0);
    REQUIRE(std::holds_alternative<ModeSolution>(res));
    cx u0 = std::get<ModeSolution>(res).uplus;
    CHECK(std::abs(-spec.A * u0 - spec.B * std::conj(u0) - f0) < 1e-12);
}

TEST_CASE("zero set of the shifted transport operator") {
    ConstOperatorSpec spec;
    spec.n = 1;
    spec.add_term({1}, cx(1.0, 0.0));
    spec.A = cx(0.0, 3.0);  // Delta = 9 - xi^2
    auto zeros = zero_set(spec, 10.0);
    CHECK(zeros == std::vector<Freq>{Freq{-3}, Freq{3}});
    Spectrum obstruction = build_obstruction(spec, {Freq{3}}, ObstructionVariant::sigma);
    CHECK(std::abs(obstruction.entry(Freq{3}) - (symbol(spec, Freq{3}) - spec.A)) <
          1e-14);
}

TEST_CASE("elliptic margins pass with constants at least one") {
    WeightSequence ws = make_gevrey(2.0);
    SolvabilityReport rep = check_dc_m(preset_laplace(2), ws, {0.5, 1.0}, 20.0);
    CHECK(rep.verdict == ScanVerdict::pass_on_range);
    for (const auto& c : rep.curves) CHECK(c.log_c_eps >= 0.0);
    CHECK(rep.zero_modes.empty());
}

TEST_CASE("degenerate modes give a degenerate scan verdict") {
    ConstOperatorSpec spec;
    spec.n = 1;
    spec.add_term({1}, cx(1.0, 0.0));
    spec.A = cx(0.0, 3.0);
    WeightSequence ws = make_gevrey(2.0);
    SolvabilityReport rep = check_dc_m(spec, ws, {1.0}, 10.0);
    CHECK(rep.verdict == ScanVerdict::degenerate);
    CHECK(rep.zero_modes == std::vector<Freq>{Freq{-3}, Freq{3}});
}

TEST_CASE("power-law lower bounds and their class consequence") {
    SmoothReport rep = check_smooth_dc(preset_laplace(2), {1.0, 2.0}, 30.0);
    CHECK(rep.any_pass());
    WeightSequence ws = make_gevrey(2.0);
    for (int gamma : {1, 2, 4, 8})
        for (double eps : {0.1, 1.0, 10.0})
            CHECK(smooth_implies_m_check(ws, gamma, eps, 50.0));
}

TEST_CASE("continued fraction values and convergents") {
    DiophantineNumber r2 = cf_sqrt2(25);
    CHECK(r2.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    DiophantineNumber phi = cf_golden(40);
    CHECK(phi.value == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));

    // convergent recurrence and approximation quality |x - p/q| < 1/q^2
    for (size_t k = 2; k + 1 < r2.convergents.size() && k < 12; ++k) {
        auto [p, q] = r2.convergents[k];
        auto [pp, qp] = r2.convergents[k - 1];
        auto [ppp, qpp] = r2.convergents[k - 2];
        CHECK(p == r2.quotients[k] * pp + ppp);
        CHECK(q == r2.quotients[k] * qp + qpp);
        double pd = p.convert_to<double>(), qd = q.convert_to<double>();
        CHECK(std::abs(std::sqrt(2.0) - pd / qd) < 1.0 / (qd * qd));
    }
}

TEST_CASE("liouville-like surrogates") {
    DiophantineNumber l = cf_liouville_like(2, 3);
    REQUIRE(l.quotients.size() == 4);
    CHECK(l.quotients[1] == 2);
    CHECK(l.quotients[2] == 4);   // 2^{2!}
    CHECK(l.quotients[3] == 64);  // 2^{3!}
    // oracle: evaluate [0; 2, 4, 64] directly
    double direct = 1.0 / (2.0 + 1.0 / (4.0 + 1.0 / 64.0));
    CHECK(l.value == doctest::Approx(direct).epsilon(1e-15));

    CHECK_THROWS_AS(cf_liouville_like(2, 9), resource_error);
    CHECK(irrationality_estimate(cf_liouville_like(2, 6)) > 3.5);
    CHECK(irrationality_estimate(cf_sqrt2(25)) < 2.5);

    auto dens = cf_liouville_like(2, 4).small_denominators(1000.0);
    REQUIRE(dens.size() >= 3);
    CHECK(dens[1] == doctest::Approx(2.0));
    CHECK(dens[2] == doctest::Approx(9.0));  // 4*2 + 1
}

TEST_CASE("cf expansion of a rational recovers its quotients") {
    DiophantineNumber d = cf_from_value(0.75, 10);
    // 0.75 = [0; 1, 3]
    REQUIRE(d.quotients.size() == 3);
    CHECK(d.quotients[0] == 0);
    CHECK(d.quotients[1] == 1);
    CHECK(d.quotients[2] == 3);
    CHECK(d.value == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("wave trichotomy") {
    WeightSequence ws = make_gevrey(2.0);
    DiophantineNumber r2 = cf_sqrt2(25);

    WaveVerdict damped = classify_wave(cx(0.0, 2.0), cx(1.0, 0.0), r2, ws, 30.0);
    CHECK(damped.matched_condition == 1);
    CHECK(damped.solvable_on_range);

    WaveVerdict balanced = classify_wave(cx(0.0, 1.0), cx(1.0, 0.0), r2, ws, 30.0);
    CHECK(balanced.matched_condition == 2);
    CHECK(balanced.solvable_on_range);
    CHECK(balanced.mu_estimate < 2.5);

    WaveVerdict liou = classify_wave(cx(0.0, 1.0), cx(1.0, 0.0),
                                     cf_liouville_like(2, 6), ws, 50.0);
    CHECK(liou.matched_condition == 0);
    CHECK_FALSE(liou.solvable_on_range);
    REQUIRE(liou.scan.has_value());
    CHECK(liou.scan->verdict == ScanVerdict::fail_witness);
}

TEST_CASE("vector field trichotomy") {
    WeightSequence ws = make_gevrey(2.0);
    std::vector<cx> C{cx(0.5, 0.0)};

    VectorFieldVerdict big_b = classify_vector_field(C, cx(1.0, 0.0), cx(3.0, 0.0),
                                                     ws, 20.0);
    CHECK(big_b.matched_condition == 1);
    CHECK(big_b.solvable_on_range);
    CHECK(big_b.closed_form_max_mismatch < 1e-12);

    VectorFieldVerdict re_a = classify_vector_field(C, cx(2.0, 0.5), cx(1.0, 0.0),
                                                    ws, 20.0);
    CHECK(re_a.matched_condition == 2);

    std::vector<cx> Cirr{cx(std::sqrt(2.0), 0.0)};
    VectorFieldVerdict scan = classify_vector_field(Cirr, cx(0.0, 1.0), cx(1.0, 0.0),
                                                    ws, 60.0);
    CHECK(scan.matched_condition == 3);
    CHECK(scan.solvable_on_range);
    CHECK(scan.closed_form_max_mismatch < 1e-12);
}
