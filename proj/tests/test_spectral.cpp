#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dampchain/spectral.hpp"
#include "dampchain/stationary.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dampchain;

namespace {

const double s34 = std::sqrt(34.0);
const double s33 = std::sqrt(33.0);

bool has_eigenvalue(const Spectrum& s, cplx v, int mult) {
    return std::any_of(s.distinct.begin(), s.distinct.end(), [&](const EigenCluster& c) {
        return std::abs(c.value - v) < 1e-9 && c.multiplicity == mult;
    });
}

// Closed-form expansion coefficients of the five-node example for order n > 1.
double coeff5(int j, int n) {
    const double a = std::pow((1 + s34) / 33, n - 1), b = std::pow((1 - s34) / 33, n - 1);
    switch (j) {
        case 0: return (307.0 / 4356 - 853 * s34 / 74052) * a + (307.0 / 4356 + 853 * s34 / 74052) * b;
        case 1: return (-25.0 / 1089 + 107 * s34 / 37026) * a - (25.0 / 1089 + 107 * s34 / 37026) * b;
        default: return (-23.0 / 1452 + 71 * s34 / 24684) * a - (23.0 / 1452 + 71 * s34 / 24684) * b;
    }
}

double traj4(int j, int n) {
    const double a = std::pow(-0.25 - s33 / 12, n), b = std::pow(-0.25 + s33 / 12, n);
    switch (j) {
        case 0: return 1.0 / 8 + (1.0 / 16 + s33 / 528) * a + (1.0 / 16 - s33 / 528) * b;
        case 1: return 3.0 / 8 - (1.0 / 16 + 3 * s33 / 176) * a + (-1.0 / 16 + 3 * s33 / 176) * b;
        default: return 1.0 / 4 + s33 / 132 * a - s33 / 132 * b;
    }
}

}  // namespace

TEST_CASE("spectra of the worked chains") {
    const auto s5 = spectrum(fixtures::p_complete5());
    CHECK(s5.eigenvalues.size() == 5);
    CHECK(s5.eigenvalues[0] == cplx(1.0, 0.0));
    CHECK(has_eigenvalue(s5, -1.0 / 3, 2));
    CHECK(has_eigenvalue(s5, -1.0 / 15 - s34 / 30, 1));
    CHECK(has_eigenvalue(s5, -1.0 / 15 + s34 / 30, 1));
    CHECK(s5.second_modulus() == doctest::Approx(1.0 / 3).epsilon(1e-12));

    const auto s4 = spectrum(fixtures::p_four());
    CHECK(has_eigenvalue(s4, -0.5, 1));
    CHECK(has_eigenvalue(s4, -0.25 - s33 / 12, 1));
    CHECK(has_eigenvalue(s4, -0.25 + s33 / 12, 1));
    CHECK(s4.second_modulus() == doctest::Approx(0.25 + s33 / 12));

    const auto id = spectrum(StochasticMatrix::identity(3));
    REQUIRE(id.distinct.size() == 1);
    CHECK(id.distinct[0].multiplicity == 3);

    const auto one = spectrum(StochasticMatrix::identity(1));
    CHECK(one.second_modulus() == 0.0);
}

TEST_CASE("rank-one damping matrix has spectrum {1, 0, ...}") {
    Eigen::VectorXd d(4);
    d << 0.1, 0.2, 0.3, 0.4;
    const StochasticMatrix dm(d.transpose().replicate(4, 1));
    const auto s = spectrum(dm);
    CHECK(s.second_modulus() < 1e-12);
    const auto c = spectral_coefficients(dm, DampingVector(d), s);
    CHECK(c.rho.empty());
    CHECK((c.pi0 - d).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("eigen decomposition of the five-node trajectory") {
    const auto p0 = fixtures::p_complete5();
    const auto d = DampingVector::uniform(5);
    const auto c = spectral_coefficients(p0, d, spectrum(p0));
    // The double eigenvalue -1/3 contributes nothing when starting from uniform.
    for (std::size_t l = 0; l < c.rho.size(); ++l)
        if (std::abs(c.rho[l] - cplx(-1.0 / 3)) < 1e-9) CHECK(c.c.row(static_cast<Eigen::Index>(l)).cwiseAbs().maxCoeff() < 1e-10);
    for (int n = 1; n <= 12; ++n) {
        const Eigen::VectorXcd r = c.reconstruct(n);
        const Eigen::VectorXd ref = oracle::propagate(d.values(), p0.values(), n);
        CHECK((r.real() - ref).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(r.imag().cwiseAbs().maxCoeff() < 1e-12);
        CHECK(r(3).real() == doctest::Approx(r(4).real()).epsilon(1e-12));
    }
}

TEST_CASE("eigen decomposition of the four-state trajectory") {
    const auto p0 = fixtures::p_four();
    const auto d = DampingVector::uniform(4);
    const auto c = spectral_coefficients(p0, d, spectrum(p0));
    for (int n = 1; n <= 12; ++n) {
        const Eigen::VectorXcd r = c.reconstruct(n);
        for (int j = 0; j < 4; ++j) CHECK(r(j).real() == doctest::Approx(traj4(std::min(j, 2), n)).epsilon(1e-10));
    }
}

TEST_CASE("five-node expansion coefficients") {
    const auto p0 = fixtures::p_complete5();
    const auto d = DampingVector::uniform(5);
    const auto e = expansion(p0, d, decompose(p0), 6);
    REQUIRE(e.order() == 6);
    const Eigen::VectorXd pi0 = (Eigen::VectorXd(5) << 5.0 / 66, 8.0 / 33, 5.0 / 22, 5.0 / 22, 5.0 / 22).finished();
    CHECK((e.base - pi0).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(e.coeffs(0, 0) == doctest::Approx(307.0 / 2178).epsilon(1e-12));
    CHECK(e.coeffs(0, 1) == doctest::Approx(-50.0 / 1089).epsilon(1e-12));
    CHECK(e.coeffs(0, 2) == doctest::Approx(-23.0 / 726).epsilon(1e-12));
    for (int n = 2; n <= 6; ++n)
        for (int j = 0; j < 3; ++j)
            CHECK(e.coeffs(n - 1, j) == doctest::Approx(coeff5(j, n)).epsilon(1e-9).scale(1e-9));
    // Printed rounding.
    const double printed[2][3] = {{0.14096, -0.04591, -0.03168}, {-0.01946, 0.00456, 0.00497}};
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(e.coeffs(k, j) - printed[k][j]) < 1e-5);
    for (int k = 0; k < e.order(); ++k) CHECK(std::abs(e.coeffs.row(k).sum()) < 1e-13);

    const Eigen::MatrixXd ref = oracle::expansion_by_series(p0.values(), d.values(), pi0, 6);
    CHECK((e.coeffs - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("four-state expansion coefficients are the stated rationals") {
    const auto p0 = fixtures::p_four();
    const auto e = expansion(p0, DampingVector::uniform(4), decompose(p0), 2);
    const double first[4] = {7.0 / 64, -3.0 / 64, -1.0 / 32, -1.0 / 32};
    const double second[4] = {-1.0 / 512, -27.0 / 512, 7.0 / 256, 7.0 / 256};
    for (int j = 0; j < 4; ++j) {
        CHECK(e.coeffs(0, j) == doctest::Approx(first[j]).epsilon(1e-12));
        CHECK(e.coeffs(1, j) == doctest::Approx(second[j]).epsilon(1e-12));
    }
}

TEST_CASE("singular expansion on the two-class chain") {
    const auto p0 = fixtures::p_two_class();
    const auto s = decompose(p0);
    const auto e = expansion(p0, DampingVector::uniform(8), s, 3);
    const double base[8] = {1.0 / 16, 3.0 / 16, 1.0 / 8, 1.0 / 8, 1.0 / 12, 1.0 / 6, 1.0 / 8, 1.0 / 8};
    for (int j = 0; j < 8; ++j) CHECK(e.base(j) == doctest::Approx(base[j]).epsilon(1e-12));
    CHECK(e.coeffs(0, 0) == doctest::Approx(7.0 / 128).epsilon(1e-12));
    CHECK(e.coeffs(0, 4) == doctest::Approx(5.0 / 144).epsilon(1e-12));
    CHECK(e.coeffs(1, 5) == doctest::Approx(-7.0 / 432).epsilon(1e-12));
    // Each class keeps its mass f_d = 1/2, so coefficients sum to zero per class.
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(e.coeffs.row(k).head(4).sum()) < 1e-13);
        CHECK(std::abs(e.coeffs.row(k).tail(4).sum()) < 1e-13);
    }
    // Class-local coefficients scaled by 1/2.
    const auto local = expansion(fixtures::p_four(), DampingVector::uniform(4), decompose(fixtures::p_four()), 3);
    CHECK((e.coeffs.leftCols(4) - 0.5 * local.coeffs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("truncation error shrinks with the expected order") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 6; ++t) {
        const int m = 3 + t;
        const auto p0 = fixtures::random_regular(rng, m);
        const auto d = fixtures::random_damping(rng, m);
        const auto e = expansion(p0, d, decompose(p0), 3);
        const Eigen::MatrixXd ref = oracle::expansion_by_series(p0.values(), d.values(), e.base, 3, 2000);
        CHECK((e.coeffs - ref).cwiseAbs().maxCoeff() < 1e-8);
        for (int order = 1; order <= 3; ++order) {
            auto err = [&](double eps) {
                const auto exact = stationary_series(p0, d, eps, 1e-15).pi.values();
                return (evaluate_expansion(e, eps, order).values - exact).cwiseAbs().maxCoeff();
            };
            const double e1 = err(0.02), e2 = err(0.01);
            // Halving eps divides the remainder by about 2^(order+1).
            if (e1 > 1e-12) CHECK(e1 / e2 > std::pow(2.0, order + 1) * 0.6);
        }
    }
}

TEST_CASE("evaluation") {
    ExpansionSeries s;
    s.base = Eigen::Vector2d(0.5, 0.5);
    s.coeffs = Eigen::MatrixXd(2, 2);
    s.coeffs << 0.1, -0.1, 0.02, -0.01;
    const auto v = evaluate_expansion(s, 0.5);
    CHECK(v.values(0) == doctest::Approx(0.5 + 0.05 + 0.005));
    CHECK(v.values(1) == doctest::Approx(0.5 - 0.05 - 0.0025));
    CHECK(v.mass_defect == doctest::Approx(0.0025));
    CHECK(evaluate_expansion(s, 0.5, 1).values(0) == doctest::Approx(0.55));
    CHECK(evaluate_expansion(s, 0.5, 0).values(0) == doctest::Approx(0.5));
    CHECK_THROWS(evaluate_expansion(s, 0.5, 3));
}

TEST_CASE("expansion rejects unsupported inputs") {
    Eigen::MatrixXd flip(2, 2);
    flip << 0, 1, 1, 0;
    const StochasticMatrix f(flip);
    CHECK_THROWS_AS(expansion(f, DampingVector::uniform(2), decompose(f), 2), Error);

    // Companion matrix with a double eigenvalue -1/4, hence a Jordan block.
    Eigen::MatrixXd j(3, 3);
    j << 0, 1, 0,
         0, 0, 1,
         1.0 / 16, 7.0 / 16, 0.5;
    const StochasticMatrix defective(j);
    REQUIRE(decompose(defective).regime == Regime::Regular);
    try {
        expansion(defective, DampingVector::uniform(3), decompose(defective), 2);
        FAIL("expected NonSemisimple");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonSemisimple);
    }
}
