#include <doctest.h>

#include <random>

#include "dampchain/stationary.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dampchain;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

double maxdiff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("direct solve on the unperturbed chains") {
    const auto a = stationary_direct(fixtures::p_complete5());
    CHECK(maxdiff(a.pi.values(), vec({5.0 / 66, 8.0 / 33, 5.0 / 22, 5.0 / 22, 5.0 / 22})) < 1e-12);
    CHECK(a.residual < 1e-12);
    const auto b = stationary_direct(fixtures::p_four());
    CHECK(maxdiff(b.pi.values(), vec({1.0 / 8, 3.0 / 8, 1.0 / 4, 1.0 / 4})) < 1e-12);

    Eigen::VectorXd d(4);
    d << 0.1, 0.2, 0.3, 0.4;
    const Eigen::MatrixXd dmat = d.transpose().replicate(4, 1);
    CHECK(maxdiff(stationary_direct(StochasticMatrix(dmat)).pi.values(), d) < 1e-14);
}

TEST_CASE("direct solve rejects several closed classes") {
    CHECK_THROWS_AS(stationary_direct(fixtures::p_two_class()), Error);
    try {
        stationary_direct(fixtures::p_two_class());
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularSystem);
    }
}

TEST_CASE("power method") {
    const auto p0 = fixtures::p_complete5();
    const auto d = DampingVector::uniform(5);
    const auto pe = build_damped_matrix(DampedChain(p0, d, 0.15));
    const auto direct = stationary_direct(pe);

    SUBCASE("starting at the fixed point") {
        const auto s = stationary_power(pe, direct.pi, {1e-12, 100});
        CHECK(s.iterations_or_terms == 0);
    }
    SUBCASE("uniform start") {
        const auto s = stationary_power(pe, Distribution::uniform(5), {1e-12, 100000});
        CHECK(maxdiff(s.pi.values(), direct.pi.values()) < 1e-10);
        CHECK(s.residual < 1e-11);
    }
    SUBCASE("eps = 1 converges in one step") {
        const auto p1 = build_damped_matrix(DampedChain(p0, d, 1.0));
        const auto s = stationary_power(p1, Distribution::point_mass(5, 2), {1e-12, 10});
        CHECK(s.iterations_or_terms == 1);
        CHECK(maxdiff(s.pi.values(), d.values()) < 1e-15);
    }
    SUBCASE("max_iter exceeded carries the last iterate") {
        try {
            stationary_power(pe, Distribution::point_mass(5, 0), {1e-14, 3});
            FAIL("expected PowerIterationError");
        } catch (const PowerIterationError& e) {
            CHECK(e.iterations() == 3);
            CHECK(e.residual() > 0.0);
            CHECK(e.last_iterate().size() == 5);
            CHECK(e.code() == ErrorCode::NotConverged);
        }
    }
}

TEST_CASE("series representation") {
    const auto p0 = fixtures::p_complete5();
    const auto d = DampingVector::uniform(5);
    CHECK_THROWS_AS(stationary_series(p0, d, 0.0), Error);
    const auto one = stationary_series(p0, d, 1.0);
    CHECK(one.iterations_or_terms == 1);
    CHECK(maxdiff(one.pi.values(), d.values()) < 1e-15);

    const auto s = stationary_series(p0, d, 0.15, 1e-13);
    const auto pe = build_damped_matrix(DampedChain(p0, d, 0.15));
    CHECK(maxdiff(s.pi.values(), stationary_direct(pe).pi.values()) < 1e-9);
    CHECK(maxdiff(s.pi.values(), oracle::stationary_by_squaring(pe.values())) < 1e-9);

    // Tightening tol never moves the answer by more than the looser tol.
    for (double tol : {1e-4, 1e-6, 1e-8}) {
        const auto loose = stationary_series(p0, d, 0.05, tol);
        const auto tight = stationary_series(p0, d, 0.05, tol / 2);
        CHECK(maxdiff(loose.pi.values(), tight.pi.values()) <= tol);
    }
}

TEST_CASE("singular chain keeps class masses at f_d") {
    const auto p0 = fixtures::p_two_class();
    const auto d = DampingVector::uniform(8);
    const auto s = decompose(p0);
    for (double eps : {0.01, 0.1, 0.5, 1.0}) {
        const auto pi = stationary_series(p0, d, eps, 1e-14).pi;
        const auto f = class_mass(pi, s);
        CHECK(f[0] == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(f[1] == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("limit stationary laws") {
    const auto p0 = fixtures::p_two_class();
    const auto s = decompose(p0);
    const auto d = DampingVector::uniform(8);
    const auto from_d = limit_stationary(p0, d.as_distribution(), s);
    CHECK(maxdiff(from_d.values(), vec({1.0 / 16, 3.0 / 16, 1.0 / 8, 1.0 / 8, 1.0 / 12, 1.0 / 6, 1.0 / 8, 1.0 / 8})) <
          1e-12);
    const auto from_1 = limit_stationary(p0, Distribution::point_mass(8, 0), s);
    CHECK(maxdiff(from_1.values(), vec({1.0 / 8, 3.0 / 8, 1.0 / 4, 1.0 / 4, 0, 0, 0, 0})) < 1e-12);

    const auto r = decompose(fixtures::p_complete5());
    std::mt19937_64 rng(1);
    const Distribution any(fixtures::random_probability(rng, 5), 1e-12);
    CHECK(maxdiff(limit_stationary(fixtures::p_complete5(), any, r).values(),
                  vec({5.0 / 66, 8.0 / 33, 5.0 / 22, 5.0 / 22, 5.0 / 22})) < 1e-12);

    Eigen::MatrixXd flip(2, 2);
    flip << 0, 1, 1, 0;
    CHECK_THROWS_AS(limit_stationary(StochasticMatrix(flip), Distribution::uniform(2),
                                     decompose(StochasticMatrix(flip))),
                    Error);
}

TEST_CASE("continuity as eps shrinks") {
    for (const auto& p0 : {fixtures::p_complete5(), fixtures::p_two_class()}) {
        const auto s = decompose(p0);
        const auto d = DampingVector::uniform(p0.dim());
        const auto lim = limit_stationary(p0, d.as_distribution(), s);
        double prev = 1.0;
        for (double eps : {0.2, 0.1, 0.05, 0.025}) {
            const double dist = tv_distance(stationary_series(p0, d, eps, 1e-14).pi, lim);
            CHECK(dist <= prev);
            prev = dist;
        }
    }
}

TEST_CASE("three methods agree") {
    std::mt19937_64 rng(23);
    std::vector<std::pair<StochasticMatrix, DampingVector>> chains;
    chains.emplace_back(fixtures::p_complete5(), DampingVector::uniform(5));
    chains.emplace_back(fixtures::p_four(), DampingVector::uniform(4));
    chains.emplace_back(fixtures::p_two_class(), DampingVector::uniform(8));
    for (int t = 0; t < 5; ++t) {
        const int m = 3 + t;
        chains.emplace_back(fixtures::random_regular(rng, m), fixtures::random_damping(rng, m));
    }
    for (const auto& [p0, d] : chains) {
        for (double eps : {0.05, 0.15, 0.5, 1.0}) {
            const auto pe = build_damped_matrix(DampedChain(p0, d, eps));
            const auto a = stationary_direct(pe);
            const auto b = stationary_power(pe, Distribution::uniform(p0.dim()), {1e-13, 1000000});
            const auto c = stationary_series(p0, d, eps, 1e-13);
            CHECK(tv_distance(a.pi, b.pi) < 1e-8);
            CHECK(tv_distance(a.pi, c.pi) < 1e-8);
            CHECK(tv_distance(b.pi, c.pi) < 1e-8);
            CHECK(a.residual < 1e-10);
            CHECK(b.residual < 1e-10);
            CHECK(c.residual < 1e-10);
        }
    }
}
