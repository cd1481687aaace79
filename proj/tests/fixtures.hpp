#pragma once

#include <cmath>
#include <random>

#include "dampchain/chain.hpp"

namespace fixtures {

using dampchain::DampingVector;
using dampchain::StochasticMatrix;

// Five-node complete link graph.
inline StochasticMatrix p_complete5() {
    const double a = 1.0 / 5, b = 1.0 / 4, c = 1.0 / 3;
    Eigen::MatrixXd p(5, 5);
    p << a, a, a, a, a,
         b, 0, b, b, b,
         0, c, 0, c, c,
         0, c, c, 0, c,
         0, c, c, c, 0;
    return StochasticMatrix(p);
}

// Four-state chain reused as the first block of the two-class example.
inline Eigen::MatrixXd block_a() {
    const double h = 1.0 / 2, t = 1.0 / 3;
    Eigen::MatrixXd p(4, 4);
    p << 0, 1, 0, 0,
         t, 0, t, t,
         0, h, 0, h,
         0, h, h, 0;
    return p;
}

inline Eigen::MatrixXd block_b() {
    const double h = 1.0 / 2, t = 1.0 / 3;
    Eigen::MatrixXd p(4, 4);
    p << 0, 1, 0, 0,
         0, 0, h, h,
         t, t, 0, t,
         t, t, t, 0;
    return p;
}

inline StochasticMatrix p_four() { return StochasticMatrix(block_a()); }

inline StochasticMatrix p_two_class() {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(8, 8);
    p.topLeftCorner(4, 4) = block_a();
    p.bottomRightCorner(4, 4) = block_b();
    return StochasticMatrix(p);
}

// Random chains for property tests. Every row gets a self-loop so classes are aperiodic.
inline Eigen::MatrixXd random_block(std::mt19937_64& rng, int m, double zero_prob = 0.3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd p(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) p(i, j) = u(rng) < zero_prob ? 0.0 : u(rng);
        p(i, i) += 0.05 + u(rng) * 0.1;
        p(i, (i + 1) % m) += 0.05;  // cycle keeps the block irreducible
        p.row(i) /= p.row(i).sum();
    }
    return p;
}

inline StochasticMatrix random_regular(std::mt19937_64& rng, int m) {
    return StochasticMatrix(random_block(rng, m), 1e-12);
}

inline StochasticMatrix random_two_class(std::mt19937_64& rng, int m1, int m2) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m1 + m2, m1 + m2);
    p.topLeftCorner(m1, m1) = random_block(rng, m1);
    p.bottomRightCorner(m2, m2) = random_block(rng, m2);
    return StochasticMatrix(p, 1e-12);
}

inline DampingVector random_damping(std::mt19937_64& rng, int m) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    Eigen::VectorXd d(m);
    for (int i = 0; i < m; ++i) d(i) = u(rng);
    d /= d.sum();
    return DampingVector(d);
}

inline Eigen::VectorXd random_probability(std::mt19937_64& rng, int m, double zero_prob = 0.2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd v(m);
    do {
        for (int i = 0; i < m; ++i) v(i) = u(rng) < zero_prob ? 0.0 : u(rng);
    } while (v.sum() == 0.0);
    return v / v.sum();
}

}  // namespace fixtures
