#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dampchain/chain.hpp"

namespace dampchain {

enum class Regime { Regular, Singular, Unsupported };

std::string_view to_string(Regime r);

struct ClosedClass {
    std::vector<std::size_t> states;  // 0-based, ascending
    int period = 1;
    bool aperiodic() const noexcept { return period == 1; }
    bool contains(std::size_t s) const;
};

struct ChainStructure {
    std::size_t dim = 0;
    std::vector<ClosedClass> classes;  // ordered by smallest member
    std::vector<std::size_t> transient_states;
    Regime regime = Regime::Unsupported;
    std::string diagnostic;

    /// Index of the closed class holding `state`, or nullopt for transient states.
    std::optional<std::size_t> class_of(std::size_t state) const;
};

ChainStructure decompose(const StochasticMatrix& p0);

/// f^(j) for each closed class.
std::vector<double> class_mass(const Eigen::VectorXd& p, const ChainStructure& s);
std::vector<double> class_mass(const Distribution& p, const ChainStructure& s);

StochasticMatrix restrict_matrix(const StochasticMatrix& p0, const ClosedClass& cls);
/// d^(j) = d_k / f^(j).
DampingVector restrict_damping(const DampingVector& d, const ClosedClass& cls);
/// Renormalized restriction; nullopt when the distribution puts no mass on the class.
std::optional<Distribution> restrict_distribution(const Distribution& p, const ClosedClass& cls);

/// Sub-vector on the class states, no renormalization.
Eigen::VectorXd gather(const Eigen::VectorXd& v, const ClosedClass& cls);

}  // namespace dampchain
