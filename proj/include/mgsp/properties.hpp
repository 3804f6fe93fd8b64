#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgsp/network.hpp"

namespace mgsp {

struct PropertyCheck {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;
    double cp_residual = 0.0;

    bool passed() const;
    const PropertyCheck* find(const std::string& name) const;
};

struct PropertyOptions {
    int max_power = 10;
    int random_signals = 10;
    std::uint64_t seed = 1;
};

/// Checks on one representing tensor:
///   flattening-invariance    eigenvalue multisets of both flattenings agree
///   eigen-equation           |F <> V_k - lambda_k V_k| <= 1e-9 |F|
///   cp-approximate-eigen     per-pair CP eigen residual <= fit residual + 1e-9
///   cp-gram                  Gram tensor of the CP factor tensors is the identity
///   power-equivalence        spectral and contraction powers agree (undirected)
///   roundtrip-joint / roundtrip-orderwise / roundtrip-singular
/// Directed input runs flattening-invariance and eigen-equation only.
PropertyReport run_property_suite(const RepresentingTensor& f, const PropertyOptions& options = {});

} // namespace mgsp
