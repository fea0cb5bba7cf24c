#pragma once

#include <vector>

#include "xva/claim.hpp"
#include "xva/kernels.hpp"

namespace xva {

// Recombining binomial lattice in the Brownian coordinate, +-sqrt(dt) moves with
// probability 1/2; S is the exact exponential of W on the nodes. Independent of the
// PDE discretization.
struct LatticeOptions {
    double tol = 1e-12;    // scalar fixed point per node
    int max_iter = 200;
    bool parallel = false;
    bool keep_fields = false;
};

struct OracleSolution {
    int n_steps = 0;
    double dt = 0;
    Level level = Level::xva;
    Side side = Side::seller;
    double U0 = 0, Z0 = 0;
    // Node (k, j) at index k(k+1)/2 + j when keep_fields is set.
    std::vector<double> U, Z;
    int max_iterations = 0;

    double u(int k, int j) const { return U[static_cast<size_t>(k) * (k + 1) / 2 + j]; }
    double s(const MarketModel& m, int k, int j) const;
};

OracleSolution solve_reduced(const MarketModel& m, const ClaimSpec& spec, int n_steps, Level level,
                             Side side, const LatticeOptions& opts = {});

struct BandResult {
    double buyer = 0, seller = 0;
    double z_buyer = 0, z_seller = 0;  // Brownian integrands at the root
    double width() const { return seller - buyer; }
};

// Both sides in one backward sweep sharing the agent values.
BandResult band(const MarketModel& m, const ClaimSpec& spec, int n_steps,
                const LatticeOptions& opts = {});

}  // namespace xva
