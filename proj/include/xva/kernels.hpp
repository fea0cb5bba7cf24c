#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// variant with identical per-element arithmetic, so results agree bit for bit.

#include <utility>

#include "xva/drivers.hpp"

namespace xva {

enum class Level { xva, value };

namespace kernels {

// out[i] = g_reduced(m, side, t, u[i], z[i], vhat[i])
void driver_row_serial(const MarketModel& m, Side side, double t, const double* u,
                       const double* z, const double* vhat, double* out, int n);
void driver_row_omp(const MarketModel& m, Side side, double t, const double* u, const double* z,
                    const double* vhat, double* out, int n);

// (max_i |a[i] - b[i]|, argmax); argmax = -1 when n = 0
std::pair<double, int> max_abs_diff_serial(const double* a, const double* b, int n);
std::pair<double, int> max_abs_diff_omp(const double* a, const double* b, int n);

struct StepStats {
    int iterations = 0;     // most fixed-point iterations used by any node
    double residual = 0.0;  // worst final fixed-point increment
    int worst = -1;         // node holding it
};

// One backward step of the binomial scheme for one side. `next` holds count+1
// values at step k+1 (node j+1 is the up-move of node j). Writes U and the Brownian
// integrand Z at step k. At Level::xva the driver receives Z + zhat (agent hedge),
// at Level::value zhat is ignored.
struct LatticeStepInput {
    const MarketModel* model;
    Side side;
    Level level;
    double t, dt;
    const double* next;
    const double* vhat;
    const double* zhat;
    int count;
    double tol;
    int max_iter;
};

StepStats lattice_step_serial(const LatticeStepInput& in, double* u, double* z);
StepStats lattice_step_omp(const LatticeStepInput& in, double* u, double* z);

}  // namespace kernels
}  // namespace xva
