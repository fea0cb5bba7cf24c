#include "xva/kernels.hpp"

#include <cmath>

namespace xva::kernels {

void driver_row_serial(const MarketModel& m, Side side, double t, const double* u,
                       const double* z, const double* vhat, double* out, int n) {
    for (int i = 0; i < n; ++i) out[i] = g_reduced(m, side, t, u[i], z[i], vhat[i]);
}

void driver_row_omp(const MarketModel& m, Side side, double t, const double* u, const double* z,
                    const double* vhat, double* out, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = g_reduced(m, side, t, u[i], z[i], vhat[i]);
}

namespace {

// NaN counts as worse than any number so failures surface in the reductions.
inline bool worse(double a, double b) { return std::isnan(a) ? !std::isnan(b) : a > b; }

// Merge a thread-local (value, index) into the global one; lowest index wins ties,
// which reproduces the serial scan.
inline void merge(double lv, int li, double& gv, int& gi) {
    if (li < 0) return;
    if (gi < 0 || worse(lv, gv) || (!worse(gv, lv) && li < gi)) {
        gv = lv;
        gi = li;
    }
}

}  // namespace

std::pair<double, int> max_abs_diff_serial(const double* a, const double* b, int n) {
    double best = 0.0;
    int arg = -1;
    for (int i = 0; i < n; ++i) {
        double d = std::abs(a[i] - b[i]);
        if (arg < 0 || worse(d, best)) {
            best = d;
            arg = i;
        }
    }
    return {best, arg};
}

std::pair<double, int> max_abs_diff_omp(const double* a, const double* b, int n) {
    double best = 0.0;
    int arg = -1;
#pragma omp parallel
    {
        double lb = 0.0;
        int la = -1;
#pragma omp for schedule(static) nowait
        for (int i = 0; i < n; ++i) {
            double d = std::abs(a[i] - b[i]);
            if (la < 0 || worse(d, lb)) {
                lb = d;
                la = i;
            }
        }
#pragma omp critical
        merge(lb, la, best, arg);
    }
    return {best, arg};
}

namespace {

inline double node_driver(const LatticeStepInput& in, double x, double ztot, double vh) {
    return in.level == Level::xva ? g_reduced(*in.model, in.side, in.t, x, ztot, vh)
                                  : g_value(*in.model, in.side, in.t, x, ztot, vh);
}

// Implicit in U, explicit in Z; scalar fixed point per node.
inline void lattice_node(const LatticeStepInput& in, int j, double* u, double* z, int& iters,
                         double& resid) {
    const double up = in.next[j + 1], dn = in.next[j];
    const double sq = std::sqrt(in.dt);
    const double e = 0.5 * (up + dn);
    const double zz = (up - dn) / (2.0 * sq);
    const double ztot = in.level == Level::xva ? zz + in.zhat[j] : zz;
    const double vh = in.vhat[j];
    double x = e, step = 0.0;
    int k = 0;
    for (; k < in.max_iter; ++k) {
        double nx = e + node_driver(in, x, ztot, vh) * in.dt;
        step = std::abs(nx - x);
        x = nx;
        if (!(step > in.tol)) break;
    }
    u[j] = x;
    z[j] = zz;
    iters = k + 1;
    resid = step;
}

}  // namespace

StepStats lattice_step_serial(const LatticeStepInput& in, double* u, double* z) {
    StepStats st;
    for (int j = 0; j < in.count; ++j) {
        int it;
        double r;
        lattice_node(in, j, u, z, it, r);
        if (it > st.iterations) st.iterations = it;
        if (st.worst < 0 || worse(r, st.residual)) {
            st.residual = r;
            st.worst = j;
        }
    }
    return st;
}

StepStats lattice_step_omp(const LatticeStepInput& in, double* u, double* z) {
    StepStats st;
#pragma omp parallel
    {
        StepStats loc;
#pragma omp for schedule(static) nowait
        for (int j = 0; j < in.count; ++j) {
            int it;
            double r;
            lattice_node(in, j, u, z, it, r);
            if (it > loc.iterations) loc.iterations = it;
            if (loc.worst < 0 || worse(r, loc.residual)) {
                loc.residual = r;
                loc.worst = j;
            }
        }
#pragma omp critical
        {
            if (loc.iterations > st.iterations) st.iterations = loc.iterations;
            merge(loc.residual, loc.worst, st.residual, st.worst);
        }
    }
    return st;
}

}  // namespace xva::kernels
