#ifndef TORUSFLUX_FLUX_HPP
#define TORUSFLUX_FLUX_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "torusflux/field.hpp"
#include "torusflux/mollify.hpp"
#include "torusflux/partition.hpp"
#include "torusflux/solver.hpp"

namespace torusflux {

// Sign conventions, recorded here and in the emitted schemas:
//   energy_flux_LP   Pi_N  = -int S_N[v_j (I - S_N^2) v_i] S_N d_j v_i dx,
//                    so that d/dt (1/2)||S_N v||^2 + Pi_N = 0 along the flow
//                    (positive flux = energy leaving scales <= N);
//   energy_flux_moll = int [(v (x) v)^eps - v^eps (x) v^eps] : grad v^eps dx
//                    = d/dt (1/2)||v^eps||^2;
//   helicity fluxes  = d/dt of the filtered/mollified helicity.
double energy_flux_LP(const TorusField& v, int N, const DyadicPartition& part);
double energy_flux_moll(const TorusField& v, const Mollifier& m);

// equal to energy_flux_LP by the divergence-free cancellation
// (Pi_N = -<v_i v_j, d_j S_N^2 v_i>); reuses the alias-free products
// T[i*d+j] = v_i v_j across several N, which is what the stepper's budget
// probes need
double energy_flux_LP_from_products(const std::vector<TorusField>& T, const TorusField& v, int N,
                                    const DyadicPartition& part);
std::vector<TorusField> velocity_products(const TorusField& v);

// 2 int (S_N(v (x) v) - S_N v (x) S_N v) : grad S_N omega dx
double helicity_flux_LP(const TorusField& v, int N, const DyadicPartition& part);
// equivalent cross-product form -2 int [S_N(omega x v) - S_N omega x S_N v] . S_N omega dx
double helicity_flux_LP_cross(const TorusField& v, int N, const DyadicPartition& part);
// 2 int [(v (x) v)^eps - v^eps (x) v^eps] : grad omega^eps dx
double helicity_flux_moll(const TorusField& v, const Mollifier& m);

struct FluxSeries {
    std::string kind; // energy_LP | energy_moll | helicity_LP | helicity_moll
    std::vector<double> index; // N (integer scale) or eps
    std::vector<double> values;
    double slope = 0.0; // log2 fit of |value| against index
};

FluxSeries flux_scan_LP(const TorusField& v, const DyadicPartition& part, bool helicity);
FluxSeries flux_scan_moll(const TorusField& v, std::span<const double> eps_list, bool helicity);

// two-sided exponential kernel 2^{j alpha} (j <= 0) / 2^{-(1-alpha) j} (j > 0)
struct GammaKernel {
    double alpha;
    double operator()(int j) const {
        return j <= 0 ? std::pow(2.0, alpha * j) : std::pow(2.0, -(1.0 - alpha) * j);
    }
    double l1(int terms = 512) const {
        double s = (*this)(0);
        for (int j = 1; j <= terms; ++j) s += (*this)(j) + (*this)(-j);
        return s;
    }
};

// (Gamma * d)(N) over the resolved scales j = j_lo..j_lo+len-1
double gamma_convolution(std::span<const double> d, int j_lo, double alpha, int N);

struct GammaBound {
    double value = 0.0;
    double exponent = 0.0;          // 2 - alpha - theta alpha, or 1 - beta - theta alpha
    bool criticality_warning = false; // set when the exponent is away from 0
};

// bound 2^{exponent N} (Gamma_alpha * d)^theta(N) (Gamma_beta * dtilde)(N);
// pass beta = NaN for the energy form (dtilde/beta default to d/alpha)
GammaBound gamma_bound(std::span<const double> d, std::span<const double> dtilde, double alpha,
                       double beta, double theta, int N, int j_lo = -1);

// smooth bump window supported in (t0, t1), for space-time test functions
struct TimeWindow {
    double t0 = 0.0;
    double t1 = 1.0;
    double value(double t) const;
    double derivative(double t) const;
};

// residual of the weak-form identity of the Euler equations along a stored
// trajectory: spatial test field psi (vector) times the window in time; the
// pressure is recovered spectrally from -lap Pi = div div (v (x) v).
// Also checks the weak divergence-free identity against grad of a scalar test.
double weak_solution_residual(const Trajectory& traj, const TorusField& test_field,
                              const TimeWindow& window);

} // namespace torusflux

#endif
