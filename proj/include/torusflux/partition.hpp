#ifndef TORUSFLUX_PARTITION_HPP
#define TORUSFLUX_PARTITION_HPP

#include <vector>

#include "torusflux/field.hpp"
#include "torusflux/grid.hpp"

namespace torusflux {

// Smooth cutoff profiles for the dyadic partition of unity:
//   rho: radial low-pass, == 1 for r <= 3/4, == 0 for r >= 4/3,
//   phi(r) = rho(r/2) - rho(r), supported in 3/4 <= r <= 8/3,
// built from the exp(-1/(1-t^2)) bump so the telescoping sum
//   rho(xi) + sum_{j>=0} phi(2^-j xi) = rho(2^-(J+1) xi)
// cancels exactly in floating point.
double rho_profile(double r);
double phi_profile(double r);

class DyadicPartition {
public:
    explicit DyadicPartition(const TorusGrid& grid);

    const TorusGrid& grid() const { return grid_; }
    static constexpr int j_min = -1;
    int j_max() const { return j_max_; }

    // multiplier value of block j at radius r (j = -1 uses rho)
    double block_multiplier(int j, double r) const;
    // multiplier value of the low-pass S_N at radius r
    double lowpass_multiplier(int N, double r) const;
    // partition-of-unity sum rho(xi) + sum_{j=0..jterms} phi(2^-j xi)
    double partition_sum(double r, int jterms) const;

    // Delta_j f for j in [-1, j_max]
    TorusField block(const TorusField& f, int j) const;
    // S_N f = rho(2^-N xi) f, N in [0, j_max + 1]
    TorusField low_pass(const TorusField& f, int N) const;
    // S_N^2 f = rho^2(2^-N xi) f; kept distinct from S_N
    TorusField low_pass_squared(const TorusField& f, int N) const;
    // homogeneous block phi(2^-j xi) f, any j (phi kills the zero mode)
    TorusField homogeneous_block(const TorusField& f, int j) const;

    // sampled multiplier array over the wavenumber lattice, one value per node
    std::vector<double> block_multiplier_array(int j) const;
    std::vector<double> lowpass_multiplier_array(int N) const;
    std::vector<double> lowpass_squared_multiplier_array(int N) const;
    std::vector<double> homogeneous_multiplier_array(int j) const;

private:
    TorusGrid grid_;
    int j_max_;
};

DyadicPartition make_partition(const TorusGrid& grid);

// The family {Delta_j f} for j = -1..j_max.
struct DyadicDecomposition {
    const DyadicPartition* partition;
    std::vector<TorusField> blocks; // index 0 holds j = -1

    const TorusField& block(int j) const { return blocks.at(static_cast<std::size_t>(j + 1)); }
    int j_max() const { return static_cast<int>(blocks.size()) - 2; }
};

DyadicDecomposition decompose(const TorusField& f, const DyadicPartition& part);

} // namespace torusflux

#endif
