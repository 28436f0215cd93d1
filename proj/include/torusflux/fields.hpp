#ifndef TORUSFLUX_FIELDS_HPP
#define TORUSFLUX_FIELDS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "torusflux/field.hpp"
#include "torusflux/partition.hpp"

namespace torusflux {

// SplitMix64; the per-mode streams are keyed by (seed, lattice index) so a
// field is a pure function of (seed, grid, params).
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct GeneratorCertificate {
    std::string kind; // taylor_green | abc | single_mode | lacunary | random_smooth
    std::uint64_t seed = 0;
    double planted_alpha = 0.0;
    double planted_p = 0.0;
    std::vector<double> planted_dj;  // indexed j = 1..
    std::vector<double> measured_dj; // same indexing, at build time
    std::vector<double> params;      // kind-specific (A,B,C / mode / decay)
};

TorusField taylor_green_2d(const TorusGrid& grid);
TorusField abc_flow(const TorusGrid& grid, double A, double B, double C);

// divergence-free cosine mode a cos(k.x + phase) with a orthogonal to k
TorusField single_mode(const TorusGrid& grid, const std::array<int, 3>& k, double amplitude,
                       double phase);

struct GeneratedField {
    TorusField field;
    GeneratorCertificate certificate;
};

// random-phase divergence-free field with shells on the phi-plateau ring
// (4/3) 2^j <= |k| <= (3/2) 2^j so that 2^{j alpha} ||Delta_j v||_{L^p}
// matches planted_dj[j-1] per shell. planted_dj is indexed from j = 1.
GeneratedField lacunary_field(const TorusGrid& grid, std::span<const double> planted_dj,
                              double alpha, double p_target, std::uint64_t seed,
                              const DyadicPartition& part);

// divergence-free field with |vhat(k)| ~ (1+|k|)^-decay_rate in the dealias band
TorusField random_smooth_field(const TorusGrid& grid, double decay_rate, std::uint64_t seed);

// divergence-free field with the pure power envelope |vhat(k)| = |k|^-exponent
// on 1 <= |k| <= band: flat d_j in the (exponent - dim/2, 2) gauge, the
// continuum counterpart of a planted-alpha lacunary sequence. band < 0 selects
// the dealias radius; multiplier-only studies may fill the whole lattice.
TorusField power_law_field(const TorusGrid& grid, double exponent, std::uint64_t seed,
                           double band = -1.0);

// band-limited random scalar field with the same spectral envelope
TorusField random_scalar_field(const TorusGrid& grid, double decay_rate, std::uint64_t seed);

} // namespace torusflux

#endif
