#ifndef TORUSFLUX_MOLLIFY_HPP
#define TORUSFLUX_MOLLIFY_HPP

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "torusflux/field.hpp"
#include "torusflux/norms.hpp"

namespace torusflux {

// Compactly supported bump kernel at scale eps, sampled on the grid nodes and
// renormalized to exact unit discrete mass; mollification is multiplication
// by its spectral transform.
class Mollifier {
public:
    struct Offset {
        std::array<int, 3> shift;
        double weight; // eta(y) h^dim
    };

    Mollifier(const TorusGrid& grid, double eps);

    const TorusGrid& grid() const { return grid_; }
    double eps() const { return eps_; }
    const std::vector<double>& kernel() const { return kernel_; }
    const std::vector<double>& kernel_hat() const { return kernel_hat_; }
    const std::vector<Offset>& support() const { return support_; }

    TorusField apply(const TorusField& f) const;

private:
    TorusGrid grid_;
    double eps_;
    std::vector<double> kernel_;
    std::vector<double> kernel_hat_;
    std::vector<Offset> support_;
};

TorusField mollify(const TorusField& f, const Mollifier& m);

// (fg)^eps - f^eps g^eps for scalar f, g on the collocation grid. Every call
// also evaluates the decomposition
//   int eta_eps(y) [f(x-y)-f(x)][g(x-y)-g(x)] dy - (f-f^eps)(g-g^eps)(x)
// and throws if the two disagree beyond 1e-9 relative. The achieved relative
// agreement is written to decomposition_error when given.
TorusField ceti_commutator(const TorusField& f, const TorusField& g, const Mollifier& m,
                           double* decomposition_error = nullptr);

// the dim^2 scalar components of (v (x) v)^eps - v^eps (x) v^eps, row-major,
// with alias-free products
std::vector<TorusField> tensor_commutator(const TorusField& v, const Mollifier& m);

struct MollificationRates {
    std::vector<double> eps;
    std::vector<double> diff_lq; // ||f^eps - f||_{L^q}
    std::vector<double> grad_lq; // ||grad^k f^eps||_{L^q}, empty for k = 0
    double diff_slope = 0.0;
    double grad_slope = 0.0;
};

// log-log rate scan over an eps ladder; q = spec.p, deriv_order in {0,1,2}
MollificationRates lemma22_rates(const TorusField& f, const BesovSpec& spec,
                                 std::span<const double> eps_list, int deriv_order);

// ||(v (x) v)^eps - v^eps (x) v^eps||_{L^s} at one eps, s = q/(q-1)
double lemma23_commutator_norm(const TorusField& v, const Mollifier& m, double theta, double p,
                               double q);

enum class CommutatorMode { Product, Cross };

// eps -> ||(fg)^eps - f^eps g^eps||_{L^q} (or the cross-product variant),
// 1/q = 1/p1 + 1/p2
std::vector<std::pair<double, double>> lemma24_vanishing(const TorusField& f, const TorusField& g,
                                                         std::span<const double> eps_list,
                                                         CommutatorMode mode, double p1, double p2);

// geometric ladder from hi_spacings*h down to lo_spacings*h at ratio 2^(1/2)
std::vector<double> default_eps_ladder(const TorusGrid& grid, double lo_spacings = 4.0,
                                       double hi_spacings = 16.0);

} // namespace torusflux

#endif
