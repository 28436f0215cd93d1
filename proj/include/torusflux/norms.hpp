#ifndef TORUSFLUX_NORMS_HPP
#define TORUSFLUX_NORMS_HPP

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "torusflux/field.hpp"
#include "torusflux/partition.hpp"

namespace torusflux {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class QKind { Value, CNat, Vmo };

// Besov space descriptor B^s_{p,q}; qkind selects a numeric q, the c(N)
// vanishing-tail refinement, or the VMO refinement.
struct BesovSpec {
    double s = 0.0;
    double p = 2.0;
    QKind qkind = QKind::Value;
    double q = kInf;
};

struct BesovReport {
    BesovSpec spec;
    std::vector<double> dj; // 2^{js} ||Delta_j f||_{L^p}, j = -1..j_max
    double norm = 0.0;      // l^q aggregate of dj
    double hom_norm = 0.0;  // l^q aggregate over homogeneous (phi-only) blocks
    double lp_part = 0.0;   // ||f||_{L^p}
    double equiv_norm = 0.0; // lp_part + hom_norm
    double tail_sup = 0.0;  // max dj over the top third of resolved scales

    int j_max() const { return static_cast<int>(dj.size()) - 2; }
};

// L^p norm by rectangle rule on a spectrally 2x-oversampled grid; p = inf
// takes the max there. Vector fields use the pointwise l2 magnitude.
double lebesgue_norm(const TorusField& f, double p);
// same, over an ad-hoc list of scalar components (gradients, tensors)
double lebesgue_norm(std::span<const TorusField> comps, double p);

BesovReport besov_norm(const TorusField& f, const BesovSpec& spec, const DyadicPartition& part);

struct TailDiagnostic {
    std::vector<double> dj;
    double slope = 0.0; // least-squares slope of log2 dj over the top half of scales
};
TailDiagnostic cnat_tail_diagnostic(const BesovReport& report);

// V(eps) = eps^-alpha ( int [ avg_{|y|<=eps} |f(x)-f(x-y)|^q dy ]^{p/q} dx )^{1/p}
// with q = p (single integrability index); returns (eps, V(eps)) pairs.
std::vector<std::pair<double, double>> besov_vmo_functional(const TorusField& f,
                                                            const BesovSpec& spec,
                                                            std::span<const double> eps_list);

struct InterpolationRow {
    int j;
    double lhs;          // ||Delta_j f||_{L^3}
    double rhs;          // ||Delta_j f||_{L^2}^{1-p/3} ||Delta_j f||_{L^{2p/(p-1)}}^{p/3}
    double ratio;        // lhs/rhs, 0 when the block vanishes
    double weighted_lhs; // 2^{j/3} lhs
    double weighted_rhs; // ||f||_{L^2}^{1-p/3} (2^{j/p} ||Delta_j f||_{L^{2p/(p-1)}})^{p/3}
};
std::vector<InterpolationRow> check_interpolation_chain(const TorusField& f, double p,
                                                        const DyadicPartition& part);

struct TwoSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

// B^{1/p}_{2p/(p-1),inf} norm of f against the gradient norm L^{6p/(5p-5)}
TwoSides check_embedding_sembed(const TorusField& f, double p, const DyadicPartition& part);

struct GagliardoNirenberg {
    double lhs = 0.0;
    double rhs = 0.0;
    double target_exponent = 0.0;
    double grad_exponent = 0.0;
    double theta_l2 = 0.0;
    double theta_grad = 0.0;
};
GagliardoNirenberg check_gagliardo_nirenberg(const TorusField& f, double p,
                                             bool helicity_variant = false);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

// least-squares fit of log2(y) against log2(x); pairs with y <= 0 are skipped
LogLogFit fit_log2(std::span<const double> x, std::span<const double> y);
double fit_log2_slope(std::span<const double> x, std::span<const double> y);

} // namespace torusflux

#endif
