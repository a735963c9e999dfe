#pragma once

#include <string>
#include <vector>

#include "gaplab/clifford.hpp"
#include "gaplab/dense.hpp"
#include "gaplab/eigensolvers.hpp"
#include "gaplab/haar.hpp"
#include "gaplab/linear_operator.hpp"

namespace gaplab {

enum class WalkKind { Local, Brickwork, CliffordBrickwork, Sigma };

std::string walk_kind_name(WalkKind kind);
WalkKind walk_kind_from_name(const std::string& name);

struct WalkSpec {
  WalkKind kind = WalkKind::Local;
  int n = 2;
  int t = 1;
  // sigma only: when positive, the exact group projector on each side is
  // replaced by this many layers of the two-qubit group walk
  int approx_layers = 0;
};

// Vectorized moment space of n qubits at order t: one dim-2 factor per
// (copy, qubit) pair, 2t copies (t forward, then t conjugated), qubit 0 the
// most significant within a copy. Factor index = copy * n + qubit.
FactorLayout moment_layout(int n, int t);

// Factors carrying the listed qubits across all 2t copies, copy-major.
std::vector<int> copy_factors(int n, int t, const std::vector<int>& qubits);

// Orthonormal basis of the fixed space the walk is compared against: the
// full-unitary commutant for universal kinds, the group commutant for the
// group brickwork walk.
Matrix reference_basis(const WalkSpec& spec);

LinearOperator moment_operator(const WalkSpec& spec);
Matrix moment_operator_dense(const WalkSpec& spec, Index cap = Index(1) << 12);

// sum over i of (identity - pair projector on qubits (i, i+1 mod n))
LinearOperator hamiltonian(int n, int t);
Matrix hamiltonian_dense(int n, int t, Index cap = Index(1) << 12);

struct GapReport {
  WalkSpec walk;
  double g_value = 0.0;
  double delta_value = 0.0;
  Index fixed_space_rank = 0;
  double bound_value = 1.0;
  bool satisfied = false;
  std::string method;      // dense | krylov | compression
  double residual = 0.0;   // extremal solver residual, 0 for closed routes
  double identity_gap = 0.0;  // |g - (1 - delta/n)| where the identity applies
};

GapReport spectral_gap(const WalkSpec& spec, const EigOptions& opts = {});

struct ConvolutionReport {
  WalkSpec walk;
  int k = 1;
  double norm_value = 0.0;  // |M^k - P|
  double g_value = 0.0;
  double g_power = 0.0;     // g^k
  bool within_power_bound = false;
  double equality_gap = 0.0;  // |norm - g^k|, exact for symmetric kinds
};
ConvolutionReport convolution_gap_check(const WalkSpec& spec, int k,
                                        const EigOptions& opts = {});

enum class DesignMode { AdditiveBound, RelativePsd };

struct DesignReport {
  WalkSpec walk;
  int k = 1;
  double epsilon = 0.0;
  DesignMode mode = DesignMode::AdditiveBound;
  double g_value = 0.0;
  double additive_value = 0.0;      // D^t g^k
  bool additive_ok = false;         // additive_value <= epsilon
  bool sufficient_condition = false;  // g^k <= epsilon / D^{2t}
  bool relative_feasible = false;
  bool relative_ok = false;
  double upper_branch_min_eig = 0.0;  // lambda_min of Choi((1+eps) M^k - P)
  double lower_branch_min_eig = 0.0;  // lambda_min of Choi(P - (1-eps) M^k)
};
DesignReport design_check(const WalkSpec& spec, int k, double epsilon,
                          DesignMode mode);

// identity minus the k-fold moment operator of a point mass at the identity
// unitary; the k = 0 negative control for the relative design check
DesignReport design_check_point_mass(int n, int t, double epsilon);

struct ProjectorFamily {
  Index dim = 0;
  std::vector<LinearOperator> projectors;  // the penalty projectors Q_i
  Matrix ground_basis;  // orthonormal basis of ker(sum Q_i)
  std::string label;
};

// family of the n pair-penalty projectors of the chain Hamiltonian, in the
// given site order
ProjectorFamily chain_family(int n, int t, const std::vector<int>& order);

struct DetectabilityReport {
  std::string label;
  double delta_value = 0.0;
  double product_norm = 0.0;
  double lower_bound = 0.0;   // sqrt(1 - 4 delta) when applicable
  bool lower_applicable = false;
  double upper_bound = 0.0;   // sqrt(1 / (delta / degree^2 + 1))
  int commutation_degree = 0;
  bool sandwich_ok = false;
  double residual = 0.0;
};
DetectabilityReport detectability_check(const ProjectorFamily& family,
                                        const EigOptions& opts = {});

struct HtildeModel {
  int n = 0;
  int t = 0;
  int k = 0;
  LinearOperator op;         // 2k sum_i (1 - group pair projector) + (1 - L1)
  ProjectorFamily family;    // the 2nk + 1 penalty projectors in circuit order
  Matrix ground_basis;       // basis of the haar commutant
};
HtildeModel htilde(int n, int t, int k, const std::vector<int>& order = {});
Matrix htilde_dense(const HtildeModel& model, Index cap = Index(1) << 12);

struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

struct ChainReport {
  int n = 0;
  int t = 0;
  int k = 0;
  double group_walk_gap = 0.0;    // |M_bw - P_group|
  double approx_error_k = 0.0;    // |M_bw^k - P_group|
  double aux_norm = 0.0;          // |M_bw^k L1 M_bw^k - P_haar|
  double sigma_norm = 0.0;        // |M_sigma - P_haar|
  double delta_htilde = 0.0;
  double delta_chain = 0.0;       // gap of the chain Hamiltonian
  Index ground_dim_htilde = 0;
  Index ground_dim_chain = 0;
  double chain_psd_min_eig = 0.0; // lambda_min((2k+1) H - Htilde)
  std::vector<ChainLink> links;
  bool all_ok = false;
};
ChainReport theorem_chain_check(int n, int t, int k);

struct McEstimateW {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  int samples = 0;
};

// E |Tr(U^dagger V)|^{2t} over independent circuit pairs of k steps each
McEstimateW frame_potential_walk_mc(const WalkSpec& spec, int k, int samples,
                                    std::uint64_t seed);
McEstimateW frame_potential_haar_mc(int n, int t, int samples,
                                    std::uint64_t seed);

// one sampled circuit unitary of the given kind with k steps
Matrix sample_walk_unitary(const WalkSpec& spec, int k, std::mt19937_64& g);

}  // namespace gaplab
