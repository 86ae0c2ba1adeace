// Translates (scenario, degree, variant) into a standard-form SDP, on either
// of two equivalent sides:
//
//   SOS side (primary): minimize ∫_B w dλ over certificates
//     (i)   w = σ0 + σ1·b                       (σ0, σ1 SOS; w eliminated)
//     (ii)  w − div U − 1 = ψ0 + ψ1·g           (U = 0 | g·v | u by variant)
//     (iii) −u·grad g = η0 + η1·g               (GeneralStokes only)
//
//   Moment side (cross-check): maximize y_{μ,0} over pseudo-moments with
//     M_k(y_μ), M(g·y_μ), M_k(z−y_μ), M(b·(z−y_μ)) [, M_k(y_ν)] PSD plus the
//     variant's linear Stokes / boundary-support rows.
//
// The two assemblies are exact conic duals of each other: SOS row duals are
// the pseudo-moments, moment-side dual slacks are the Gram matrices, so
// decode() recovers the same Certificate from either side.
#pragma once

#include <string>
#include <vector>

#include "volsos/moments.hpp"
#include "volsos/polynomial.hpp"
#include "volsos/scenario.hpp"
#include "volsos/sdp.hpp"

namespace volsos {

enum class Variant { Plain, FactoredStokes, GeneralStokes };
enum class Side { Sos, Moment };

std::string to_string(Variant v);
std::string to_string(Side s);
Variant variant_from_string(const std::string& name);

struct AssemblyOptions {
  // Use deg(u) = d (the literal certificate-degree convention) instead of the
  // consistent truncation deg(u) = d − deg(g) + 1.
  bool literal_u_degree = false;
};

// Where each named object of the certificate lives in the SDP, on both sides.
struct DecodingMap {
  Side side = Side::Sos;
  Variant variant = Variant::Plain;
  int degree = 0;
  int n = 0;
  Polynomial g{1};
  Polynomial b{1};
  MomentVector z;  // Lebesgue moments of λ_B up to degree d

  // Gram bases; empty bases mean the object is absent for the variant.
  MonomialBasis bs_sigma0, bs_sigma1, bs_psi0, bs_psi1, bs_eta0;
  MonomialBasis bs_u;     // per-component coefficients of u (or v)
  MonomialBasis bs_eta1;  // free multiplier η1
  MonomialBasis bs_ymu;   // pseudo-moments of μ
  MonomialBasis bs_ynu;   // pseudo-moments of ν

  // SOS side: Gram block ids; moment side: ids of the moment blocks whose
  // dual slack decodes to the same Gram (order μ, g·μ, gap, b·gap, ν).
  int blk_sigma0 = -1, blk_sigma1 = -1, blk_psi0 = -1, blk_psi1 = -1, blk_eta0 = -1;

  // Free-variable layout. SOS side: u component c, coefficient index a sits
  // at u_offset + c·bs_u.size() + a; η1 at eta1_offset + a. Moment side:
  // y_μ at ymu_offset + a, y_ν at ynu_offset + a.
  int u_offset = -1, eta1_offset = -1;
  int ymu_offset = -1, ynu_offset = -1;

  // Per emitted row: what its dual multiplier means.
  struct RowTag {
    enum Kind { WIdentity, EtaIdentity, GramEntry, UCoeff, Eta1Coeff };
    Kind kind = WIdentity;
    int a = -1;  // monomial index (identities), gram id 0..4, or u component
    int i = -1, j = -1;  // gram entry / u coefficient index
    double scale = 1.0;  // row normalization; dual of the original row = scale * dual
  };
  std::vector<RowTag> row_tags;  // aligned with SdpProblem.rows
};

struct Assembled {
  SdpProblem problem;
  DecodingMap map;
};

// Throws std::invalid_argument for odd d or d < max(deg g, deg b).
Assembled assemble_sos(const ScenarioSpec& s, int d, Variant v,
                       const AssemblyOptions& opts = {});
Assembled assemble_moment(const ScenarioSpec& s, int d, Variant v,
                          const AssemblyOptions& opts = {});

struct Certificate {
  Variant variant = Variant::Plain;
  Side side = Side::Sos;
  int degree = 0;
  double bound = 0.0;  // = riesz(z, w), the certified upper bound on λ(K)
  double solver_bound = 0.0;  // the solver's own optimal value, for cross-check
  Polynomial w{1};
  std::vector<Polynomial> u;  // u (GeneralStokes) or v (FactoredStokes); else empty
  Polynomial eta1{1};
  MomentVector pseudo_moments_mu;
  MomentVector pseudo_moments_nu;  // empty unless GeneralStokes
  SolveStatus status = SolveStatus::MaxIter;
  ResidualReport residuals;
  int iterations = 0;
  double wall_time_s = 0.0;
};

// Throws std::runtime_error unless sol.status is Optimal or NearOptimal.
Certificate decode(const DecodingMap& map, const SdpSolution& sol);

// Σ_{i,j} G_ij x^{β_i + β_j} for a Gram matrix over the given basis.
Polynomial polynomial_from_gram(const Eigen::MatrixXd& gram, const MonomialBasis& basis);

}  // namespace volsos
