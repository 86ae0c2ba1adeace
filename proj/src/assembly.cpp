#include "volsos/assembly.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace volsos {

namespace {

double pair_mult(int i, int j) { return i == j ? 1.0 : 2.0; }

MultiIndex add_indices(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// Scatter the coefficient-identity contributions of sign * q * (Gram over
// basis) into per-monomial rows.
void scatter_gram(std::vector<std::vector<SdpTerm>>& rows, const MonomialBasis& row_basis,
                  int block, const MonomialBasis& basis, const Polynomial& q, double sign) {
  for (int i = 0; i < basis.size(); ++i) {
    for (int j = i; j < basis.size(); ++j) {
      const MultiIndex ij = add_indices(basis.list[i], basis.list[j]);
      for (const auto& [kappa, c] : q.terms()) {
        const MultiIndex gamma = add_indices(ij, kappa);
        if (!row_basis.contains(gamma)) continue;
        rows[row_basis.lookup(gamma)].push_back({block, i, j, sign * pair_mult(i, j) * c});
      }
    }
  }
}

void scatter_free(std::vector<std::vector<SdpTerm>>& rows, const MonomialBasis& row_basis,
                  int free_index, const Polynomial& column, double sign) {
  for (const auto& [gamma, c] : column.terms()) {
    if (!row_basis.contains(gamma)) continue;
    rows[row_basis.lookup(gamma)].push_back({kFreeBlock, free_index, 0, sign * c});
  }
}

// Normalize to unit max-abs coefficient and append; identically-zero rows are
// dropped. Returns whether the row was kept.
bool emit_row(SdpProblem& p, DecodingMap& map, std::vector<SdpTerm> terms, double rhs,
              DecodingMap::RowTag tag) {
  // merge duplicate positions defensively
  double maxabs = 0.0;
  for (const auto& t : terms) maxabs = std::max(maxabs, std::abs(t.coeff));
  if (maxabs == 0.0) {
    if (rhs != 0.0) throw std::logic_error("assembly produced an inconsistent empty row");
    return false;
  }
  SdpRow row;
  row.scale = 1.0 / maxabs;
  for (auto& t : terms) t.coeff *= row.scale;
  row.terms = std::move(terms);
  row.rhs = rhs * row.scale;
  tag.scale = row.scale;
  p.rows.push_back(std::move(row));
  map.row_tags.push_back(tag);
  return true;
}

DecodingMap make_layout(const ScenarioSpec& s, int d, Variant v, const AssemblyOptions& opts) {
  if (d % 2 != 0) throw std::invalid_argument("relaxation degree must be even");
  DecodingMap map;
  map.variant = v;
  map.degree = d;
  map.n = s.n;
  map.g = s.g;
  map.b = s.bounding.defining_polynomial();
  const int dg = s.g.degree();
  const int db = map.b.degree();
  if (s.g.is_zero() || dg < 1) throw std::invalid_argument("scenario polynomial g must be non-constant");
  if (d < dg || d < db) throw std::invalid_argument("degree too small: need d >= max(deg g, deg b)");

  const int n = s.n;
  const int k = d / 2;
  map.z = lebesgue_moments(s.bounding, d);
  map.bs_sigma0 = enumerate_monomials(n, k);
  map.bs_sigma1 = enumerate_monomials(n, (d - db) / 2);
  map.bs_psi0 = enumerate_monomials(n, k);
  map.bs_psi1 = enumerate_monomials(n, (d - dg) / 2);
  map.bs_ymu = enumerate_monomials(n, d);
  if (v == Variant::FactoredStokes) {
    map.bs_u = enumerate_monomials(n, d - dg + 1);
  } else if (v == Variant::GeneralStokes) {
    const int du = opts.literal_u_degree ? d : d - dg + 1;
    map.bs_u = enumerate_monomials(n, du);
    map.bs_eta0 = enumerate_monomials(n, k);
    map.bs_eta1 = enumerate_monomials(n, d - dg);
    map.bs_ynu = enumerate_monomials(n, std::max(d, du + dg - 1));
  }
  return map;
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Plain: return "plain";
    case Variant::FactoredStokes: return "stokes-factored";
    case Variant::GeneralStokes: return "stokes-general";
  }
  return "?";
}

std::string to_string(Side s) { return s == Side::Sos ? "sos" : "moment"; }

Variant variant_from_string(const std::string& name) {
  if (name == "plain") return Variant::Plain;
  if (name == "stokes-factored") return Variant::FactoredStokes;
  if (name == "stokes-general") return Variant::GeneralStokes;
  throw std::invalid_argument("unknown variant: " + name);
}

Assembled assemble_sos(const ScenarioSpec& s, int d, Variant v, const AssemblyOptions& opts) {
  DecodingMap map = make_layout(s, d, v, opts);
  map.side = Side::Sos;
  const int n = s.n;
  const Polynomial one = Polynomial::constant(n, 1.0);

  SdpProblem p;
  auto add_block = [&](const MonomialBasis& basis, const std::string& label) {
    p.block_dims.push_back(basis.size());
    p.block_labels.push_back(label);
    return static_cast<int>(p.block_dims.size()) - 1;
  };
  map.blk_sigma0 = add_block(map.bs_sigma0, "sigma0");
  map.blk_sigma1 = add_block(map.bs_sigma1, "sigma1");
  map.blk_psi0 = add_block(map.bs_psi0, "psi0");
  map.blk_psi1 = add_block(map.bs_psi1, "psi1");
  if (v == Variant::GeneralStokes) map.blk_eta0 = add_block(map.bs_eta0, "eta0");

  const int u_size = map.bs_u.size();
  if (v != Variant::Plain) {
    map.u_offset = 0;
    p.n_free = n * u_size;
  }
  if (v == Variant::GeneralStokes) {
    map.eta1_offset = p.n_free;
    p.n_free += map.bs_eta1.size();
  }

  // objective: riesz(z, sigma0 + sigma1 * b)
  auto add_objective_gram = [&](int block, const MonomialBasis& basis, const Polynomial& q) {
    for (int i = 0; i < basis.size(); ++i) {
      for (int j = i; j < basis.size(); ++j) {
        double c = 0.0;
        const MultiIndex ij = add_indices(basis.list[i], basis.list[j]);
        for (const auto& [kappa, qc] : q.terms()) {
          c += qc * map.z.values[map.z.basis.lookup(add_indices(ij, kappa))];
        }
        if (c != 0.0) p.objective.push_back({block, i, j, pair_mult(i, j) * c});
      }
    }
  };
  add_objective_gram(map.blk_sigma0, map.bs_sigma0, one);
  add_objective_gram(map.blk_sigma1, map.bs_sigma1, map.b);

  // identity (ii) rows over monomials of degree <= d
  std::vector<std::vector<SdpTerm>> rows_w(map.bs_ymu.size());
  scatter_gram(rows_w, map.bs_ymu, map.blk_sigma0, map.bs_sigma0, one, 1.0);
  scatter_gram(rows_w, map.bs_ymu, map.blk_sigma1, map.bs_sigma1, map.b, 1.0);
  scatter_gram(rows_w, map.bs_ymu, map.blk_psi0, map.bs_psi0, one, -1.0);
  scatter_gram(rows_w, map.bs_ymu, map.blk_psi1, map.bs_psi1, map.g, -1.0);
  if (v == Variant::GeneralStokes) {
    // -(div u): u_{i,alpha} enters row gamma = alpha - e_i with weight -alpha_i
    for (int g_idx = 0; g_idx < map.bs_ymu.size(); ++g_idx) {
      for (int i = 0; i < n; ++i) {
        MultiIndex alpha = map.bs_ymu.list[g_idx];
        alpha[i] += 1;
        if (!map.bs_u.contains(alpha)) continue;
        const int f = map.u_offset + i * u_size + map.bs_u.lookup(alpha);
        rows_w[g_idx].push_back({kFreeBlock, f, 0, -static_cast<double>(alpha[i])});
      }
    }
  } else if (v == Variant::FactoredStokes) {
    // -(div(g v)): column of v_{i,alpha} is -d/dx_i (g x^alpha)
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < u_size; ++a) {
        const Polynomial col = differentiate(multiply(map.g, Polynomial::monomial(map.bs_u.list[a])), i);
        scatter_free(rows_w, map.bs_ymu, map.u_offset + i * u_size + a, col, -1.0);
      }
    }
  }
  for (int g_idx = 0; g_idx < map.bs_ymu.size(); ++g_idx) {
    emit_row(p, map, std::move(rows_w[g_idx]), g_idx == 0 ? 1.0 : 0.0,
             {DecodingMap::RowTag::WIdentity, g_idx, -1, -1});
  }

  // identity (iii) rows: -u.grad(g) = eta0 + eta1 * g
  if (v == Variant::GeneralStokes) {
    std::vector<std::vector<SdpTerm>> rows_e(map.bs_ynu.size());
    scatter_gram(rows_e, map.bs_ynu, map.blk_eta0, map.bs_eta0, one, -1.0);
    for (int i = 0; i < n; ++i) {
      const Polynomial dgi = differentiate(map.g, i);
      for (int a = 0; a < u_size; ++a) {
        const Polynomial col = multiply(Polynomial::monomial(map.bs_u.list[a]), dgi);
        scatter_free(rows_e, map.bs_ynu, map.u_offset + i * u_size + a, col, -1.0);
      }
    }
    for (int a = 0; a < map.bs_eta1.size(); ++a) {
      const Polynomial col = multiply(map.g, Polynomial::monomial(map.bs_eta1.list[a]));
      scatter_free(rows_e, map.bs_ynu, map.eta1_offset + a, col, -1.0);
    }
    for (int g_idx = 0; g_idx < map.bs_ynu.size(); ++g_idx) {
      emit_row(p, map, std::move(rows_e[g_idx]), 0.0,
               {DecodingMap::RowTag::EtaIdentity, g_idx, -1, -1});
    }
  }

  p.validate();
  return {std::move(p), std::move(map)};
}

Assembled assemble_moment(const ScenarioSpec& s, int d, Variant v, const AssemblyOptions& opts) {
  DecodingMap map = make_layout(s, d, v, opts);
  map.side = Side::Moment;
  const int n = s.n;
  const Polynomial one = Polynomial::constant(n, 1.0);

  SdpProblem p;
  auto add_block = [&](const MonomialBasis& basis, const std::string& label) {
    p.block_dims.push_back(basis.size());
    p.block_labels.push_back(label);
    return static_cast<int>(p.block_dims.size()) - 1;
  };
  // dual slacks of the moment blocks are the SOS Gram matrices
  map.blk_psi0 = add_block(map.bs_psi0, "moment_mu");
  map.blk_psi1 = add_block(map.bs_psi1, "localizing_g_mu");
  map.blk_sigma0 = add_block(map.bs_sigma0, "moment_gap");
  map.blk_sigma1 = add_block(map.bs_sigma1, "localizing_b_gap");
  if (v == Variant::GeneralStokes) map.blk_eta0 = add_block(map.bs_eta0, "moment_nu");

  map.ymu_offset = 0;
  p.n_free = map.bs_ymu.size();
  if (v == Variant::GeneralStokes) {
    map.ynu_offset = p.n_free;
    p.n_free += map.bs_ynu.size();
  }

  // maximize y_{mu,0}
  p.objective.push_back({kFreeBlock, map.ymu_offset, 0, -1.0});

  // structural rows: X_ij = L_y(q * x^{beta_i + beta_j}) entrywise
  enum YTarget { Mu, GapZMinusMu, Nu };
  auto add_block_rows =
      [&](int block, int gram_id, const MonomialBasis& basis, const Polynomial& q, YTarget tgt) {
        for (int i = 0; i < basis.size(); ++i) {
          for (int j = i; j < basis.size(); ++j) {
            std::vector<SdpTerm> terms;
            terms.push_back({block, i, j, 1.0});
            double rhs = 0.0;
            const MultiIndex ij = add_indices(basis.list[i], basis.list[j]);
            for (const auto& [kappa, c] : q.terms()) {
              const MultiIndex gamma = add_indices(ij, kappa);
              const double ysign = tgt == GapZMinusMu ? 1.0 : -1.0;
              const int off = tgt == Nu ? map.ynu_offset : map.ymu_offset;
              const MonomialBasis& yb = tgt == Nu ? map.bs_ynu : map.bs_ymu;
              terms.push_back({kFreeBlock, off + yb.lookup(gamma), 0, ysign * c});
              if (tgt == GapZMinusMu) rhs += c * map.z.values[map.z.basis.lookup(gamma)];
            }
            emit_row(p, map, std::move(terms), rhs,
                     {DecodingMap::RowTag::GramEntry, gram_id, i, j});
          }
        }
      };
  add_block_rows(map.blk_psi0, 0, map.bs_psi0, one, Mu);
  add_block_rows(map.blk_psi1, 1, map.bs_psi1, map.g, Mu);
  add_block_rows(map.blk_sigma0, 2, map.bs_sigma0, one, GapZMinusMu);
  add_block_rows(map.blk_sigma1, 3, map.bs_sigma1, map.b, GapZMinusMu);
  if (v == Variant::GeneralStokes) add_block_rows(map.blk_eta0, 4, map.bs_eta0, one, Nu);

  auto linear_row = [&](const Polynomial& q, int offset, const MonomialBasis& yb,
                        std::vector<SdpTerm>& terms) {
    for (const auto& [gamma, c] : q.terms()) {
      terms.push_back({kFreeBlock, offset + yb.lookup(gamma), 0, c});
    }
  };

  if (v == Variant::GeneralStokes) {
    // Stokes rows alpha_i y_{mu,alpha-e_i} + L_{y_nu}(x^alpha d_i g) = 0
    for (int i = 0; i < n; ++i) {
      const Polynomial dgi = differentiate(map.g, i);
      for (int a = 0; a < map.bs_u.size(); ++a) {
        const MultiIndex& alpha = map.bs_u.list[a];
        std::vector<SdpTerm> terms;
        if (alpha[i] > 0) {
          MultiIndex shifted = alpha;
          shifted[i] -= 1;
          terms.push_back({kFreeBlock, map.ymu_offset + map.bs_ymu.lookup(shifted), 0,
                           static_cast<double>(alpha[i])});
        }
        linear_row(multiply(Polynomial::monomial(alpha), dgi), map.ynu_offset, map.bs_ynu, terms);
        emit_row(p, map, std::move(terms), 0.0, {DecodingMap::RowTag::UCoeff, i, a, -1});
      }
    }
    // boundary support rows L_{y_nu}(g x^beta) = 0
    for (int a = 0; a < map.bs_eta1.size(); ++a) {
      std::vector<SdpTerm> terms;
      linear_row(multiply(map.g, Polynomial::monomial(map.bs_eta1.list[a])), map.ynu_offset,
                 map.bs_ynu, terms);
      emit_row(p, map, std::move(terms), 0.0, {DecodingMap::RowTag::Eta1Coeff, a, -1, -1});
    }
  } else if (v == Variant::FactoredStokes) {
    // L_{y_mu}(d/dx_i (g x^alpha)) = 0
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < map.bs_u.size(); ++a) {
        std::vector<SdpTerm> terms;
        linear_row(differentiate(multiply(map.g, Polynomial::monomial(map.bs_u.list[a])), i),
                   map.ymu_offset, map.bs_ymu, terms);
        emit_row(p, map, std::move(terms), 0.0, {DecodingMap::RowTag::UCoeff, i, a, -1});
      }
    }
  }

  p.validate();
  return {std::move(p), std::move(map)};
}

Polynomial polynomial_from_gram(const Eigen::MatrixXd& gram, const MonomialBasis& basis) {
  Polynomial out(basis.nvars);
  for (int i = 0; i < basis.size(); ++i) {
    for (int j = 0; j < basis.size(); ++j) {
      out.add_term(add_indices(basis.list[i], basis.list[j]), gram(i, j));
    }
  }
  return out;
}

Certificate decode(const DecodingMap& map, const SdpSolution& sol) {
  if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::NearOptimal) {
    throw std::runtime_error("cannot decode a certificate from solver status " +
                             to_string(sol.status));
  }
  Certificate cert;
  cert.variant = map.variant;
  cert.side = map.side;
  cert.degree = map.degree;
  cert.status = sol.status;
  cert.residuals = sol.residuals;
  cert.iterations = sol.iterations;
  cert.wall_time_s = sol.wall_time_s;
  cert.eta1 = Polynomial(map.n);
  cert.pseudo_moments_mu = {map.bs_ymu, std::vector<double>(map.bs_ymu.size(), 0.0)};
  if (map.variant == Variant::GeneralStokes) {
    cert.pseudo_moments_nu = {map.bs_ynu, std::vector<double>(map.bs_ynu.size(), 0.0)};
  }
  if (map.variant != Variant::Plain) cert.u.assign(map.n, Polynomial(map.n));

  const int u_size = map.bs_u.size();
  if (map.side == Side::Sos) {
    cert.w = add(polynomial_from_gram(sol.blocks[map.blk_sigma0], map.bs_sigma0),
                 multiply(map.b, polynomial_from_gram(sol.blocks[map.blk_sigma1], map.bs_sigma1)));
    for (int i = 0; i < map.n && !cert.u.empty(); ++i) {
      for (int a = 0; a < u_size; ++a) {
        cert.u[i].add_term(map.bs_u.list[a], sol.free_values[map.u_offset + i * u_size + a]);
      }
    }
    for (int a = 0; a < map.bs_eta1.size(); ++a) {
      cert.eta1.add_term(map.bs_eta1.list[a], sol.free_values[map.eta1_offset + a]);
    }
    for (size_t r = 0; r < map.row_tags.size(); ++r) {
      const auto& tag = map.row_tags[r];
      const double mult = tag.scale * sol.dual[static_cast<int>(r)];
      if (tag.kind == DecodingMap::RowTag::WIdentity) {
        cert.pseudo_moments_mu.values[tag.a] = mult;
      } else if (tag.kind == DecodingMap::RowTag::EtaIdentity) {
        cert.pseudo_moments_nu.values[tag.a] = mult;
      }
    }
    cert.solver_bound = sol.objective_primal;
  } else {
    for (int a = 0; a < map.bs_ymu.size(); ++a) {
      cert.pseudo_moments_mu.values[a] = sol.free_values[map.ymu_offset + a];
    }
    if (map.variant == Variant::GeneralStokes) {
      for (int a = 0; a < map.bs_ynu.size(); ++a) {
        cert.pseudo_moments_nu.values[a] = sol.free_values[map.ynu_offset + a];
      }
    }
    cert.w = add(polynomial_from_gram(sol.dual_slacks[map.blk_sigma0], map.bs_sigma0),
                 multiply(map.b,
                          polynomial_from_gram(sol.dual_slacks[map.blk_sigma1], map.bs_sigma1)));
    for (size_t r = 0; r < map.row_tags.size(); ++r) {
      const auto& tag = map.row_tags[r];
      const double mult = tag.scale * sol.dual[static_cast<int>(r)];
      if (tag.kind == DecodingMap::RowTag::UCoeff) {
        cert.u[tag.a].add_term(map.bs_u.list[tag.i], mult);
      } else if (tag.kind == DecodingMap::RowTag::Eta1Coeff) {
        cert.eta1.add_term(map.bs_eta1.list[tag.a], mult);
      }
    }
    cert.solver_bound = -sol.objective_primal;
  }
  cert.bound = riesz(map.z, cert.w);
  return cert;
}

}  // namespace volsos
