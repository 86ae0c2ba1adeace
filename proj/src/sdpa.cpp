#include "volsos/sdpa.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace volsos {

namespace {

// One "matrix entry" line; SDPA stores literal symmetric-matrix values, so
// our off-diagonal triplet coefficient c becomes the entry value c/2.
void write_entry(std::ostream& out, int matno, int blkno, int i, int j, double value) {
  if (value == 0.0) return;
  out << matno << ' ' << blkno << ' ' << i << ' ' << j << ' ' << value << '\n';
}

void write_terms(std::ostream& out, int matno, const std::vector<SdpTerm>& terms, double sign,
                 int lp_block, int nblocks) {
  for (const auto& t : terms) {
    if (t.block == kFreeBlock) {
      const int pos = 2 * t.i + 1;
      write_entry(out, matno, nblocks, pos, pos, sign * t.coeff);
      write_entry(out, matno, nblocks, pos + 1, pos + 1, -sign * t.coeff);
      (void)lp_block;
    } else {
      const double v = t.i == t.j ? t.coeff : t.coeff / 2.0;
      write_entry(out, matno, t.block + 1, t.i + 1, t.j + 1, sign * v);
    }
  }
}

}  // namespace

void write_sdpa(const SdpProblem& p, std::ostream& out) {
  p.validate();
  out << std::setprecision(17);
  const bool has_free = p.n_free > 0;
  const int nblocks = static_cast<int>(p.block_dims.size()) + (has_free ? 1 : 0);

  out << "* volsos export; free variables split into a trailing LP block\n";
  out << p.rows.size() << '\n';
  out << nblocks << '\n';
  for (size_t b = 0; b < p.block_dims.size(); ++b) {
    out << p.block_dims[b] << (b + 1 < p.block_dims.size() || has_free ? " " : "");
  }
  if (has_free) out << -2 * p.n_free;
  out << '\n';
  for (size_t r = 0; r < p.rows.size(); ++r) {
    out << p.rows[r].rhs << (r + 1 < p.rows.size() ? " " : "");
  }
  out << '\n';

  // F_0 = -C
  write_terms(out, 0, p.objective, -1.0, nblocks, nblocks);
  // F_i = A_i
  for (size_t r = 0; r < p.rows.size(); ++r) {
    write_terms(out, static_cast<int>(r) + 1, p.rows[r].terms, 1.0, nblocks, nblocks);
  }
}

void write_sdpa_file(const SdpProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_sdpa(p, out);
}

}  // namespace volsos
