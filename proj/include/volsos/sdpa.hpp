// Export of an SdpProblem in the sparse SDPA text format (.dat-s) for
// cross-validation against external solvers.
//
// The file encodes our problem as the SDPA *dual*: max <F_0, Y> subject to
// <F_i, Y> = c_i with F_0 = -C, F_i = A_i, c_i = rhs_i; our optimum is the
// negative of the reported dual value. Free variables become an LP block of
// paired entries f = f+ - f-.
#pragma once

#include <ostream>
#include <string>

#include "volsos/sdp.hpp"

namespace volsos {

void write_sdpa(const SdpProblem& p, std::ostream& out);
void write_sdpa_file(const SdpProblem& p, const std::string& path);

}  // namespace volsos
