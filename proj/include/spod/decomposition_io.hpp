#pragma once

#include <iosfwd>
#include <string>

#include "spod/decomposition.hpp"

namespace spod {

/// Sectioned text format:
///
///   # spod-decomp-v1
///   nt <m+1> nx <n> length <L> tfinal <T> frames <count> method <label>
///   [frame]
///   path_kind=nodal|polynomial
///   path=<values>
///   modes=<r>
///   <r rows of n values>
///   coeffs=<m+1>
///   <m+1 rows of r values>
///   ...one [frame] block per frame
struct DecompositionFile {
  Decomposition decomposition;
  std::string method = "spod";
};

void save_decomposition(const Decomposition& d, std::ostream& out, const std::string& method = "spod");
void save_decomposition(const Decomposition& d, const std::string& path, const std::string& method = "spod");
DecompositionFile load_decomposition(std::istream& in);
DecompositionFile load_decomposition(const std::string& path);

}  // namespace spod
