#pragma once

#include <string>

#include "qgavg/fqg.hpp"
#include "qgavg/groups.hpp"
#include "qgavg/linmap.hpp"
#include "qgavg/suq2.hpp"

namespace qgavg {

// Text formats: complex entries as [re, im], matrices as row-major nested
// arrays, shapes as block dimension lists. Emission is deterministic, so
// equal inputs give byte-identical output. Readers validate shapes and throw
// on anything malformed.

// { "shape": [d1, ...], "blocks": [ [[ [re,im], ... ]], ... ] }
std::string element_to_json(const BlockedOperator& x);
BlockedOperator element_from_json(const std::string& text);

// { "domain": [d1, ...], "codomain": [d1, ...], "matrix": [[ [re,im], ... ], ...] }
std::string linear_map_to_json(const LinearMap& f);
LinearMap linear_map_from_json(const std::string& text);

// { "shape": [d1, ...], "coeff": [ [re,im], ... ] }
std::string functional_to_json(const Functional& w);
Functional functional_from_json(const std::string& text);

// { "order": n, "identity": i, "table": [[...]],
//   "irreps": [ { "dim": d, "matrices": [matrix per element] } ] }
std::string group_to_json(const FiniteGroupData& g);
FiniteGroupData group_from_json(const std::string& text);

// Irrep data of a built model: one entry per block with the dimension, the
// character as an element, and the orthogonality weight matrix.
std::string irrep_table_to_json(const FiniteQuantumGroup& G);

// Labels, dimensions, quantum dimensions and all pairwise fusions.
std::string fusion_table_to_json(const FusionData& d);

std::string read_text_file(const std::string& path);

// Writes through a sibling temp file and renames into place, so readers
// never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace qgavg
