#include "qgavg/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qgavg/corep.hpp"

namespace qgavg {

namespace {

using nlohmann::json;

json complex_out(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx complex_in(const json& j) {
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_out(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_out(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_in(const json& j, int rows, int cols) {
  require(j.is_array() && static_cast<int>(j.size()) == rows, "matrix row count mismatch");
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    require(j[i].is_array() && static_cast<int>(j[i].size()) == cols,
            "matrix column count mismatch");
    for (int c = 0; c < cols; ++c) m(i, c) = complex_in(j[i][c]);
  }
  return m;
}

std::vector<int> dims_in(const json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), what + " must be a nonempty dimension list");
  std::vector<int> dims;
  for (const auto& d : j) {
    require(d.is_number_integer() && d.get<int>() >= 1, what + " entries must be positive");
    dims.push_back(d.get<int>());
  }
  return dims;
}

json parse(const std::string& text) {
  json j = json::parse(text);  // throws on syntax errors
  require(j.is_object(), "top level must be a JSON object");
  return j;
}

json element_out(const BlockedOperator& x) {
  json j;
  j["shape"] = x.shape.dims;
  json blocks = json::array();
  for (const Mat& b : x.blocks) blocks.push_back(matrix_out(b));
  j["blocks"] = blocks;
  return j;
}

}  // namespace

std::string element_to_json(const BlockedOperator& x) { return element_out(x).dump(); }

BlockedOperator element_from_json(const std::string& text) {
  json j = parse(text);
  require(j.contains("shape") && j.contains("blocks"), "element needs shape and blocks");
  AlgebraShape s = AlgebraShape::of(dims_in(j["shape"], "shape"));
  const json& blocks = j["blocks"];
  require(blocks.is_array() && static_cast<int>(blocks.size()) == s.blocks(),
          "one block per shape entry required");
  BlockedOperator x = BlockedOperator::zero(s);
  for (int b = 0; b < s.blocks(); ++b)
    x.blocks[b] = matrix_in(blocks[b], s.dims[b], s.dims[b]);
  return x;
}

std::string linear_map_to_json(const LinearMap& f) {
  json j;
  j["domain"] = f.domain.dims;
  j["codomain"] = f.codomain.dims;
  j["matrix"] = matrix_out(f.mat);
  return j.dump();
}

LinearMap linear_map_from_json(const std::string& text) {
  json j = parse(text);
  require(j.contains("domain") && j.contains("codomain") && j.contains("matrix"),
          "linear map needs domain, codomain and matrix");
  AlgebraShape dom = AlgebraShape::of(dims_in(j["domain"], "domain"));
  AlgebraShape cod = AlgebraShape::of(dims_in(j["codomain"], "codomain"));
  return {dom, cod, matrix_in(j["matrix"], cod.total, dom.total)};
}

std::string functional_to_json(const Functional& w) {
  json j;
  j["shape"] = w.shape.dims;
  json coeff = json::array();
  for (int c = 0; c < w.coeff.size(); ++c) coeff.push_back(complex_out(w.coeff(c)));
  j["coeff"] = coeff;
  return j.dump();
}

Functional functional_from_json(const std::string& text) {
  json j = parse(text);
  require(j.contains("shape") && j.contains("coeff"), "functional needs shape and coeff");
  AlgebraShape s = AlgebraShape::of(dims_in(j["shape"], "shape"));
  const json& coeff = j["coeff"];
  require(coeff.is_array() && static_cast<int>(coeff.size()) == s.total,
          "one coefficient per coordinate required");
  Functional w;
  w.shape = s;
  w.coeff = Vec(s.total);
  for (int c = 0; c < s.total; ++c) w.coeff(c) = complex_in(coeff[c]);
  return w;
}

std::string group_to_json(const FiniteGroupData& g) {
  json j;
  j["order"] = g.order;
  j["identity"] = g.identity;
  j["table"] = g.table;
  json irreps = json::array();
  for (const auto& rep : g.irreps) {
    json entry;
    entry["dim"] = static_cast<int>(rep[0].rows());
    json mats = json::array();
    for (const Mat& m : rep) mats.push_back(matrix_out(m));
    entry["matrices"] = mats;
    irreps.push_back(entry);
  }
  j["irreps"] = irreps;
  return j.dump();
}

FiniteGroupData group_from_json(const std::string& text) {
  json j = parse(text);
  require(j.contains("order") && j.contains("identity") && j.contains("table") &&
              j.contains("irreps"),
          "group needs order, identity, table and irreps");
  FiniteGroupData g;
  g.name = j.value("name", std::string("json"));
  require(j["order"].is_number_integer() && j["order"].get<int>() >= 1,
          "order must be a positive integer");
  g.order = j["order"].get<int>();
  require(j["identity"].is_number_integer(), "identity must be an element index");
  g.identity = j["identity"].get<int>();
  require(g.identity >= 0 && g.identity < g.order, "identity out of range");
  const json& table = j["table"];
  require(table.is_array() && static_cast<int>(table.size()) == g.order,
          "table must have one row per element");
  for (const auto& row : table) {
    require(row.is_array() && static_cast<int>(row.size()) == g.order,
            "table rows must cover every element");
    std::vector<int> r;
    for (const auto& v : row) {
      require(v.is_number_integer(), "table entries must be element indices");
      int e = v.get<int>();
      require(e >= 0 && e < g.order, "table entry out of range");
      r.push_back(e);
    }
    g.table.push_back(r);
  }
  for (const auto& entry : j["irreps"]) {
    require(entry.contains("dim") && entry.contains("matrices"),
            "irreps need dim and matrices");
    int d = entry["dim"].get<int>();
    require(d >= 1, "irrep dimension must be positive");
    const json& mats = entry["matrices"];
    require(mats.is_array() && static_cast<int>(mats.size()) == g.order,
            "one matrix per group element required");
    std::vector<Mat> rep;
    for (const auto& m : mats) rep.push_back(matrix_in(m, d, d));
    g.irreps.push_back(rep);
  }
  verify_group_data(g);
  return g;
}

std::string irrep_table_to_json(const FiniteQuantumGroup& G) {
  IrrepTable t = build_irrep_table(G);
  json entries = json::array();
  for (const auto& e : t.entries) {
    json entry;
    entry["dim"] = e.dim;
    entry["rho"] = matrix_out(e.rho);
    entry["character"] = element_out(e.character);
    entries.push_back(entry);
  }
  json j;
  j["name"] = G.name;
  j["entries"] = entries;
  return j.dump();
}

std::string fusion_table_to_json(const FusionData& d) {
  json j;
  j["q"] = d.q;
  j["cutoff"] = d.twice_cutoff / 2.0;
  std::vector<double> ls = d.labels();
  j["labels"] = ls;
  json dims = json::array(), qdims = json::array();
  for (double l : ls) {
    dims.push_back(spin_dim(l));
    qdims.push_back(qdim(d.q, l));
  }
  j["dims"] = dims;
  j["qdims"] = qdims;
  json fusions = json::array();
  for (double l1 : ls)
    for (double l2 : ls) {
      FusionOutcome f = fuse(d, l1, l2);
      json one;
      one["l1"] = l1;
      one["l2"] = l2;
      one["labels"] = f.labels;
      one["truncated"] = f.truncated;
      fusions.push_back(one);
    }
  j["fusions"] = fusions;
  return j.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), "cannot write " + tmp.string());
    out << text;
    out.flush();
    require(out.good(), "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace qgavg
