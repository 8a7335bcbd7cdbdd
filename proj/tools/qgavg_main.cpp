#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qgavg/averaging.hpp"
#include "qgavg/coadjoint.hpp"
#include "qgavg/corep.hpp"
#include "qgavg/ddouble.hpp"
#include "qgavg/fqg.hpp"
#include "qgavg/groups.hpp"
#include "qgavg/json_io.hpp"
#include "qgavg/multiplier.hpp"
#include "qgavg/suq2.hpp"

namespace {

using json = nlohmann::json;
using namespace qgavg;

constexpr const char* kVersion = "1.0.0";

// Input that parsed but describes something outside the implemented scope.
struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally wrong input, regardless of when it is detected.
struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Phase { kLoad, kCompute };

struct InputRecord {
  std::string name, source, digest;
};

struct Session {
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::string out;            // empty = stdout
  std::string format = "text";
  std::string command;
  Phase phase = Phase::kLoad;
  std::vector<InputRecord> inputs;

  void note(const std::string& name, const std::string& source, const std::string& bytes) {
    inputs.push_back({name, source, hex64(fnv1a64(bytes.data(), bytes.size()))});
  }
  void begin_compute() { phase = Phase::kCompute; }
};

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cplx_text(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

std::string dims_text(const std::vector<int>& dims) {
  std::ostringstream os;
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? " " : "") << dims[i];
  return os.str();
}

std::string matrix_text(const Mat& m) {
  std::ostringstream os;
  for (int i = 0; i < m.rows(); ++i) {
    os << " ";
    for (int j = 0; j < m.cols(); ++j) os << " " << cplx_text(m(i, j));
    os << "\n";
  }
  return os.str();
}

std::string element_text(const BlockedOperator& x) {
  std::ostringstream os;
  os << "shape: " << dims_text(x.shape.dims) << "\n";
  for (std::size_t b = 0; b < x.blocks.size(); ++b) {
    os << "block " << b << ":\n" << matrix_text(x.blocks[b]);
  }
  return os.str();
}

std::string map_text(const LinearMap& f) {
  std::ostringstream os;
  os << "domain: " << dims_text(f.domain.dims) << "\n"
     << "codomain: " << dims_text(f.codomain.dims) << "\n"
     << "matrix " << f.mat.rows() << "x" << f.mat.cols() << ":\n"
     << matrix_text(f.mat);
  return os.str();
}

std::string functional_text(const Functional& w) {
  std::ostringstream os;
  os << "shape: " << dims_text(w.shape.dims) << "\ncoeff:";
  for (int k = 0; k < w.coeff.size(); ++k) os << " " << cplx_text(w.coeff(k));
  os << "\n";
  return os.str();
}

void write_out(const Session& s, std::string text) {
  if (!text.empty() && text.back() != '\n') text += '\n';
  if (s.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
  } else {
    write_text_atomic(s.out, text);
  }
}

int emit_payload(const Session& s, const json& payload, const std::string& text) {
  if (s.format == "json")
    write_out(s, payload.dump());
  else
    write_out(s, text);
  return 0;
}

// Verification suites get a wrapper carrying the artifact version and the
// digests of everything that went in; data outputs stay bare so they can be
// fed back into other subcommands.
int emit_report(const Session& s, const Report& rep) {
  if (s.format == "json") {
    json env;
    env["artifact"] = std::string("qgavg ") + kVersion;
    env["command"] = s.command;
    json ins = json::array();
    for (const auto& in : s.inputs) {
      json one;
      one["name"] = in.name;
      one["source"] = in.source;
      one["digest"] = in.digest;
      ins.push_back(one);
    }
    env["inputs"] = ins;
    env["seed"] = s.seed;
    env["tol"] = s.tol;
    env["report"] = json::parse(rep.render_json());
    write_out(s, env.dump());
  } else {
    write_out(s, rep.render_text());
  }
  return rep.all_pass() ? 0 : 3;
}

FiniteGroupData builtin_group_data(const std::string& name) {
  if (name == "z2") return cyclic_group(2);
  if (name == "z3") return cyclic_group(3);
  if (name == "z4") return cyclic_group(4);
  if (name == "z6") return cyclic_group(6);
  if (name == "s3") return symmetric_group_3();
  if (name == "d4") return dihedral_group_4();
  if (name == "q8") return quaternion_group();
  throw BadInput("unknown builtin group: " + name);
}

bool is_builtin(const std::string& spec) { return spec.rfind("builtin:", 0) == 0; }

FiniteQuantumGroup load_model(Session& s, const std::string& spec, const std::string& face) {
  if (is_builtin(spec)) {
    s.note("group", spec, spec);
    return builtin_model(spec.substr(8));
  }
  std::string text = read_text_file(spec);
  s.note("group", spec, text);
  FiniteGroupData g = group_from_json(text);
  return face == "dual" ? build_dual_of_group(g) : build_function_algebra(g);
}

FiniteGroupData load_group_data(Session& s, const std::string& spec, const std::string& name) {
  if (is_builtin(spec)) {
    s.note(name, spec, spec);
    return builtin_group_data(spec.substr(8));
  }
  std::string text = read_text_file(spec);
  s.note(name, spec, text);
  return group_from_json(text);
}

BlockedOperator load_element(Session& s, const std::string& path, const AlgebraShape& want,
                             const std::string& where) {
  std::string text = read_text_file(path);
  s.note("element", path, text);
  BlockedOperator x = element_from_json(text);
  if (x.shape != want)
    throw BadInput("element shape [" + dims_text(x.shape.dims) + "] does not match the " +
                   where + " [" + dims_text(want.dims) + "]");
  return x;
}

int element_order(const FiniteGroupData& g, int a) {
  int x = a, n = 1;
  while (x != g.identity) {
    x = g.mult(x, a);
    ++n;
  }
  return n;
}

bool embed_search(const FiniteGroupData& g, const FiniteGroupData& k, std::vector<int>& emb,
                  std::vector<char>& used, int pos) {
  if (pos == k.order) return true;
  if (emb[pos] >= 0) return embed_search(g, k, emb, used, pos + 1);
  for (int cand = 0; cand < g.order; ++cand) {
    if (used[cand] || element_order(g, cand) != element_order(k, pos)) continue;
    emb[pos] = cand;
    used[cand] = 1;
    bool ok = true;
    for (int a = 0; a < k.order && ok; ++a) {
      if (emb[a] < 0) continue;
      int ab = k.mult(a, pos), ba = k.mult(pos, a);
      if (emb[ab] >= 0 && g.mult(emb[a], cand) != emb[ab]) ok = false;
      if (ok && emb[ba] >= 0 && g.mult(cand, emb[a]) != emb[ba]) ok = false;
    }
    if (ok && embed_search(g, k, emb, used, pos + 1)) return true;
    emb[pos] = -1;
    used[cand] = 0;
  }
  return false;
}

// First embedding in lexicographic order of images; identity goes to identity.
std::vector<int> find_embedding(const FiniteGroupData& g, const FiniteGroupData& k) {
  std::vector<int> emb(k.order, -1);
  std::vector<char> used(g.order, 0);
  emb[k.identity] = g.identity;
  used[g.identity] = 1;
  if (!embed_search(g, k, emb, used, 0))
    throw BadInput("the subgroup does not embed into the group");
  return emb;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_fqg_build(Session& s, const std::string& spec, const std::string& face) {
  FiniteQuantumGroup G = load_model(s, spec, face);
  s.begin_compute();
  json j;
  j["name"] = G.name;
  j["compact_blocks"] = G.dual_shape.dims;
  j["discrete_blocks"] = G.discrete_shape.dims;
  j["gns_dimension"] = G.gns_dim;
  j["irrep_table"] = json::parse(irrep_table_to_json(G));
  std::ostringstream os;
  os << "name: " << G.name << "\n"
     << "compact blocks: " << dims_text(G.dual_shape.dims) << "\n"
     << "discrete blocks: " << dims_text(G.discrete_shape.dims) << "\n"
     << "gns dimension: " << G.gns_dim << "\n"
     << "irreps: " << G.irreps.size() << "\n";
  return emit_payload(s, j, os.str());
}

int cmd_fqg_verify(Session& s, const std::string& spec, const std::string& face) {
  FiniteQuantumGroup G = load_model(s, spec, face);
  s.begin_compute();
  auto t0 = std::chrono::steady_clock::now();
  Report rep = verify_axioms(G, s.tol);
  std::fprintf(stderr, "%s: %.2f s\n", s.command.c_str(), elapsed_since(t0));
  return emit_report(s, rep);
}

int cmd_mult_theta(Session& s, const std::string& spec, const std::string& face,
                   const std::string& element) {
  FiniteQuantumGroup G = load_model(s, spec, face);
  BlockedOperator b = load_element(s, element, G.discrete_shape, "discrete face");
  s.begin_compute();
  Multiplier m = theta_of(G, b);
  return emit_payload(s, json::parse(linear_map_to_json(m.theta)), map_text(m.theta));
}

int cmd_mult_checkcp(Session& s, const std::string& spec, const std::string& face,
                     const std::string& element) {
  FiniteQuantumGroup G = load_model(s, spec, face);
  BlockedOperator b = load_element(s, element, G.discrete_shape, "discrete face");
  s.begin_compute();
  CpVerdict v = is_cp(G, b);
  json j;
  j["cp"] = v.cp;
  j["min_choi_eig"] = v.min_choi_eig;
  j["functional_defect"] = v.functional_defect;
  std::ostringstream os;
  os << "cp: " << (v.cp ? "yes" : "no") << "\n"
     << "min choi eigenvalue: " << fmt17(v.min_choi_eig) << "\n"
     << "functional defect: " << fmt17(v.functional_defect) << "\n";
  emit_payload(s, j, os.str());
  return v.cp ? 0 : 3;
}

int cmd_mult_decompose(Session& s, const std::string& spec, const std::string& face,
                       const std::string& element) {
  FiniteQuantumGroup G = load_model(s, spec, face);
  BlockedOperator b = load_element(s, element, G.discrete_shape, "discrete face");
  if (!is_central(b, s.tol)) throw BadInput("decompose needs a central multiplier");
  s.begin_compute();
  CentralDecomposition dec = positive_decomposition(G, b);
  json j;
  j["residual"] = dec.residual;
  json oms = json::array(), parts = json::array();
  for (int k = 0; k < 4; ++k) {
    oms.push_back(json::parse(functional_to_json(dec.omega[k])));
    parts.push_back(json::parse(element_to_json(dec.part[k])));
  }
  j["functionals"] = oms;
  j["parts"] = parts;
  std::ostringstream os;
  os << "residual: " << fmt17(dec.residual) << "\n";
  for (int k = 0; k < 4; ++k) {
    os << "functional " << k << ":\n" << functional_text(dec.omega[k]);
    os << "part " << k << ":\n" << element_text(dec.part[k]);
  }
  emit_payload(s, j, os.str());
  return dec.residual <= s.tol ? 0 : 3;
}

int cmd_avg_xi(Session& s, const std::string& group, const std::string& subgroup,
               const std::string& element, std::vector<int> embed) {
  FiniteGroupData g = load_group_data(s, group, "group");
  FiniteGroupData k = load_group_data(s, subgroup, "subgroup");
  if (embed.empty()) {
    embed = find_embedding(g, k);
    std::ostringstream os;
    os << "embedding:";
    for (int v : embed) os << " " << v;
    std::fprintf(stderr, "%s\n", os.str().c_str());
  }
  SubgroupMorphism m = classical_subgroup(g, k, embed);
  if (element.empty()) {
    s.begin_compute();
    return emit_payload(s, json::parse(linear_map_to_json(m.xi)), map_text(m.xi));
  }
  BlockedOperator x = load_element(s, element, m.source.discrete_shape, "discrete face");
  s.begin_compute();
  BlockedOperator y = average(m, x);
  return emit_payload(s, json::parse(element_to_json(y)), element_text(y));
}

int cmd_double_build(Session& s, const std::string& spec, const std::string& face) {
  FiniteQuantumGroup G = load_model(s, spec, face);
  s.begin_compute();
  DrinfeldDouble D = build_double(G);
  json j;
  j["name"] = G.name;
  j["double_blocks"] = D.shape.dims;
  j["double_total"] = D.shape.total;
  j["dual_face_blocks"] = D.dual_structure.shape.dims;
  j["dual_face_multiplicity"] = D.dual_structure.mult;
  j["z_convention"] = D.z_convention;
  std::ostringstream os;
  os << "name: " << G.name << "\n"
     << "double blocks: " << dims_text(D.shape.dims) << "\n"
     << "double total: " << D.shape.total << "\n"
     << "dual face blocks: " << dims_text(D.dual_structure.shape.dims) << "\n"
     << "z convention: " << D.z_convention << "\n";
  return emit_payload(s, j, os.str());
}

int cmd_double_xi(Session& s, const std::string& spec, const std::string& face,
                  const std::string& element) {
  FiniteQuantumGroup G = load_model(s, spec, face);
  std::string text = read_text_file(element);
  s.note("element", element, text);
  BlockedOperator x = element_from_json(text);
  s.begin_compute();
  DrinfeldDouble D = build_double(G);
  if (x.shape != D.shape)
    throw BadInput("element shape [" + dims_text(x.shape.dims) +
                   "] does not match the double [" + dims_text(D.shape.dims) + "]");
  DoubleAverage da = xi_double(D, x, s.tol);
  json j;
  j["averaged"] = json::parse(element_to_json(da.averaged));
  j["factor"] = json::parse(element_to_json(da.factor));
  j["slice_residual"] = da.slice_residual;
  j["factor_residual"] = da.factor_residual;
  j["block_residual"] = da.block_residual;
  std::ostringstream os;
  os << "slice residual: " << fmt17(da.slice_residual) << "\n"
     << "factor residual: " << fmt17(da.factor_residual) << "\n"
     << "block residual: " << fmt17(da.block_residual) << "\n"
     << "factor:\n"
     << element_text(da.factor) << "averaged:\n"
     << element_text(da.averaged);
  emit_payload(s, j, os.str());
  double worst = std::max({da.slice_residual, da.factor_residual, da.block_residual});
  return worst <= s.tol ? 0 : 3;
}

int cmd_double_verify(Session& s, const std::string& spec, const std::string& face) {
  FiniteQuantumGroup G = load_model(s, spec, face);
  s.begin_compute();
  auto t0 = std::chrono::steady_clock::now();
  DrinfeldDouble D = build_double(G);
  Report rep = verify_double(D, s.tol);
  std::fprintf(stderr, "%s: %.2f s\n", s.command.c_str(), elapsed_since(t0));
  return emit_report(s, rep);
}

void gate_q_flag(bool q_given) {
  if (q_given)
    throw Unsupported("the q-deformed family has no tracial haar state to average against");
}

void gate_traciality(const FiniteQuantumGroup& G) {
  if (!has_tracial_haar(G))
    throw Unsupported("coadjoint averaging needs a tracial haar state");
}

int cmd_coadj_avg(Session& s, const std::string& spec, const std::string& face,
                  const std::string& element, bool q_given) {
  gate_q_flag(q_given);
  FiniteQuantumGroup G = load_model(s, spec, face);
  gate_traciality(G);
  BlockedOperator x = load_element(s, element, G.discrete_shape, "discrete face");
  s.begin_compute();
  CoadjointContext C = build_coadjoint(G);
  BlockedOperator y = coadjoint_average(C, x);
  return emit_payload(s, json::parse(element_to_json(y)), element_text(y));
}

int cmd_coadj_classexp(Session& s, const std::string& spec, const std::string& face,
                       const std::string& element, bool q_given) {
  gate_q_flag(q_given);
  FiniteQuantumGroup G = load_model(s, spec, face);
  gate_traciality(G);
  if (element.empty()) {
    s.begin_compute();
    CoadjointContext C = build_coadjoint(G);
    return emit_payload(s, json::parse(linear_map_to_json(C.class_expectation)),
                        map_text(C.class_expectation));
  }
  BlockedOperator x = load_element(s, element, G.dual_shape, "compact face");
  s.begin_compute();
  CoadjointContext C = build_coadjoint(G);
  BlockedOperator y = C.class_expectation(x);
  return emit_payload(s, json::parse(element_to_json(y)), element_text(y));
}

int cmd_suq2_qdim(Session& s, double q, double l) {
  double v = qdim(q, l);
  s.begin_compute();
  json j;
  j["q"] = q;
  j["l"] = l;
  j["qdim"] = v;
  return emit_payload(s, j, fmt17(v));
}

int cmd_suq2_xiblock(Session& s, double q, double l, const std::string& element) {
  FusionData d = make_fusion_data(q, l);
  std::string text = read_text_file(element);
  s.note("element", element, text);
  BlockedOperator x = element_from_json(text);
  if (x.shape.blocks() != 1 || x.shape.dims[0] != spin_dim(l))
    throw BadInput("xi-block expects one block of dimension " + std::to_string(spin_dim(l)));
  s.begin_compute();
  cplx v = xi_block_scalar(d, l, x.blocks[0]);
  json j;
  j["q"] = q;
  j["l"] = l;
  j["scalar"] = {v.real(), v.imag()};
  std::string text_out = v.imag() == 0.0 ? fmt17(v.real())
                                         : fmt17(v.real()) + " " + fmt17(v.imag()) + "i";
  return emit_payload(s, j, text_out);
}

int cmd_suq2_fuse(Session& s, double q, bool has_l1, double l1, bool has_l2, double l2,
                  bool has_cutoff, double cutoff) {
  if (has_l1 != has_l2) throw BadInput("fuse needs both --l1 and --l2, or neither");
  if (!has_l1) {
    if (!has_cutoff) throw BadInput("a full fusion table needs --cutoff");
    FusionData d = make_fusion_data(q, cutoff);
    s.begin_compute();
    json j = json::parse(fusion_table_to_json(d));
    std::ostringstream os;
    os << "labels: ";
    for (double l : d.labels()) os << l << " ";
    os << "\n";
    for (const auto& f : j["fusions"]) {
      os << f["l1"].get<double>() << " x " << f["l2"].get<double>() << " ->";
      for (const auto& l : f["labels"]) os << " " << l.get<double>();
      if (f["truncated"].get<bool>()) os << " (truncated)";
      os << "\n";
    }
    return emit_payload(s, j, os.str());
  }
  FusionData d = make_fusion_data(q, has_cutoff ? cutoff : l1 + l2);
  s.begin_compute();
  FusionOutcome f = fuse(d, l1, l2);
  json j;
  j["l1"] = l1;
  j["l2"] = l2;
  j["labels"] = f.labels;
  j["truncated"] = f.truncated;
  json qd = json::array();
  for (double l : f.labels) qd.push_back(qdim(q, l));
  j["qdims"] = qd;
  std::ostringstream os;
  os << "labels:";
  for (double l : f.labels) os << " " << l;
  os << "\ntruncated: " << (f.truncated ? "yes" : "no") << "\n";
  return emit_payload(s, j, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  Session s;
  CLI::App app{"averaging toolkit for finite quantum groups and Drinfeld doubles"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", s.tol, "residual tolerance")->capture_default_str();
  app.add_option("--seed", s.seed, "seed recorded with reports")->capture_default_str();
  app.add_option("--out", s.out, "write output to this path (atomic); default stdout");
  app.add_option("--format", s.format, "output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  std::string group_spec, subgroup_spec, element_path, face = "function";
  std::vector<int> embed;
  double coadj_q = 0, q = 0, l = 0, l1 = 0, l2 = 0, cutoff = 0;
  std::function<int()> action;

  const char* group_help = "builtin:NAME or a group JSON file";
  const char* face_help = "which face a group JSON file builds";

  auto* fqg = app.add_subcommand("fqg", "finite quantum group models");
  fqg->fallthrough();
  fqg->require_subcommand(1);
  auto* fqg_build = fqg->add_subcommand("build", "summarize a model and its irrep table");
  fqg_build->fallthrough();
  fqg_build->add_option("--group", group_spec, group_help)->required();
  fqg_build->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  fqg_build->callback([&] {
    s.command = "fqg build";
    action = [&] { return cmd_fqg_build(s, group_spec, face); };
  });
  auto* fqg_verify = fqg->add_subcommand("verify", "run the axiom suite");
  fqg_verify->fallthrough();
  fqg_verify->add_option("--group", group_spec, group_help)->required();
  fqg_verify->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  fqg_verify->callback([&] {
    s.command = "fqg verify";
    action = [&] { return cmd_fqg_verify(s, group_spec, face); };
  });

  auto* mult = app.add_subcommand("mult", "multipliers and their action maps");
  mult->fallthrough();
  mult->require_subcommand(1);
  auto* mult_theta = mult->add_subcommand("theta", "action map of a discrete-face element");
  mult_theta->fallthrough();
  mult_theta->add_option("--group", group_spec, group_help)->required();
  mult_theta->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  mult_theta->add_option("--element", element_path, "element JSON on the discrete face")
      ->required();
  mult_theta->callback([&] {
    s.command = "mult theta";
    action = [&] { return cmd_mult_theta(s, group_spec, face, element_path); };
  });
  auto* mult_cp = mult->add_subcommand("check-cp", "complete positivity verdict; exit 3 if not");
  mult_cp->fallthrough();
  mult_cp->add_option("--group", group_spec, group_help)->required();
  mult_cp->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  mult_cp->add_option("--element", element_path, "element JSON on the discrete face")->required();
  mult_cp->callback([&] {
    s.command = "mult check-cp";
    action = [&] { return cmd_mult_checkcp(s, group_spec, face, element_path); };
  });
  auto* mult_dec = mult->add_subcommand(
      "decompose", "write a central multiplier as i^k combinations of positive functionals");
  mult_dec->fallthrough();
  mult_dec->add_option("--group", group_spec, group_help)->required();
  mult_dec->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  mult_dec->add_option("--element", element_path, "central element JSON on the discrete face")
      ->required();
  mult_dec->callback([&] {
    s.command = "mult decompose";
    action = [&] { return cmd_mult_decompose(s, group_spec, face, element_path); };
  });

  auto* avg = app.add_subcommand("avg", "averaging over a classical subgroup");
  avg->fallthrough();
  avg->require_subcommand(1);
  auto* avg_xi = avg->add_subcommand(
      "xi", "conditional expectation onto a subgroup; apply with --element or emit the map");
  avg_xi->fallthrough();
  avg_xi->add_option("--group", group_spec, "builtin:NAME or a classical group JSON file")
      ->required();
  avg_xi->add_option("--subgroup", subgroup_spec, "builtin:NAME or a classical group JSON file")
      ->required();
  avg_xi->add_option("--element", element_path, "element JSON on the function face");
  avg_xi->add_option("--embed", embed, "comma list: image of each subgroup element")
      ->delimiter(',');
  avg_xi->callback([&] {
    s.command = "avg xi";
    action = [&] { return cmd_avg_xi(s, group_spec, subgroup_spec, element_path, embed); };
  });

  auto* dbl = app.add_subcommand("double", "Drinfeld double of a model");
  dbl->fallthrough();
  dbl->require_subcommand(1);
  auto* dbl_build = dbl->add_subcommand("build", "summarize the double and its dual face");
  dbl_build->fallthrough();
  dbl_build->add_option("--group", group_spec, group_help)->required();
  dbl_build->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  dbl_build->callback([&] {
    s.command = "double build";
    action = [&] { return cmd_double_build(s, group_spec, face); };
  });
  auto* dbl_xi = dbl->add_subcommand("xi", "average an element of the double to the center");
  dbl_xi->fallthrough();
  dbl_xi->add_option("--group", group_spec, group_help)->required();
  dbl_xi->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  dbl_xi->add_option("--element", element_path, "element JSON on the double")->required();
  dbl_xi->callback([&] {
    s.command = "double xi";
    action = [&] { return cmd_double_xi(s, group_spec, face, element_path); };
  });
  auto* dbl_verify = dbl->add_subcommand("verify", "run the double suite");
  dbl_verify->fallthrough();
  dbl_verify->add_option("--group", group_spec, group_help)->required();
  dbl_verify->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  dbl_verify->callback([&] {
    s.command = "double verify";
    action = [&] { return cmd_double_verify(s, group_spec, face); };
  });

  auto* coadj = app.add_subcommand("coadj", "coadjoint averaging onto the center");
  coadj->fallthrough();
  coadj->require_subcommand(1);
  auto* coadj_avg = coadj->add_subcommand("avg", "average a discrete-face element");
  coadj_avg->fallthrough();
  coadj_avg->add_option("--group", group_spec, group_help)->required();
  coadj_avg->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  coadj_avg->add_option("--element", element_path, "element JSON on the discrete face")
      ->required();
  auto* coadj_avg_q =
      coadj_avg->add_option("--q", coadj_q, "deformation parameter; refused as unsupported");
  coadj_avg->callback([&] {
    s.command = "coadj avg";
    action = [&] {
      return cmd_coadj_avg(s, group_spec, face, element_path, coadj_avg_q->count() > 0);
    };
  });
  auto* coadj_cx = coadj->add_subcommand(
      "classexp", "expectation onto characters; apply with --element or emit the map");
  coadj_cx->fallthrough();
  coadj_cx->add_option("--group", group_spec, group_help)->required();
  coadj_cx->add_option("--face", face, face_help)->check(CLI::IsMember({"function", "dual"}));
  coadj_cx->add_option("--element", element_path, "element JSON on the compact face");
  auto* coadj_cx_q =
      coadj_cx->add_option("--q", coadj_q, "deformation parameter; refused as unsupported");
  coadj_cx->callback([&] {
    s.command = "coadj classexp";
    action = [&] {
      return cmd_coadj_classexp(s, group_spec, face, element_path, coadj_cx_q->count() > 0);
    };
  });

  auto* suq2 = app.add_subcommand("suq2", "quantum SU(2) block data");
  suq2->fallthrough();
  suq2->require_subcommand(1);
  auto* s_qdim = suq2->add_subcommand("qdim", "quantum dimension of a spin");
  s_qdim->fallthrough();
  s_qdim->add_option("--q", q, "deformation parameter in (0,1)")->required();
  s_qdim->add_option("--l", l, "half-integer spin")->required();
  s_qdim->callback([&] {
    s.command = "suq2 qdim";
    action = [&] { return cmd_suq2_qdim(s, q, l); };
  });
  auto* s_xib = suq2->add_subcommand("xi-block", "central block scalar of a one-block element");
  s_xib->fallthrough();
  s_xib->add_option("--q", q, "deformation parameter in (0,1)")->required();
  s_xib->add_option("--l", l, "half-integer spin")->required();
  s_xib->add_option("--element", element_path, "single-block element JSON of dimension 2l+1")
      ->required();
  s_xib->callback([&] {
    s.command = "suq2 xi-block";
    action = [&] { return cmd_suq2_xiblock(s, q, l, element_path); };
  });
  auto* s_fuse = suq2->add_subcommand("fuse", "fusion of two spins, or a full table");
  s_fuse->fallthrough();
  s_fuse->add_option("--q", q, "deformation parameter in (0,1)")->required();
  auto* o_l1 = s_fuse->add_option("--l1", l1, "first spin");
  auto* o_l2 = s_fuse->add_option("--l2", l2, "second spin");
  auto* o_cut = s_fuse->add_option("--cutoff", cutoff, "largest retained spin");
  s_fuse->callback([&] {
    s.command = "suq2 fuse";
    action = [&] {
      return cmd_suq2_fuse(s, q, o_l1->count() > 0, l1, o_l2->count() > 0, l2,
                           o_cut->count() > 0, cutoff);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return 2;
  }
  if (!action) {
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  }
  try {
    return action();
  } catch (const Unsupported& e) {
    std::fprintf(stderr, "unsupported: %s\n", e.what());
    return 4;
  } catch (const BadInput& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    if (s.phase == Phase::kLoad) {
      std::fprintf(stderr, "input error: %s\n", e.what());
      return 2;
    }
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
