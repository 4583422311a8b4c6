#include "growthlab/serialize.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "growthlab/errors.hpp"

namespace growthlab {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view s) {
  const std::string str(s);
  if (str == "inf") return HUGE_VAL;
  if (str == "-inf") return -HUGE_VAL;
  if (str == "nan") return std::nan("");
  if (str.empty()) throw ParameterError("empty real");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  // ERANGE on underflow still yields the correctly rounded subnormal.
  if (end != str.c_str() + str.size() || (errno == ERANGE && std::isinf(v)))
    throw ParameterError("malformed real '" + str + "'");
  return v;
}

namespace {

std::string_view kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::Constant:
      return "constant";
    case BlockKind::Geometric:
      return "geometric";
    case BlockKind::Formula:
      return "formula";
  }
  return "constant";
}

BlockKind parse_kind(const std::string& s) {
  if (s == "constant") return BlockKind::Constant;
  if (s == "geometric") return BlockKind::Geometric;
  if (s == "formula") return BlockKind::Formula;
  throw ParameterError("unknown block kind '" + s + "'");
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ParameterError(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string str_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) throw ParameterError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

double real_field(const Json& j, const char* name) { return parse_real(str_field(j, name)); }
Index index_field(const Json& j, const char* name) { return parse_index(str_field(j, name)); }

int int_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) throw ParameterError(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

Json real_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

Json to_json(const BlockSequence& seq) {
  const ConstructionParams& p = seq.params();
  Json params = {
      {"s", format_real(p.s)},          {"k_max", index_to_string(p.k_max)}, {"A", format_real(p.A)},
      {"A0", format_real(p.A0)},        {"d_rule_A", format_real(p.d_rule_A)}, {"j_max", p.j_max},
  };
  Json cps = Json::array();
  for (const auto& c : seq.checkpoints())
    cps.push_back({{"j", c.j},
                   {"a", index_to_string(c.a)},
                   {"b", index_to_string(c.b)},
                   {"d", c.d},
                   {"c", c.c},
                   {"log_mu_a", format_real(c.log_mu_a)},
                   {"log_mu_b", format_real(c.log_mu_b)}});
  Json blocks = Json::array();
  for (const auto& b : seq.blocks())
    blocks.push_back({{"kind", kind_name(b.kind)},
                      {"start", index_to_string(b.start)},
                      {"end", index_to_string(b.end)},
                      {"log_mu_start", format_real(b.log_mu_start)},
                      {"log_ratio", format_real(b.log_ratio)},
                      {"exponent", format_real(b.exponent)}});
  return {{"schema", kSchemaVersion},
          {"type", "block_sequence"},
          {"family", family_name(seq.family())},
          {"k_max", index_to_string(seq.k_max())},
          {"params", params},
          {"checkpoints", cps},
          {"blocks", blocks}};
}

BlockSequence sequence_from_json(const Json& j) {
  if (str_field(j, "schema") != kSchemaVersion)
    throw ParameterError("unsupported schema '" + str_field(j, "schema") + "'");
  if (str_field(j, "type") != "block_sequence") throw ParameterError("document is not a block sequence");
  ConstructionParams p;
  p.family = parse_family(str_field(j, "family"));
  const Json& pj = field(j, "params");
  p.s = real_field(pj, "s");
  p.k_max = index_field(pj, "k_max");
  p.A = real_field(pj, "A");
  p.A0 = real_field(pj, "A0");
  p.d_rule_A = real_field(pj, "d_rule_A");
  p.j_max = int_field(pj, "j_max");

  std::vector<Checkpoint> cps;
  for (const Json& c : field(j, "checkpoints"))
    cps.push_back(Checkpoint{int_field(c, "j"), index_field(c, "a"), index_field(c, "b"), int_field(c, "d"),
                             int_field(c, "c"), real_field(c, "log_mu_a"), real_field(c, "log_mu_b")});
  std::vector<Block> blocks;
  for (const Json& b : field(j, "blocks")) {
    Block blk;
    blk.kind = parse_kind(str_field(b, "kind"));
    blk.start = index_field(b, "start");
    blk.end = index_field(b, "end");
    blk.log_mu_start = real_field(b, "log_mu_start");
    blk.log_ratio = real_field(b, "log_ratio");
    blk.exponent = real_field(b, "exponent");
    blocks.push_back(blk);
  }
  BlockSequence seq = BlockSequence::from_parts(p, std::move(blocks), std::move(cps));
  if (index_field(j, "k_max") != seq.k_max()) throw ParameterError("k_max does not match the blocks");
  return seq;
}

void save_sequence(const BlockSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << to_json(seq).dump(2) << "\n";
  if (!out) throw ParameterError("write failed for " + path.string());
}

BlockSequence load_sequence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParameterError(path.string() + ": " + e.what());
  }
  return sequence_from_json(j);
}

Json to_json(const Window& w) {
  return {{"t_min", real_json(w.t_min())},
          {"t_max", real_json(w.t_max())},
          {"log_t_min", real_json(w.log_t_min)},
          {"log_t_max", real_json(w.log_t_max)},
          {"samples", w.samples}};
}

Json to_json(const Verdict& v) {
  Json witness = Json::object();
  for (const auto& [k, x] : v.witness) witness[k] = real_json(x);
  for (const auto& [k, x] : v.witness_index) witness[k] = index_to_string(x);
  Json stats = Json::object();
  for (const auto& [k, x] : v.statistics) stats[k] = real_json(x);
  return {{"schema", kSchemaVersion},
          {"condition", v.condition},
          {"state", state_name(v.state)},
          {"exact", v.exact},
          {"witness", witness},
          {"window", v.window ? to_json(*v.window) : Json(nullptr)},
          {"statistics", stats},
          {"diagnostics", v.diagnostics}};
}

Json to_json(const IndexEstimate& e) {
  Json ks = Json::array();
  for (const auto& k : e.K_witnesses)
    ks.push_back({{"gamma", real_json(k.gamma)}, {"K", real_json(k.K)}, {"ratio", real_json(k.ratio)}});
  const char* sentinel = e.infinite ? "+inf" : e.ceiling ? "ceiling" : "none";
  return {{"schema", kSchemaVersion},
          {"gamma_lower", real_json(e.gamma_lower)},
          {"gamma_upper", real_json(e.gamma_upper)},
          {"sentinel", sentinel},
          {"alpha_lower", real_json(e.alpha_lower())},
          {"alpha_upper", real_json(e.alpha_upper())},
          {"K_witnesses", ks},
          {"window", to_json(e.window)},
          {"margin", real_json(e.margin)},
          {"diagnostics", e.diagnostics}};
}

Json to_json(const ScenarioReport& r, bool timing) {
  Json as = Json::array();
  for (const auto& a : r.assertions)
    as.push_back({{"description", a.description},
                  {"expected", a.expected},
                  {"observed", real_json(a.observed)},
                  {"residual", real_json(a.residual)},
                  {"pass", a.pass}});
  Json j = {{"scenario", r.id},
            {"inputs", r.inputs},
            {"assertions", as},
            {"passed", r.passed()},
            {"skipped", r.skipped}};
  if (r.skipped) j["skip_reason"] = r.skip_reason;
  if (timing) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

Json to_json(const FullReport& r, bool timing) {
  Json reps = Json::array();
  for (const auto& s : r.reports) reps.push_back(to_json(s, timing));
  return {{"schema", kSchemaVersion},
          {"reports", reps},
          {"summary", {{"passed", r.passed}, {"failed", r.failed}, {"skipped", r.skipped}}}};
}

}  // namespace growthlab
