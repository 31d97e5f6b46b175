#pragma once

// JSON serialisation of theories, braiding solutions and protocol
// transcripts.  Complex numbers are [re, im] pairs of doubles; all label
// references are indices into the `labels` array.  Keys are emitted in sorted
// order and doubles with shortest-round-trip formatting, so identical inputs
// serialise byte-identically.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "anyonsim/protocols.hpp"
#include "anyonsim/solver.hpp"

namespace anyonsim {

using json = nlohmann::json;

inline json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw StructuralError("expected [re, im] pair");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

inline json theory_to_json(const SkeletalData& data) {
  json out;
  out["name"] = data.name;
  out["labels"] = data.rules.labels;
  out["dual"] = data.rules.dual;
  json fusion = json::array();
  for (int a = 0; a < data.rules.rank(); ++a)
    for (int b = 0; b < data.rules.rank(); ++b)
      for (int c : data.rules.product(a, b)) fusion.push_back(json::array({a, b, c}));
  out["fusion"] = fusion;
  json fs = json::array();
  for (const auto& [key, blk] : data.f_blocks) {
    json entry;
    entry["abcd"] = json::array({key.a, key.b, key.c, key.d});
    entry["rows"] = blk.row_labels;
    entry["cols"] = blk.col_labels;
    json entries = json::array();
    for (int i = 0; i < blk.m.rows(); ++i)
      for (int j = 0; j < blk.m.cols(); ++j) entries.push_back(complex_to_json(blk.m(i, j)));
    entry["entries"] = entries;
    fs.push_back(entry);
  }
  out["F"] = fs;
  if (data.has_r) {
    json rs = json::array();
    for (const auto& [ab, channels] : data.r_symbols)
      for (const auto& [c, v] : channels) {
        json entry;
        entry["ab"] = json::array({ab.first, ab.second});
        entry["c"] = c;
        entry["value"] = complex_to_json(v);
        rs.push_back(entry);
      }
    out["R"] = rs;
  }
  return out;
}

inline SkeletalData theory_from_json(const json& j) {
  SkeletalData data;
  data.name = j.value("name", std::string("imported"));
  const auto& labels = j.at("labels");
  data.rules = FusionRules::empty((int)labels.size());
  data.rules.labels = labels.get<std::vector<std::string>>();
  data.rules.dual = j.at("dual").get<std::vector<int>>();
  if (data.rules.dual.size() != data.rules.labels.size())
    throw StructuralError("theory json: dual map size mismatch");
  for (const auto& triple : j.at("fusion")) {
    if (!triple.is_array() || triple.size() != 3) throw StructuralError("theory json: bad fusion triple");
    data.rules.set_fuses(triple[0].get<int>(), triple[1].get<int>(), triple[2].get<int>());
  }
  for (const auto& entry : j.at("F")) {
    const auto& abcd = entry.at("abcd");
    FKey key{abcd[0].get<int>(), abcd[1].get<int>(), abcd[2].get<int>(), abcd[3].get<int>()};
    FBlock blk;
    blk.row_labels = entry.at("rows").get<std::vector<int>>();
    blk.col_labels = entry.at("cols").get<std::vector<int>>();
    const auto& entries = entry.at("entries");
    if (entries.size() != blk.row_labels.size() * blk.col_labels.size())
      throw StructuralError("theory json: F entry count mismatch");
    blk.m = CMatrix((int)blk.row_labels.size(), (int)blk.col_labels.size());
    size_t idx = 0;
    for (int i = 0; i < blk.m.rows(); ++i)
      for (int jj = 0; jj < blk.m.cols(); ++jj) blk.m(i, jj) = complex_from_json(entries[idx++]);
    data.f_blocks.emplace(key, std::move(blk));
  }
  if (j.contains("R")) {
    data.has_r = true;
    for (const auto& entry : j.at("R")) {
      const auto& ab = entry.at("ab");
      data.r_symbols[{ab[0].get<int>(), ab[1].get<int>()}][entry.at("c").get<int>()] =
          complex_from_json(entry.at("value"));
    }
  }
  return data;
}

inline json solution_to_json(const BraidingSolution& sol) {
  json out = theory_to_json(sol.theory);
  json inv;
  json spins = json::array();
  for (const cplx& s : sol.spins) spins.push_back(complex_to_json(s));
  inv["spins"] = spins;
  inv["fs_q"] = sol.kappa_q;
  inv["residual"] = sol.residual;
  out["invariants"] = inv;
  return out;
}

inline json teleport_transcript_to_json(const TeleportTranscript& tr,
                                        const std::string& theory_id) {
  json out;
  out["protocol"] = tr.braided ? "teleport-braided" : "teleport-braid-free";
  out["theory_id"] = theory_id;
  if (tr.seeded)
    out["seed"] = tr.seed;
  else
    out["forced_record"] = tr.outcomes;
  out["outcomes"] = tr.outcomes;
  out["dits"] = tr.dits_sent;
  out["correction"] = tr.correction;
  out["fidelity"] = tr.fidelity;
  out["probabilities"] = tr.outcome_probabilities;
  out["record_probability"] = tr.record_probability;
  if (tr.braided) out["pre_correction_deviation"] = tr.pre_correction_deviation;
  out["braid_calls"] = tr.braid_calls;
  json in = json::array(), outamp = json::array();
  for (const cplx& a : tr.input_pairwise) in.push_back(complex_to_json(a));
  for (const cplx& a : tr.output_pairwise) outamp.push_back(complex_to_json(a));
  out["input_state"] = in;
  out["output_state"] = outamp;
  return out;
}

inline json sdc_transcript_to_json(const SdcTranscript& tr, const std::string& theory_id) {
  json out;
  out["protocol"] = tr.braided ? "sdc-braided" : "sdc-braid-free";
  out["theory_id"] = theory_id;
  out["encoded"] = json::array({tr.dit_i, tr.dit_j});
  out["decoded"] = json::array({tr.decoded_i, tr.decoded_j});
  out["success"] = tr.success;
  out["branch_probability"] = tr.branch_probability;
  if (tr.braided) out["alt_decode_phase"] = complex_to_json(tr.alt_decode_phase);
  out["braid_calls"] = tr.braid_calls;
  return out;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << j.dump(2) << "\n";
}

inline json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return json::parse(is);
}

// FNV-1a over the serialised F-data; keys the braiding-solution cache.
inline std::string f_data_hash(const SkeletalData& data) {
  SkeletalData f_only = data;
  f_only.has_r = false;
  f_only.r_symbols.clear();
  std::string s = theory_to_json(f_only).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace anyonsim
