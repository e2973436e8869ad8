#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aqsp/cost.hpp"
#include "aqsp/dos.hpp"
#include "aqsp/errors.hpp"
#include "aqsp/evolution.hpp"
#include "aqsp/experiments.hpp"
#include "aqsp/instance.hpp"
#include "aqsp/spectral.hpp"

namespace aqsp {

using nlohmann::json;

// Shortest round-trip decimal form, locale-independent.
inline std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string bits_string(std::uint32_t z, int n) {
  std::string s(n, '0');
  for (int j = 0; j < n; ++j)
    if (bit_of(z, j)) s[j] = '1';
  return s;  // z_0 z_1 ... z_{n-1}
}

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw validation_error("write failed: " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- instance files -------------------------------------------------------

inline json instance_to_json(const SppInstance& inst) {
  return json{{"n", inst.n}, {"b", inst.b}, {"alphas", inst.alphas}, {"seed", inst.seed}};
}

inline SppInstance instance_from_json(const json& j) {
  SppInstance inst;
  try {
    inst.n = j.at("n").get<int>();
    inst.b = j.at("b").get<int>();
    inst.alphas = j.at("alphas").get<std::vector<std::int64_t>>();
    inst.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw validation_error(std::string("bad instance JSON: ") + e.what());
  }
  validate_instance(inst);  // alphas are authoritative, seed informational
  return inst;
}

inline void save_instance(const SppInstance& inst, const std::string& path) {
  write_text(path, instance_to_json(inst).dump(2) + "\n");
}

inline SppInstance load_instance(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw validation_error("cannot parse " + path + ": " + e.what());
  }
  return instance_from_json(j);
}

// ---- state checkpoints: flat little-endian f64 re/im pairs ----------------

static_assert(std::endian::native == std::endian::little,
              "state checkpoint format is little-endian");

inline void save_state(const StateVector& psi, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(psi.amps.data()),
            static_cast<std::streamsize>(psi.amps.size() * sizeof(complex_t)));
  if (!out) throw validation_error("write failed: " + path);
}

inline StateVector load_state(int n, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open: " + path);
  StateVector psi(n);
  in.read(reinterpret_cast<char*>(psi.amps.data()),
          static_cast<std::streamsize>(psi.amps.size() * sizeof(complex_t)));
  if (in.gcount() != static_cast<std::streamsize>(psi.amps.size() * sizeof(complex_t)))
    throw validation_error("state file too short for n = " + std::to_string(n) + ": " + path);
  return psi;
}

// ---- evolution outputs ----------------------------------------------------

inline json evolution_result_json(const EvolutionResult& r) {
  json j{{"T", r.T},
         {"p0", r.p0},
         {"norm_drift", r.norm_drift},
         {"method", r.method_used},
         {"dt", r.dt_used},
         {"steps", r.steps}};
  if (!r.adiabatic_overlap.empty()) {
    json samples = json::array();
    for (const auto& [t, overlap] : r.adiabatic_overlap)
      samples.push_back(json{{"t", t}, {"overlap", overlap}});
    j["adiabatic_overlap"] = samples;
  }
  return j;
}

inline std::string profile_csv(const StateVector& psi, const ResidueTable& table,
                               const CostSpectrum& costs) {
  std::string out = "sorted_index,|Omega|,cost_k,probability\n";
  for (std::size_t i = 0; i < table.sorted_order.size(); ++i) {
    const std::uint32_t z = table.sorted_order[i];
    out += std::to_string(i) + "," + fmt(std::abs(table.omega(z))) + "," +
           std::to_string(costs.costs[z]) + "," + fmt(std::norm(psi[z])) + "\n";
  }
  return out;
}

// ---- experiment outputs ----------------------------------------------------

inline std::string complexity_curve_csv(const ComplexityCurve& curve) {
  std::string out = "T,p0,C\n";
  for (const auto& pt : curve.points)
    out += fmt(pt.T) + "," + fmt(pt.p0) + "," + fmt(pt.C) + "\n";
  return out;
}

inline json complexity_curve_json(const ComplexityCurve& curve) {
  return json{{"T_star", curve.T_star},
              {"p0_star", curve.p0_star},
              {"C_star", curve.C_star},
              {"unbracketed", curve.unbracketed},
              {"evaluations", curve.evaluations}};
}

inline std::string scaling_report_csv(const ScalingReport& report) {
  std::string out = "n,instance_seed,d0,T_star,p0_star,C_star\n";
  for (const auto& per : report.per_n)
    for (const auto& inst : per.instances) {
      if (inst.failed) continue;
      out += std::to_string(per.n) + "," + std::to_string(inst.seed) + "," +
             std::to_string(inst.d0) + "," + fmt(inst.T_star) + "," + fmt(inst.p0_star) + "," +
             fmt(inst.C_star) + "\n";
    }
  return out;
}

inline json scaling_report_json(const ScalingReport& report) {
  json per = json::array();
  for (const auto& p : report.per_n) {
    json instances = json::array();
    for (const auto& inst : p.instances) {
      json ij{{"seed", inst.seed}};
      if (inst.failed) {
        ij["failed"] = true;
        ij["error"] = inst.error;
      } else {
        ij["d0"] = inst.d0;
        ij["T_star"] = inst.T_star;
        ij["p0_star"] = inst.p0_star;
        ij["C_star"] = inst.C_star;
        ij["unbracketed"] = inst.unbracketed;
      }
      instances.push_back(ij);
    }
    per.push_back(json{{"n", p.n},
                       {"median_C_star", p.median_C_star},
                       {"mean_d0", p.mean_d0},
                       {"mean_p0_star", p.mean_p0_star},
                       {"instances", instances}});
  }
  // slope is in natural log per unit n
  return json{{"per_n", per},
              {"fit", json{{"slope", report.fit.slope},
                           {"intercept", report.fit.intercept},
                           {"residuals", report.fit.residuals},
                           {"n_used", report.fit.n_used},
                           {"n_min", report.fit_n_min},
                           {"n_max", report.fit_n_max}}},
              {"failures", report.failures}};
}

// ---- spectral outputs -------------------------------------------------------

inline std::string spectrum_csv(const SpectralResult& res) {
  std::string out = "s,k,g_k,merging\n";
  for (std::size_t i = 0; i < res.s_grid.size(); ++i)
    for (int k = 0; k < res.m; ++k)
      out += fmt(res.s_grid[i]) + "," + std::to_string(k) + "," + fmt(res.eigenvalues[i][k]) +
             "," + std::to_string(static_cast<int>(res.merging[i][k])) + "\n";
  return out;
}

inline json gap_json(const GapInfo& gap, double T_for_eta = 0.0) {
  json j{{"min_gap", gap.min_gap}, {"s_star", gap.s_star}, {"v_tilde", gap.v_tilde}};
  if (T_for_eta > 0.0) {
    j["T"] = T_for_eta;
    j["eta"] = adiabaticity_parameter(gap, T_for_eta);
  }
  return j;
}

// ---- dos outputs ------------------------------------------------------------

inline std::string dos_csv(const DosHistogram& hist) {
  std::string out = "bin_center,rho_bar,gaussian_prediction\n";
  for (std::size_t i = 0; i < hist.bin_centers.size(); ++i)
    out += fmt(hist.bin_centers[i]) + "," + fmt(hist.counts_per_unit[i]) + "," +
           fmt(gaussian_dos(hist.bin_centers[i], hist.n, hist.sigma2)) + "\n";
  return out;
}

inline json resonance_json(const std::vector<ResonanceReport>& reports) {
  json arr = json::array();
  for (const auto& rep : reports)
    arr.push_back(json{{"q", rep.q},
                       {"residues", rep.residues},
                       {"strength", rep.strength},
                       {"passes", rep.passes}});
  return json{{"candidates", arr}};
}

// ---- oracle output -----------------------------------------------------------

inline json oracle_json(const SppInstance& inst, const BruteForceResult& bf) {
  json opt = json::array();
  for (std::uint32_t z : bf.optimal)
    opt.push_back(json{{"index", z}, {"bits", bits_string(z, inst.n)}});
  return json{{"min_abs_residue", bf.min_abs_residue},
              {"min_abs_omega", std::ldexp(static_cast<double>(bf.min_abs_residue), -inst.b)},
              {"count", bf.optimal.size()},
              {"optimal", opt}};
}

}  // namespace aqsp
