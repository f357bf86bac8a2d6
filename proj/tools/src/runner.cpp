// Copyright 2026 The photonet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "config_json.hpp"
#include "photonet/certifier.hpp"
#include "photonet/distribution.hpp"
#include "photonet/fitter.hpp"
#include "photonet/parallel.hpp"
#include "photonet/ring.hpp"
#include "photonet/serialize.hpp"

namespace photonet::cli {

namespace {

namespace fs = std::filesystem;

// A sweep is an ordered list of independent points. Results are JSON
// objects so they can be checkpointed verbatim and replayed on resume.
struct Sweep {
  std::vector<std::string> keys;
  std::function<Json(std::size_t)> evaluate;
  std::size_t workers = 1;
};

struct Failure {
  std::string point;
  std::string error;
};

struct SweepOutcome {
  std::vector<std::optional<Json>> results;
  std::vector<Failure> failures;  // grid order
  std::string checkpoint;         // kept only when something failed
};

std::string checkpoint_path(const RunConfig& c) {
  if (!c.checkpoint.empty()) return c.checkpoint;
  if (c.output != "-") return c.output + ".checkpoint";
  return {};
}

std::map<std::string, Json> load_checkpoint(const std::string& path, const Json& fingerprint) {
  std::map<std::string, Json> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::exception&) {
      break;  // a run killed mid-write leaves a truncated last line
    }
    if (header) {
      // Key order is not significant; compare as unordered documents.
      if (!record.contains("config") ||
          nlohmann::json::parse(record.at("config").dump()) != nlohmann::json::parse(fingerprint.dump())) {
        throw ConfigError("checkpoint " + path + " was written by a different config");
      }
      header = false;
      continue;
    }
    if (record.contains("point") && record.contains("result")) {
      done[record.at("point").get<std::string>()] = record.at("result");
    }
  }
  return done;
}

SweepOutcome run_sweep(const RunConfig& config, const Sweep& sweep) {
  const std::string path = checkpoint_path(config);
  const Json fingerprint = config_json(config, false);
  std::map<std::string, Json> done;
  if (config.resume) {
    if (path.empty()) throw ConfigError("resume needs a checkpoint path or a file output");
    done = load_checkpoint(path, fingerprint);
  }

  // The checkpoint is rewritten from what was loaded, then appended to.
  std::ofstream checkpoint;
  if (!path.empty()) {
    checkpoint.open(path, std::ios::trunc);
    if (!checkpoint) throw std::runtime_error("cannot write checkpoint " + path);
    checkpoint << Json{{"config", fingerprint}}.dump() << '\n';
  }

  SweepOutcome outcome;
  outcome.results.resize(sweep.keys.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < sweep.keys.size(); ++i) {
    if (auto it = done.find(sweep.keys[i]); it != done.end()) {
      outcome.results[i] = it->second;
      checkpoint << Json{{"point", sweep.keys[i]}, {"result", it->second}}.dump() << '\n';
    } else {
      todo.push_back(i);
    }
  }
  checkpoint.flush();

  std::mutex mutex;
  using Attempt = std::pair<std::optional<Json>, std::string>;
  const std::vector<Attempt> attempts = parallel_map(
      todo.size(),
      [&](std::size_t j) -> Attempt {
        const std::size_t i = todo[j];
        try {
          Json result = sweep.evaluate(i);
          if (checkpoint.is_open()) {
            std::lock_guard<std::mutex> lock(mutex);
            checkpoint << Json{{"point", sweep.keys[i]}, {"result", result}}.dump() << '\n';
            checkpoint.flush();
          }
          return {std::move(result), {}};
        } catch (const std::exception& e) {
          return {std::nullopt, e.what()};
        }
      },
      sweep.workers);

  for (std::size_t j = 0; j < todo.size(); ++j) outcome.results[todo[j]] = attempts[j].first;
  for (std::size_t i = 0; i < sweep.keys.size(); ++i) {
    if (outcome.results[i]) continue;
    const auto it = std::find(todo.begin(), todo.end(), i);
    outcome.failures.push_back({sweep.keys[i], attempts[static_cast<std::size_t>(it - todo.begin())].second});
  }

  if (checkpoint.is_open()) {
    checkpoint.close();
    if (outcome.failures.empty()) {
      fs::remove(path);
    } else {
      outcome.checkpoint = path;
    }
  }
  return outcome;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

Json provenance(const RunConfig& c) {
  Json p;
  p["tool"] = "photonet";
  p["version"] = std::string(library_version());
  p["command"] = std::string(to_string(c.command));
  p["config"] = config_json(c, true);
  if (c.command == Command::fit || c.command == Command::noise_sweep) {
    p["seeds"] = Json{{"base", c.seed},
                      {"restarts", c.training.restarts},
                      {"rule", "restart r trains with seed base + r"}};
  }
  p["timestamp"] = utc_timestamp();
  return p;
}

Json manifest(const SweepOutcome& s) {
  Json m;
  m["status"] = s.failures.empty() ? "complete" : "partial";
  m["points"] = s.results.size();
  Json failed = Json::array();
  for (const auto& f : s.failures) failed.push_back(Json{{"point", f.point}, {"error", f.error}});
  m["failed"] = std::move(failed);
  if (!s.checkpoint.empty()) m["resume"] = Json{{"checkpoint", s.checkpoint}, {"flag", "--resume"}};
  return m;
}

// Rows output: '#' comment lines carry provenance and the manifest around a
// comma-separated table with one header row.
std::string rows_document(const RunConfig& c, const std::vector<std::string>& table, const SweepOutcome* sweep,
                          const std::vector<std::string>& notes = {}) {
  std::ostringstream out;
  const Json p = provenance(c);
  out << "# photonet " << library_version() << ' ' << to_string(c.command) << '\n';
  out << "# config: " << p.at("config").dump() << '\n';
  if (p.contains("seeds")) out << "# seeds: " << p.at("seeds").dump() << '\n';
  out << "# timestamp: " << p.at("timestamp").get<std::string>() << '\n';
  for (const auto& line : table) out << line << '\n';
  for (const auto& note : notes) out << "# " << note << '\n';
  if (sweep != nullptr) {
    out << "# status: " << (sweep->failures.empty() ? "complete" : "partial") << '\n';
    for (const auto& f : sweep->failures) out << "# failed: " << f.point << ": " << f.error << '\n';
    if (!sweep->checkpoint.empty()) out << "# resume: --resume (checkpoint " << sweep->checkpoint << ")\n";
  }
  return out.str();
}

std::string kv_document(Json body, const RunConfig& c, const SweepOutcome* sweep) {
  Json doc;
  doc["format"] = "photonet." + std::string(to_string(c.command));
  doc["provenance"] = provenance(c);
  for (auto& [key, value] : body.items()) doc[key] = std::move(value);
  if (sweep != nullptr) doc["manifest"] = manifest(*sweep);
  return doc.dump(2) + "\n";
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output == "-") {
    out << text;
    out.flush();
    return;
  }
  const fs::path target(c.output);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + temp.string());
    file << text;
    if (!file.flush()) throw std::runtime_error("write failed for " + temp.string());
  }
  fs::rename(temp, target);
}

std::string num(double v) { return format_number(v); }

// Grid coordinates print in shortest round-trip form (0.05, not
// 0.050000000000000003); computed values keep 17 digits.
std::string coord(double v) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, result.ptr);
}

void merge(Json& into, const Json& from) {
  for (const auto& [key, value] : from.items()) into[key] = value;
}

std::string cell(const std::optional<Json>& result, const char* field) {
  if (!result || result->at(field).is_null()) return "nan";
  return num(result->at(field).get<double>());
}

bool zero_phases(const RunConfig& c) {
  return std::all_of(c.phases.begin(), c.phases.end(), [](double p) { return p == 0.0; });
}

Json verdict_json(const CertificateResult& r) {
  return Json{{"verdict", r.feasible ? "feasible" : "infeasible"},
              {"violation", r.violation},
              {"certificate_verified", r.certificate_verified},
              {"pivots", r.pivots}};
}

void write_certificate(const RunConfig& c, const std::string& name, const FeasibilityProblem& problem,
                       const CertificateResult& result, double t) {
  if (c.certificates.empty()) return;
  fs::create_directories(c.certificates);
  std::ofstream file(fs::path(c.certificates) / (name + ".json"), std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write certificate " + name);
  file << certificate_to_json(problem, result, t);
}

// ---- commands ---------------------------------------------------------------

int run_dist(const RunConfig& c, std::ostream& out) {
  const OutcomeDistribution d = triangle_distribution(c.transmissivity, c.phases, c.variant, c.noise);
  if (c.format == OutputFormat::kv) {
    Json body = Json::parse(distribution_to_json(d));
    body.erase("format");
    emit(c, kv_document(std::move(body), c, nullptr), out);
  } else {
    std::vector<std::string> table{"outcome,probability"};
    for (std::size_t i = 0; i < d.size(); ++i) table.push_back(d.key_of(i) + "," + num(d.at(i)));
    emit(c, rows_document(c, table, nullptr), out);
  }
  return kExitSuccess;
}

int run_lp_scan(const RunConfig& c, std::ostream& out) {
  const TriangleLpOptions options{c.implied_marginals};
  const ProblemBuilder builder = [&](double t) {
    if (c.noise.is_ideal() && zero_phases(c)) return build_triangle_lp(t, options);
    return build_triangle_lp(triangle_distribution(t, c.phases, PovmVariant::passive, c.noise), options);
  };
  std::vector<double> grid = c.t_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const bool scan = grid.size() >= 2;

  Sweep sweep;
  for (double t : grid) sweep.keys.push_back("t=" + coord(t));
  if (scan) sweep.keys.push_back("boundary");
  sweep.workers = worker_count();
  sweep.evaluate = [&](std::size_t i) -> Json {
    if (i == grid.size()) {
      const BoundaryReport report = scan_boundary(grid.front(), grid.back(), c.precision, builder,
                                                  static_cast<int>(grid.size()));
      Json brackets = Json::array();
      for (const auto& b : report.boundaries) {
        brackets.push_back(Json{{"lo", b.lo}, {"hi", b.hi}, {"estimate", b.estimate()}, {"lo_feasible", b.lo_feasible}});
      }
      return Json{{"t_lo", report.t_lo}, {"t_hi", report.t_hi}, {"precision", report.precision},
                  {"evaluations", report.evaluations.size()}, {"brackets", std::move(brackets)}};
    }
    const double t = grid[i];
    const FeasibilityProblem problem = builder(t);
    const CertificateResult result = solve_feasibility(problem);
    write_certificate(c, "certificate_t" + coord(t), problem, result, t);
    Json row{{"t", t}};
    merge(row, verdict_json(result));
    return row;
  };
  const SweepOutcome s = run_sweep(c, sweep);

  const std::optional<Json>& boundary = scan ? s.results.back() : std::optional<Json>{};
  if (c.format == OutputFormat::kv) {
    Json points = Json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (s.results[i]) points.push_back(*s.results[i]);
    }
    Json body{{"points", std::move(points)}, {"boundary", boundary ? *boundary : Json(nullptr)}};
    emit(c, kv_document(std::move(body), c, &s), out);
  } else {
    std::vector<std::string> table{"t,verdict,violation,certificate_verified,pivots"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& r = s.results[i];
      if (!r) {
        table.push_back(coord(grid[i]) + ",failed,nan,false,0");
        continue;
      }
      table.push_back(coord(grid[i]) + "," + r->at("verdict").get<std::string>() + "," +
                      num(r->at("violation").get<double>()) + "," +
                      (r->at("certificate_verified").get<bool>() ? "true" : "false") + "," +
                      std::to_string(r->at("pivots").get<int>()));
    }
    std::vector<std::string> notes;
    if (boundary) {
      for (const auto& b : boundary->at("brackets")) {
        notes.push_back("boundary: lo=" + coord(b.at("lo").get<double>()) + " hi=" + coord(b.at("hi").get<double>()) +
                        " estimate=" + coord(b.at("estimate").get<double>()));
      }
    }
    emit(c, rows_document(c, table, &s, notes), out);
  }
  return s.failures.empty() ? kExitSuccess : kExitPartial;
}

Json fit_json(const FitResult& f) {
  Json restarts = Json::array();
  int diverged = 0;
  for (const auto& r : f.restarts) {
    restarts.push_back(r.diverged ? Json(nullptr) : Json(r.distance));
    diverged += r.diverged ? 1 : 0;
  }
  return Json{{"distance", f.distance},
              {"best_restart", f.best_restart},
              {"diverged", diverged},
              {"restart_distances", std::move(restarts)}};
}

// Row-major (row, column) fit grid shared by fit and noise-sweep.
int run_fit_grid(const RunConfig& c, std::ostream& out, const std::vector<double>& rows,
                 const std::vector<double>& cols, const char* row_name, const char* col_name,
                 const std::function<OutcomeDistribution(double, double)>& target) {
  Sweep sweep;
  for (double r : rows) {
    for (double q : cols) sweep.keys.push_back(std::string(row_name) + "=" + coord(r) + "," + col_name + "=" + coord(q));
  }
  // Restarts already fill the worker pool.
  sweep.workers = 1;
  sweep.evaluate = [&](std::size_t i) -> Json {
    const double r = rows[i / cols.size()];
    const double q = cols[i % cols.size()];
    Json row{{row_name, r}, {col_name, q}};
    merge(row, fit_json(fit_best_of(target(r, q), c.training)));
    return row;
  };
  const SweepOutcome s = run_sweep(c, sweep);

  if (c.format == OutputFormat::kv) {
    Json points = Json::array();
    for (const auto& r : s.results) {
      if (r) points.push_back(*r);
    }
    emit(c, kv_document(Json{{"rows", row_name}, {"columns", col_name}, {"points", std::move(points)}}, c, &s), out);
  } else {
    std::string header = row_name;
    for (double q : cols) header += std::string(",") + col_name + "=" + coord(q);
    std::vector<std::string> table{header};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::string line = coord(rows[i]);
      for (std::size_t j = 0; j < cols.size(); ++j) line += "," + cell(s.results[i * cols.size() + j], "distance");
      table.push_back(line);
    }
    emit(c, rows_document(c, table, &s), out);
  }
  return s.failures.empty() ? kExitSuccess : kExitPartial;
}

int run_fit(const RunConfig& c, std::ostream& out) {
  return run_fit_grid(c, out, c.t_grid, c.visibilities, "t", "r", [&](double t, double r) {
    NoiseParams noise = c.noise;
    noise.werner_visibility = r;
    return triangle_distribution(t, c.phases, PovmVariant::passive, noise);
  });
}

int run_noise_sweep(const RunConfig& c, std::ostream& out) {
  return run_fit_grid(c, out, c.transmissivity_grid, c.efficiency_grid, "T", "nu", [&](double T, double nu) {
    NoiseParams noise = c.noise;
    noise.channel_transmissivity = T;
    noise.detector_efficiency = nu;
    return triangle_distribution(c.transmissivity, c.phases, PovmVariant::passive, noise);
  });
}

// Probability that every party reports a single photon (L or R).
double all_single(const OutcomeDistribution& d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::string key = d.key_of(i);
    if (std::all_of(key.begin(), key.end(), [](char a) { return a == 'L' || a == 'R'; })) sum += d.at(i);
  }
  return sum;
}

int run_ring(const RunConfig& c, std::ostream& out) {
  Sweep sweep;
  for (int n : c.parties) {
    for (double t : c.t_grid) sweep.keys.push_back("N=" + std::to_string(n) + ",t=" + coord(t));
  }
  sweep.workers = worker_count();
  sweep.evaluate = [&](std::size_t i) -> Json {
    const int n = c.parties[i / c.t_grid.size()];
    const double t = c.t_grid[i % c.t_grid.size()];
    const std::vector<double> phases(static_cast<std::size_t>(n), c.ring_phase);
    const OutcomeDistribution d = ring_distribution(n, t, phases, c.variant, c.noise);
    Json row{{"N", n}, {"t", t}};
    if (c.variant == PovmVariant::passive) {
      const FeasibilityProblem problem = build_ring_lp(n, t, d);
      const CertificateResult result = solve_feasibility(problem);
      write_certificate(c, "certificate_N" + std::to_string(n) + "_t" + coord(t), problem, result, t);
      merge(row, verdict_json(result));
    } else {
      row["verdict"] = "n/a";
    }
    row["all_single"] = all_single(d);
    if (c.format == OutputFormat::kv) {
      Json table = Json::object();
      for (std::size_t k = 0; k < d.size(); ++k) table[d.key_of(k)] = d.at(k);
      row["distribution"] = std::move(table);
    }
    return row;
  };
  const SweepOutcome s = run_sweep(c, sweep);

  if (c.format == OutputFormat::kv) {
    Json points = Json::array();
    for (const auto& r : s.results) {
      if (r) points.push_back(*r);
    }
    emit(c, kv_document(Json{{"points", std::move(points)}}, c, &s), out);
  } else {
    std::vector<std::string> table{"N,t,verdict,violation,certificate_verified,all_single"};
    for (std::size_t i = 0; i < s.results.size(); ++i) {
      const int n = c.parties[i / c.t_grid.size()];
      const double t = c.t_grid[i % c.t_grid.size()];
      const auto& r = s.results[i];
      std::string line = std::to_string(n) + "," + coord(t) + ",";
      if (!r) {
        line += "failed,nan,false,nan";
      } else if (r->at("verdict") == "n/a") {
        line += "n/a,nan,false," + num(r->at("all_single").get<double>());
      } else {
        line += r->at("verdict").get<std::string>() + "," + num(r->at("violation").get<double>()) + "," +
                (r->at("certificate_verified").get<bool>() ? "true" : "false") + "," +
                num(r->at("all_single").get<double>());
      }
      table.push_back(line);
    }
    emit(c, rows_document(c, table, &s), out);
  }
  return s.failures.empty() ? kExitSuccess : kExitPartial;
}

int run_herald(const RunConfig& c, std::ostream& out) {
  const double q_nr = heralding_impurity(c.herald, true);
  const double q_nnr = heralding_impurity(c.herald, false);
  const double rate = repetition_rate(c.herald);
  if (c.format == OutputFormat::kv) {
    Json body{{"impurity_number_resolving", q_nr},
              {"impurity_non_number_resolving", q_nnr},
              {"repetition_rate_hz", rate}};
    emit(c, kv_document(std::move(body), c, nullptr), out);
  } else {
    emit(c,
         rows_document(c,
                       {"quantity,value", "impurity_number_resolving," + num(q_nr),
                        "impurity_non_number_resolving," + num(q_nnr), "repetition_rate_hz," + num(rate)},
                       nullptr),
         out);
  }
  return kExitSuccess;
}

}  // namespace

void print_error(std::ostream& err, std::string_view kind, std::string_view message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::dist: return run_dist(config, out);
      case Command::lp_scan: return run_lp_scan(config, out);
      case Command::fit: return run_fit(config, out);
      case Command::noise_sweep: return run_noise_sweep(config, out);
      case Command::ring: return run_ring(config, out);
      case Command::herald: return run_herald(config, out);
    }
  } catch (const ConfigError& e) {
    print_error(err, "validation", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    print_error(err, "computation", e.what());
    return kExitPartial;
  }
  return kExitSuccess;
}

}  // namespace photonet::cli
