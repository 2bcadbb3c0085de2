#include "qpww/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "qpww/errors.hpp"
#include "qpww/estimate_lab.hpp"
#include "qpww/experiments.hpp"
#include "qpww/random_fields.hpp"
#include "qpww/series_io.hpp"
#include "qpww/snapshot.hpp"

namespace qpww {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

const std::vector<std::pair<Command, const char*>> kCommands{{Command::simulate, "simulate"},
                                                             {Command::lemma_suite, "lemma-suite"},
                                                             {Command::iterate, "iterate"},
                                                             {Command::refine, "refine"},
                                                             {Command::dispersion, "dispersion"}};

double default_decay(double decay, double sobolev) { return decay > 0.0 ? decay : sobolev + 1.0; }

std::pair<QPFunction, QPFunction> mode_fields(const FieldInit& init, const LatticePtr& lattice,
                                              const std::vector<std::string>& names) {
  std::pair<QPFunction, QPFunction> out{QPFunction(lattice), QPFunction(lattice)};
  for (const auto& [name, list] : init.modes) {
    QPFunction& f = name == names[0] ? out.first : out.second;
    for (const auto& m : list) f[lattice->flat(m.j)] += cplx(m.re, m.im);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.close();
  if (!f) throw std::ios_base::failure("cannot write " + path.string());
}

std::string hex64(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

SimulationSpec apply_overrides(SimulationSpec spec, const RunOptions& options) {
  if (options.seed) {
    spec.initial.random.seed = *options.seed;
    spec.background.random.seed = *options.seed;
    spec.suite.seed = *options.seed;
    spec.refine.seed = *options.seed;
  }
  return spec;
}

class Session {
 public:
  Session(Command command, const SimulationSpec& spec, const RunOptions& options)
      : command_(command), spec_(spec), options_(options), dir_(resolve_output_dir(spec, options)),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(dir_);
  }

  const fs::path& dir() const { return dir_; }
  std::ostream* log() const { return options_.log; }

  void artifact(const std::string& name) { artifacts_.push_back(name); }

  template <class Fn>
  void write_file(const std::string& name, Fn&& body) {
    std::ostringstream os;
    body(os);
    write_text(dir_ / name, os.str());
    artifact(name);
  }

  int finish(int code, const std::string& message) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::string canonical = serialize(spec_);
    ojson m;
    m["command"] = command_name(command_);
    m["code_version"] = QPWW_VERSION;
    m["series_csv_version"] = kSeriesCsvVersion;
    m["snapshot_version"] = kSnapshotVersion;
    m["spec_hash"] = "fnv1a64:" + hex64(fnv1a64(canonical.data(), canonical.size()));
    m["seeds"] = {{"initial", spec_.initial.random.seed},
                  {"background", spec_.background.random.seed},
                  {"suite", spec_.suite.seed},
                  {"refine", spec_.refine.seed}};
    m["seed_override"] = options_.seed ? ojson(*options_.seed) : ojson(nullptr);
    m["threads"] = options_.threads;
    m["wall_time_s"] = wall;
    m["argv"] = options_.argv;
    m["output_directory"] = dir_.string();
    m["status"] = code == exit_ok ? "ok" : "error";
    m["exit_code"] = code;
    m["message"] = message;
    m["warnings"] = spec_.warnings;
    m["artifacts"] = artifacts_;
    m["spec"] = ojson::parse(canonical);
    write_text(dir_ / "manifest.json", m.dump(2) + "\n");
    return code;
  }

 private:
  Command command_;
  const SimulationSpec& spec_;
  const RunOptions& options_;
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> artifacts_;
};

Snapshot load_for(const FieldInit& init, const LatticePtr& lattice, std::ostream* log) {
  return load_snapshot(init.snapshot, lattice, log);
}

template <class S>
int simulate_state(Session& session, const SimulationSpec& spec, const S& initial, long start_step) {
  const RunConfig cfg = run_config(spec);
  const bool snapshots = std::find(spec.output.formats.begin(), spec.output.formats.end(), "snapshot") !=
                         spec.output.formats.end();
  const bool csv =
      std::find(spec.output.formats.begin(), spec.output.formats.end(), "csv") != spec.output.formats.end();
  CheckpointFn<S> checkpoint;
  if (snapshots) {
    checkpoint = [&](double t, long step, const S& state) {
      const std::string name = "checkpoint_" + std::to_string(step) + ".qpws";
      export_snapshot(make_snapshot(state, t, step), session.dir() / name);
      session.artifact(name);
    };
  }
  const RunResult<S> result = integrate(initial, cfg, checkpoint, start_step);
  if (csv) session.write_file("series.csv", [&](std::ostream& os) { write_series_csv(os, result.series, spec.output.stride); });
  const std::string final_name = result.status == RunStatus::completed ? "final.qpws" : "last_good.qpws";
  if (snapshots || result.status != RunStatus::completed) {
    export_snapshot(make_snapshot(result.state, result.t, result.steps), session.dir() / final_name);
    session.artifact(final_name);
  }
  switch (result.status) {
    case RunStatus::completed:
      return session.finish(exit_ok, "completed " + std::to_string(result.steps) + " steps");
    case RunStatus::surface_degenerate:
      if (session.log()) *session.log() << "error: " << result.message << '\n';
      return session.finish(exit_surface_degenerate, result.message);
    case RunStatus::non_finite:
      if (session.log()) *session.log() << "error: " << result.message << '\n';
      return session.finish(exit_non_finite, result.message);
  }
  return session.finish(exit_internal, "unknown run status");
}

int simulate(Session& session, const SimulationSpec& spec) {
  const LatticePtr lat = spec_lattice(spec);
  const std::string& system = spec.dynamics.system;
  const double s = spec.dynamics.s;
  std::ostream* log = session.log();
  // A snapshot of the simulated kind resumes at its step index.
  if (spec.initial.source == FieldInit::Source::snapshot) {
    const Snapshot snap = load_for(spec.initial, lat, log);
    if (system == "diff" && snap.kind == StateKind::diff)
      return simulate_state(session, spec, diff_state(snap), snap.step);
    if (system == "undiff" && snap.kind == StateKind::undiff)
      return simulate_state(session, spec, surface_state(snap), snap.step);
    if (system == "linearized" && snap.kind == StateKind::coupled)
      return simulate_state(session, spec, coupled_state(snap), snap.step);
  }
  if (system == "diff") return simulate_state(session, spec, build_diff_state(spec.initial, lat, s, log), 0L);
  if (system == "undiff") return simulate_state(session, spec, build_surface_state(spec.initial, lat, s, log), 0L);
  CoupledState c{build_diff_state(spec.background, lat, s, log), build_lin_state(spec.initial, lat, log)};
  return simulate_state(session, spec, c, 0L);
}

SuiteParams suite_params(const SimulationSpec& spec, unsigned threads) {
  SuiteParams p;
  p.dim = static_cast<int>(spec.lattice.k.size());
  p.k = spec.lattice.k;
  p.N = spec.lattice.N;
  p.sobolev = spec.suite.s;
  p.radius = spec.suite.radius;
  p.trials = spec.suite.trials;
  p.seed = spec.suite.seed;
  p.threads = threads;
  p.decay = spec.suite.decay;
  p.multiplier_decay = spec.suite.multiplier_decay;
  p.operand_decay = spec.suite.operand_decay;
  p.dt = spec.suite.dt;
  return p;
}

int lemma_suite_cmd(Session& session, const SimulationSpec& spec, unsigned threads) {
  const auto reports = lemma_suite(suite_params(spec, threads));
  session.write_file("report.csv", [&](std::ostream& os) { write_report_csv(os, reports); });
  session.write_file("report_trials.csv", [&](std::ostream& os) { write_trials_csv(os, reports); });
  return session.finish(exit_ok, std::to_string(reports.size()) + " checks");
}

DiffState experiment_initial(const SimulationSpec& spec, std::ostream* log) {
  const LatticePtr lat = spec_lattice(spec);
  if (spec.dynamics.system == "undiff")
    return differentiate_state(build_surface_state(spec.initial, lat, spec.dynamics.s, log), spec.dynamics.eps_chord);
  if (spec.dynamics.system == "linearized") return build_diff_state(spec.background, lat, spec.dynamics.s, log);
  return build_diff_state(spec.initial, lat, spec.dynamics.s, log);
}

void long_row(std::ostream& os, const std::string& quantity, const std::string& index, double value) {
  os << quantity << ',' << index << ',' << format_double(value) << '\n';
}

int iterate_cmd(Session& session, const SimulationSpec& spec) {
  IterationOptions o;
  o.m_max = spec.iterate.m_max;
  o.T = spec.iterate.T;
  o.dt = spec.iterate.dt;
  o.eps_chord = spec.dynamics.eps_chord;
  const IterationReport r = iteration_experiment(experiment_initial(spec, session.log()), o);
  session.write_file("report.csv", [&](std::ostream& os) {
    os << "quantity,index,value\n";
    for (std::size_t m = 0; m < r.delta.size(); ++m) long_row(os, "delta", std::to_string(m), r.delta[m]);
    for (std::size_t m = 0; m < r.contraction.size(); ++m)
      long_row(os, "contraction", std::to_string(m), r.contraction[m]);
    long_row(os, "distance_to_direct", "", r.distance_to_direct);
    long_row(os, "truncation_tolerance", "", r.truncation_tolerance);
    long_row(os, "dt_gap", "", r.dt_gap);
    long_row(os, "resolution_gap", "", r.resolution_gap);
    long_row(os, "roundoff_floor", "", r.roundoff_floor);
    long_row(os, "non_contraction", "", r.non_contraction ? 1.0 : 0.0);
    long_row(os, "interpolation_order", "", r.interpolation_order);
  });
  return session.finish(exit_ok, r.non_contraction ? "no contracting step observed" : "iterates contract");
}

int refine_cmd(Session& session, const SimulationSpec& spec, unsigned threads) {
  RefinementOptions o;
  o.dim = static_cast<int>(spec.lattice.k.size());
  o.k = spec.lattice.k;
  o.N_list = spec.refine.N_list;
  o.sobolev = spec.refine.s;
  o.decay = spec.refine.decay;
  o.target_A = spec.refine.target_A;
  o.seed = spec.refine.seed;
  o.T = spec.refine.T;
  o.dt = spec.refine.dt;
  o.eps_chord = spec.dynamics.eps_chord;
  o.threads = threads;
  const RefinementReport r = refinement_experiment(o);
  session.write_file("report.csv", [&](std::ostream& os) {
    os << "quantity,index,value\n";
    for (std::size_t i = 0; i < r.N.size(); ++i) long_row(os, "N", std::to_string(i), r.N[i]);
    for (std::size_t i = 0; i < r.dist_H0.size(); ++i) long_row(os, "dist_H0", std::to_string(i), r.dist_H0[i]);
    for (std::size_t i = 0; i < r.dist_Hs.size(); ++i) long_row(os, "dist_Hs", std::to_string(i), r.dist_Hs[i]);
    long_row(os, "monotone", "", r.monotone ? 1.0 : 0.0);
    for (std::size_t i = 0; i < r.band_norms.size(); ++i)
      for (std::size_t l = 0; l < r.band_norms[i].size(); ++l)
        long_row(os, "band_norm_N" + std::to_string(r.N[i]), std::to_string(l), r.band_norms[i][l]);
    for (std::size_t l = 0; l < r.envelope.size(); ++l) long_row(os, "envelope", std::to_string(l), r.envelope[l]);
    long_row(os, "envelope_ratio", "", r.envelope_ratio);
  });
  return session.finish(exit_ok, r.monotone ? "distances decrease" : "distances not monotone");
}

int dispersion_cmd(Session& session, const SimulationSpec& spec) {
  const LatticePtr lat = spec_lattice(spec);
  std::vector<std::vector<int>> modes = spec.dispersion.modes;
  if (modes.empty()) {
    std::vector<int> e1(lat->dim(), 0);
    e1[0] = -1;
    modes.push_back(e1);
    e1[0] = -4;
    if (lat->contains(e1)) modes.push_back(e1);
  }
  const RunConfig cfg = run_config(spec);
  session.write_file("report.csv", [&](std::ostream& os) {
    os << "j,xi,expected,omega,relative_error,detected\n";
    for (const auto& j : modes) {
      const DispersionResult r = dispersion_probe(lat, j, spec.dispersion.amplitude, cfg);
      std::string idx = format_index(j);
      os << '"' << idx << "\"," << format_double(r.xi) << ',' << format_double(r.expected) << ','
         << format_double(r.omega) << ',' << format_double(r.detected ? std::abs(r.omega - r.expected) / r.expected : 0.0)
         << ',' << (r.detected ? 1 : 0) << '\n';
    }
  });
  return session.finish(exit_ok, std::to_string(modes.size()) + " modes probed");
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommands)
    if (name == n) return c;
  return std::nullopt;
}

std::string command_name(Command command) {
  for (const auto& [c, n] : kCommands)
    if (c == command) return n;
  return "unknown";
}

fs::path resolve_output_dir(const SimulationSpec& spec, const RunOptions& options) {
  if (options.output_dir) return *options.output_dir;
  if (const char* env = std::getenv("QPWW_OUTPUT_DIR"); env && *env) return env;
  return spec.output.directory;
}

DiffState build_diff_state(const FieldInit& init, const LatticePtr& lattice, double sobolev, std::ostream* log) {
  DiffState out{QPFunction(lattice), QPFunction(lattice)};
  switch (init.source) {
    case FieldInit::Source::zero:
      return out;
    case FieldInit::Source::modes: {
      auto [W, R] = mode_fields(init, lattice, field_names("diff"));
      out = {std::move(W), std::move(R)};
      break;
    }
    case FieldInit::Source::random:
      out = random_diff_state(lattice, default_decay(init.random.decay, sobolev), sobolev, init.random.target_A,
                              init.random.seed);
      break;
    case FieldInit::Source::snapshot: {
      const Snapshot snap = load_for(init, lattice, log);
      if (snap.kind == StateKind::diff) out = diff_state(snap);
      else if (snap.kind == StateKind::undiff) out = differentiate_state(surface_state(snap));
      else out = coupled_state(snap).bg;
      break;
    }
  }
  enforce_holomorphic(out);
  return out;
}

SurfaceState build_surface_state(const FieldInit& init, const LatticePtr& lattice, double sobolev,
                                 std::ostream* log) {
  SurfaceState out{QPFunction(lattice), QPFunction(lattice)};
  switch (init.source) {
    case FieldInit::Source::zero:
      return out;
    case FieldInit::Source::modes: {
      auto [W, Q] = mode_fields(init, lattice, field_names("undiff"));
      out = {std::move(W), std::move(Q)};
      break;
    }
    case FieldInit::Source::random:
      out = undifferentiate_state(random_diff_state(lattice, default_decay(init.random.decay, sobolev), sobolev,
                                                    init.random.target_A, init.random.seed));
      break;
    case FieldInit::Source::snapshot: {
      const Snapshot snap = load_for(init, lattice, log);
      if (snap.kind == StateKind::undiff) out = surface_state(snap);
      else if (snap.kind == StateKind::diff) out = undifferentiate_state(diff_state(snap));
      else out = undifferentiate_state(coupled_state(snap).bg);
      break;
    }
  }
  enforce_holomorphic(out);
  return out;
}

LinState build_lin_state(const FieldInit& init, const LatticePtr& lattice, std::ostream* log) {
  LinState out{QPFunction(lattice), QPFunction(lattice)};
  switch (init.source) {
    case FieldInit::Source::zero:
      return out;
    case FieldInit::Source::modes: {
      auto [w, r] = mode_fields(init, lattice, field_names("linearized"));
      out = {std::move(w), std::move(r)};
      break;
    }
    case FieldInit::Source::random: {
      const double decay = init.random.decay > 0.0 ? init.random.decay : 0.5 * (lattice->dim() + 2);
      out = random_lin_state(lattice, decay, init.random.seed);
      out.w *= init.random.target_A;
      out.r *= init.random.target_A;
      break;
    }
    case FieldInit::Source::snapshot: {
      const Snapshot snap = load_for(init, lattice, log);
      if (snap.kind == StateKind::coupled) {
        out = coupled_state(snap).lin;
      } else if (snap.kind == StateKind::diff) {
        const DiffState d = diff_state(snap);
        out = {d.W, d.R};
      } else {
        throw ValidationError("initial.snapshot: an undifferentiated snapshot cannot seed a linearized state");
      }
      break;
    }
  }
  enforce_holomorphic(out);
  return out;
}

int exit_code_for_current_exception(std::ostream* log) {
  auto report = [&](const char* kind, const std::exception& e) {
    if (log) *log << kind << ": " << e.what() << '\n';
  };
  try {
    throw;
  } catch (const ParseError& e) {
    report("parse error", e);
    return exit_parse;
  } catch (const RationalDependence& e) {
    report("validation error", e);
    return exit_validation;
  } catch (const ValidationError& e) {
    report("validation error", e);
    return exit_validation;
  } catch (const SurfaceDegenerate& e) {
    report("surface degenerate", e);
    return exit_surface_degenerate;
  } catch (const NonFinite& e) {
    report("non-finite", e);
    return exit_non_finite;
  } catch (const CorruptSnapshot& e) {
    report("corrupt snapshot", e);
    return exit_snapshot;
  } catch (const FormatVersionMismatch& e) {
    report("snapshot version mismatch", e);
    return exit_snapshot;
  } catch (const fs::filesystem_error& e) {
    report("i/o error", e);
    return exit_io;
  } catch (const std::ios_base::failure& e) {
    report("i/o error", e);
    return exit_io;
  } catch (const std::exception& e) {
    report("internal error", e);
    return exit_internal;
  }
}

int run(Command command, const SimulationSpec& input, const RunOptions& options) {
  const SimulationSpec spec = apply_overrides(input, options);
  if (options.log)
    for (const auto& w : spec.warnings) *options.log << w << '\n';
  std::optional<Session> session;
  try {
    session.emplace(command, spec, options);
    const unsigned threads = std::max(1u, options.threads);
    switch (command) {
      case Command::simulate:
        return simulate(*session, spec);
      case Command::lemma_suite:
        return lemma_suite_cmd(*session, spec, threads);
      case Command::iterate:
        return iterate_cmd(*session, spec);
      case Command::refine:
        return refine_cmd(*session, spec, threads);
      case Command::dispersion:
        return dispersion_cmd(*session, spec);
    }
    return exit_internal;
  } catch (...) {
    const int code = exit_code_for_current_exception(options.log);
    std::string message = "aborted";
    try {
      throw;
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    if (session) {
      try {
        session->finish(code, message);
      } catch (...) {
      }
    }
    return code;
  }
}

int run_file(Command command, const fs::path& spec_path, const RunOptions& options) {
  try {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) throw ValidationError("cannot open spec file " + spec_path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return run(command, parse_spec(text.str()), options);
  } catch (...) {
    return exit_code_for_current_exception(options.log);
  }
}

}  // namespace qpww
