// ptycho: command-line front end for the ptychowdd library.
//
// Verbs: simulate | reconstruct | evaluate | experiment. Exit codes:
// 0 success, 1 usage/IO error, 2 ambiguous type I, 3 ambiguous type II,
// 4 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptychowdd.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitTypeI = 2;
constexpr int kExitTypeII = 3;
constexpr int kExitNumerical = 4;

struct CArrDel {
  void operator()(ptycho_carray* p) const { ptycho_carray_free(p); }
};
struct RArrDel {
  void operator()(ptycho_rarray* p) const { ptycho_rarray_free(p); }
};
using CArr = std::unique_ptr<ptycho_carray, CArrDel>;
using RArr = std::unique_ptr<ptycho_rarray, RArrDel>;

[[noreturn]] void die(int code, const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(code);
}

int exit_code_of(ptycho_status s) {
  switch (s) {
    case PTYCHO_OK: return 0;
    case PTYCHO_ERR_INVALID_ARGUMENT:
    case PTYCHO_ERR_DIMENSION_MISMATCH:
    case PTYCHO_ERR_IO: return kExitUsage;
    default: return kExitNumerical;
  }
}

void check(ptycho_status s) {
  if (s != PTYCHO_OK) die(exit_code_of(s), ptycho_last_error());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string out_name(const std::string& base, const std::string& fmt) {
  return base + (fmt == "csv" ? ".csv" : ".bin");
}

CArr read_carray(const std::string& path) {
  ptycho_carray* p = nullptr;
  check(ptycho_carray_read(path.c_str(), &p));
  return CArr(p);
}

RArr read_rarray(const std::string& path) {
  ptycho_rarray* p = nullptr;
  check(ptycho_rarray_read(path.c_str(), &p));
  return RArr(p);
}

// Finds <dir>/<base>.bin or <dir>/<base>.csv.
std::string find_file(const std::string& dir, const std::string& base, bool required) {
  for (const char* ext : {".bin", ".csv"}) {
    std::string p = join(dir, base + ext);
    if (std::filesystem::exists(p)) return p;
  }
  if (required) die(kExitUsage, "missing input file " + base + ".bin/.csv in " + dir);
  return {};
}

struct SimOptions {
  std::size_t d = 0, d2 = 0, delta = 0, gamma = 2;
  bool all_diagonals = false;
  std::string object = "random-complex";
  std::string background = "constant";
  double bg_amp = 1.0;
  long m = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string format = "bin";
};

struct SimData {
  CArr object, window;
  RArr background, grid_clean, grid_noisy;
  double noise = 0.0;
};

SimData run_simulation(const SimOptions& o) {
  bool twodim = o.d2 != 0;
  if (twodim && o.d2 != o.d)
    die(kExitUsage, "--d2 must equal --d (square images only)");
  if (o.delta == 0) die(kExitUsage, "--delta is required");

  SimData s;
  ptycho_carray* w = nullptr;
  check(ptycho_make_window(o.d, o.delta, o.gamma, o.all_diagonals ? 1 : 0, o.seed, twodim ? 1 : 0,
                           &w));
  s.window.reset(w);
  ptycho_carray* x = nullptr;
  check(ptycho_make_object(o.object.c_str(), o.d, o.seed + 1, o.m, o.rho, twodim ? 1 : 0, &x));
  s.object.reset(x);
  ptycho_rarray* y = nullptr;
  check(ptycho_simulate(s.object.get(), s.window.get(), &y));
  s.grid_clean.reset(y);

  std::size_t n = twodim ? o.d * o.d : o.d;
  ptycho_rarray* b = nullptr;
  if (o.background == "none") {
    std::vector<double> zeros(n, 0.0);
    b = ptycho_rarray_create(1, n, 1, zeros.data());
  } else if (o.background == "constant" || o.background == "random") {
    check(ptycho_make_background(o.background.c_str(), o.d, o.bg_amp, o.seed + 2, twodim ? 1 : 0,
                                 &b));
  } else {
    // Treat any other spec as a path to a stored real array.
    check(ptycho_rarray_read(o.background.c_str(), &b));
  }
  s.background.reset(b);

  ptycho_rarray* yn = nullptr;
  check(ptycho_add_background(s.grid_clean.get(), s.background.get(), &yn));
  s.grid_noisy.reset(yn);
  check(ptycho_noise_level(s.grid_clean.get(), s.grid_noisy.get(), &s.noise));
  return s;
}

int cmd_simulate(const SimOptions& o) {
  SimData s = run_simulation(o);
  std::filesystem::create_directories(o.out);
  const char* fmt = o.format.c_str();
  check(ptycho_carray_write(s.object.get(), join(o.out, out_name("object", o.format)).c_str(), fmt));
  check(ptycho_carray_write(s.window.get(), join(o.out, out_name("window", o.format)).c_str(), fmt));
  check(ptycho_rarray_write(s.background.get(),
                            join(o.out, out_name("background", o.format)).c_str(), fmt));
  check(ptycho_rarray_write(s.grid_clean.get(),
                            join(o.out, out_name("grid_clean", o.format)).c_str(), fmt));
  check(ptycho_rarray_write(s.grid_noisy.get(),
                            join(o.out, out_name("grid_noisy", o.format)).c_str(), fmt));
  std::printf("noise level: %.17g\n", s.noise);
  return 0;
}

struct ReconOptions {
  std::string in;
  std::string out;
  std::string method = "vanilla";
  std::size_t gamma = 2;
  bool all_diagonals = false;
  std::string format = "bin";
};

int cmd_reconstruct(const ReconOptions& o) {
  if (o.in.empty()) die(kExitUsage, "--in is required");
  std::string out = o.out.empty() ? o.in : o.out;
  std::filesystem::create_directories(out);

  RArr grid = read_rarray(find_file(o.in, "grid_noisy", true));
  CArr window = read_carray(find_file(o.in, "window", true));

  auto t0 = std::chrono::steady_clock::now();
  ptycho_carray* obj = nullptr;
  ptycho_carray* c1 = nullptr;
  ptycho_carray* c2 = nullptr;
  int outcome = PTYCHO_OUTCOME_UNIQUE;
  ptycho_status st = ptycho_reconstruct(grid.get(), window.get(), o.method.c_str(), o.gamma,
                                        o.all_diagonals ? 1 : 0, &obj, &outcome, &c1, &c2);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CArr object(obj), cand1(c1), cand2(c2);
  check(st);

  // Measurement error against the clean grid when available, otherwise
  // against the input grid.
  std::string clean = find_file(o.in, "grid_clean", false);
  RArr ref = clean.empty() ? std::move(grid) : read_rarray(clean);
  double merr = -1.0;
  const ptycho_carray* scored = object ? object.get() : cand1.get();
  if (scored) check(ptycho_measurement_error(scored, window.get(), ref.get(), &merr));

  const char* outcome_name[] = {"unique", "ambiguous-type-I", "ambiguous-type-II", "unverified"};
  std::ofstream rep(join(out, "report.txt"));
  rep << "method=" << o.method << "\n";
  rep << "mode=" << (o.all_diagonals ? "all" : "gamma=" + std::to_string(o.gamma)) << "\n";
  rep << "outcome=" << outcome_name[outcome] << "\n";
  rep << "runtime_seconds=" << secs << "\n";
  if (merr >= 0.0) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", merr);
    rep << "measurement_error=" << buf << "\n";
  }
  rep.close();

  const char* fmt = o.format.c_str();
  if (object)
    check(ptycho_carray_write(object.get(), join(out, out_name("reconstruction", o.format)).c_str(),
                              fmt));
  if (cand1)
    check(ptycho_carray_write(cand1.get(), join(out, out_name("candidate1", o.format)).c_str(),
                              fmt));
  if (cand2)
    check(ptycho_carray_write(cand2.get(), join(out, out_name("candidate2", o.format)).c_str(),
                              fmt));

  std::printf("outcome: %s\n", outcome_name[outcome]);
  if (merr >= 0.0) std::printf("measurement error: %.17g\n", merr);
  if (outcome == PTYCHO_OUTCOME_AMBIGUOUS_TYPE_I) return kExitTypeI;
  if (outcome == PTYCHO_OUTCOME_AMBIGUOUS_TYPE_II) return kExitTypeII;
  return 0;
}

int cmd_evaluate(const std::string& truth, const std::string& recon) {
  CArr x = read_carray(truth);
  CArr xt = read_carray(recon);
  double err = 0.0;
  check(ptycho_aligned_error(x.get(), xt.get(), &err));
  std::printf("aligned error: %.17g\n", err);
  return 0;
}

// ---- experiments -----------------------------------------------------------

struct Row {
  std::vector<std::string> cells;
};

void emit_table(const std::string& path, const std::vector<std::string>& header,
                const std::vector<Row>& rows) {
  std::ofstream csv(path);
  for (std::size_t i = 0; i < header.size(); ++i)
    csv << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const Row& r : rows)
    for (std::size_t i = 0; i < r.cells.size(); ++i)
      csv << r.cells[i] << (i + 1 < r.cells.size() ? "," : "\n");
  csv.close();

  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const Row& r : rows)
    for (std::size_t i = 0; i < r.cells.size(); ++i)
      width[i] = std::max(width[i], r.cells[i].size());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      std::printf("%-*s%s", static_cast<int>(width[i]), cells[i].c_str(),
                  i + 1 < cells.size() ? "  " : "\n");
  };
  line(header);
  for (const Row& r : rows) line(r.cells);
  std::printf("wrote %s\n", path.c_str());
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double amplitude_for(const RArr& clean, std::size_t n, std::uint64_t seed, double level,
                     RArr* background) {
  ptycho_rarray* b = nullptr;
  check(ptycho_make_background("random", n, 1.0, seed, 0, &b));
  background->reset(b);
  double amp = 0.0;
  check(ptycho_amplitude_for_noise_level(clean.get(), background->get(), level, &amp));
  return amp;
}

struct Scenario {
  CArr object, window;
  RArr grid_clean;
  std::size_t d = 0;
};

Scenario make_scenario(std::size_t d, std::size_t delta, std::size_t gamma, const char* kind,
                       std::uint64_t seed) {
  Scenario s;
  s.d = d;
  ptycho_carray* w = nullptr;
  check(ptycho_make_window(d, delta, gamma, 0, seed, 0, &w));
  s.window.reset(w);
  ptycho_carray* x = nullptr;
  check(ptycho_make_object(kind, d, seed + 1, 0, 0.0, 0, &x));
  s.object.reset(x);
  ptycho_rarray* y = nullptr;
  check(ptycho_simulate(s.object.get(), s.window.get(), &y));
  s.grid_clean.reset(y);
  return s;
}

RArr noisy_grid(const Scenario& s, const RArr& background, double amp) {
  std::size_t n = s.d;
  std::vector<double> scaled(n);
  ptycho_rarray_copy_out(background.get(), scaled.data());
  for (double& v : scaled) v *= amp;
  RArr b(ptycho_rarray_create(1, n, 1, scaled.data()));
  ptycho_rarray* yn = nullptr;
  check(ptycho_add_background(s.grid_clean.get(), b.get(), &yn));
  return RArr(yn);
}

struct ReconScore {
  double aligned = 0.0, measurement = 0.0;
  int outcome = PTYCHO_OUTCOME_UNIQUE;
};

ReconScore score(const Scenario& s, const RArr& grid, const char* method, std::size_t gamma) {
  ptycho_carray* obj = nullptr;
  int outcome = 0;
  check(ptycho_reconstruct(grid.get(), s.window.get(), method, gamma, 0, &obj, &outcome, nullptr,
                           nullptr));
  CArr object(obj);
  ReconScore r;
  r.outcome = outcome;
  check(ptycho_aligned_error(s.object.get(), object.get(), &r.aligned));
  check(ptycho_measurement_error(object.get(), s.window.get(), s.grid_clean.get(),
                                 &r.measurement));
  return r;
}

int experiment_table_general(const std::string& out) {
  std::vector<Row> rows;
  Scenario s = make_scenario(32, 8, 3, "random-complex", 11);
  for (double level : {1.0, 3.5}) {
    RArr bg;
    double amp = amplitude_for(s.grid_clean, 32, 12, level, &bg);
    RArr yn = noisy_grid(s, bg, amp);
    double noise = 0.0;
    check(ptycho_noise_level(s.grid_clean.get(), yn.get(), &noise));
    for (const char* method : {"vanilla", "general"}) {
      for (std::size_t gamma : {2, 3}) {
        ReconScore r = score(s, yn, method, gamma);
        rows.push_back(Row{{method, fmt_g(noise), "gamma=" + std::to_string(gamma),
                            fmt_g(r.aligned), fmt_g(r.measurement)}});
      }
    }
  }
  emit_table(join(out, "table_general.csv"),
             {"method", "noise_level", "mode", "aligned_error", "measurement_error"}, rows);
  return 0;
}

int experiment_table_phase(const std::string& out) {
  std::vector<Row> rows;
  for (std::size_t delta : {8, 16}) {
    Scenario s = make_scenario(64, delta, 3, "random-phase", 21 + delta);
    RArr bg;
    double amp = amplitude_for(s.grid_clean, 64, 22, 3.5, &bg);
    RArr yn = noisy_grid(s, bg, amp);
    double noise = 0.0;
    check(ptycho_noise_level(s.grid_clean.get(), yn.get(), &noise));
    ReconScore r = score(s, yn, "phase", 3);
    rows.push_back(Row{{"64", std::to_string(delta), fmt_g(noise), fmt_g(r.aligned),
                        fmt_g(r.measurement)}});
  }
  emit_table(join(out, "table_phase.csv"),
             {"d", "delta", "noise_level", "aligned_error", "measurement_error"}, rows);
  return 0;
}

int experiment_noise_sweep(const std::string& out) {
  std::vector<Row> rows;
  Scenario s = make_scenario(32, 8, 3, "random-phase", 31);
  RArr bg;
  double a0 = amplitude_for(s.grid_clean, 32, 32, 1.0, &bg);
  for (double factor : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    RArr yn = noisy_grid(s, bg, a0 * factor);
    double noise = 0.0;
    check(ptycho_noise_level(s.grid_clean.get(), yn.get(), &noise));
    ReconScore rv = score(s, yn, "vanilla", 3);
    ReconScore rg = score(s, yn, "general", 3);
    ReconScore rp = score(s, yn, "phase", 3);
    rows.push_back(Row{{fmt_g(factor), fmt_g(noise), fmt_g(rv.aligned), fmt_g(rg.aligned),
                        fmt_g(rp.aligned)}});
  }
  emit_table(join(out, "noise_sweep.csv"),
             {"amplitude_factor", "noise_level", "vanilla_error", "general_error", "phase_error"},
             rows);
  return 0;
}

int experiment_ambiguity_demo(const std::string& out) {
  std::vector<Row> rows;
  ptycho_carray* wraw = nullptr;
  check(ptycho_make_window(8, 6, 3, 0, 41, 0, &wraw));
  CArr w(wraw);

  struct Case {
    int kind;
    long m;
    double rho;
  };
  for (const Case& c : {Case{1, 3, 0.0}, Case{2, 1, 0.7}}) {
    ptycho_carray *x1r = nullptr, *x2r = nullptr;
    ptycho_rarray *b1r = nullptr, *b2r = nullptr;
    check(ptycho_make_ambiguous_pair(c.kind, c.m, c.rho, w.get(), &x1r, &x2r, &b1r, &b2r));
    CArr x1(x1r), x2(x2r);
    RArr b1(b1r), b2(b2r);

    auto measure = [&](const CArr& x, const RArr& b) {
      ptycho_rarray* y = nullptr;
      check(ptycho_simulate(x.get(), w.get(), &y));
      RArr clean(y);
      ptycho_rarray* yn = nullptr;
      check(ptycho_add_background(clean.get(), b.get(), &yn));
      return RArr(yn);
    };
    RArr y1 = measure(x1, b1);
    RArr y2 = measure(x2, b2);

    std::vector<double> v1(64), v2(64);
    ptycho_rarray_copy_out(y1.get(), v1.data());
    ptycho_rarray_copy_out(y2.get(), v2.data());
    double diff = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) {
      diff = std::max(diff, std::abs(v1[i] - v2[i]));
      peak = std::max(peak, std::abs(v1[i]));
    }

    ptycho_carray* obj = nullptr;
    int outcome = 0;
    ptycho_carray *c1 = nullptr, *c2 = nullptr;
    check(ptycho_reconstruct(y1.get(), w.get(), "phase", 3, 0, &obj, &outcome, &c1, &c2));
    CArr object(obj), cand1(c1), cand2(c2);

    int exit_code = outcome == PTYCHO_OUTCOME_AMBIGUOUS_TYPE_I    ? kExitTypeI
                    : outcome == PTYCHO_OUTCOME_AMBIGUOUS_TYPE_II ? kExitTypeII
                                                                  : 0;
    const char* outcome_name[] = {"unique", "ambiguous-type-I", "ambiguous-type-II", "unverified"};
    rows.push_back(Row{{"type-" + std::string(c.kind == 1 ? "I" : "II"), fmt_g(diff / peak),
                        outcome_name[outcome], std::to_string(exit_code)}});
  }
  emit_table(join(out, "ambiguity_demo.csv"),
             {"family", "relative_grid_difference", "outcome", "cli_exit_code"}, rows);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ptychographic WDD reconstruction with background removal"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value configuration file");

  SimOptions sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  c_sim->configurable();
  c_sim->add_option("--d", sim.d, "Signal length / image side")->required();
  c_sim->add_option("--d2", sim.d2, "Second image dimension (enables 2D; must equal --d)");
  c_sim->add_option("--delta", sim.delta, "Window support size")->required();
  c_sim->add_option("--gamma", sim.gamma, "Number of diagonals");
  c_sim->add_flag("--all-diagonals", sim.all_diagonals, "Use every admissible diagonal");
  c_sim->add_option("--object", sim.object,
                    "random-complex | random-phase | modulation | type2");
  c_sim->add_option("--background", sim.background, "none | constant | random | <file>");
  c_sim->add_option("--bg-amp", sim.bg_amp, "Background amplitude");
  c_sim->add_option("--m", sim.m, "Modulation frequency (modulation/type2 objects)");
  c_sim->add_option("--rho", sim.rho, "Phase parameter (type2 objects)");
  c_sim->add_option("--seed", sim.seed, "RNG seed");
  c_sim->add_option("--out", sim.out, "Output directory");
  c_sim->add_option("--format", sim.format, "bin | csv")
      ->check(CLI::IsMember({"bin", "csv"}));

  ReconOptions rec;
  CLI::App* c_rec = app.add_subcommand("reconstruct", "Reconstruct from a stored grid");
  c_rec->configurable();
  c_rec->add_option("--in", rec.in, "Input directory (grid_noisy + window)")->required();
  c_rec->add_option("--out", rec.out, "Output directory (defaults to --in)");
  c_rec->add_option("--method", rec.method, "vanilla | general | phase")
      ->check(CLI::IsMember({"vanilla", "general", "phase"}));
  c_rec->add_option("--gamma", rec.gamma, "Number of diagonals");
  c_rec->add_flag("--all-diagonals", rec.all_diagonals, "Use every admissible diagonal");
  c_rec->add_option("--format", rec.format, "bin | csv")
      ->check(CLI::IsMember({"bin", "csv"}));

  std::string eval_truth, eval_recon;
  CLI::App* c_eval = app.add_subcommand("evaluate", "Aligned relative error of a reconstruction");
  c_eval->configurable();
  c_eval->add_option("truth", eval_truth, "Ground-truth object file")->required();
  c_eval->add_option("reconstruction", eval_recon, "Reconstructed object file")->required();

  std::string exp_name, exp_out = ".";
  CLI::App* c_exp = app.add_subcommand("experiment", "Run a scripted scenario");
  c_exp->configurable();
  c_exp->add_option("name", exp_name, "table-general | table-phase | noise-sweep | ambiguity-demo")
      ->required()
      ->check(CLI::IsMember({"table-general", "table-phase", "noise-sweep", "ambiguity-demo"}));
  c_exp->add_option("--out", exp_out, "Output directory for the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (c_sim->parsed()) return cmd_simulate(sim);
  if (c_rec->parsed()) return cmd_reconstruct(rec);
  if (c_eval->parsed()) return cmd_evaluate(eval_truth, eval_recon);
  if (c_exp->parsed()) {
    std::filesystem::create_directories(exp_out);
    if (exp_name == "table-general") return experiment_table_general(exp_out);
    if (exp_name == "table-phase") return experiment_table_phase(exp_out);
    if (exp_name == "noise-sweep") return experiment_noise_sweep(exp_out);
    return experiment_ambiguity_demo(exp_out);
  }
  return kExitUsage;
}
