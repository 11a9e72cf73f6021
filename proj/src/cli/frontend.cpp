#include "onebit/cli.hpp"

#include "onebit/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace onebit::cli {

namespace {

void add_common(CLI::App& sub, RunParams& p) {
  sub.add_option("--sensors", p.sensors, "Number of array sensors S")->capture_default_str();
  sub.add_option("--zeta", p.zeta_deg, "Arrival angle in degrees")->capture_default_str();
  sub.add_option("--snapshots", p.snapshots, "Snapshots K per decision")->capture_default_str();
  sub.add_option("--snr", p.snr_db, "SNR in dB, gamma = 10^(SNR/20) (repeatable)")->capture_default_str();
  sub.add_option("--pfa", p.pfa, "False-alarm probability (repeatable)")->capture_default_str();
  sub.add_option("--gamma0", p.gamma0, "Source amplitude under H0")->capture_default_str();
  sub.add_option("--threads", p.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  sub.add_option("--out", p.out, "CSV output path; a .manifest.json sidecar is written next to it");
  sub.add_flag("--benchmark-gaussian", p.benchmark_gaussian, "Include the unquantized Gaussian detector");
  sub.add_flag("--gnuplot", p.gnuplot, "Also write a gnuplot script next to the CSV");
}

std::string gnuplot_script(const RunParams& p) {
  std::ostringstream os;
  os << "set datafile separator ','\nset key autotitle columnhead\nset grid\n";
  std::ostringstream snrs;
  for (std::size_t i = 0; i < p.snr_db.size(); ++i) snrs << (i ? " " : "") << p.snr_db[i];
  if (p.command == "sweep-sensors") {
    os << "set xlabel 'Number of Sensors S'\nset ylabel 'chi [dB]'\n"
       << "plot for [snr in \"" << snrs.str() << "\"] '" << p.out
       << "' using 1:(abs($2-snr)<1e-9 ? $4 : 1/0) with linespoints title 'SNR='.snr.' dB'\n";
  } else if (p.command == "sweep-time") {
    os << "set xlabel 'Observation Time [ms]'\nset ylabel 'chi [dB]'\n"
       << "plot for [snr in \"" << snrs.str() << "\"] '" << p.out
       << "' using 1:(abs($3-snr)<1e-9 ? $5 : 1/0) with lines title 'SNR='.snr.' dB'\n";
  } else if (p.command == "validate") {
    std::ostringstream pfas;
    for (std::size_t i = 0; i < p.pfa.size(); ++i) pfas << (i ? " " : "") << p.pfa[i];
    os << "set xlabel 'Signal-to-Noise Ratio [dB]'\nset ylabel 'P_D'\nset yrange [0:1]\n"
       << "plot for [pf in \"" << pfas.str() << "\"] '" << p.out
       << "' using 1:(abs($2-pf)<1e-15 ? $3 : 1/0) with lines title 'analytic P_FA='.pf, \\\n"
       << "     for [pf in \"" << pfas.str() << "\"] '" << p.out
       << "' using 1:(abs($2-pf)<1e-15 ? $4 : 1/0) with points title 'simulated P_FA='.pf\n";
  } else {
    os << "# no plot defined for " << p.command << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neyman-Pearson detection with 1-bit sensor arrays: analytic design and Monte Carlo validation.\n"
               "SNR values are in dB with source amplitude gamma = 10^(SNR_dB/20)."};
  app.name("onebit-detect");
  app.require_subcommand(0, 1);
  std::string manifest_path, replay_out;
  app.add_option("--manifest", manifest_path, "Replay a run from a manifest file");
  app.add_option("--out", replay_out, "Output path when replaying a manifest");

  std::map<std::string, RunParams> params;
  std::map<std::string, CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "Analytic detector report for one configuration"},
      {"sweep-sensors", "Quality chi versus array size"},
      {"sweep-time", "Quality chi versus observation time"},
      {"validate", "Analytic versus simulated detection probability"},
  };
  for (const auto& [name, help] : commands) {
    params[name] = defaults_for(name);
    RunParams& p = params[name];
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(*sub, p);
    subs[name] = sub;
  }
  {
    RunParams& a = params["analyze"];
    subs["analyze"]->add_option("--gamma1", a.gamma1, "Source amplitude under H1 (instead of --snr)");
    RunParams& s = params["sweep-sensors"];
    subs["sweep-sensors"]->add_option("--sensors-min", s.sensors_min, "Smallest S")->capture_default_str();
    subs["sweep-sensors"]->add_option("--sensors-max", s.sensors_max, "Largest S")->capture_default_str();
    RunParams& t = params["sweep-time"];
    subs["sweep-time"]->add_option("--time-min", t.time_min_ms, "First observation time [ms]")->capture_default_str();
    subs["sweep-time"]->add_option("--time-max", t.time_max_ms, "Last observation time [ms]")->capture_default_str();
    subs["sweep-time"]->add_option("--time-step", t.time_step_ms, "Time step [ms]")->capture_default_str();
    RunParams& v = params["validate"];
    subs["validate"]->add_option("--trials", v.trials, "Monte Carlo trials per SNR point")->capture_default_str();
    subs["validate"]->add_option("--seed", v.seed, "RNG seed")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    RunParams selected;
    if (!manifest_path.empty()) {
      std::ifstream f(manifest_path);
      if (!f) throw std::invalid_argument("cannot open manifest: " + manifest_path);
      selected = params_from_manifest(nlohmann::json::parse(f));
      if (!replay_out.empty()) selected.out = replay_out;
    } else {
      const auto used = app.get_subcommands();
      if (used.empty()) {
        err << app.help();
        return 1;
      }
      selected = params.at(used.front()->get_name());
    }

    const CommandOutput result = dispatch(selected);
    if (!result.report.empty()) out << result.report;
    if (selected.out.empty()) {
      if (result.report.empty()) out << result.csv;
    } else {
      write_file(selected.out, result.csv);
      write_file(selected.out + ".manifest.json", make_manifest(selected).dump(2) + "\n");
      if (selected.gnuplot) write_file(selected.out + ".gp", gnuplot_script(selected));
    }
    return 0;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed manifest: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace onebit::cli
