#include "cli/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qimage/errors.hpp"

namespace qimage::cli {

namespace {

using nlohmann::json;

void error_record(std::ostream& err, const std::string& code, const std::string& message,
                  const std::string& command) {
  json rec = {{"error", code}, {"message", message}};
  if (!command.empty()) rec["command"] = command;
  err << rec.dump() << '\n';
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Flat key=value lines become --key=value arguments.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw InvalidParameter("config line " + std::to_string(lineno) + " is not key=value");
    }
    args.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
  }
  return args;
}

void add_state(CLI::App* sub, StateOptions& s) {
  auto* z = sub->add_option("--zeta", s.zeta, "squeezing parameter of the displacement mode");
  auto* t = sub->add_option("--tau", s.tau, "thermal parameter of the displacement mode (1/xi)");
  z->excludes(t);
  sub->add_option("--temperature", s.temperature, "phonon temperature (energy units)");
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  Common common;
  FisherMfOptions mf;
  FisherGaussOptions fg;
  ModesOptions mo;
  FieldOptions de, co;
  SnrOptions sn;
  std::string config;
  bool want_schema = false;

  CLI::App app{"Fisher information and Cramer-Rao bounds for soliton and vortex images", "qimage"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.fallthrough();
  app.add_option("--output,-o", common.output, "output file (default: standard output)");
  app.add_option("--jobs,-j", common.jobs, "worker threads for sweeps")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", common.seed, "random seed");
  app.add_option("--config", config, "flat key=value file; flags override it");
  app.add_flag("--schema", want_schema, "print the output column documentation and exit");

  auto* c_mf = app.add_subcommand("fisher-mf", "mean-field Poisson Fisher information sweeps");
  c_mf->add_option("--profile", mf.profile, "dark | quintic | vortex | trapped");
  c_mf->add_option("--method", mf.method, "auto | closed | quadrature | pixel | box");
  c_mf->add_option("--n-xi", mf.n_xi, "density n xi (list or range)");
  c_mf->add_option("--v-over-c", mf.v_over_c, "velocity fraction (list or range)");
  c_mf->add_option("--dx", mf.dx, "pixel width (list or range)");
  c_mf->add_option("--q", mf.q, "soliton position (list or range)");
  c_mf->add_option("--half-length", mf.half_length, "pixel window half-length");
  c_mf->add_option("--box-half-length", mf.box_half_length, "box half-length");
  c_mf->add_option("--quad-tol", mf.quad_tol, "relative quadrature tolerance");
  c_mf->add_option("--axial-length", mf.axial_length, "vortex axial length");
  c_mf->add_option("--winding", mf.winding, "vortex winding number");
  c_mf->add_option("--xi0", mf.xi0, "trapped local healing length");
  c_mf->add_option("--r-tf", mf.r_tf, "Thomas-Fermi radius");

  auto* c_fg = app.add_subcommand("fisher-gauss", "Bogoliubov Gaussian Fisher information");
  c_fg->add_option("--n-xi", fg.n_xi, "density n xi (list or range)");
  c_fg->add_option("--dx", fg.dx, "pixel width (list or range)");
  add_state(c_fg, fg.state);
  c_fg->add_option("--half-length", fg.half_length, "box half-length");
  c_fg->add_option("--pairs", fg.pairs, "phonon pairs");
  c_fg->add_option("--fd-step", fg.fd_step, "finite-difference step");
  c_fg->add_option("--gauss-order", fg.gauss_order, "Gauss-Legendre order per pixel");
  c_fg->add_option("--q", fg.q, "soliton position");

  auto* c_mo = app.add_subcommand("modes", "phonon spectrum and mode-function tables");
  c_mo->add_option("--half-length", mo.half_length, "box half-length");
  c_mo->add_option("--pairs", mo.pairs, "phonon pairs");
  c_mo->add_option("--q", mo.q, "soliton position");
  c_mo->add_flag("--table", mo.table, "write u_k, v_k on a grid instead of the spectrum");
  c_mo->add_option("--x", mo.x, "table positions (list or range)");
  c_mo->add_option("--table-pairs", mo.table_pairs, "modes j = 1 ... N in the table");

  auto add_field = [&](CLI::App* sub, FieldOptions& f, bool with_y) {
    sub->add_option("--n-xi", f.n_xi, "density n xi");
    sub->add_option("--half-length", f.half_length, "box half-length");
    sub->add_option("--pairs", f.pairs, "phonon pairs");
    add_state(sub, f.state);
    sub->add_option("--x", f.x, "positions (list or range)");
    if (with_y) sub->add_option("--y", f.y, "second positions (default: same as --x)");
  };
  auto* c_de = app.add_subcommand("density", "Bogoliubov mean density profile");
  add_field(c_de, de, false);
  auto* c_co = app.add_subcommand("corr", "correlation kernel J(x, y) on a grid");
  co.x = "-10:10:0.25";
  add_field(c_co, co, true);

  auto* c_sn = app.add_subcommand("snr", "gain construction, noise split and Monte Carlo check");
  c_sn->add_option("--model", sn.model, "poisson | bogoliubov");
  c_sn->add_option("--gain", sn.gain, "auto | opt | ao");
  c_sn->add_option("--n-xi", sn.n_xi, "density n xi");
  c_sn->add_option("--dx", sn.dx, "pixel width");
  add_state(c_sn, sn.state);
  c_sn->add_option("--half-length", sn.half_length, "box half-length");
  c_sn->add_option("--pairs", sn.pairs, "phonon pairs");
  c_sn->add_option("--fd-step", sn.fd_step, "finite-difference step");
  c_sn->add_option("--samples", sn.samples, "Monte Carlo sample count");

  std::string command;
  try {
    // Config values are spliced in right after the subcommand so that
    // explicit flags, which come later, take precedence.
    std::vector<std::string> args = args_in;
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (path.empty()) continue;
      const auto extra = read_config(path);
      std::size_t at = args.size();
      for (std::size_t k = 0; k < args.size(); ++k) {
        if (app.get_subcommand_no_throw(args[k]) != nullptr) {
          at = k + 1;
          break;
        }
      }
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
      break;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    error_record(err, "usage", e.what(), "");
    return 2;
  } catch (const Error& e) {
    error_record(err, e.code(), e.what(), "");
    return 2;
  }

  if (want_schema) {
    out << schema().dump(2) << '\n';
    return 0;
  }
  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    error_record(err, "usage", "a subcommand is required (see --help)", "");
    return 2;
  }
  command = subs.front()->get_name();

  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!common.output.empty()) {
      file.open(common.output, std::ios::binary);
      if (!file) throw Error("io_error", "cannot open output file '" + common.output + "'");
      sink = &file;
    }
    std::ostringstream buffer;
    buffer.imbue(std::locale::classic());
    if (command == "fisher-mf") run_fisher_mf(mf, common, buffer);
    else if (command == "fisher-gauss") run_fisher_gauss(fg, common, buffer);
    else if (command == "modes") run_modes(mo, common, buffer);
    else if (command == "density") run_density(de, common, buffer);
    else if (command == "corr") run_corr(co, common, buffer);
    else run_snr(sn, common, buffer);
    *sink << buffer.str();
    sink->flush();
    if (!*sink) throw Error("io_error", "writing the output failed");
  } catch (const Error& e) {
    error_record(err, e.code(), e.what(), command);
    return 1;
  } catch (const std::exception& e) {
    error_record(err, "internal", e.what(), command);
    return 1;
  }
  return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace qimage::cli
