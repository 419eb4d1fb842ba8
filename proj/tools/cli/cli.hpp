#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qimage::cli {

// Entry point shared by the executable and the tests. Returns the process
// exit status; data goes to `out` unless --output is given, error records
// go to `err` as single JSON lines.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Column documentation for every command.
nlohmann::json schema();

struct Common {
  std::string output;
  unsigned jobs = 1;
  std::uint64_t seed = 20080101;
};

struct StateOptions {
  double zeta = 1.0;
  double tau = 0.0;  // > 0 selects the thermal zero-mode state
  double temperature = 0.0;
};

struct FisherMfOptions {
  std::string profile = "dark";
  std::string method = "auto";
  std::string n_xi = "100";
  std::string v_over_c = "0";
  std::string dx = "0.7";
  std::string q = "0";
  double half_length = 50.0;
  double box_half_length = 10.0;
  double quad_tol = 1e-8;
  double axial_length = 1.0;
  int winding = 1;
  double xi0 = 1.0;
  double r_tf = 100.0;
};

struct FisherGaussOptions {
  std::string n_xi = "100";
  std::string dx = "0.7";
  StateOptions state;
  double half_length = 10.0;
  int pairs = 70;
  double fd_step = 1e-3;
  int gauss_order = 8;
  double q = 0.0;
};

struct ModesOptions {
  double half_length = 10.0;
  int pairs = 70;
  double q = 0.0;
  bool table = false;
  std::string x = "-10:10:0.1";
  int table_pairs = 3;
};

struct FieldOptions {
  double n_xi = 100.0;
  double half_length = 10.0;
  int pairs = 70;
  StateOptions state;
  std::string x = "-10:10:0.05";
  std::string y;
};

struct SnrOptions {
  std::string model = "bogoliubov";
  std::string gain = "auto";
  double n_xi = 100.0;
  double dx = 0.7;
  StateOptions state;
  double half_length = 10.0;
  int pairs = 70;
  double fd_step = 1e-3;
  std::size_t samples = 100000;
};

void run_fisher_mf(const FisherMfOptions& o, const Common& c, std::ostream& out);
void run_fisher_gauss(const FisherGaussOptions& o, const Common& c, std::ostream& out);
void run_modes(const ModesOptions& o, const Common& c, std::ostream& out);
void run_density(const FieldOptions& o, const Common& c, std::ostream& out);
void run_corr(const FieldOptions& o, const Common& c, std::ostream& out);
void run_snr(const SnrOptions& o, const Common& c, std::ostream& out);

}  // namespace qimage::cli
