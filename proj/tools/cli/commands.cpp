#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "cli/cli.hpp"
#include "cli/range.hpp"
#include "qimage/qimage.hpp"

namespace qimage::cli {

namespace {

using nlohmann::json;

std::string num(double v) { return io::format_number(v); }

ZeroModeState make_state(const StateOptions& s, double n) {
  if (s.tau > 0.0) return thermal_state(s.tau, n);
  return squeezed_state(s.zeta, n);
}

json state_json(const StateOptions& s) {
  json j = s.tau > 0.0 ? json{{"tau", s.tau}} : json{{"zeta", s.zeta}};
  j["temperature"] = s.temperature;
  return j;
}

BogoliubovModel make_model(double n, double half_length, int pairs, const StateOptions& s,
                           double q = 0.0) {
  return BogoliubovModel(n, half_length, pairs, make_state(s, n),
                         ThermalOccupation::at_temperature(s.temperature), q);
}

using Rows = std::vector<std::vector<std::string>>;

void write_rows(std::ostream& out, const json& meta, const std::vector<std::string>& columns,
                const Rows& rows) {
  io::CsvWriter w(out, meta, columns);
  for (const auto& r : rows) w.row(r);
}

std::vector<std::string> column_names(const char* command) {
  const json s = schema();
  std::vector<std::string> names;
  for (const auto& c : s.at(command).at("columns")) names.push_back(c.at("name"));
  return names;
}

}  // namespace

json schema() {
  auto col = [](const char* name, const char* unit, const char* text) {
    return json{{"name", name}, {"unit", unit}, {"description", text}};
  };
  json s;
  s["fisher-mf"]["columns"] = {
      col("profile", "-", "order parameter family"),
      col("method", "-", "closed, quadrature, pixel or box"),
      col("n", "1/xi", "density (areal for vortex, n0 xi0 for trapped)"),
      col("v_over_c", "-", "soliton velocity over sound speed"),
      col("dx", "xi", "pixel width (pixel and box methods)"),
      col("q", "xi", "soliton position"),
      col("F", "1/xi^2", "Fisher information"),
      col("F_scaled", "-", "F xi^2 (F xi0^2 for trapped)"),
      col("crb_sigma", "xi", "Cramer-Rao bound F^(-1/2)"),
      col("model", "-", "statistical model tag"),
      col("poisson_sum", "1/xi^2", "pure Poisson pixel sum (pixel method)"),
      col("gaussian_correction", "1/xi^2", "Gaussian correction sum (pixel method)")};
  s["fisher-gauss"]["columns"] = {
      col("n", "1/xi", "linear density"),
      col("dx", "xi", "pixel width"),
      col("F", "1/xi^2", "Gaussian Bogoliubov Fisher information"),
      col("F_scaled", "-", "F xi^2"),
      col("crb_sigma", "xi", "Cramer-Rao bound"),
      col("model", "-", "statistical model tag"),
      col("F_snr_ao", "1/xi^2", "slope^2 / noise with the almost-optimal gain"),
      col("F_box_poisson", "1/xi^2", "Poisson pixel sum in the atom-conserving box"),
      col("F_hom_poisson", "1/xi^2", "homogeneous Poisson pixel sum on the same grid"),
      col("F_half_step", "1/xi^2", "F recomputed with half the finite-difference step"),
      col("fd_consistent", "-", "1 if halving the step changed F by at most 1%")};
  s["modes"]["columns"] = {col("j", "-", "mode index"),
                           col("k", "1/xi", "wavenumber"),
                           col("k_over_pi_per_ell", "-", "k in units of pi/ell"),
                           col("energy", "hbar^2/(m xi^2)", "Bogoliubov energy"),
                           col("normalization", "-", "mode normalization M_k"),
                           col("residual", "-", "quantization residual")};
  s["modes-table"]["columns"] = {col("x", "xi", "position"),  col("j", "-", "mode index"),
                                 col("re_u", "-", "Re u_k"),  col("im_u", "-", "Im u_k"),
                                 col("re_v", "-", "Re v_k"),  col("im_v", "-", "Im v_k")};
  s["density"]["columns"] = {col("x", "xi", "position"),
                             col("density", "1/xi", "Bogoliubov mean density"),
                             col("condensate", "1/xi", "|Phi|^2"),
                             col("zero_mode", "1/xi", "zero-mode contribution Z(x)")};
  s["corr"]["columns"] = {col("x", "xi", "first position"), col("y", "xi", "second position"),
                          col("J", "-", "correlation kernel J(x, y)")};
  s["snr"]["keys"] = {
      col("metadata", "-", "run metadata including the timestamp"),
      col("result.fisher", "-", "Fisher report used as reference"),
      col("result.gain", "-", "gain values, scale and ridge"),
      col("result.snr", "-", "slope, noise, information and noise split"),
      col("result.monte_carlo", "-", "Var(q_hat), ratio to 1/F and standard errors")};
  return s;
}

void run_fisher_mf(const FisherMfOptions& o, const Common& c, std::ostream& out) {
  const auto ns = parse_list(o.n_xi);
  const auto vs = parse_list(o.v_over_c);
  const auto dxs = parse_list(o.dx);
  const auto qs = parse_list(o.q);
  std::string method = o.method;
  if (method == "auto") {
    method = (o.profile == "dark" || o.profile == "trapped") ? "closed" : "quadrature";
  }
  const bool pixel = method == "pixel" || method == "box";
  if (method != "closed" && method != "quadrature" && !pixel) {
    throw InvalidParameter("unknown method '" + method + "'");
  }
  if (o.profile != "dark" && o.profile != "quintic" && o.profile != "vortex" &&
      o.profile != "trapped") {
    throw InvalidParameter("unknown profile '" + o.profile + "'");
  }
  if (pixel && o.profile != "dark") throw InvalidParameter("pixel methods need the dark profile");
  if (method == "closed" && o.profile != "dark" && o.profile != "trapped") {
    throw InvalidParameter("no closed form for profile '" + o.profile + "'");
  }

  struct Point {
    double n, v, dx, q;
  };
  std::vector<Point> points;
  for (double n : ns)
    for (double v : vs)
      for (double dx : (pixel ? dxs : std::vector<double>{std::nan("")}))
        for (double q : qs) points.push_back({n, v, dx, q});

  Rows rows(points.size());
  parallel_for(points.size(), c.jobs, [&](std::size_t i) {
    const Point p = points[i];
    FisherReport r;
    std::optional<double> first, second;
    if (o.profile == "dark") {
      const DarkSolitonParams d{p.n, p.v, p.q};
      if (method == "closed") {
        r = fisher_dark_soliton_closed(d);
      } else if (method == "quadrature") {
        r = fisher_poisson_continuum(d, o.quad_tol);
      } else if (method == "pixel") {
        r = fisher_pixelized_poisson(d, PixelGrid::fitting(p.dx, o.half_length), p.q);
        first = r.components.at("poisson_sum");
        second = r.components.at("gaussian_correction");
      } else {
        r = fisher_box(d, PixelGrid::fitting(p.dx, o.box_half_length), o.box_half_length);
      }
    } else if (o.profile == "quintic") {
      r = fisher_poisson_continuum(QuinticSolitonParams{p.n, p.v, p.q}, o.quad_tol);
    } else if (o.profile == "vortex") {
      r = fisher_poisson_continuum(VortexParams{p.n, o.axial_length, p.q, o.winding}, o.quad_tol);
    } else {
      const TrappedSolitonParams t{p.n / o.xi0, o.xi0, o.r_tf, p.q};
      r = method == "closed" ? fisher_trapped(t) : fisher_trapped_quadrature(t, o.quad_tol);
    }
    rows[i] = {o.profile, method,         num(p.n),          num(p.v),
               pixel ? num(p.dx) : "", num(p.q),     num(r.F),          num(r.F_scaled),
               num(r.crb_sigma), to_string(r.model), first ? num(*first) : "",
               second ? num(*second) : ""};
  });
  const json params = {{"profile", o.profile},         {"method", method},
                       {"n_xi", o.n_xi},               {"v_over_c", o.v_over_c},
                       {"dx", o.dx},                   {"q", o.q},
                       {"half_length", o.half_length}, {"box_half_length", o.box_half_length},
                       {"quad_tol", o.quad_tol},       {"axial_length", o.axial_length},
                       {"winding", o.winding},         {"xi0", o.xi0},
                       {"r_tf", o.r_tf}};
  write_rows(out, io::metadata("fisher-mf", params), column_names("fisher-mf"), rows);
}

void run_fisher_gauss(const FisherGaussOptions& o, const Common& c, std::ostream& out) {
  const auto ns = parse_list(o.n_xi);
  const auto dxs = parse_list(o.dx);
  struct Point {
    double n, dx;
  };
  std::vector<Point> points;
  for (double n : ns)
    for (double dx : dxs) points.push_back({n, dx});
  Rows rows(points.size());
  parallel_for(points.size(), c.jobs, [&](std::size_t i) {
    const Point p = points[i];
    const BogoliubovModel model = make_model(p.n, o.half_length, o.pairs, o.state);
    const PixelGrid grid = PixelGrid::fitting(p.dx, o.half_length);
    StatsOptions so;
    so.gauss_order = o.gauss_order;
    const StatsFamily family = [&](double q) { return build_image_statistics(model, grid, q, so); };
    GaussianFisherOptions fo;
    fo.fd_step = o.fd_step;
    const FisherReport r = gaussian_fisher(family, o.q, fo);
    const ImageStatistics st = family(o.q);
    const Eigen::VectorXd drho = mean_derivative(family, o.q, o.fd_step);
    const SnrResult snr = snr_and_split(st, drho, almost_optimal_gain(st, drho));
    const DarkSolitonParams d{p.n, 0.0, o.q};
    const double box = fisher_box(d, grid, o.half_length).F;
    const double hom = fisher_pixelized_poisson(d, grid, o.q).components.at("poisson_sum");
    const double half = r.components.at("F_half_step");
    const bool consistent = std::abs(half - r.F) <= 0.01 * r.F;
    rows[i] = {num(p.n),       num(p.dx),         num(r.F),  num(r.F_scaled),
               num(r.crb_sigma), to_string(r.model), num(snr.information), num(box),
               num(hom),       num(half),         consistent ? "1" : "0"};
  });
  const json params = {{"n_xi", o.n_xi},       {"dx", o.dx},
                       {"state", state_json(o.state)}, {"half_length", o.half_length},
                       {"pairs", o.pairs},     {"fd_step", o.fd_step},
                       {"gauss_order", o.gauss_order}, {"q", o.q}};
  write_rows(out, io::metadata("fisher-gauss", params), column_names("fisher-gauss"), rows);
}

void run_modes(const ModesOptions& o, const Common&, std::ostream& out) {
  const PhononModeSet modes = solve_wavenumbers(o.half_length, o.pairs, o.q);
  const json params = {{"half_length", o.half_length}, {"pairs", o.pairs}, {"q", o.q},
                       {"table", o.table},             {"x", o.x},         {"table_pairs", o.table_pairs}};
  Rows rows;
  if (!o.table) {
    const double unit = std::numbers::pi / o.half_length;
    for (int j = 1; j <= o.pairs; ++j) {
      rows.push_back({std::to_string(j), num(modes.wavenumber(j)), num(modes.wavenumber(j) / unit),
                      num(modes.energy(j)), num(modes.normalization(j)),
                      num(modes.quantization_residual(j))});
    }
    write_rows(out, io::metadata("modes", params), column_names("modes"), rows);
    return;
  }
  if (o.table_pairs < 1 || o.table_pairs > o.pairs) {
    throw InvalidParameter("table pairs must lie between 1 and the number of pairs");
  }
  for (double x : parse_list(o.x)) {
    for (int j = 1; j <= o.table_pairs; ++j) {
      const ModeValue m = modes.eval(j, x);
      rows.push_back({num(x), std::to_string(j), num(m.u.real()), num(m.u.imag()),
                      num(m.v.real()), num(m.v.imag())});
    }
  }
  write_rows(out, io::metadata("modes", params), column_names("modes-table"), rows);
}

void run_density(const FieldOptions& o, const Common& c, std::ostream& out) {
  const BogoliubovModel model = make_model(o.n_xi, o.half_length, o.pairs, o.state);
  const auto xs = parse_list(o.x);
  Rows rows(xs.size());
  parallel_for(xs.size(), c.jobs, [&](std::size_t i) {
    const double x = xs[i];
    const double phi = std::sqrt(o.n_xi) * std::tanh(model.family().kappa() * x);
    rows[i] = {num(x), num(mean_density_bogoliubov(model, x)), num(phi * phi),
               num(zero_mode_density(model, x))};
  });
  const json params = {{"n_xi", o.n_xi},   {"half_length", o.half_length}, {"pairs", o.pairs},
                       {"state", state_json(o.state)}, {"x", o.x}};
  write_rows(out, io::metadata("density", params), column_names("density"), rows);
}

void run_corr(const FieldOptions& o, const Common& c, std::ostream& out) {
  if (o.state.temperature != 0.0) throw InvalidParameter("J(x, y) is defined at zero temperature");
  const BogoliubovModel model = make_model(o.n_xi, o.half_length, o.pairs, o.state);
  const auto xs = parse_list(o.x);
  const auto ys = o.y.empty() ? xs : parse_list(o.y);
  Rows rows(xs.size() * ys.size());
  parallel_for(xs.size(), c.jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      rows[i * ys.size() + j] = {num(xs[i]), num(ys[j]), num(correlation_J(model, xs[i], ys[j]))};
    }
  });
  const json params = {{"n_xi", o.n_xi},   {"half_length", o.half_length}, {"pairs", o.pairs},
                       {"state", state_json(o.state)}, {"x", o.x},  {"y", o.y.empty() ? o.x : o.y}};
  write_rows(out, io::metadata("corr", params), column_names("corr"), rows);
}

void run_snr(const SnrOptions& o, const Common& c, std::ostream& out) {
  if (o.model != "poisson" && o.model != "bogoliubov") {
    throw InvalidParameter("unknown model '" + o.model + "'");
  }
  const bool poisson = o.model == "poisson";
  std::string gain_kind = o.gain == "auto" ? (poisson ? "opt" : "ao") : o.gain;
  if (gain_kind != "opt" && gain_kind != "ao") throw InvalidParameter("gain must be opt or ao");
  const PixelGrid grid = PixelGrid::fitting(o.dx, o.half_length);
  const DarkSolitonParams d{o.n_xi, 0.0, 0.0};
  std::optional<BogoliubovModel> model;
  if (!poisson) model.emplace(make_model(o.n_xi, o.half_length, o.pairs, o.state));
  const StatsFamily family = [&](double q) {
    return poisson ? build_meanfield_statistics(d, grid, q) : build_image_statistics(*model, grid, q);
  };
  const ImageStatistics st = family(0.0);
  const Eigen::VectorXd drho = poisson ? dark_soliton_pixel_means(d, grid, 0.0).drho_dq
                                       : mean_derivative(family, 0.0, o.fd_step);
  FisherReport F;
  if (poisson) {
    F = poisson_part(fisher_pixelized_poisson(d, grid, 0.0));
  } else {
    GaussianFisherOptions fo;
    fo.fd_step = o.fd_step;
    F = gaussian_fisher(family, 0.0, fo);
  }
  const GainFunction gain =
      gain_kind == "opt" ? optimal_gain_meanfield(d, grid) : almost_optimal_gain(st, drho);
  const SnrResult snr = snr_and_split(st, drho, gain);
  const MonteCarloResult mc = run_crb_experiment(st, drho, gain, F.F, o.samples, c.seed, c.jobs);
  const json params = {{"model", o.model},   {"gain", gain_kind},          {"n_xi", o.n_xi},
                       {"dx", o.dx},         {"state", state_json(o.state)}, {"half_length", o.half_length},
                       {"pairs", o.pairs},   {"fd_step", o.fd_step},       {"samples", o.samples},
                       {"seed", c.seed}};
  json doc;
  doc["metadata"] = io::metadata("snr", params);
  doc["result"] = {{"fisher", F}, {"gain", gain}, {"snr", snr}, {"monte_carlo", mc}};
  out << doc.dump(2) << '\n';
}

}  // namespace qimage::cli
