#include "qmcdens/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qmcdens {

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

}  // namespace

void write_surface_csv(const IvSurface& surface, const std::string& path) {
  std::ostringstream os;
  os << "sampler,s,log2n,log2h,iv,mise,isb,reps\n";
  char buf[256];
  for (const auto& c : surface.cells) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.10g,%.10g,%.10e,%.10e,%.10e,%d\n",
                  sampler_name(surface.sampler), surface.s,
                  std::log2(static_cast<double>(c.n)), std::log2(c.h), c.iv,
                  c.mise, c.isb, c.reps);
    os << buf;
  }
  write_text(path, os.str());
}

std::string fit_json_string(const FitReport& r) {
  nlohmann::ordered_json j;
  j["model"] = r.model_name;
  j["sampler"] = r.sampler;
  j["s"] = r.s;
  j["ell0"] = r.ell0;
  j["C"] = r.fit.C;
  j["beta"] = r.fit.beta;
  j["delta"] = r.fit.delta;
  j["R2"] = r.fit.R2;
  j["B"] = r.fit.B;
  j["kappa_star"] = r.opt.kappa_star;
  j["gamma_star"] = r.opt.gamma_star;
  j["K_star"] = r.opt.K_star;
  j["nu_star"] = r.opt.nu_star;
  j["ell_star"] = r.opt.ell_star;
  if (r.second) {
    j["K_tilde"] = r.second->K_tilde;
    j["nu_tilde"] = r.second->nu_tilde;
    j["nu_tilde_source"] = r.second->from_iv ? "iv" : "mise";
    char label[16];
    std::snprintf(label, sizeof label, "e%d", r.second->log2_n_max);
    j["e_max_label"] = label;
    j["e_max"] = r.second->e_max;
    j["e19"] = r.second->log2_n_max == 19 ? r.second->e_max
                                          : r.second->e19_extrapolated;
    j["e19_extrapolated"] = r.second->log2_n_max != 19;
  }
  return j.dump(2) + "\n";
}

void write_fit_json(const FitReport& report, const std::string& path) {
  write_text(path, fit_json_string(report));
}

std::string fit_summary_table(const FitReport& r) {
  std::ostringstream os;
  char buf[128];
  auto row = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "  %-8s %10.4g\n", k, v);
    os << buf;
  };
  os << r.model_name << " s=" << r.s << " sampler=" << r.sampler
     << " (ell0=" << r.ell0 << ")\n";
  row("C", r.fit.C);
  row("beta", r.fit.beta);
  row("delta", r.fit.delta);
  row("R2", r.fit.R2);
  row("B", r.fit.B);
  row("kappa*", r.opt.kappa_star);
  row("gamma*", r.opt.gamma_star);
  row("ell*", r.opt.ell_star);
  row("K*", r.opt.K_star);
  row("nu*", r.opt.nu_star);
  if (r.second) {
    row("nu~", r.second->nu_tilde);
    std::snprintf(buf, sizeof buf, "  e%-7d %10.4g%s\n", r.second->log2_n_max,
                  r.second->e_max,
                  r.second->from_iv ? "  (IV-based; no exact density)" : "");
    os << buf;
    if (r.second->log2_n_max != 19)
      row("e19~", r.second->e19_extrapolated);  // extrapolated from K n^-nu
  }
  return os.str();
}

void write_density_csv(const std::vector<double>& xs,
                       const std::vector<double>& values,
                       const std::string& path) {
  std::ostringstream os;
  os << "x,density\n";
  char buf[128];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10e\n", xs[i], values[i]);
    os << buf;
  }
  write_text(path, os.str());
}

}  // namespace qmcdens
