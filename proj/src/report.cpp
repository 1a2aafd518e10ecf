#include "vpgmres/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vpgmres {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Breakdown: return "breakdown";
    case SolveStatus::MaxIterations: return "max-iterations";
    default: return "numerical-failure";
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, p);
}

std::string report_csv_text(const SolveReport& report) {
  std::ostringstream out;
  for (const std::string& line : report.provenance) out << "# " << line << "\n";
  out << "# status: " << to_string(report.status) << "\n";
  out << "j,rel_resid_recurred,rel_resid_true,F_norm,eta_j,eps_j,dot_fmt,"
         "mv_fmt\n";
  for (const IterationRow& r : report.rows) {
    out << r.j << ',' << format_double(r.rel_resid_recurred) << ','
        << format_double(r.rel_resid_true) << ',' << format_double(r.f_norm)
        << ',' << format_double(r.eta_j) << ',' << format_double(r.eps_j)
        << ',' << label_of(r.dot_fmt) << ',' << label_of(r.mv_fmt) << "\n";
  }
  return out.str();
}

void write_report_csv(const SolveReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
  out << report_csv_text(report);
  if (!out) throw std::runtime_error("write_report_csv: write failed");
}

void write_diagnostics_csv(const SolveReport& report,
                           const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("write_diagnostics_csv: cannot open " + path);
  out << "quantity,value\n";
  out << "status," << to_string(report.status) << "\n";
  for (const auto& [key, value] : report.diagnostics)
    out << key << ',' << value << "\n";
  if (!out) throw std::runtime_error("write_diagnostics_csv: write failed");
}

}  // namespace vpgmres
