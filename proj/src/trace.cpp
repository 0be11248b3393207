#include "dualdescent/trace.hpp"

#include <cstdio>
#include <fstream>

#include "dualdescent/errors.hpp"

namespace dualdescent {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> Trace::columns(TraceSchema schema) {
  std::vector<std::string> cols = {"k",       "potential",      "lip",       "h_norm",
                                   "mu_norm", "max_block_disp", "resid_max", "feas"};
  if (schema == TraceSchema::UddAffine) {
    cols.push_back("L_aug");
  } else if (schema == TraceSchema::UddNonlinear) {
    cols.push_back("L_aug");
    cols.push_back("inner_iters");
    cols.push_back("y_max");
    cols.push_back("compl_max");
    cols.push_back("licq_sigma_min");
  }
  return cols;
}

std::string Trace::to_csv() const {
  std::string out;
  const auto cols = columns(schema);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out += ',';
    out += cols[c];
  }
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    out += format_double(r.potential);
    out += ',';
    out += format_double(r.lip);
    out += ',';
    out += format_double(r.h_norm);
    out += ',';
    out += format_double(r.mu_norm);
    out += ',';
    out += format_double(r.max_block_disp);
    out += ',';
    out += format_double(r.resid_max);
    out += ',';
    out += format_double(r.feas);
    if (schema == TraceSchema::UddAffine) {
      out += ',';
      out += format_double(r.l_aug);
    } else if (schema == TraceSchema::UddNonlinear) {
      out += ',';
      out += format_double(r.l_aug);
      out += ',';
      out += std::to_string(r.inner_iters);
      out += ',';
      out += format_double(r.y_max);
      out += ',';
      out += format_double(r.compl_max);
      out += ',';
      out += format_double(r.licq_sigma_min);
    }
    out += '\n';
  }
  return out;
}

void Trace::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open trace file for writing: " + path);
  f << to_csv();
}

}  // namespace dualdescent
