#include "sfmb/record_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace sfmb {

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_record_csv(std::ostream& out, const RunRecord& r) {
  out << "t_ps,re_omega_fwd,im_omega_fwd,re_omega_bwd,im_omega_bwd,jp_out,inversion_z0,rho00_z0\n";
  for (std::size_t i = 0; i < r.time.size(); ++i) {
    const double row[] = {r.time[i],
                          r.omega_fwd_out[i].real(),
                          r.omega_fwd_out[i].imag(),
                          r.omega_bwd_out[i].real(),
                          r.omega_bwd_out[i].imag(),
                          r.jp_out[i],
                          r.inversion_in[i],
                          r.rho00_in[i]};
    for (std::size_t j = 0; j < std::size(row); ++j) {
      if (j) out << ',';
      put(out, row[j]);
    }
    out << '\n';
  }
}

void write_record_csv(const std::filesystem::path& path, const RunRecord& record) {
  auto out = open(path);
  write_record_csv(out, record);
}

void write_snapshots_csv(const std::filesystem::path& path, const InversionSnapshots& s,
                         double dz) {
  auto out = open(path);
  out << "t_ps";
  for (std::size_t k = 0; k < s.nodes; ++k) {
    out << ",z";
    put(out, static_cast<double>(k) * dz);
  }
  out << '\n';
  for (std::size_t row = 0; row < s.times.size(); ++row) {
    put(out, s.times[row]);
    for (std::size_t k = 0; k < s.nodes; ++k) {
      out << ',';
      put(out, s.at(row, k));
    }
    out << '\n';
  }
}

}  // namespace sfmb
