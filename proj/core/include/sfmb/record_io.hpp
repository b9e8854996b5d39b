#pragma once

#include <filesystem>
#include <iosfwd>

#include "sfmb/solver.hpp"

namespace sfmb {

/// Columns: t_ps, re_omega_fwd, im_omega_fwd, re_omega_bwd, im_omega_bwd, jp_out,
/// inversion_z0, rho00_z0. Values are written with 17 significant digits.
void write_record_csv(std::ostream& out, const RunRecord& record);
void write_record_csv(const std::filesystem::path& path, const RunRecord& record);

/// One row per snapshot: t_ps followed by rho22 - rho11 at every node.
void write_snapshots_csv(const std::filesystem::path& path, const InversionSnapshots& snapshots,
                         double dz);

}  // namespace sfmb
