#ifndef OTTOLAB_IO_HPP
#define OTTOLAB_IO_HPP

#include <string>

#include "ottolab/flows.hpp"
#include "ottolab/series.hpp"
#include "ottolab/verify.hpp"

namespace ottolab {

/** Round-trip-exact decimal formatting shared by every writer. */
std::string format_double(double x);

/** Diagnostics per snapshot: t, min_rho, mass, then kind-specific columns. */
void write_trajectory_csv(const std::string& path, const FlowTrajectory& traj);

/** One line per node per snapshot: coordinates, rho, phi or u components. */
void write_fields_dump(const std::string& path, const FlowTrajectory& traj);

/** Fixed column order (t, Ent, Fisher, Kin, H, Hm, Wm, dEnt, d2Ent, dH, d2H,
 * dWm) followed by rhs_* and any remaining columns lexicographically. */
void write_series_csv(const std::string& path, const EntropySeries& s);

std::string report_json(const VerificationReport& rep);
void write_report_json(const std::string& path, const VerificationReport& rep);
void write_report_csv(const std::string& path, const VerificationReport& rep);

}  // namespace ottolab

#endif
