#ifndef OTTOLAB_COMMANDS_HPP
#define OTTOLAB_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace ottolab {

struct CommonFlags {
    std::string out_dir;  // empty: simulate uses the config's output_dir, verify uses "out"
    bool strict = false;
    bool dump_fields = false;
    bool gnuplot = false;
    std::optional<std::uint64_t> seed;
    bool wrong_sign = false;
};

/** Run the configured flow; writes trajectory.csv and entropy.csv (and
 * fields.txt when requested). Exit 0; 1 on truncation under --strict;
 * 2 on schema errors; 3 on numeric failure. */
int cmd_simulate(const std::string& config_path, const CommonFlags& flags, std::ostream& log);

/** Run checks from a config file or a named suite; writes one JSON and one CSV
 * per check plus a summary table. Exit 0 iff no check failed. */
int cmd_verify(const std::string& config_path, const std::string& suite, const std::string& only,
               const CommonFlags& flags, std::ostream& log);

/** Sample the reference-model ODE; writes the reference CSV.
 * c_text is a decimal number, "0", or "inf". */
int cmd_reference(const std::string& c_text, int m, double u0, double up0, double beta0,
                  double t_end, double dt, const std::string& out_path, std::ostream& log);

}  // namespace ottolab

#endif
