#include "ottolab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace ottolab {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::string format_double(double x) {
    if (x == 0.0) return "0";  // fold negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_trajectory_csv(const std::string& path, const FlowTrajectory& traj) {
    auto out = open_out(path);
    out << "t,min_rho,mass";
    const bool has_phi = !traj.states.empty() && traj.states.front().phi.has_value();
    const bool has_u = !traj.states.empty() && traj.states.front().u.has_value();
    if (has_phi) out << ",hess_sup";
    if (has_u) out << ",hess_sup,vorticity_L2,vorticity_sup";
    out << "\n";
    for (const auto& st : traj.states) {
        double rmin = st.rho.v[0];
        for (double x : st.rho.v) rmin = std::min(rmin, x);
        out << format_double(st.t) << ',' << format_double(rmin) << ','
            << format_double(integrate_mu(st.rho));
        if (has_phi) out << ',' << format_double(hess_sup_norm(*st.phi));
        if (has_u) {
            ScalarField w = vorticity(*st.u);
            out << ',' << format_double(grad_sup_norm(*st.u)) << ','
                << format_double(l2_mu_norm(w)) << ',' << format_double(sup_norm(w.v));
        }
        out << "\n";
    }
}

void write_fields_dump(const std::string& path, const FlowTrajectory& traj) {
    auto out = open_out(path);
    const auto& g = *traj.geom;
    for (const auto& st : traj.states) {
        out << "# t=" << format_double(st.t) << "\n";
        for (int i = 0; i < g.nodes(); ++i) {
            for (int a = 0; a < g.dim(); ++a) out << format_double(g.coord(a, i)) << ' ';
            out << format_double(st.rho.v[i]);
            if (st.phi) out << ' ' << format_double(st.phi->v[i]);
            if (st.u)
                for (int a = 0; a < g.dim(); ++a) out << ' ' << format_double(st.u->comp[a][i]);
            out << "\n";
        }
    }
}

void write_series_csv(const std::string& path, const EntropySeries& s) {
    auto out = open_out(path);
    const char* preferred[] = {"Ent", "Fisher", "Kin",  "H",   "Hm",  "Wm",
                               "dEnt", "d2Ent",  "dH",  "d2H", "dWm"};
    std::vector<std::string> order;
    std::set<std::string> used;
    for (const char* name : preferred)
        if (s.has(name)) {
            order.push_back(name);
            used.insert(name);
        }
    std::vector<std::string> rhs_cols, rest;
    for (const auto& [name, col] : s.cols) {
        if (used.count(name)) continue;
        (name.rfind("rhs_", 0) == 0 ? rhs_cols : rest).push_back(name);
    }
    for (const auto& n : rhs_cols) order.push_back(n);
    for (const auto& n : rest) order.push_back(n);

    out << "t";
    for (const auto& n : order) out << ',' << n;
    out << "\n";
    for (size_t j = 0; j < s.times.size(); ++j) {
        out << format_double(s.times[j]);
        for (const auto& n : order) out << ',' << format_double(s.at(n)[j]);
        out << "\n";
    }
}

std::string report_json(const VerificationReport& rep) {
    nlohmann::ordered_json j;
    j["id"] = rep.id;
    j["label"] = rep.label;
    j["window"] = {rep.window[0], rep.window[1]};
    j["sup_residual"] = rep.sup_residual;
    j["l2_residual"] = rep.l2_residual;
    j["refinement_ratios"] = rep.refinement_ratios;
    j["refinement_exempt"] = rep.refinement_exempt;
    j["pass"] = rep.pass;
    j["inconclusive"] = rep.inconclusive;
    j["termination"] = rep.termination;
    j["tolerance"] = rep.tolerance;
    nlohmann::ordered_json extras = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.extras) extras[k] = v;
    j["extras"] = extras;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const VerificationReport& rep) {
    auto out = open_out(path);
    out << report_json(rep);
}

void write_report_csv(const std::string& path, const VerificationReport& rep) {
    auto out = open_out(path);
    out << "t,lhs,rhs,residual\n";
    for (const auto& row : rep.rows)
        out << format_double(row[0]) << ',' << format_double(row[1]) << ','
            << format_double(row[2]) << ',' << format_double(row[3]) << "\n";
}

}  // namespace ottolab
