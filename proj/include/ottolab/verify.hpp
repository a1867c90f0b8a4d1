#ifndef OTTOLAB_VERIFY_HPP
#define OTTOLAB_VERIFY_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ottolab/entropy.hpp"
#include "ottolab/flows.hpp"

namespace ottolab {

enum class IdentityId {
    geo_wm,
    heat_wm,
    heat_cdkm,
    geo_dissipation,
    langevin_mf3,
    hamiltonian_2nd,
    hamiltonian_1st,
    w_comparison,
    model_identity,
    fd_langevin,
    fd_vh,
    fd_w,
    w_exp,
};

enum class InequalityId {
    geo_monotone,
    heat_monotone,
    cs_bound,
    eks_geo,
    eks_grad,
    eks_langevin,
    vorticity_decay,
    closedness,
    whc_monotone,
};

std::vector<IdentityId> all_identity_ids();
std::vector<InequalityId> all_inequality_ids();
const char* to_string(IdentityId id);
const char* to_string(InequalityId id);
std::optional<IdentityId> identity_from_string(const std::string& s);
std::optional<InequalityId> inequality_from_string(const std::string& s);

/** Optional config knobs; absent fields use the id's canonical config. */
struct CheckOverrides {
    std::optional<double> tolerance;
    std::optional<std::array<double, 2>> window;
    std::optional<double> m;
    std::optional<double> c;
    std::optional<std::string> alpha_source;  // "ref_ode" or "poly:a0,a1"
    int refinement_levels = 0;                // identities with a PDE flow only
    int level = 0;                            // internal: grid x2^level, dt/2^level
    bool wrong_sign = false;                  // debug: flip the transport divergence sign
    std::string label;                        // report label override
};

struct VerificationReport {
    std::string id;
    std::string label;
    std::array<double, 2> window{0.0, 0.0};
    double sup_residual = 0.0;
    double l2_residual = 0.0;
    std::vector<double> refinement_ratios;
    bool refinement_exempt = false;
    bool pass = false;
    bool inconclusive = false;
    std::string termination = "completed";
    double tolerance = 0.0;
    std::vector<std::array<double, 4>> rows;  // t, lhs, rhs, residual (or slack)
    std::map<std::string, double> extras;     // deterministic ordering for emission
    std::string note;
};

/** LHS (finite differences) vs RHS (quadrature) for one flow identity.
 * pass iff sup relative residual <= tolerance and, when a refinement study
 * ran, every ratio >= 3. */
VerificationReport check_identity(IdentityId id, const CheckOverrides& o = {});

/** min over the window of (LHS - RHS) >= -slack. */
VerificationReport check_inequality(InequalityId id, const CheckOverrides& o = {});

/** Residual ratios across `levels` refinements (grid x2, dt/2 per level). */
std::vector<double> refinement_study(IdentityId id, int levels = 2, const CheckOverrides& o = {});

/** Extra anchor checks that are not identity/inequality ids but are mandatory in the suite. */
VerificationReport check_model_residual(bool wrong_sign = false);
VerificationReport check_euler_hj_equivalence();
VerificationReport check_recover_potential();
VerificationReport check_hopf_lax();

struct SuiteOptions {
    std::string only;        // run a single check by name when nonempty
    bool wrong_sign = false; // propagate the debug flag into model_residual
    int refinement_levels = 2;
};

/** The canonical suite: every identity and inequality id plus the anchor
 * checks, each with its canonical config. */
std::vector<VerificationReport> run_default_suite(const SuiteOptions& opt = {});

}  // namespace ottolab

#endif
