#include "ottolab/verify.hpp"
#include <algorithm>

namespace ottolab {

std::vector<VerificationReport> run_default_suite(const SuiteOptions& opt) {
    std::vector<VerificationReport> reports;
    auto want = [&](const std::string& label) {
        return opt.only.empty() || opt.only == label;
    };
    auto push = [&](VerificationReport r) { reports.push_back(std::move(r)); };

    // sign-convention anchor first; it validates everything downstream
    if (want("model_residual")) push(check_model_residual(opt.wrong_sign));

    for (IdentityId id : all_identity_ids()) {
        const std::string name = to_string(id);
        if (id == IdentityId::model_identity) {
            for (double m : {1.0, 2.0}) {
                CheckOverrides o;
                o.m = m;
                o.label = m == 1.0 ? name : name + "_m2";
                if (want(o.label)) push(check_identity(id, o));
            }
            continue;
        }
        if (id == IdentityId::langevin_mf3) {
            CheckOverrides o;
            if (want(name)) push(check_identity(id, o));
            CheckOverrides oa;
            oa.alpha_source = "poly:0.3,0.1";
            oa.label = name + "_alpha_poly";
            if (want(oa.label)) push(check_identity(id, oa));
            continue;
        }
        CheckOverrides o;
        if (id == IdentityId::geo_wm) {
            // one coarse level: the canonical residual sits at the rounding floor
            o.refinement_levels = std::min(1, opt.refinement_levels);
        } else if (id == IdentityId::heat_wm || id == IdentityId::heat_cdkm) {
            o.refinement_levels = opt.refinement_levels;
        }
        if (want(name)) push(check_identity(id, o));
    }

    for (InequalityId id : all_inequality_ids()) {
        const std::string name = to_string(id);
        if (want(name)) push(check_inequality(id));
    }

    if (want("euler_hj_equiv")) push(check_euler_hj_equivalence());
    if (want("recover_potential")) push(check_recover_potential());
    if (want("hopf_lax")) push(check_hopf_lax());
    return reports;
}

}  // namespace ottolab
