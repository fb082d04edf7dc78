#include "psel/json_out.hpp"

namespace psel {

nlohmann::json selection_to_json(const SelectionResult& res) {
  nlohmann::json j;
  j["indices"] = res.indices;
  j["scores"] = res.scores;
  j["requested"] = res.requested;
  j["achieved"] = res.achieved();
  j["stopped_early"] = res.stopped_early;
  j["reason"] = res.reason;
  if (res.kernel) {
    const KernelSpec& spec = *res.kernel;
    nlohmann::json k;
    k["family"] = to_string(spec.family);
    if (spec.family == KernelFamily::Rbf)
      k["rbf_sigma"] = spec.rbf_sigma;
    else
      k["rbf_sigma"] = nullptr;
    k["cosine_normalize"] = spec.cosine_normalize;
    k["center_columns"] = spec.center_columns;
    j["kernel"] = k;
  } else {
    j["kernel"] = nullptr;
  }
  j["timings_ms"] = {{"k_yx", res.timings.k_yx_ms},
                     {"k_yy", res.timings.k_yy_ms},
                     {"eig", res.timings.eig_ms},
                     {"loop", res.timings.loop_ms}};
  return j;
}

}  // namespace psel
