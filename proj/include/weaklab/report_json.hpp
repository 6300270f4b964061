#pragma once

#include <nlohmann/json.hpp>

#include "weaklab/ap_constants.hpp"
#include "weaklab/czd.hpp"
#include "weaklab/experiments.hpp"
#include "weaklab/sawyer_cubes.hpp"
#include "weaklab/weak_norms.hpp"

namespace weaklab::report {

using Json = nlohmann::ordered_json;

/// Finite numbers as numbers; +inf/-inf/nan as the strings "inf", "-inf", "nan".
[[nodiscard]] Json number(double x);

[[nodiscard]] Json to_json(const Grid& g);
[[nodiscard]] Json to_json(const Cube& q);
[[nodiscard]] Json to_json(const ConstantReport& r);
[[nodiscard]] Json to_json(const ReverseHolderReport& r);
[[nodiscard]] Json to_json(const DoublingReport& r);
[[nodiscard]] Json to_json(const CZDecomposition& d);
[[nodiscard]] Json to_json(const CZVerification& v);
[[nodiscard]] Json to_json(const DominationReport& r);
[[nodiscard]] Json to_json(const WeakTypeReport& r);
[[nodiscard]] Json to_json(const FitResult& f);
[[nodiscard]] Json to_json(const SweepRow& r);
[[nodiscard]] Json to_json(const A1Sweep& s);
[[nodiscard]] Json to_json(const ProductSweep& s);
[[nodiscard]] Json to_json(const ParameterAlgebra& a);
[[nodiscard]] Json to_json(const BoundAudit& a);
[[nodiscard]] Json to_json(const MixedLemmaRow& r);
[[nodiscard]] Json to_json(const DualIdentity& d);
[[nodiscard]] Json to_json(const BuckleyReport& b);
[[nodiscard]] Json to_json(const PrincipalCubeRecord& r);
[[nodiscard]] Json to_json(const ChainReport& r);

}  // namespace weaklab::report
