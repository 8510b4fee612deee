#pragma once

#include "hk/exactnum.hpp"
#include "json.hpp"

namespace hk {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const Poly& p);
Json to_json(const PiecewisePoly& f);
PiecewisePoly pp_from_json(const Json& j);

Json to_json(const Measure& m);
Measure measure_from_json(const Json& j);

Json to_json(const Piecewise2D& k);
Piecewise2D piecewise2d_from_json(const Json& j);

}  // namespace hk
