#pragma once

// JSON views of the reports. Integers stay integers; every real number is a
// fixed-precision decimal string so output is byte-stable.

#include <string>

#include <nlohmann/json.hpp>

#include "apollo/density.hpp"
#include "apollo/forms.hpp"
#include "apollo/local_density.hpp"
#include "apollo/orbit.hpp"
#include "apollo/spin.hpp"

namespace apollo {

using json = nlohmann::json;

/// printf("%.*f") in the C locale.
std::string decimal(double v, int digits = 6);

json to_json(const Quadruple& q);
json to_json(const BinaryQuadraticForm& f);
json to_json(const Rational& r, int digits = 12);
json to_json(const TangencyForm& tf);
json to_json(const CurvatureTally& tally);
json to_json(const DeltaFit& fit);
json to_json(const ChangeOfVariablesReport& rep);
json to_json(const SpinCheckReport& rep);
json to_json(const SingularSeriesReport& rep);
json to_json(const SingularIntegral& si);
json to_json(const DyadicSelection& sel);
json to_json(const SaSummary& sa);
json to_json(const ProgressionSum& ps);
json to_json(const DensityReport& rep);

}  // namespace apollo
