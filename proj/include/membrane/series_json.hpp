#pragma once

#include <json.hpp>

#include "membrane/hopf.hpp"

namespace membrane {

// {"truncation":N,"alphabet":k,"terms":[{"word":[...],"sigma2":[...],"split":i?,"coeff":...}]}
// Exact coefficients are written as "p/q" strings, floating ones as numbers.
// Terms appear in the series' own order (degree, then lexicographic).
nlohmann::json to_json(const Series<Rational>& s);
nlohmann::json to_json(const Series<double>& s);
nlohmann::json to_json(const IndexedSeries<Rational>& s);
nlohmann::json to_json(const IndexedSeries<double>& s);

Series<Rational> rational_series_from_json(const nlohmann::json& j);
Series<double> double_series_from_json(const nlohmann::json& j);

}  // namespace membrane
