#pragma once

#include <json.hpp>

#include "lasat/component.hpp"
#include "lasat/conditions.hpp"
#include "lasat/formula.hpp"
#include "lasat/local_access.hpp"
#include "lasat/marking.hpp"

namespace lasat {

using json = nlohmann::json;

json to_json(const formula& f);
json to_json(const component& c);
json to_json(const conn_result& r);
json to_json(const marking_validation& v);
json to_json(const marking_result& m, const marking_validation& v);
json to_json(const sample_result& r, bool with_trace);
json to_json(const condition_check& c);
json to_json(const conditions_report& r);

}  // namespace lasat
