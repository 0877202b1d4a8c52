#pragma once
#include <string>

#include "wldp/laws.hpp"

namespace wldp::lawspec {

// Law specification sources accepted by the CLI:
//   inline  "sparse_gaussian:p=0.5", "gauss_rademacher_mix:a=0.6,b=0.5,B=1.5"
//   file    path to the JSON form {"kind": "...", ...}
// List-valued kinds (rademacher_mixture, mixture) need the JSON form.
laws::EntryLaw parse(const std::string& spec);

laws::EntryLaw from_json_text(const std::string& text);

// Canonical JSON with full double precision; re-parsing yields a law with
// identical parameters.
std::string to_json_text(const laws::EntryLaw& law);

} // namespace wldp::lawspec
