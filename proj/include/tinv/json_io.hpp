#pragma once

#include "tinv/balanced_table.hpp"
#include "tinv/exterior.hpp"
#include "tinv/hypermatrix.hpp"
#include "tinv/latin.hpp"

#include <json.hpp>

#include <string>

namespace tinv {

using Json = nlohmann::json;

/// Reads and parses a JSON file; DomainError carries the parser position.
Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& origin);

// {"shape":[n1,...,nd],"rows":[[...],...]}
Json to_json(const BalancedTable& t);
BalancedTable table_from_json(const Json& j);

// {"shape":[...],"entries":[{"idx":[...],"num":"...","den":"..."}]}, idx 1-based
Json to_json(const Hypermatrix& x);
Hypermatrix hypermatrix_from_json(const Json& j);

// {"k":K,"d":D,"cells":[[...],...]}
Json to_json(const MagicSet& m);
MagicSet magic_set_from_json(const Json& j);

// magic set fields plus "values":[v,...] parallel to "cells"
Json to_json(const PartialLatinHypercube& c);
PartialLatinHypercube hypercube_from_json(const Json& j);

// one {"cells":[[...],...],"coeff":"..."} object per term, in key order
Json term_to_json(const WedgeVector& v, const BasisIndex& p, const BigInt& coeff);

} // namespace tinv
