#ifndef DUALMOD_JSON_IO_HPP
#define DUALMOD_JSON_IO_HPP

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "dualmod/diff.hpp"
#include "dualmod/elimination.hpp"
#include "dualmod/manifold.hpp"
#include "dualmod/symplectic.hpp"

namespace dualmod {

using Json = nlohmann::json;

/// Malformed input. what() carries a line/column or a JSON-pointer style
/// field path.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses text, reporting syntax errors with line and column.
Json parse_json_text(const std::string& text);

Json to_json(const Dual& x);
Json to_json(const DualVec& v);
Json to_json(const ModuleMapd& f);
Json to_json(const SplitBasisd& b);
Json to_json(const Expr& e);
Json to_json(const ExprFunction& f);
Json to_json(const GramForm& g);
Json to_json(const DarbouxBasis& b);
Json to_json(const CrReport& r);
Json to_json(const LimitReport& r);
Json to_json(const AtlasReport& r);
Json to_json(const FormReport& r);
Json to_json(const RealMatrix& a);

// Readers; `path` names the location inside the document for diagnostics.
Dual dual_from_json(const Json& j, const std::string& path = "");
DualVec vector_from_json(const Json& j, const std::string& path = "");
ModuleMapd map_from_json(const Json& j, const std::string& path = "");
SplitBasisd basis_from_json(const Json& j, const std::string& path = "");
Expr expr_from_json(const Json& j, const std::string& path = "");
ExprFunction function_from_json(const Json& j, const std::string& path = "");
GramForm form_from_json(const Json& j, const std::string& path = "");
DarbouxBasis darboux_from_json(const Json& j, const std::string& path = "");
/// Either {"n","m"[,"charts":[{"i","j"},...]]} for the projective atlas or
/// {"charts":[{"forward","inverse"[,"domain"]},...]} for expression atlases.
Atlas atlas_from_json(const Json& j, const std::string& path = "");

}  // namespace dualmod

#endif  // DUALMOD_JSON_IO_HPP
