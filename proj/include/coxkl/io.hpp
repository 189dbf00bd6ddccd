#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coxkl/coxeter.hpp"
#include "coxkl/hat.hpp"
#include "coxkl/kl.hpp"
#include "coxkl/laurent.hpp"
#include "coxkl/springer.hpp"

namespace coxkl {

using json = nlohmann::json;

/// {"generators": [...], "matrix": [[1,3],[3,1]]} with "inf" for infinity.
std::unique_ptr<CoxeterSystem> system_from_json(const json& j);
json system_to_json(const CoxeterSystem& W);
std::unique_ptr<CoxeterSystem> load_system(const std::string& path);

/// {"hat_bonds": {"s1": 3}, "theta_bonds": [["s1","s2",2]]}; both keys optional.
HatConfig hat_config_from_json(const json& j);
json hat_config_to_json(const HatConfig& config);
/// "default" and "" give the default config; anything else is a file path.
HatConfig load_hat_config(const std::string& path);

/// Comma-separated names, or concatenated names when unambiguous; "1" is the identity.
Element parse_element(const CoxeterSystem& W, std::string_view text);
/// "S", "∅", "{}", "{s1,s2}" or "s1,s2".
GenSet parse_gen_set(const CoxeterSystem& W, std::string_view text);
/// "[I;a;b]", also accepting the display form "[I={..}; a=..; b=..]".
VElement parse_velement(const CoxeterSystem& W, std::string_view text);
/// "[I;a;b]" with comma-separated canonical words.
std::string velement_text(const VElement& v);
json velement_to_json(const VElement& v);
VElement velement_from_json(const CoxeterSystem& W, const json& j);

/// "a * z[I] * b", or a word in the hat generators that lies in Omega.
OmegaElement parse_omega(const HatSystem& h, std::string_view text);
json omega_to_json(const HatSystem& h, const OmegaElement& x);

json element_to_json(const Element& x);
Element element_from_json(const CoxeterSystem& W, const json& j);

json int_to_json(const Int& v);
/// {"u": {"-1": 1, "1": -1}}
json poly_u_json(const LaurentPoly& p);
/// {"q": {"0": 1, "1": 1}}
json poly_q_json(const QPoly& p);
/// {"abar": {"1": 1}}; throws std::domain_error outside Z[abar].
json poly_abar_json(const LaurentPoly& p);
/// Reads any of the three forms back; q-forms are returned with q = u^2.
LaurentPoly poly_from_json(const json& j);

/// One {"x", "y", "kind", "poly"} object per line, in key order.
void write_table_jsonl(std::ostream& out, const ElementTable& table);
void write_table_jsonl(std::ostream& out, const VTable& table);

/// FNV-1a 64-bit digest, as 16 hex digits.
std::string digest(std::string_view bytes);
std::string system_digest(const CoxeterSystem& W);

/// Versioned JSON-lines memo of an R-tilde table. Loading ignores files
/// written for another system or format version and returns the number of
/// entries taken.
std::size_t load_cache(const std::string& path, const CoxeterSystem& W, const ElementTable& table);
void save_cache(const std::string& path, const CoxeterSystem& W, const ElementTable& table);

}  // namespace coxkl
