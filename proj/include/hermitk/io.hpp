#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "hermitk/forms.hpp"
#include "hermitk/koszul.hpp"
#include "hermitk/sp_group.hpp"

namespace hermitk::io {

using Json = nlohmann::json;

/// "ZZ", "QQ", "GF(p)" (also "Fp", "GFp"), "ZZ/n" (also "Z/n"), optionally
/// followed by "[v1,...]" and "[v1^-1,...]" as printed by Ring::to_string.
/// Throws ParseError.
Ring parse_ring_name(std::string_view text);

/// {"coefficients": "ZZ"|"QQ"|"GF"|"ZZ/n", "modulus": m, "variables": [...],
/// "inverted": [...]}; modulus only for GF and ZZ/n, lists only when nonempty.
/// The reader also accepts a ring name string.
Json to_json(const Ring& r);
Ring ring_from_json(const Json& j);

/// Entry strings in the canonical grammar, row-major.
Json rows_to_json(const Matrix& m);
/// Shape is checked against `rows` x `cols`; an empty row list takes the
/// given shape.
Matrix rows_from_json(const Ring& ring, const Json& rows, std::size_t nrows, std::size_t ncols);

/// {"ring", "rows"}.
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Matrix matrix_from_json(const Json& j, const Ring& ring);

/// {"ring", "rows", "flavor"}; the reader rechecks the flavor.
Json to_json(const BilinearSpace& s);
BilinearSpace space_from_json(const Json& j);

/// {"source", "target", "witness"}; the reader re-verifies the congruence.
Json to_json(const Isometry& iso);
Isometry isometry_from_json(const Json& j);

/// {"ring", "degrees": [lo, hi], "ranks", "differentials"}; differentials
/// are row lists for d(lo+1) .. d(hi). The reader rechecks d d = 0.
Json to_json(const ChainComplex& c);
ChainComplex complex_from_json(const Json& j);

/// Complex fields plus "shift", "epsilon", "components" and the derived
/// "dual_differentials". The reader rebuilds the form through
/// DualityForm::make and rejects a mismatching dual.
Json to_json(const DualityForm& f);
DualityForm form_from_json(const Json& j);

/// Ordered list of {"v", "lambda"}.
Json to_json(const std::vector<Transvection>& factors);

/// Sorted keys, no whitespace.
std::string canonical(const Json& j);

}  // namespace hermitk::io
