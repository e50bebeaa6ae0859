#pragma once

// JSON and Markdown rendering of engine results. Every number goes out as a
// decimal string; objects keep sorted keys.

#include <json.hpp>

#include <string>

#include "iwasawa/eigenform.hpp"
#include "iwasawa/hypothesis.hpp"
#include "iwasawa/local_factors.hpp"
#include "iwasawa/quad_field.hpp"
#include "iwasawa/series.hpp"
#include "iwasawa/transfer.hpp"

namespace iwasawa::report {

using Json = nlohmann::json;

std::string num(long x);
Json nums(const std::vector<long>& xs);

Json to_json(const MuLambda& m);
Json to_json(const LevelFactorization& f);
Json to_json(const HypothesisVerdict& h);
Json to_json(const NtildeClassification& c);
Json to_json(const CongruenceVerdict& c);
Json to_json(const HypothesisReport& r);
Json to_json(const LocalTerm& t);
Json to_json(const LocalSum& s);
Json to_json(const TransferResult& t);
Json to_json(const ImcVerdict& v);
Json to_json(const HeegnerConstants& h);
Json to_json(const HeegnerComparison& c);
Json to_json(const EisensteinVerdict& e);
Json to_json(const MuCertificate& c);

Json error_json(const std::string& code, const std::string& message);

/// Indented two-space JSON with a trailing newline.
std::string dump(const Json& j);

/// Headings for objects, bullets for scalars and arrays.
std::string markdown(const Json& j, const std::string& title);

}  // namespace iwasawa::report
