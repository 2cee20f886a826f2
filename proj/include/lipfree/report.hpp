#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "lipfree/constants.hpp"
#include "lipfree/dyadic_basis.hpp"
#include "lipfree/lambda.hpp"
#include "lipfree/retraction.hpp"

namespace lipfree {

/// Insertion-ordered so that reports are byte-stable.
using Report = nlohmann::ordered_json;

/// 17 significant digits; non-finite values become null.
std::string format_double(double x);

/// Compact JSON with every floating-point number through format_double.
std::string dump_report(const Report& r);
void write_report(std::ostream& out, const Report& r);

Report to_report(const LipschitzReport& r);
Report to_report(const NormingReport& r);
Report to_report(const PartitionCheck& r);
Report to_report(const BasisCombination& c);

/// Every closed-form constant for (p, alpha, d).
Report constants_report(PExponent p, HolderExponent alpha, std::size_t d);

}  // namespace lipfree
