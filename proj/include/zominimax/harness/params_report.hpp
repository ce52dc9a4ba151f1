#ifndef ZOMINIMAX_HARNESS_PARAMS_REPORT_HPP
#define ZOMINIMAX_HARNESS_PARAMS_REPORT_HPP

#include "zominimax/params.hpp"

#include <string>

namespace zominimax::harness {

/// "1/N" when 1/v is within 1e-9 relative of an integer, else empty.
std::string as_unit_fraction(double v);

/// One line per DerivedParams field with the formula that produced it.
std::string print_params(const DerivedParams& p, const ProblemConstants& c);

}  // namespace zominimax::harness

#endif  // ZOMINIMAX_HARNESS_PARAMS_REPORT_HPP
