#include "ppf/types.hpp"

#include <sstream>

namespace ppf {

double principal_phase(double rad) {
  double p = std::remainder(rad, 2.0 * kPi);  // lands in [-pi, pi]
  if (p <= -kPi) p += 2.0 * kPi;
  return p;
}

double ComplexSample::phase() const {
  double p = std::atan2(im, re);
  if (p <= -kPi) p += 2.0 * kPi;
  return p;
}

double db_from_linear(double x) {
  if (!(x > 0.0)) throw std::domain_error("db_from_linear: input must be positive");
  return 20.0 * std::log10(x);
}

double db_from_linear_floored(double x) {
  return 20.0 * std::log10(std::max(x, kMagnitudeFloor));
}

double ppf_free_space_db(const ComplexSample& u, double range_m, double wavelength_m) {
  if (!(range_m > 0.0)) throw std::domain_error("ppf_free_space_db: range must be positive");
  if (!(wavelength_m > 0.0))
    throw std::domain_error("ppf_free_space_db: wavelength must be positive");
  return db_from_linear_floored(u.magnitude()) - 10.0 * std::log10(range_m) -
         10.0 * std::log10(wavelength_m);
}

ParseError::ParseError(int line_no, std::string field_name, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_no) + " (" + field_name + "): " + what),
      line(line_no),
      field(std::move(field_name)) {}

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error([&problems] {
        std::ostringstream os;
        os << "scenario validation failed:";
        for (const auto& p : problems) os << "\n  - " << p;
        return os.str();
      }()),
      issues(std::move(problems)) {}

}  // namespace ppf
